#pragma once

#include <vector>

#include "expfam/errors.hpp"

namespace expfam {

/// Partition of {0,..,N-1} into disjoint nonempty blocks. Blocks are kept
/// sorted internally and ordered by smallest element, so equal partitions
/// compare equal structurally.
struct Partition {
  std::vector<std::vector<int>> blocks;

  static Partition from_blocks(std::vector<std::vector<int>> blocks, int n_states);

  int n_states() const;
  int coarseness() const;  // size of the largest block
  bool homogeneous() const;
  int block_of(int x) const;

  bool operator==(const Partition& o) const { return blocks == o.blocks; }
};

}  // namespace expfam
