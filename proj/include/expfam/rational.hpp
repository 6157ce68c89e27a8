#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "expfam/errors.hpp"

namespace expfam {

/// Exact rational scalar. GMP keeps the elimination and circuit layers exact;
/// doubles enter only at explicit conversion points.
using Rat = mpq_class;
using RatVec = std::vector<Rat>;

inline Rat rat_from_string(const std::string& s) {
  Rat q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0) {
    throw Error(ErrorCode::ParseError, "not a rational: '" + s + "'");
  }
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0) {
    throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
  }
  q.canonicalize();
  return q;
}

/// Exact conversion: every finite double is a dyadic rational.
inline Rat rat_from_double(double x) { return Rat(x); }

inline double rat_to_double(const Rat& q) { return q.get_d(); }

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

inline int rat_sign(const Rat& q) { return sgn(q); }

}  // namespace expfam
