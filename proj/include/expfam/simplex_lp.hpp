#pragma once

#include <optional>
#include <vector>

#include "expfam/rational.hpp"

namespace expfam {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <typename S>
struct LpResult {
  LpStatus status;
  std::vector<S> x;  // valid when status == Optimal
  S objective{};
};

/// Two-phase dense simplex with Bland's rule for
///   minimize c·x  subject to  A x = b, x >= 0.
/// With S = Rat and eps = 0 the answer is exact; with S = double, eps is the
/// pivot/feasibility tolerance.
template <typename S>
LpResult<S> lp_minimize(const std::vector<std::vector<S>>& A, const std::vector<S>& b,
                        const std::vector<S>& c, const S& eps);

/// Phase-I only: a basic feasible point of {x >= 0 : A x = b}, if any.
template <typename S>
std::optional<std::vector<S>> lp_feasible_point(const std::vector<std::vector<S>>& A,
                                                const std::vector<S>& b, const S& eps);

extern template LpResult<Rat> lp_minimize<Rat>(const std::vector<std::vector<Rat>>&,
                                               const std::vector<Rat>&, const std::vector<Rat>&,
                                               const Rat&);
extern template LpResult<double> lp_minimize<double>(const std::vector<std::vector<double>>&,
                                                     const std::vector<double>&,
                                                     const std::vector<double>&, const double&);
extern template std::optional<std::vector<Rat>> lp_feasible_point<Rat>(
    const std::vector<std::vector<Rat>>&, const std::vector<Rat>&, const Rat&);
extern template std::optional<std::vector<double>> lp_feasible_point<double>(
    const std::vector<std::vector<double>>&, const std::vector<double>&, const double&);

}  // namespace expfam
