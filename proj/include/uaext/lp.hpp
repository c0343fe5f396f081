#pragma once

// Dense linear programming: a two-phase tableau simplex with Bland's rule,
// plus a brute-force vertex enumerator used as a test oracle.

#include <cstddef>
#include <vector>

#include "uaext/types.hpp"

namespace uaext::lp {

/// maximize objective . x  subject to  eq_matrix x = eq_rhs,
///                                     lower_bounds <= x <= upper_bounds.
/// Bounds may be +/-infinity.
struct LpProblem {
  RVector objective;
  RMatrix eq_matrix;
  RVector eq_rhs;
  RVector lower_bounds;
  RVector upper_bounds;

  std::size_t variables() const { return static_cast<std::size_t>(objective.size()); }
  std::size_t equalities() const { return static_cast<std::size_t>(eq_rhs.size()); }

  /// Problem with `n` variables, no equalities, bounds [0, +inf).
  static LpProblem nonnegative(std::size_t n);
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  RVector solution;  // empty unless optimal
  double objective_value = 0.0;
  std::size_t iterations = 0;
};

struct LpTolerances {
  double feas = 1e-9;
  double opt = 1e-9;
  double pivot = 1e-11;
  /// 0 selects a budget proportional to the tableau size.
  std::size_t max_iterations = 0;
};

/// Throws InputError on malformed problems and SolverError when the pivot
/// budget runs out.
LpResult solve_lp(const LpProblem& problem, const LpTolerances& tol = {});

struct Vertex {
  RVector point;
  double objective_value;
};

inline constexpr std::size_t kVertexEnumerationLimit = 12;

/// All basic feasible solutions, found by trying every basis/bound pattern.
/// Exponential; refuses problems with more than kVertexEnumerationLimit
/// variables.
std::vector<Vertex> enumerate_vertices(const LpProblem& problem, double tol = 1e-9);

/// Max |A x - b| and worst bound violation of `x`.
double equality_residual(const LpProblem& problem, const RVector& x);
double bound_violation(const LpProblem& problem, const RVector& x);

void validate(const LpProblem& problem);

}  // namespace uaext::lp
