#pragma once

// Linear operators T: C(Y) -> C(X) stored as one row measure per point of X.
// Rows are kept sparse; most operators here are supported on fibers.

#include <vector>

#include "uaext/space.hpp"
#include "uaext/types.hpp"

namespace uaext {

struct RowEntry {
  std::size_t index;
  Complex weight;
};

using SparseRow = std::vector<RowEntry>;

class OperatorTable {
 public:
  /// (T f)(x) = sum over rows[x] of weight * f(index). Entries must be sorted
  /// by index without repeats; zero weights are dropped.
  OperatorTable(SpacePtr source, SpacePtr target, std::vector<SparseRow> rows);
  static OperatorTable from_measures(SpacePtr source, SpacePtr target, const std::vector<Measure>& rows);
  static OperatorTable identity(const SpacePtr& space);
  /// pi^*: C(X) -> C(Y), rows are point masses at pi(y).
  static OperatorTable composition_operator(const SurjectionMap& pi);

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  const std::vector<SparseRow>& rows() const { return rows_; }
  const SparseRow& row(std::size_t x) const { return rows_.at(x); }
  Measure row_measure(std::size_t x) const;

  CVector apply(const CVector& f) const;
  double row_total_variation(std::size_t x) const;

  /// (this o inner), where inner maps C(Z) -> C(Y) = C(this->source()).
  OperatorTable after(const OperatorTable& inner) const;
  /// a * this + b * other (same spaces).
  OperatorTable combine(Complex a, const OperatorTable& other, Complex b) const;
  OperatorTable scaled_row(std::size_t x, Complex factor) const;

  /// Max over x of |T(1)(x) - 1|.
  double unital_residual() const;
  /// Max over x of || pi_*(mu_x) - delta_x ||_1; zero iff T o pi^* = id on C(X).
  double section_residual(const SurjectionMap& pi) const;
  /// Max over x of the row mass outside pi^{-1}(x).
  double off_fiber_mass(const SurjectionMap& pi) const;
  /// Max |entry difference| against another operator on the same spaces.
  double max_difference(const OperatorTable& other) const;

 private:
  SpacePtr source_;
  SpacePtr target_;
  std::vector<SparseRow> rows_;
};

/// Sup-norm operator norm: the largest row total variation.
double operator_norm(const OperatorTable& t);

}  // namespace uaext
