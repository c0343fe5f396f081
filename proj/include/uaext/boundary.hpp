#pragma once

// Choquet boundary by linear programming and polygonal peak-set feasibility.

#include <optional>
#include <ostream>
#include <vector>

#include "uaext/funcsys.hpp"
#include "uaext/lp.hpp"

namespace uaext {

inline constexpr double kChoquetTol = 1e-6;

struct ChoquetReport {
  std::size_t point = 0;
  bool is_choquet = false;
  /// Largest mass a representing probability measure can put off the point.
  double escaping_mass = 0.0;
  std::optional<Measure> witness;
};

/// Maximises sum_{y != x} mu_y over probability measures mu with
/// integral b d(mu) = b(x) for every basis member b.
ChoquetReport choquet_escape(const FunctionSystem& system, std::size_t x, double choquet_tol = kChoquetTol,
                             const lp::LpTolerances& tol = {});

/// One report per point, in point order. The parallel version distributes
/// points over threads; both give identical results.
std::vector<ChoquetReport> choquet_scan(const FunctionSystem& system, double choquet_tol = kChoquetTol,
                                        const lp::LpTolerances& tol = {});
std::vector<ChoquetReport> choquet_scan_serial(const FunctionSystem& system, double choquet_tol = kChoquetTol,
                                               const lp::LpTolerances& tol = {});

/// Points whose escaping mass is at most choquet_tol. On a finite space this
/// is also the Shilov boundary.
IndexList choquet_set(const FunctionSystem& system, double choquet_tol = kChoquetTol,
                      const lp::LpTolerances& tol = {});
IndexList choquet_set(const std::vector<ChoquetReport>& reports);

/// CSV rows: label,escaping_mass,is_choquet.
void write_choquet_csv(std::ostream& out, const FunctionSystem& system, const std::vector<ChoquetReport>& reports);

inline constexpr double kPeakMargin = 1e-3;
inline constexpr int kPeakPolygonSides = 16;

struct PeakResult {
  bool feasible = false;
  /// Basis coefficients and point values of the witness, when feasible.
  CVector coefficients;
  CVector values;
};

/// Looks for f in the span with f = 1 on E and f(y) inside the regular
/// polygon with `polygon_sides` sides inscribed in the circle of radius
/// 1 - margin for every y outside E. Feasible means f peaks on E; infeasible
/// only means no witness was found at this margin and resolution.
PeakResult peak_set_feasible(const FunctionSystem& system, const IndexList& e_set, double margin = kPeakMargin,
                             int polygon_sides = kPeakPolygonSides, const lp::LpTolerances& tol = {});

/// Checks a candidate witness directly against the peak conditions.
bool is_peak_witness(const CVector& values, const IndexList& e_set, double margin, int polygon_sides,
                     double tol = 1e-9);

}  // namespace uaext
