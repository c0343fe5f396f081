#include "uaext/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>

#include "uaext/errors.hpp"

namespace uaext {

namespace {

constexpr double kRowRankTol = 1e-10;

// Equality rows shared by every point: an orthonormal basis for the row
// space of [1; Re B^T; Im B^T], so the simplex sees no redundant rows.
RMatrix representing_rows(const FunctionSystem& system) {
  const auto n = static_cast<Eigen::Index>(system.size());
  const auto r = static_cast<Eigen::Index>(system.dim());
  RMatrix a(1 + 2 * r, n);
  a.row(0).setOnes();
  a.middleRows(1, r) = system.basis().real().transpose();
  a.middleRows(1 + r, r) = system.basis().imag().transpose();
  Eigen::BDCSVD<RMatrix> svd(a, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index k = 0;
  while (k < s.size() && s[k] > kRowRankTol * s[0]) ++k;
  return svd.matrixV().leftCols(k).transpose();
}

ChoquetReport escape_with_rows(const FunctionSystem& system, const RMatrix& rows, std::size_t x, double choquet_tol,
                               const lp::LpTolerances& tol) {
  const auto n = static_cast<Eigen::Index>(system.size());
  lp::LpProblem p = lp::LpProblem::nonnegative(system.size());
  p.objective.setOnes();
  p.objective[static_cast<Eigen::Index>(x)] = 0.0;
  p.eq_matrix = rows;
  p.eq_rhs = rows.col(static_cast<Eigen::Index>(x));
  const lp::LpResult res = lp::solve_lp(p, tol);
  // delta_x is always feasible, so anything else is a solver fault.
  if (res.status != lp::LpStatus::optimal) throw SolverError("choquet LP did not reach an optimum");
  ChoquetReport report;
  report.point = x;
  report.escaping_mass = std::clamp(res.objective_value, 0.0, 1.0);
  report.is_choquet = report.escaping_mass <= choquet_tol;
  CVector w(n);
  for (Eigen::Index y = 0; y < n; ++y) w[y] = res.solution[y];
  report.witness = Measure(system.space(), std::move(w));
  return report;
}

}  // namespace

ChoquetReport choquet_escape(const FunctionSystem& system, std::size_t x, double choquet_tol,
                             const lp::LpTolerances& tol) {
  if (x >= system.size()) throw InputError("choquet: point out of range");
  return escape_with_rows(system, representing_rows(system), x, choquet_tol, tol);
}

std::vector<ChoquetReport> choquet_scan_serial(const FunctionSystem& system, double choquet_tol,
                                               const lp::LpTolerances& tol) {
  const RMatrix rows = representing_rows(system);
  std::vector<ChoquetReport> out;
  out.reserve(system.size());
  for (std::size_t x = 0; x < system.size(); ++x) out.push_back(escape_with_rows(system, rows, x, choquet_tol, tol));
  return out;
}

std::vector<ChoquetReport> choquet_scan(const FunctionSystem& system, double choquet_tol,
                                        const lp::LpTolerances& tol) {
  const RMatrix rows = representing_rows(system);
  const auto n = static_cast<std::ptrdiff_t>(system.size());
  std::vector<ChoquetReport> out(system.size());
  std::vector<std::exception_ptr> errors(system.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t x = 0; x < n; ++x) {
    try {
      out[static_cast<std::size_t>(x)] = escape_with_rows(system, rows, static_cast<std::size_t>(x), choquet_tol, tol);
    } catch (...) {
      errors[static_cast<std::size_t>(x)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

IndexList choquet_set(const std::vector<ChoquetReport>& reports) {
  IndexList out;
  for (const auto& r : reports)
    if (r.is_choquet) out.push_back(r.point);
  return out;
}

IndexList choquet_set(const FunctionSystem& system, double choquet_tol, const lp::LpTolerances& tol) {
  return choquet_set(choquet_scan(system, choquet_tol, tol));
}

void write_choquet_csv(std::ostream& out, const FunctionSystem& system, const std::vector<ChoquetReport>& reports) {
  out << "label,escaping_mass,is_choquet\n";
  char buf[64];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%.17g", r.escaping_mass);
    out << system.space()->point(r.point).label << ',' << buf << ',' << (r.is_choquet ? "true" : "false") << '\n';
  }
}

namespace {

void check_peak_arguments(std::size_t n, const IndexList& e_set, double margin, int sides) {
  if (!(margin > 0.0 && margin < 1.0)) throw InputError("peak set: margin must lie in (0, 1)");
  if (sides < 8) throw InputError("peak set: polygon needs at least 8 sides");
  if (e_set.empty()) throw InputError("peak set: E is empty");
  for (std::size_t y : e_set)
    if (y >= n) throw InputError("peak set: point out of range");
}

std::vector<bool> membership(std::size_t n, const IndexList& e_set) {
  std::vector<bool> in(n, false);
  for (std::size_t y : e_set) in[y] = true;
  return in;
}

}  // namespace

bool is_peak_witness(const CVector& values, const IndexList& e_set, double margin, int polygon_sides, double tol) {
  const auto n = static_cast<std::size_t>(values.size());
  check_peak_arguments(n, e_set, margin, polygon_sides);
  const auto in = membership(n, e_set);
  const double radius = 1.0 - margin;
  const double offset = radius * std::cos(std::numbers::pi / polygon_sides);
  for (std::size_t y = 0; y < n; ++y) {
    const Complex v = values[static_cast<Eigen::Index>(y)];
    if (in[y]) {
      if (std::abs(v - 1.0) > tol) return false;
      continue;
    }
    for (int j = 0; j < polygon_sides; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / polygon_sides;
      if ((v * std::polar(1.0, -phi)).real() > offset + tol) return false;
    }
  }
  return true;
}

PeakResult peak_set_feasible(const FunctionSystem& system, const IndexList& e_set, double margin, int polygon_sides,
                             const lp::LpTolerances& tol) {
  const std::size_t n = system.size();
  check_peak_arguments(n, e_set, margin, polygon_sides);
  const auto in = membership(n, e_set);
  const std::size_t inside = static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
  if (inside == n) throw InputError("peak set: E must be a proper subset");

  const auto r = static_cast<Eigen::Index>(system.dim());
  const auto sides = static_cast<std::size_t>(polygon_sides);
  const std::size_t ineq = (n - inside) * sides;
  const auto vars = static_cast<Eigen::Index>(2 * static_cast<std::size_t>(r) + ineq);
  const auto rows = static_cast<Eigen::Index>(2 * inside + ineq);

  lp::LpProblem p;
  p.objective = RVector::Zero(vars);
  p.lower_bounds = RVector::Zero(vars);
  p.lower_bounds.head(2 * r).setConstant(-std::numeric_limits<double>::infinity());
  p.upper_bounds = RVector::Constant(vars, std::numeric_limits<double>::infinity());
  p.eq_matrix = RMatrix::Zero(rows, vars);
  p.eq_rhs = RVector::Zero(rows);

  const CMatrix& b = system.basis();
  const double offset = (1.0 - margin) * std::cos(std::numbers::pi / polygon_sides);
  Eigen::Index row = 0;
  Eigen::Index slack = 2 * r;
  for (std::size_t y = 0; y < n; ++y) {
    const auto yi = static_cast<Eigen::Index>(y);
    if (in[y]) {
      // Re f(y) = 1, Im f(y) = 0 with f = sum (a_k + i beta_k) b_k.
      p.eq_matrix.block(row, 0, 1, r) = b.row(yi).real();
      p.eq_matrix.block(row, r, 1, r) = -b.row(yi).imag();
      p.eq_rhs[row++] = 1.0;
      p.eq_matrix.block(row, 0, 1, r) = b.row(yi).imag();
      p.eq_matrix.block(row, r, 1, r) = b.row(yi).real();
      p.eq_rhs[row++] = 0.0;
      continue;
    }
    for (std::size_t j = 0; j < sides; ++j) {
      const double phi = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / polygon_sides;
      const Eigen::RowVectorXcd rotated = b.row(yi) * std::polar(1.0, -phi);
      p.eq_matrix.block(row, 0, 1, r) = rotated.real();
      p.eq_matrix.block(row, r, 1, r) = -rotated.imag();
      p.eq_matrix(row, slack++) = 1.0;
      p.eq_rhs[row++] = offset;
    }
  }

  const lp::LpResult res = lp::solve_lp(p, tol);
  PeakResult out;
  if (res.status != lp::LpStatus::optimal) return out;
  out.coefficients.resize(r);
  for (Eigen::Index k = 0; k < r; ++k) out.coefficients[k] = Complex(res.solution[k], res.solution[r + k]);
  out.values = system.evaluate(out.coefficients);
  out.feasible = is_peak_witness(out.values, e_set, margin, polygon_sides, 1e-8);
  return out;
}

}  // namespace uaext
