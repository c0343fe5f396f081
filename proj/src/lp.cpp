#include "uaext/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uaext/errors.hpp"

namespace uaext::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Smaller entries in a row whose artificial is still basic are treated as
// zero, making the row redundant.
constexpr double kDriveOutPivot = 1e-9;
constexpr std::size_t kDegenerateRunLimit = 50;

// One column of the standard form  x_std >= 0.
struct StdColumn {
  std::size_t original;  // index into the user's variables, or npos for slacks
  double sign;           // x_orig contribution = sign * x_std
};
constexpr std::size_t kNoOriginal = static_cast<std::size_t>(-1);

struct StandardForm {
  std::vector<StdColumn> columns;
  RVector offset;  // x_orig = offset + sum sign * x_std
  RMatrix a;
  RVector b;
  RVector c;
  double objective_constant = 0.0;
};

StandardForm to_standard_form(const LpProblem& p) {
  const std::size_t n = p.variables();
  const std::size_t m = p.equalities();
  StandardForm sf;
  sf.offset = RVector::Zero(static_cast<Eigen::Index>(n));

  std::vector<std::size_t> upper_rows_for;  // original vars needing x' + s = u - l
  for (std::size_t j = 0; j < n; ++j) {
    const double l = p.lower_bounds[j];
    const double u = p.upper_bounds[j];
    if (std::isfinite(l)) {
      sf.offset[j] = l;
      sf.columns.push_back({j, 1.0});
      if (std::isfinite(u)) upper_rows_for.push_back(sf.columns.size() - 1);
    } else if (std::isfinite(u)) {
      sf.offset[j] = u;
      sf.columns.push_back({j, -1.0});
    } else {
      sf.columns.push_back({j, 1.0});
      sf.columns.push_back({j, -1.0});
    }
  }
  const std::size_t structural = sf.columns.size();
  for (std::size_t k = 0; k < upper_rows_for.size(); ++k) sf.columns.push_back({kNoOriginal, 1.0});

  const auto rows = static_cast<Eigen::Index>(m + upper_rows_for.size());
  const auto cols = static_cast<Eigen::Index>(sf.columns.size());
  sf.a = RMatrix::Zero(rows, cols);
  sf.b = RVector::Zero(rows);
  sf.c = RVector::Zero(cols);

  const RVector shifted_rhs = p.eq_rhs - p.eq_matrix * sf.offset;
  for (std::size_t k = 0; k < structural; ++k) {
    const auto& col = sf.columns[k];
    const auto j = static_cast<Eigen::Index>(col.original);
    sf.a.block(0, static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m), 1) =
        col.sign * p.eq_matrix.col(j);
    sf.c[static_cast<Eigen::Index>(k)] = col.sign * p.objective[j];
  }
  sf.b.head(static_cast<Eigen::Index>(m)) = shifted_rhs;
  for (std::size_t k = 0; k < upper_rows_for.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(m + k);
    const std::size_t col = upper_rows_for[k];
    const std::size_t j = sf.columns[col].original;
    sf.a(row, static_cast<Eigen::Index>(col)) = 1.0;
    sf.a(row, static_cast<Eigen::Index>(structural + k)) = 1.0;
    sf.b[row] = p.upper_bounds[j] - p.lower_bounds[j];
  }
  sf.objective_constant = p.objective.dot(sf.offset);
  return sf;
}

// Row-major dense tableau. Column `width-1` holds the right-hand side; the
// reduced-cost row is stored separately.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), width_(cols + 1), data_(rows * width_, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  double& rhs(std::size_t r) { return data_[r * width_ + width_ - 1]; }
  double rhs(std::size_t r) const { return data_[r * width_ + width_ - 1]; }
  double* row(std::size_t r) { return data_.data() + r * width_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return width_ - 1; }

  void erase_row(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * width_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width_));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t width_;
  std::vector<double> data_;
};

class Simplex {
 public:
  Simplex(Tableau t, std::vector<std::size_t> basis, std::size_t structural_cols, const LpTolerances& tol,
          std::size_t budget)
      : t_(std::move(t)), basis_(std::move(basis)), structural_(structural_cols), tol_(tol), budget_(budget) {
    allowed_.assign(t_.cols(), true);
    cost_.assign(t_.cols() + 1, 0.0);
  }

  // Reduced costs for objective `c` (size cols) relative to the current basis.
  void set_objective(const std::vector<double>& c) {
    const std::size_t w = t_.cols() + 1;
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t j = 0; j < t_.cols(); ++j) cost_[j] = c[j];
    for (std::size_t r = 0; r < t_.rows(); ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = t_.row(r);
      for (std::size_t j = 0; j < w; ++j) cost_[j] -= cb * row[j];
    }
    for (std::size_t r = 0; r < t_.rows(); ++r) cost_[basis_[r]] = 0.0;
  }

  // -cost_[rhs] is the objective value c_B . x_B.
  double objective_value() const { return -cost_[t_.cols()]; }

  enum class Outcome { optimal, unbounded };

  Outcome run() {
    for (;;) {
      // Largest reduced cost, or Bland's first improving column once a run
      // of degenerate pivots gets long.
      const bool bland = degenerate_run_ >= kDegenerateRunLimit;
      std::size_t entering = t_.cols();
      double best_cost = tol_.opt;
      for (std::size_t j = 0; j < t_.cols(); ++j) {
        if (allowed_[j] && cost_[j] > best_cost) {
          entering = j;
          if (bland) break;
          best_cost = cost_[j];
        }
      }
      if (entering == t_.cols()) return Outcome::optimal;

      std::size_t leaving = t_.rows();
      double best_ratio = kInf;
      for (std::size_t r = 0; r < t_.rows(); ++r) {
        const double a = t_.at(r, entering);
        if (a <= tol_.pivot) continue;
        const double ratio = std::max(t_.rhs(r), 0.0) / a;
        const double tie = 1e-12 * (1.0 + std::abs(best_ratio == kInf ? ratio : best_ratio));
        if (leaving == t_.rows() || ratio < best_ratio - tie) {
          leaving = r;
          best_ratio = ratio;
        } else if (std::abs(ratio - best_ratio) <= tie && basis_[r] < basis_[leaving]) {
          leaving = r;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leaving == t_.rows()) return Outcome::unbounded;
      degenerate_run_ = best_ratio * t_.at(leaving, entering) <= tol_.feas ? degenerate_run_ + 1 : 0;
      pivot(leaving, entering);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    if (++iterations_ > budget_) {
      std::ostringstream os;
      os << "simplex pivot budget exhausted after " << budget_ << " iterations";
      throw SolverError(os.str());
    }
    const std::size_t w = t_.cols() + 1;
    double* prow = t_.row(r);
    const double inv = 1.0 / prow[c];
    for (std::size_t j = 0; j < w; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      double* row = t_.row(i);
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
      if (row[w - 1] < 0.0 && row[w - 1] > -tol_.feas) row[w - 1] = 0.0;
    }
    const double f = cost_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j < w; ++j) cost_[j] -= f * prow[j];
      cost_[c] = 0.0;
    }
    basis_[r] = c;
  }

  // After phase one: pivot basic artificials out, dropping rows that are
  // linear combinations of the others.
  void drive_out_artificials() {
    // Basic artificials sit at levels below the feasibility tolerance; zero
    // them so the pivots below leave every other row's value unchanged.
    for (std::size_t r = 0; r < t_.rows(); ++r)
      if (basis_[r] >= structural_) t_.rhs(r) = 0.0;
    std::size_t r = 0;
    while (r < t_.rows()) {
      if (basis_[r] < structural_) {
        ++r;
        continue;
      }
      std::size_t col = structural_;
      double best = kDriveOutPivot;
      for (std::size_t j = 0; j < structural_; ++j) {
        const double a = std::abs(t_.at(r, j));
        if (a > best) {
          col = j;
          best = a;
        }
      }
      if (col == structural_) {
        t_.erase_row(r);
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        continue;
      }
      pivot(r, col);
      ++r;
    }
    for (std::size_t j = structural_; j < t_.cols(); ++j) allowed_[j] = false;
  }

  const Tableau& tableau() const { return t_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  std::size_t iterations() const { return iterations_; }

 private:
  Tableau t_;
  std::vector<std::size_t> basis_;
  std::size_t structural_;
  LpTolerances tol_;
  std::size_t budget_;
  std::size_t iterations_ = 0;
  std::size_t degenerate_run_ = 0;
  std::vector<bool> allowed_;
  std::vector<double> cost_;
};

}  // namespace

LpProblem LpProblem::nonnegative(std::size_t n) {
  LpProblem p;
  const auto k = static_cast<Eigen::Index>(n);
  p.objective = RVector::Zero(k);
  p.eq_matrix = RMatrix::Zero(0, k);
  p.eq_rhs = RVector::Zero(0);
  p.lower_bounds = RVector::Zero(k);
  p.upper_bounds = RVector::Constant(k, kInf);
  return p;
}

void validate(const LpProblem& p) {
  const auto n = p.objective.size();
  if (p.eq_matrix.rows() != p.eq_rhs.size())
    throw InputError("lp: eq_matrix row count does not match eq_rhs length");
  if (p.eq_matrix.cols() != n) throw InputError("lp: eq_matrix column count does not match objective length");
  if (p.lower_bounds.size() != n || p.upper_bounds.size() != n)
    throw InputError("lp: bound vectors must match the variable count");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(p.lower_bounds[j]) || std::isnan(p.upper_bounds[j]) || p.lower_bounds[j] > p.upper_bounds[j])
      throw InputError("lp: lower bound exceeds upper bound for variable " + std::to_string(j));
    if (p.lower_bounds[j] == kInf || p.upper_bounds[j] == -kInf)
      throw InputError("lp: empty bound interval for variable " + std::to_string(j));
  }
  if (!p.objective.allFinite() || !p.eq_matrix.allFinite() || !p.eq_rhs.allFinite())
    throw InputError("lp: non-finite coefficient");
}

double equality_residual(const LpProblem& p, const RVector& x) {
  if (p.eq_rhs.size() == 0) return 0.0;
  return (p.eq_matrix * x - p.eq_rhs).cwiseAbs().maxCoeff();
}

double bound_violation(const LpProblem& p, const RVector& x) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    worst = std::max(worst, p.lower_bounds[j] - x[j]);
    worst = std::max(worst, x[j] - p.upper_bounds[j]);
  }
  return worst;
}

LpResult solve_lp(const LpProblem& problem, const LpTolerances& tol) {
  validate(problem);
  StandardForm sf = to_standard_form(problem);
  const std::size_t ncols = static_cast<std::size_t>(sf.a.cols());

  // Row scaling, sign normalisation and removal of empty rows.
  std::vector<Eigen::Index> kept;
  for (Eigen::Index r = 0; r < sf.a.rows(); ++r) {
    const double scale = sf.a.row(r).cwiseAbs().maxCoeff();
    if (scale == 0.0) {
      if (std::abs(sf.b[r]) > tol.feas) return LpResult{LpStatus::infeasible, {}, 0.0, 0};
      continue;
    }
    sf.a.row(r) /= scale;
    sf.b[r] /= scale;
    if (sf.b[r] < 0.0) {
      sf.a.row(r) *= -1.0;
      sf.b[r] = -sf.b[r];
    }
    kept.push_back(r);
  }
  const std::size_t m = kept.size();

  // Crash basis: a column that is a positive unit vector in this row only.
  std::vector<std::size_t> crash(m, ncols);
  {
    std::vector<int> nonzeros(ncols, 0);
    std::vector<std::size_t> last_row(ncols, 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < ncols; ++j) {
        if (sf.a(kept[i], static_cast<Eigen::Index>(j)) != 0.0) {
          ++nonzeros[j];
          last_row[j] = i;
        }
      }
    }
    std::vector<bool> used(ncols, false);
    for (std::size_t j = 0; j < ncols; ++j) {
      if (nonzeros[j] != 1) continue;
      const std::size_t i = last_row[j];
      if (crash[i] == ncols && !used[j] && sf.a(kept[i], static_cast<Eigen::Index>(j)) > 0.0) {
        crash[i] = j;
        used[j] = true;
      }
    }
  }

  std::vector<std::size_t> artificial_rows;
  for (std::size_t i = 0; i < m; ++i)
    if (crash[i] == ncols) artificial_rows.push_back(i);

  const std::size_t total_cols = ncols + artificial_rows.size();
  Tableau t(m, total_cols);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    double* row = t.row(i);
    for (std::size_t j = 0; j < ncols; ++j) row[j] = sf.a(kept[i], static_cast<Eigen::Index>(j));
    row[total_cols] = sf.b[kept[i]];
    if (crash[i] != ncols) {
      const double d = row[crash[i]];
      for (std::size_t j = 0; j <= total_cols; ++j) row[j] /= d;
      basis[i] = crash[i];
    }
  }
  for (std::size_t k = 0; k < artificial_rows.size(); ++k) {
    t.at(artificial_rows[k], ncols + k) = 1.0;
    basis[artificial_rows[k]] = ncols + k;
  }

  const std::size_t budget =
      tol.max_iterations > 0 ? tol.max_iterations : 50 * (m + total_cols) + 1000;
  Simplex simplex(std::move(t), std::move(basis), ncols, tol, budget);

  if (!artificial_rows.empty()) {
    std::vector<double> phase_one(total_cols, 0.0);
    for (std::size_t k = 0; k < artificial_rows.size(); ++k) phase_one[ncols + k] = -1.0;
    simplex.set_objective(phase_one);
    simplex.run();
    const double scale = std::max(1.0, sf.b.size() > 0 ? sf.b.cwiseAbs().maxCoeff() : 0.0);
    if (-simplex.objective_value() > tol.feas * scale) {
      return LpResult{LpStatus::infeasible, {}, 0.0, simplex.iterations()};
    }
    simplex.drive_out_artificials();
  }

  std::vector<double> phase_two(total_cols, 0.0);
  for (std::size_t j = 0; j < ncols; ++j) phase_two[j] = sf.c[static_cast<Eigen::Index>(j)];
  simplex.set_objective(phase_two);
  if (simplex.run() == Simplex::Outcome::unbounded)
    return LpResult{LpStatus::unbounded, {}, 0.0, simplex.iterations()};

  // Recover x_std from the final basis; refine against the unpivoted rows.
  const auto& tab = simplex.tableau();
  const auto& final_basis = simplex.basis();
  RVector x_std = RVector::Zero(static_cast<Eigen::Index>(ncols));
  for (std::size_t r = 0; r < tab.rows(); ++r) x_std[static_cast<Eigen::Index>(final_basis[r])] = tab.rhs(r);
  {
    RMatrix a_kept(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(ncols));
    RVector b_kept(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      a_kept.row(static_cast<Eigen::Index>(i)) = sf.a.row(kept[i]);
      b_kept[static_cast<Eigen::Index>(i)] = sf.b[kept[i]];
    }
    if (m > 0 && !final_basis.empty()) {
      RMatrix basic(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(final_basis.size()));
      for (std::size_t k = 0; k < final_basis.size(); ++k)
        basic.col(static_cast<Eigen::Index>(k)) = a_kept.col(static_cast<Eigen::Index>(final_basis[k]));
      const RVector residual = b_kept - a_kept * x_std;
      const RVector correction = basic.colPivHouseholderQr().solve(residual);
      RVector refined = x_std;
      for (std::size_t k = 0; k < final_basis.size(); ++k)
        refined[static_cast<Eigen::Index>(final_basis[k])] += correction[static_cast<Eigen::Index>(k)];
      if ((b_kept - a_kept * refined).cwiseAbs().maxCoeff() < residual.cwiseAbs().maxCoeff() &&
          refined.minCoeff() >= -tol.feas)
        x_std = refined;
    }
  }

  if (x_std.size() > 0 && x_std.minCoeff() < -tol.feas) throw SolverError("simplex lost feasibility to rounding");

  RVector x = sf.offset;
  for (std::size_t k = 0; k < ncols; ++k) {
    const auto& col = sf.columns[k];
    if (col.original == kNoOriginal) continue;
    x[static_cast<Eigen::Index>(col.original)] += col.sign * x_std[static_cast<Eigen::Index>(k)];
  }
  LpResult result;
  result.status = LpStatus::optimal;
  result.objective_value = problem.objective.dot(x);
  result.solution = std::move(x);
  result.iterations = simplex.iterations();
  return result;
}

std::vector<Vertex> enumerate_vertices(const LpProblem& p, double tol) {
  validate(p);
  const std::size_t n = p.variables();
  if (n > kVertexEnumerationLimit)
    throw InputError("enumerate_vertices: " + std::to_string(n) + " variables exceeds the limit of " +
                     std::to_string(kVertexEnumerationLimit));

  const RMatrix& a = p.eq_matrix;
  const std::size_t rank =
      a.rows() == 0 ? 0 : static_cast<std::size_t>(Eigen::FullPivLU<RMatrix>(a).rank());

  std::vector<Vertex> out;
  auto already_seen = [&](const RVector& x) {
    for (const auto& v : out)
      if ((v.point - x).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + x.cwiseAbs().maxCoeff())) return true;
    return false;
  };

  // Each variable is basic (0), or nonbasic at its lower (1) / upper (2) bound.
  std::vector<int> state(n, 0);
  const std::size_t combos = [&] {
    std::size_t c = 1;
    for (std::size_t i = 0; i < n; ++i) c *= 3;
    return c;
  }();
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t rest = code;
    std::size_t basic_count = 0;
    bool valid = true;
    for (std::size_t j = 0; j < n; ++j) {
      state[j] = static_cast<int>(rest % 3);
      rest /= 3;
      if (state[j] == 0) ++basic_count;
      if (state[j] == 1 && !std::isfinite(p.lower_bounds[static_cast<Eigen::Index>(j)])) valid = false;
      if (state[j] == 2 && !std::isfinite(p.upper_bounds[static_cast<Eigen::Index>(j)])) valid = false;
    }
    if (!valid || basic_count != rank) continue;

    RVector x = RVector::Zero(static_cast<Eigen::Index>(n));
    std::vector<Eigen::Index> basic;
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      if (state[j] == 0) basic.push_back(jj);
      else x[jj] = state[j] == 1 ? p.lower_bounds[jj] : p.upper_bounds[jj];
    }
    if (rank > 0) {
      RMatrix ab(a.rows(), static_cast<Eigen::Index>(rank));
      for (std::size_t k = 0; k < rank; ++k) ab.col(static_cast<Eigen::Index>(k)) = a.col(basic[k]);
      Eigen::FullPivLU<RMatrix> lu(ab);
      if (static_cast<std::size_t>(lu.rank()) != rank) continue;
      const RVector rhs = p.eq_rhs - a * x;
      const RVector xb = ab.fullPivHouseholderQr().solve(rhs);
      for (std::size_t k = 0; k < rank; ++k) x[basic[k]] = xb[static_cast<Eigen::Index>(k)];
    }
    const double scale = 1.0 + (p.eq_rhs.size() > 0 ? p.eq_rhs.cwiseAbs().maxCoeff() : 0.0);
    if (equality_residual(p, x) > tol * scale || bound_violation(p, x) > tol * scale) continue;
    if (already_seen(x)) continue;
    out.push_back({x, p.objective.dot(x)});
  }
  return out;
}

}  // namespace uaext::lp
