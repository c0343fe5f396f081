#include "uaext/funcsys.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uaext/errors.hpp"

namespace uaext {

FunctionTable::FunctionTable(SpacePtr s, CVector v, std::string n)
    : space(std::move(s)), values(std::move(v)), name(std::move(n)) {
  if (!space) throw InputError("table: null space");
  if (static_cast<std::size_t>(values.size()) != space->size())
    throw InputError("table: value count does not match the space");
}

namespace {

void check_length(const FunctionSystem& s, const CVector& f, const char* context) {
  if (static_cast<std::size_t>(f.size()) != s.size())
    throw InputError(std::string(context) + ": table length does not match the system's space");
}

std::vector<int> resolve_weights(std::size_t count, std::vector<int> weights) {
  if (weights.empty()) weights.assign(count, 1);
  if (weights.size() != count) throw InputError("generator weight count does not match generator count");
  for (int w : weights)
    if (w < 1) throw InputError("generator weights must be >= 1");
  return weights;
}

}  // namespace

FunctionSystem::FunctionSystem(SpacePtr space, CMatrix basis, std::vector<FunctionTable> generators, int degree_cap,
                               double rank_tol, std::vector<int> weights)
    : space_(std::move(space)),
      basis_(std::move(basis)),
      generators_(std::move(generators)),
      weights_(std::move(weights)),
      degree_cap_(degree_cap),
      rank_tol_(rank_tol) {
  separates_ = separates_points_scan(basis_);
}

FunctionSystem FunctionSystem::from_span(SpacePtr space, const CMatrix& spanning, std::vector<FunctionTable> generators,
                                         int degree_cap, double rank_tol, std::vector<int> generator_weights) {
  if (!space) throw InputError("function system: null space");
  if (static_cast<std::size_t>(spanning.rows()) != space->size())
    throw InputError("function system: spanning tables do not match the space");
  if (degree_cap < 1) throw InputError("function system: degree_cap must be >= 1");
  for (const auto& g : generators) require_same_space(g.space, space, "function system generator");
  generator_weights = resolve_weights(generators.size(), std::move(generator_weights));

  CMatrix normalised(spanning.rows(), 0);
  {
    std::vector<Eigen::Index> keep;
    const double largest = spanning.cols() > 0 ? spanning.colwise().norm().maxCoeff() : 0.0;
    for (Eigen::Index j = 0; j < spanning.cols(); ++j)
      if (spanning.col(j).norm() > rank_tol * largest) keep.push_back(j);
    normalised.resize(spanning.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
      normalised.col(static_cast<Eigen::Index>(k)) = spanning.col(keep[k]).normalized();
  }
  CMatrix basis(spanning.rows(), 0);
  if (normalised.cols() > 0) {
    Eigen::ColPivHouseholderQR<CMatrix> qr(normalised);
    qr.setThreshold(rank_tol);
    const Eigen::Index r = qr.rank();
    basis = qr.householderQ() * CMatrix::Identity(spanning.rows(), r);
  }
  return FunctionSystem(std::move(space), std::move(basis), std::move(generators), degree_cap, rank_tol,
                        std::move(generator_weights));
}

FunctionSystem FunctionSystem::from_orthonormal(SpacePtr space, CMatrix basis, std::vector<FunctionTable> generators,
                                                int degree_cap, double rank_tol, std::vector<int> generator_weights) {
  if (!space) throw InputError("function system: null space");
  if (static_cast<std::size_t>(basis.rows()) != space->size())
    throw InputError("function system: basis tables do not match the space");
  for (const auto& g : generators) require_same_space(g.space, space, "function system generator");
  generator_weights = resolve_weights(generators.size(), std::move(generator_weights));
  const CMatrix gram = basis.adjoint() * basis;
  if ((gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("function system: supplied basis is not orthonormal");
  return FunctionSystem(std::move(space), std::move(basis), std::move(generators), degree_cap, rank_tol,
                        std::move(generator_weights));
}

FunctionTable FunctionSystem::basis_table(std::size_t k) const {
  if (k >= dim()) throw InputError("basis_table: index out of range");
  return FunctionTable(space_, basis_.col(static_cast<Eigen::Index>(k)), "b" + std::to_string(k));
}

CVector FunctionSystem::coefficients(const CVector& f) const {
  check_length(*this, f, "coefficients");
  return basis_.adjoint() * f;
}

CVector FunctionSystem::evaluate(const CVector& c) const {
  if (static_cast<std::size_t>(c.size()) != dim()) throw InputError("evaluate: coefficient count does not match dim");
  return basis_ * c;
}

CVector FunctionSystem::project(const CVector& f) const { return basis_ * coefficients(f); }

std::vector<std::vector<int>> monomial_exponents(std::size_t generator_count, int cap, const std::vector<int>& weights) {
  const std::vector<int> w = resolve_weights(generator_count, weights);
  std::vector<std::vector<int>> out;
  std::vector<int> current(generator_count, 0);
  // Depth-first over generators; remaining budget bounds each exponent.
  auto recurse = [&](auto&& self, std::size_t i, int budget) -> void {
    if (i == generator_count) {
      out.push_back(current);
      return;
    }
    for (int e = 0; e * w[i] <= budget; ++e) {
      current[i] = e;
      self(self, i + 1, budget - e * w[i]);
    }
    current[i] = 0;
  };
  recurse(recurse, 0, cap);
  auto degree = [&](const std::vector<int>& e) {
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * w[i];
    return d;
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    const int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  });
  return out;
}

FunctionSystem generate_system(const SpacePtr& space, std::vector<FunctionTable> generators, int degree_cap,
                               double rank_tol, std::vector<int> generator_weights) {
  if (generators.empty()) throw InputError("generate_system: at least one generator is required");
  if (degree_cap < 1) throw InputError("generate_system: degree_cap must be >= 1");
  for (const auto& g : generators) require_same_space(g.space, space, "generate_system");
  generator_weights = resolve_weights(generators.size(), std::move(generator_weights));

  const auto exps = monomial_exponents(generators.size(), degree_cap, generator_weights);
  const auto n = static_cast<Eigen::Index>(space->size());
  CMatrix spanning(n, static_cast<Eigen::Index>(exps.size()));
  // powers[i][e] = g_i^e, built incrementally.
  std::vector<std::vector<CVector>> powers(generators.size());
  for (std::size_t i = 0; i < generators.size(); ++i) powers[i].push_back(CVector::Ones(n));
  auto power = [&](std::size_t i, int e) -> const CVector& {
    while (static_cast<int>(powers[i].size()) <= e)
      powers[i].push_back(powers[i].back().cwiseProduct(generators[i].values));
    return powers[i][static_cast<std::size_t>(e)];
  };
  for (std::size_t k = 0; k < exps.size(); ++k) {
    CVector col = CVector::Ones(n);
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (exps[k][i] > 0) col = col.cwiseProduct(power(i, exps[k][i]));
    spanning.col(static_cast<Eigen::Index>(k)) = col;
  }
  return FunctionSystem::from_span(space, spanning, std::move(generators), degree_cap, rank_tol,
                                   std::move(generator_weights));
}

FunctionSystem full_system(const SpacePtr& space) {
  const auto n = static_cast<Eigen::Index>(space->size());
  return FunctionSystem::from_orthonormal(space, CMatrix::Identity(n, n), {}, 1);
}

FunctionSystem constants_system(const SpacePtr& space) {
  const auto n = static_cast<Eigen::Index>(space->size());
  FunctionTable one(space, CVector::Ones(n), "1");
  return generate_system(space, {one}, 1);
}

double sup_norm(const CVector& f) { return f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff(); }
double sup_norm(const FunctionTable& f) { return sup_norm(f.values); }
double sup_norm(const FunctionSystem& system, const CVector& coefficients) {
  return sup_norm(system.evaluate(coefficients));
}

double span_residual(const FunctionSystem& system, const CVector& f) {
  check_length(system, f, "span_residual");
  return (f - system.project(f)).norm();
}

double span_residual(const FunctionSystem& system, const FunctionTable& f) {
  require_same_space(f.space, system.space(), "span_residual");
  return span_residual(system, f.values);
}

FunctionSystem restrict_system(const FunctionSystem& system, const IndexList& subset) {
  if (subset.empty()) throw InputError("restrict_system: empty subset");
  SpacePtr sub = subspace(system.space(), subset);
  IndexList sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  const auto m = static_cast<Eigen::Index>(sorted.size());
  auto restrict_rows = [&](const CMatrix& mat) {
    CMatrix out(m, mat.cols());
    for (Eigen::Index i = 0; i < m; ++i) out.row(i) = mat.row(static_cast<Eigen::Index>(sorted[static_cast<std::size_t>(i)]));
    return out;
  };
  std::vector<FunctionTable> gens;
  for (const auto& g : system.generators()) {
    CMatrix col = g.values;
    gens.emplace_back(sub, restrict_rows(col).col(0), g.name);
  }
  return FunctionSystem::from_span(sub, restrict_rows(system.basis()), std::move(gens), system.degree_cap(),
                                   system.rank_tol(), system.generator_weights());
}

FunctionSystem pullback_system(const SurjectionMap& pi, const FunctionSystem& system) {
  require_same_space(system.space(), pi.target(), "pullback_system");
  const auto ny = static_cast<Eigen::Index>(pi.source()->size());
  CMatrix pulled(ny, system.basis().cols());
  for (Eigen::Index y = 0; y < ny; ++y) pulled.row(y) = system.basis().row(static_cast<Eigen::Index>(pi(static_cast<std::size_t>(y))));
  std::vector<FunctionTable> gens;
  for (const auto& g : system.generators()) gens.emplace_back(pi.source(), pull_back(pi, g.values), g.name);
  return FunctionSystem::from_span(pi.source(), pulled, std::move(gens), system.degree_cap(), system.rank_tol(),
                                   system.generator_weights());
}

Interpolation interpolation_feasible(const FunctionSystem& system, const IndexList& k_set, const IndexList& e_set,
                                     Complex value_on_k, double tol) {
  if (k_set.empty() || e_set.empty()) throw InputError("interpolation_feasible: K and E must be non-empty");
  for (std::size_t k : k_set)
    if (std::find(e_set.begin(), e_set.end(), k) != e_set.end())
      throw InputError("interpolation_feasible: K and E overlap");
  const auto rows = static_cast<Eigen::Index>(k_set.size() + e_set.size());
  CMatrix m(rows, system.basis().cols());
  CVector target(rows);
  Eigen::Index r = 0;
  for (std::size_t k : k_set) {
    if (k >= system.size()) throw InputError("interpolation_feasible: point out of range");
    m.row(r) = system.basis().row(static_cast<Eigen::Index>(k));
    target[r++] = value_on_k;
  }
  for (std::size_t e : e_set) {
    if (e >= system.size()) throw InputError("interpolation_feasible: point out of range");
    m.row(r) = system.basis().row(static_cast<Eigen::Index>(e));
    target[r++] = 0.0;
  }
  Interpolation out;
  out.coefficients = m.completeOrthogonalDecomposition().solve(target);
  out.residual = (m * out.coefficients - target).norm();
  out.feasible = out.residual <= tol;
  return out;
}

bool separates_points_scan(const CMatrix& basis, double tol) {
  const Eigen::Index n = basis.rows();
  if (n <= 1) return true;
  if (basis.cols() == 0) return false;
  // Project each row onto a fixed generic direction; rows that agree to tol
  // in every column agree to tol * sum|a_k| in the projection.
  CVector a(basis.cols());
  for (Eigen::Index k = 0; k < a.size(); ++k)
    a[k] = std::polar(1.0 + 0.5 * std::sin(1.7 * static_cast<double>(k) + 0.3), 2.399963 * static_cast<double>(k) + 0.1);
  const CVector xi = basis * a;
  const double window = tol * a.cwiseAbs().sum();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return xi[i].real() < xi[j].real(); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (xi[order[j]].real() - xi[order[i]].real() > window) break;
      if ((basis.row(order[i]) - basis.row(order[j])).cwiseAbs().maxCoeff() <= tol) return false;
    }
  }
  return true;
}

}  // namespace uaext
