#include "uaext/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uaext/errors.hpp"
#include "uaext/hull.hpp"
#include "uaext/random.hpp"

namespace uaext {

namespace {

Clause make_clause(std::string name, double residual, double tolerance, std::size_t probes = 0,
                   std::string note = {}) {
  Clause c;
  c.name = std::move(name);
  c.residual = residual;
  c.tolerance = tolerance;
  c.pass = std::isfinite(residual) && residual <= tolerance;
  c.probe_count = probes;
  c.note = std::move(note);
  return c;
}

Clause not_applicable(std::string name, std::string note) {
  Clause c;
  c.name = std::move(name);
  c.pass = true;
  c.applicable = false;
  c.note = std::move(note);
  return c;
}

CMatrix pulled_basis(const SurjectionMap& pi, const FunctionSystem& a) {
  CMatrix out(static_cast<Eigen::Index>(pi.source()->size()), a.basis().cols());
  for (std::size_t y = 0; y < pi.source()->size(); ++y)
    out.row(static_cast<Eigen::Index>(y)) = a.basis().row(static_cast<Eigen::Index>(pi(y)));
  return out;
}

CMatrix apply_columns(const OperatorTable& t, const CMatrix& m) {
  CMatrix out(static_cast<Eigen::Index>(t.target()->size()), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.col(j) = t.apply(m.col(j));
  return out;
}

// Fiber averages of each column, pulled back to Y.
CMatrix fiber_mean_columns(const SurjectionMap& pi, const CMatrix& m) {
  CMatrix means = CMatrix::Zero(static_cast<Eigen::Index>(pi.target()->size()), m.cols());
  for (std::size_t y = 0; y < pi.source()->size(); ++y)
    means.row(static_cast<Eigen::Index>(pi(y))) += m.row(static_cast<Eigen::Index>(y));
  for (std::size_t x = 0; x < pi.target()->size(); ++x)
    means.row(static_cast<Eigen::Index>(x)) /= static_cast<double>(pi.fiber(x).size());
  CMatrix out(m.rows(), m.cols());
  for (std::size_t y = 0; y < pi.source()->size(); ++y)
    out.row(static_cast<Eigen::Index>(y)) = means.row(static_cast<Eigen::Index>(pi(y)));
  return out;
}

std::size_t numerical_rank(const CMatrix& m, double rel_tol = 1e-8) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++r;
  return r;
}

}  // namespace

void check_bundle_shape(const ExtensionBundle& bundle) {
  require_same_space(bundle.a.space(), bundle.pi.target(), "bundle: A must live on pi's target");
  require_same_space(bundle.b.space(), bundle.pi.source(), "bundle: B must live on pi's source");
  if (bundle.t) {
    require_same_space(bundle.t->source(), bundle.pi.source(), "bundle: T must act on C(Y)");
    require_same_space(bundle.t->target(), bundle.pi.target(), "bundle: T must land in C(X)");
  }
}

AveragingOperator make_operator(const SurjectionMap& pi, const std::vector<Measure>& rows) {
  if (rows.size() != pi.target()->size()) throw InputError("make_operator: one row per target point is required");
  OperatorTable t = OperatorTable::from_measures(pi.source(), pi.target(), rows);
  const double unital = t.unital_residual();
  const double section = t.section_residual(pi);
  return {std::move(t), unital, section};
}

OperatorTable fiber_average_operator(const SurjectionMap& pi) {
  std::vector<SparseRow> rows(pi.target()->size());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    const auto& fib = pi.fiber(x);
    for (std::size_t y : fib) rows[x].push_back({y, 1.0 / static_cast<double>(fib.size())});
  }
  return OperatorTable(pi.source(), pi.target(), std::move(rows));
}

bool Certificate::passed() const {
  if (!applicable) return false;
  return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.pass; });
}

const Clause* Certificate::find(const std::string& clause) const {
  for (const auto& c : clauses)
    if (c.name == clause) return &c;
  return nullptr;
}

std::vector<std::string> Certificate::failures() const {
  std::vector<std::string> out;
  for (const auto& c : clauses)
    if (!c.pass) out.push_back(c.name);
  return out;
}

std::vector<CVector> default_probes(const FunctionSystem& system, std::size_t random_count, std::uint64_t seed) {
  std::vector<CVector> probes;
  auto add = [&](const CVector& f) {
    const double s = sup_norm(f);
    if (s > 0.0) probes.push_back(f / s);
  };
  for (std::size_t k = 0; k < system.dim(); ++k) add(system.basis().col(static_cast<Eigen::Index>(k)));
  Rng rng(seed);
  for (std::size_t i = 0; i < random_count; ++i)
    add(system.evaluate(rng.complex_vector(static_cast<Eigen::Index>(system.dim()))));
  return probes;
}

Certificate equivalences_report(const OperatorTable& t, const SurjectionMap& pi, const std::vector<CVector>& probes,
                                const std::vector<CVector>& g_tables, const CertTolerances& tol) {
  require_same_space(t.source(), pi.source(), "equivalences_report");
  require_same_space(t.target(), pi.target(), "equivalences_report");
  Certificate cert;
  cert.name = "averaging_equivalences";

  const double section = t.section_residual(pi);
  cert.clauses.push_back(make_clause("section_identity", section, tol.onto, 0, "T o pi^* = id on C(X)"));
  cert.applicable = cert.clauses.back().pass;
  cert.clauses.push_back(make_clause("unital", t.unital_residual(), tol.unital));

  const auto np = static_cast<std::ptrdiff_t>(probes.size());
  for (const auto& f : probes)
    if (static_cast<std::size_t>(f.size()) != pi.source()->size())
      throw InputError("equivalences_report: probe length does not match Y");
  std::vector<CVector> pf(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) pf[i] = pull_back(pi, t.apply(probes[i]));

  // (a) Kelley identity P(f P(h)) = P(f) P(h).
  double kelley = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : kelley)
  for (std::ptrdiff_t i = 0; i < np; ++i) {
    const CVector& f = probes[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const CVector lhs = pull_back(pi, t.apply(f.cwiseProduct(pf[j])));
      kelley = std::max(kelley, sup_norm(CVector(lhs - pf[static_cast<std::size_t>(i)].cwiseProduct(pf[j]))));
    }
  }
  cert.clauses.push_back(make_clause("kelley", kelley, tol.kelley, probes.size() * probes.size()));

  // (b) module property T(f pi^* g) = T(f) g.
  const std::size_t nx = pi.target()->size();
  const bool indicators = g_tables.empty();
  const std::size_t ng = indicators ? nx : g_tables.size();
  double module = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : module)
  for (std::ptrdiff_t i = 0; i < np; ++i) {
    const CVector& f = probes[static_cast<std::size_t>(i)];
    const CVector tf = t.apply(f);
    for (std::size_t k = 0; k < ng; ++k) {
      CVector g;
      if (indicators) {
        g = CVector::Zero(static_cast<Eigen::Index>(nx));
        g[static_cast<Eigen::Index>(k)] = 1.0;
      } else {
        g = g_tables[k];
      }
      const CVector lhs = t.apply(f.cwiseProduct(pull_back(pi, g)));
      module = std::max(module, sup_norm(CVector(lhs - tf.cwiseProduct(g))));
    }
  }
  cert.clauses.push_back(make_clause("module", module, tol.module, probes.size() * ng,
                                     indicators ? "g ranges over point indicators of X" : ""));

  // (c) fiber support.
  cert.clauses.push_back(make_clause("fiber_support", t.off_fiber_mass(pi), tol.off_fiber));

  // (d) T(f)(x) in the convex hull of f over the fiber.
  double hull_dist = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : hull_dist)
  for (std::ptrdiff_t i = 0; i < np; ++i) {
    const CVector& f = probes[static_cast<std::size_t>(i)];
    const CVector tf = t.apply(f);
    for (std::size_t x = 0; x < nx; ++x) {
      std::vector<Complex> vals;
      for (std::size_t y : pi.fiber(x)) vals.push_back(f[static_cast<Eigen::Index>(y)]);
      hull_dist = std::max(hull_dist, hull::distance_to_hull(tf[static_cast<Eigen::Index>(x)], hull::convex_hull(vals)));
    }
  }
  cert.clauses.push_back(make_clause("convex_hull", hull_dist, tol.hull, probes.size()));
  return cert;
}

Certificate extension_certificate(const ExtensionBundle& bundle, const CertTolerances& tol) {
  check_bundle_shape(bundle);
  Certificate cert;
  cert.name = "extension";
  double incl = 0.0;
  const CMatrix pa = pulled_basis(bundle.pi, bundle.a);
  for (Eigen::Index k = 0; k < pa.cols(); ++k) incl = std::max(incl, span_residual(bundle.b, CVector(pa.col(k))));
  cert.clauses.push_back(make_clause("pullback_inclusion", incl, tol.pullback_inclusion, bundle.a.dim()));
  const double one_a = span_residual(bundle.a, CVector::Ones(static_cast<Eigen::Index>(bundle.a.size())));
  const double one_b = span_residual(bundle.b, CVector::Ones(static_cast<Eigen::Index>(bundle.b.size())));
  cert.clauses.push_back(make_clause("constants", std::max(one_a, one_b), 1e-10));
  Clause sep = make_clause("b_separates_points", bundle.b.separates_points() ? 0.0 : 1.0, 0.0);
  cert.clauses.push_back(sep);
  return cert;
}

CMatrix fiber_constant_part(const FunctionSystem& b, const SurjectionMap& pi, double null_tol) {
  require_same_space(b.space(), pi.source(), "fiber_constant_part");
  const CMatrix& q = b.basis();
  const CMatrix m = q - fiber_mean_columns(pi, q);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] <= null_tol) null_cols.push_back(i);
  const CMatrix& v = svd.matrixV();
  CMatrix out(q.rows(), static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t c = 0; c < null_cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = q * v.col(null_cols[c]);
  return out;
}

Clause invariant_intersection_clause(const ExtensionBundle& bundle, double tol) {
  const CMatrix f = fiber_constant_part(bundle.b, bundle.pi);
  const CMatrix pa = pulled_basis(bundle.pi, bundle.a);
  Eigen::ColPivHouseholderQR<CMatrix> qr(pa);
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  const CMatrix qa = (qr.householderQ() * CMatrix::Identity(pa.rows(), rank));
  double worst = 0.0;
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    const CVector col = f.col(j);
    worst = std::max(worst, (col - qa * (qa.adjoint() * col)).norm());
  }
  std::ostringstream note;
  note << "fiber-constant part of B has dimension " << f.cols() << ", pi^*(A) has dimension " << rank;
  Clause c = make_clause("invariant_intersection", worst, tol, static_cast<std::size_t>(f.cols()), note.str());
  if (f.cols() != rank) c.pass = false;
  return c;
}

Certificate gce_certificate(const ExtensionBundle& bundle, const std::vector<CVector>& probes,
                            const CertTolerances& tol, std::uint64_t seed) {
  check_bundle_shape(bundle);
  Certificate cert;
  cert.name = "generalised_cole_extension";
  if (!bundle.t) {
    cert.applicable = false;
    cert.clauses.push_back(not_applicable("operator", "bundle has no averaging operator"));
    return cert;
  }
  const OperatorTable& t = *bundle.t;
  const SurjectionMap& pi = bundle.pi;
  const FunctionSystem& a = bundle.a;
  const FunctionSystem& b = bundle.b;

  cert.clauses.push_back(make_clause("unital", t.unital_residual(), tol.unital));
  cert.clauses.push_back(make_clause("norm_one", std::abs(operator_norm(t) - 1.0), tol.norm));

  const CMatrix pa = pulled_basis(pi, a);
  const CMatrix tpa = apply_columns(t, pa);
  const double onto = (tpa - a.basis()).cwiseAbs().maxCoeff();
  cert.clauses.push_back(make_clause("section_identity", std::max(onto, t.section_residual(pi)), tol.section,
                                     a.dim(), "T o pi^* = id, on A's basis and on point masses"));

  double incl = 0.0;
  for (Eigen::Index k = 0; k < pa.cols(); ++k) incl = std::max(incl, span_residual(b, CVector(pa.col(k))));
  cert.clauses.push_back(make_clause("pullback_inclusion", incl, tol.pullback_inclusion, a.dim()));

  double image = 0.0;
  const CMatrix tb = apply_columns(t, b.basis());
  for (Eigen::Index k = 0; k < tb.cols(); ++k) image = std::max(image, span_residual(a, CVector(tb.col(k))));
  for (const auto& f : probes) image = std::max(image, span_residual(a, t.apply(f)) / std::max(1.0, f.norm()));
  cert.clauses.push_back(make_clause("image_in_a", image, tol.image_in_a, b.dim() + probes.size()));

  cert.clauses.push_back(make_clause("onto", onto, tol.onto, a.dim(), "a = T(pi^* a) with pi^* a in B"));

  // Annihilators of A: full basis (X is small in every bundle here).
  const AnnihilatorBasis a_perp = annihilator_basis(a);
  const std::size_t k_perp = a_perp.size();
  const CMatrix t_star = adjoint_weights(t, a_perp.weights);
  cert.clauses.push_back(make_clause("adjoint_annihilation", annihilation_residual(b, t_star), tol.adjoint_annihilation,
                                     k_perp, "T^* maps A-perp into B-perp"));
  const double inversion =
      k_perp == 0 ? 0.0 : (pushforward_weights(pi, t_star) - a_perp.weights).cwiseAbs().maxCoeff();
  cert.clauses.push_back(make_clause("pushforward_inversion", inversion, tol.pushforward_inversion, k_perp,
                                     "pi_* o T^* = id on A-perp"));

  // Sampled elements of B-perp pushed down to X.
  const AnnihilatorBasis b_samples = sample_annihilators(b, k_perp + 4, seed);
  const CMatrix pushed = pushforward_weights(pi, b_samples.weights);
  double push_res = 0.0;
  if (b.dim() < b.size()) {
    const CMatrix integrals = a.basis().transpose() * pushed;
    for (Eigen::Index j = 0; j < pushed.cols(); ++j) {
      const double tv = b_samples.weights.col(j).cwiseAbs().sum();
      if (tv > 0.0) push_res = std::max(push_res, integrals.col(j).cwiseAbs().maxCoeff() / tv);
    }
  }
  cert.clauses.push_back(make_clause("pushforward_annihilation", push_res, tol.pushforward_annihilation,
                                     b_samples.size(), "pi_* maps B-perp into A-perp"));
  const std::size_t push_rank = b.dim() < b.size() ? numerical_rank(pushed) : 0;
  std::ostringstream span_note;
  span_note << "rank of pushed B-perp samples " << push_rank << ", dim A-perp " << k_perp;
  cert.clauses.push_back(make_clause("pushforward_span", push_rank == k_perp ? 0.0 : 1.0, 0.0, b_samples.size(),
                                     span_note.str()));

  if (a.dim() < a.size()) {
    const bool nontrivial = b.dim() < b.size() && push_rank == k_perp && k_perp > 0;
    std::ostringstream note;
    note << "dim A = " << a.dim() << " < |X| = " << a.size() << "; dim B = " << b.dim() << ", |Y| = " << b.size();
    cert.clauses.push_back(make_clause("nontriviality", nontrivial ? 0.0 : 1.0, 0.0, 0, note.str()));
  } else {
    cert.clauses.push_back(not_applicable("nontriviality", "A = C(X)"));
  }

  cert.clauses.push_back(invariant_intersection_clause(bundle, tol.invariant_intersection));

  double neg = 0.0;
  for (const auto& row : t.rows())
    for (const auto& e : row) neg = std::max({neg, -e.weight.real(), std::abs(e.weight.imag())});
  cert.clauses.push_back(make_clause("positivity", neg, tol.positivity));
  return cert;
}

double multiplicativity_residual(const OperatorTable& t, const std::vector<CVector>& probes) {
  std::vector<CVector> tp(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) tp[i] = t.apply(probes[i]);
  double worst = 0.0;
  const auto np = static_cast<std::ptrdiff_t>(probes.size());
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
  for (std::ptrdiff_t i = 0; i < np; ++i)
    for (std::size_t j = static_cast<std::size_t>(i); j < probes.size(); ++j) {
      const CVector lhs = t.apply(probes[static_cast<std::size_t>(i)].cwiseProduct(probes[j]));
      worst = std::max(worst, sup_norm(CVector(lhs - tp[static_cast<std::size_t>(i)].cwiseProduct(tp[j]))));
    }
  return worst;
}

RowCharacterReport row_character_check(const OperatorTable& t, const FunctionSystem& b) {
  require_same_space(t.source(), b.space(), "row_character_check");
  const CMatrix& q = b.basis();
  const std::size_t nx = t.rows().size();
  RowCharacterReport out;
  out.points.assign(nx, 0);
  std::vector<double> dist(nx, 0.0);
  const auto nxi = static_cast<std::ptrdiff_t>(nx);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < nxi; ++x) {
    Eigen::RowVectorXcd functional = Eigen::RowVectorXcd::Zero(q.cols());
    for (const auto& e : t.row(static_cast<std::size_t>(x))) functional += e.weight * q.row(static_cast<Eigen::Index>(e.index));
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (Eigen::Index y = 0; y < q.rows(); ++y) {
      const double d = (q.row(y) - functional).norm();
      if (d < best) {
        best = d;
        arg = static_cast<std::size_t>(y);
      }
    }
    dist[static_cast<std::size_t>(x)] = best;
    out.points[static_cast<std::size_t>(x)] = arg;
  }
  for (double d : dist) out.residual = std::max(out.residual, d);
  return out;
}

ExtensionBundle restrict_bundle(const ExtensionBundle& bundle, const IndexList& k_set) {
  check_bundle_shape(bundle);
  if (k_set.empty()) throw InputError("restrict_bundle: K is empty");
  IndexList k_sorted = k_set;
  std::sort(k_sorted.begin(), k_sorted.end());
  k_sorted.erase(std::unique(k_sorted.begin(), k_sorted.end()), k_sorted.end());
  const std::size_t nx = bundle.pi.target()->size();
  std::vector<std::size_t> x_pos(nx, nx);
  for (std::size_t i = 0; i < k_sorted.size(); ++i) {
    if (k_sorted[i] >= nx) throw InputError("restrict_bundle: point out of range");
    x_pos[k_sorted[i]] = i;
  }
  IndexList y_set;
  for (std::size_t y = 0; y < bundle.pi.source()->size(); ++y)
    if (x_pos[bundle.pi(y)] != nx) y_set.push_back(y);
  std::vector<std::size_t> y_pos(bundle.pi.source()->size(), y_set.size());
  for (std::size_t i = 0; i < y_set.size(); ++i) y_pos[y_set[i]] = i;

  FunctionSystem a_k = restrict_system(bundle.a, k_sorted);
  FunctionSystem b_k = restrict_system(bundle.b, y_set);
  IndexList assignment(y_set.size());
  for (std::size_t i = 0; i < y_set.size(); ++i) assignment[i] = x_pos[bundle.pi(y_set[i])];
  SurjectionMap pi_k(b_k.space(), a_k.space(), assignment);

  std::optional<OperatorTable> t_k;
  if (bundle.t) {
    std::vector<SparseRow> rows(k_sorted.size());
    for (std::size_t i = 0; i < k_sorted.size(); ++i)
      for (const auto& e : bundle.t->row(k_sorted[i])) {
        if (y_pos[e.index] == y_set.size()) throw InputError("restrict_bundle: a row of T leaves pi^{-1}(K)");
        rows[i].push_back({y_pos[e.index], e.weight});
      }
    t_k.emplace(b_k.space(), a_k.space(), std::move(rows));
  }
  ExtensionBundle out{bundle.name + "|K", std::move(a_k), std::move(b_k), std::move(pi_k), std::move(t_k),
                      bundle.flags, bundle.metadata};
  out.metadata["restricted_to"] = k_sorted;
  return out;
}

}  // namespace uaext
