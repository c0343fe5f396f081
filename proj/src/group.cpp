#include "uaext/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "uaext/errors.hpp"

namespace uaext {

GroupAction make_action(SpacePtr space, std::vector<IndexList> permutations) {
  if (!space) throw InputError("make_action: null space");
  if (permutations.empty()) throw ValidationError("make_action: no group elements");
  const std::size_t n = space->size();
  std::map<IndexList, std::size_t> index_of;
  for (std::size_t s = 0; s < permutations.size(); ++s) {
    const auto& perm = permutations[s];
    if (perm.size() != n) throw ValidationError("make_action: element " + std::to_string(s) + " has the wrong length");
    std::vector<bool> hit(n, false);
    for (std::size_t v : perm) {
      if (v >= n || hit[v]) throw ValidationError("make_action: element " + std::to_string(s) + " is not a bijection");
      hit[v] = true;
    }
    if (!index_of.emplace(perm, s).second)
      throw ValidationError("make_action: element " + std::to_string(s) + " is listed twice");
  }

  GroupAction g;
  g.space = std::move(space);
  g.elements = std::move(permutations);
  const std::size_t order = g.elements.size();
  IndexList id(n);
  std::iota(id.begin(), id.end(), 0);
  auto idit = index_of.find(id);
  if (idit == index_of.end()) throw ValidationError("make_action: the identity is missing");
  g.identity_index = idit->second;

  g.multiplication.assign(order, IndexList(order));
  IndexList comp(n);
  for (std::size_t s = 0; s < order; ++s)
    for (std::size_t t = 0; t < order; ++t) {
      for (std::size_t y = 0; y < n; ++y) comp[y] = g.elements[s][g.elements[t][y]];
      auto it = index_of.find(comp);
      if (it == index_of.end())
        throw ValidationError("make_action: product of elements " + std::to_string(s) + " and " + std::to_string(t) +
                              " is not listed");
      g.multiplication[s][t] = it->second;
    }
  g.inverse.assign(order, order);
  for (std::size_t s = 0; s < order; ++s)
    for (std::size_t t = 0; t < order; ++t)
      if (g.multiplication[s][t] == g.identity_index) g.inverse[s] = t;

  g.orbit_of.assign(n, n);
  for (std::size_t y = 0; y < n; ++y) {
    if (g.orbit_of[y] != n) continue;
    IndexList orbit;
    for (const auto& perm : g.elements) orbit.push_back(perm[y]);
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    for (std::size_t v : orbit) g.orbit_of[v] = g.orbits.size();
    g.orbits.push_back(std::move(orbit));
  }
  return g;
}

CVector act(const GroupAction& action, std::size_t s, const CVector& f) {
  if (static_cast<std::size_t>(f.size()) != action.space->size()) throw InputError("act: table length mismatch");
  const auto& perm = action.elements.at(s);
  CVector out(f.size());
  for (std::size_t y = 0; y < perm.size(); ++y) out[static_cast<Eigen::Index>(y)] = f[static_cast<Eigen::Index>(perm[y])];
  return out;
}

namespace {

SparseRow haar_row(const GroupAction& action, std::size_t y) {
  std::map<std::size_t, double> acc;
  const double w = 1.0 / static_cast<double>(action.order());
  for (const auto& perm : action.elements) acc[perm[y]] += w;
  SparseRow row;
  for (const auto& [idx, v] : acc) row.push_back({idx, v});
  return row;
}

}  // namespace

OperatorTable haar_projection(const GroupAction& action) {
  std::vector<SparseRow> rows(action.space->size());
  for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = haar_row(action, y);
  return OperatorTable(action.space, action.space, std::move(rows));
}

ExtensionBundle haar_extension(const GroupAction& action, const FunctionSystem& b,
                               const std::vector<CVector>& extra_invariants) {
  require_same_space(action.space, b.space(), "haar_extension");
  const SpacePtr& y_space = action.space;
  std::vector<Point> quotient;
  IndexList assignment(y_space->size());
  std::vector<SparseRow> rows;
  for (std::size_t o = 0; o < action.orbits.size(); ++o) {
    const auto& orbit = action.orbits[o];
    Point p;
    p.label = y_space->point(orbit.front()).label;
    p.coords.assign(y_space->arity(), Complex(0.0));
    for (std::size_t y : orbit) {
      for (std::size_t k = 0; k < p.coords.size(); ++k) p.coords[k] += y_space->coord(y, k);
      assignment[y] = o;
    }
    for (auto& c : p.coords) c /= static_cast<double>(orbit.size());
    quotient.push_back(std::move(p));
    rows.push_back(haar_row(action, orbit.front()));
  }
  auto x_space = std::make_shared<const FiniteSpace>(std::move(quotient));
  SurjectionMap pi(y_space, x_space, assignment);
  OperatorTable t(y_space, x_space, std::move(rows));

  const auto nx = static_cast<Eigen::Index>(x_space->size());
  CMatrix span(nx, static_cast<Eigen::Index>(b.dim() + extra_invariants.size()));
  for (std::size_t k = 0; k < b.dim(); ++k)
    span.col(static_cast<Eigen::Index>(k)) = t.apply(b.basis().col(static_cast<Eigen::Index>(k)));
  for (std::size_t k = 0; k < extra_invariants.size(); ++k) {
    if (extra_invariants[k].size() != nx) throw InputError("haar_extension: invariant table has the wrong length");
    span.col(static_cast<Eigen::Index>(b.dim() + k)) = extra_invariants[k];
  }
  std::vector<FunctionTable> gens;
  for (const auto& g : b.generators()) {
    bool invariant = true;
    for (std::size_t s = 0; s < action.order() && invariant; ++s)
      invariant = (act(action, s, g.values) - g.values).cwiseAbs().maxCoeff() <= 1e-12;
    if (invariant) gens.emplace_back(x_space, t.apply(g.values), g.name);
  }
  FunctionSystem a = FunctionSystem::from_span(x_space, span, std::move(gens), b.degree_cap(), b.rank_tol());

  ExtensionFlags flags;
  flags.group_implemented = true;
  nlohmann::json meta;
  meta["group_order"] = action.order();
  return {"haar", std::move(a), b, std::move(pi), std::move(t), flags, meta};
}

Certificate implemented_report(const ExtensionBundle& bundle, const GroupAction& action,
                               const std::vector<CVector>& probes, const CertTolerances& tol) {
  check_bundle_shape(bundle);
  require_same_space(action.space, bundle.pi.source(), "implemented_report");
  Certificate cert;
  cert.name = "implemented_by_group";
  const SurjectionMap& pi = bundle.pi;
  const std::size_t ny = pi.source()->size();

  std::size_t mismatched = 0;
  for (std::size_t y = 0; y < ny; ++y)
    if (action.orbits[action.orbit_of[y]] != pi.fiber(pi(y))) ++mismatched;
  Clause orbits;
  orbits.name = "orbits_equal_fibers";
  orbits.residual = static_cast<double>(mismatched);
  orbits.pass = mismatched == 0;
  orbits.probe_count = ny;
  orbits.note = "points whose orbit differs from their fiber";
  cert.clauses.push_back(orbits);

  Clause rows;
  rows.name = "orbit_measures";
  rows.tolerance = tol.orbit_measure;
  if (!bundle.t) {
    rows.applicable = false;
    rows.pass = false;
    rows.note = "bundle has no averaging operator";
  } else {
    double worst = 0.0;
    for (std::size_t x = 0; x < pi.target()->size(); ++x) {
      const auto& fib = pi.fiber(x);
      const SparseRow haar = haar_row(action, fib.front());
      std::map<std::size_t, Complex> diff;
      for (const auto& e : bundle.t->row(x)) diff[e.index] += e.weight;
      for (const auto& e : haar) diff[e.index] -= e.weight;
      double tv = 0.0;
      for (const auto& [idx, v] : diff) tv += std::abs(v);
      worst = std::max(worst, tv);
    }
    rows.residual = worst;
    rows.pass = worst <= tol.orbit_measure;
  }
  cert.clauses.push_back(rows);

  // f_s in B for each basis member f and each group element s.
  const CMatrix& q = bundle.b.basis();
  const auto order = static_cast<std::ptrdiff_t>(action.order());
  double stability = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : stability)
  for (std::ptrdiff_t s = 0; s < order; ++s) {
    const auto& perm = action.elements[static_cast<std::size_t>(s)];
    CMatrix moved(q.rows(), q.cols());
    for (std::size_t y = 0; y < perm.size(); ++y) moved.row(static_cast<Eigen::Index>(y)) = q.row(static_cast<Eigen::Index>(perm[y]));
    const CMatrix res = moved - q * (q.adjoint() * moved);
    for (Eigen::Index k = 0; k < res.cols(); ++k) stability = std::max(stability, res.col(k).norm());
  }
  Clause stab;
  stab.name = "stability";
  stab.residual = stability;
  stab.tolerance = tol.stability;
  stab.pass = stability <= tol.stability;
  stab.probe_count = bundle.b.dim() * action.order();
  cert.clauses.push_back(stab);

  // Right invariance of the Haar projection on the probes.
  const OperatorTable p = haar_projection(action);
  double invariance = 0.0;
  for (const auto& f : probes) {
    const CVector pf = p.apply(f);
    for (std::size_t s = 0; s < action.order(); ++s)
      invariance = std::max(invariance, sup_norm(CVector(p.apply(act(action, s, f)) - pf)));
  }
  Clause inv;
  inv.name = "haar_invariance";
  inv.residual = invariance;
  inv.tolerance = tol.orbit_measure;
  inv.pass = invariance <= 1e-12;
  inv.probe_count = probes.size() * action.order();
  cert.clauses.push_back(inv);

  cert.clauses.push_back(invariant_intersection_clause(bundle, tol.invariant_intersection));
  return cert;
}

BicontractiveResult bicontractive_analyze(const OperatorTable& p, const FunctionSystem& b,
                                          const std::vector<CVector>& probes, const CertTolerances& tol) {
  require_same_space(p.source(), p.target(), "bicontractive_analyze: P must act on one space");
  require_same_space(p.source(), b.space(), "bicontractive_analyze");
  const double idem = p.after(p).max_difference(p);
  if (idem > 1e-10) throw InputError("bicontractive_analyze: P is not a projection");
  if (p.unital_residual() > 1e-10) throw InputError("bicontractive_analyze: P is not unital");

  const OperatorTable id = OperatorTable::identity(p.source());
  BicontractiveResult out{false, operator_norm(p), 0.0, p.combine(2.0, id, -1.0), {}, {}, {}};
  out.norm_i_minus_p = operator_norm(id.combine(1.0, p, -1.0));
  out.is_bicontractive = std::abs(out.norm_p - 1.0) <= tol.norm && std::abs(out.norm_i_minus_p - 1.0) <= tol.norm;

  Certificate& cert = out.certificate;
  cert.name = "bicontractive_projection";
  auto add = [&](std::string name, double residual, double tolerance, std::string note = {}) {
    Clause c;
    c.name = std::move(name);
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = residual <= tolerance;
    c.note = std::move(note);
    cert.clauses.push_back(std::move(c));
  };
  add("projection", idem, 1e-10);
  add("norm_p", std::abs(out.norm_p - 1.0), tol.norm);
  add("norm_i_minus_p", std::abs(out.norm_i_minus_p - 1.0), tol.norm);
  add("theta_involution", out.theta.after(out.theta).max_difference(id), 1e-10);
  add("theta_multiplicative", multiplicativity_residual(out.theta, probes), tol.multiplicative);

  const std::size_t n = p.source()->size();
  IndexList rho(n, n);
  bool point_masses = true;
  for (std::size_t y = 0; y < n && point_masses; ++y) {
    std::size_t target = n;
    for (const auto& e : out.theta.row(y)) {
      if (std::abs(e.weight - 1.0) <= 1e-9) {
        if (target != n) point_masses = false;
        target = e.index;
      } else if (std::abs(e.weight) > 1e-9) {
        point_masses = false;
      }
    }
    if (target == n) point_masses = false;
    rho[y] = target;
  }
  bool involution = point_masses;
  for (std::size_t y = 0; y < n && involution; ++y) involution = rho[rho[y]] == y;
  Clause rc;
  rc.name = "rho_recovered";
  rc.pass = point_masses && involution;
  rc.residual = rc.pass ? 0.0 : 1.0;
  rc.note = !point_masses ? "a row of theta is not a unit point mass"
                          : (involution ? "rho o rho = id" : "recovered map is not an involution");
  cert.clauses.push_back(rc);
  if (rc.pass) {
    out.rho = rho;
    IndexList idp(n);
    std::iota(idp.begin(), idp.end(), 0);
    std::vector<IndexList> perms{idp};
    if (rho != idp) perms.push_back(rho);
    out.action = make_action(p.source(), std::move(perms));
  }
  return out;
}

Reconstruction reconstruct_cole(const ExtensionBundle& bundle, const IndexList& rho, const CVector& h0, double tol,
                                int extension_degree_cap) {
  check_bundle_shape(bundle);
  if (!bundle.t) throw InputError("reconstruct_cole: bundle has no averaging operator");
  const SurjectionMap& pi = bundle.pi;
  const std::size_t ny = pi.source()->size();
  if (static_cast<std::size_t>(h0.size()) != ny) throw InputError("reconstruct_cole: h0 has the wrong length");
  if (rho.size() != ny) throw InputError("reconstruct_cole: rho has the wrong length");

  const CVector th0 = bundle.t->apply(h0);
  if (sup_norm(th0) > tol) throw HypothesisError("reconstruct_cole: T(h0) is not zero");
  const CVector sq = h0.cwiseProduct(h0);
  CVector h(static_cast<Eigen::Index>(pi.target()->size()));
  for (std::size_t x = 0; x < pi.target()->size(); ++x) {
    const auto& fib = pi.fiber(x);
    const Complex v = sq[static_cast<Eigen::Index>(fib.front())];
    for (std::size_t y : fib)
      if (std::abs(sq[static_cast<Eigen::Index>(y)] - v) > tol)
        throw HypothesisError("reconstruct_cole: h0^2 is not constant on the fiber over " +
                              pi.target()->point(x).label);
    h[static_cast<Eigen::Index>(x)] = v;
  }
  if (span_residual(bundle.a, h) > 1e-9) throw HypothesisError("reconstruct_cole: h0^2 is not the pullback of a member of A");

  Reconstruction out;
  Certificate& cert = out.certificate;
  cert.name = "cole_reconstruction";
  ColeSpec spec{bundle.a,
                {FunctionTable(pi.target(), -h, "h_0"),
                 FunctionTable(pi.target(), CVector::Zero(h.size()), "h_1")},
                extension_degree_cap,
                kDefaultMergeTol};
  ColeBundle cb = cole_extend(spec);
  const SurjectionMap& piq = cb.bundle.pi;

  IndexList psi(ny, cb.bundle.b.size());
  std::vector<std::size_t> owner(cb.bundle.b.size(), ny);
  bool found_all = true;
  for (std::size_t y = 0; y < ny; ++y) {
    const std::size_t x = pi(y);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t cand : piq.fiber(x)) {
      const double d = std::abs(cb.p_q.values[static_cast<Eigen::Index>(cand)] - h0[static_cast<Eigen::Index>(y)]);
      if (d < best) {
        best = d;
        psi[y] = cand;
      }
    }
    if (best > 1e-7) {
      found_all = false;
      continue;
    }
    if (owner[psi[y]] != ny && !out.collision) out.collision = std::make_pair(owner[psi[y]], y);
    owner[psi[y]] = y;
  }
  const bool bijective = found_all && !out.collision && ny == cb.bundle.b.size();
  out.matched = bijective;

  Clause m;
  m.name = "psi_bijection";
  m.pass = bijective;
  m.residual = bijective ? 0.0 : 1.0;
  if (out.collision) {
    std::ostringstream os;
    os << "points " << pi.source()->point(out.collision->first).label << " and "
       << pi.source()->point(out.collision->second).label << " have the same image";
    m.note = os.str();
  } else if (!found_all) {
    m.note = "some h0 value matches no root";
  } else if (!bijective) {
    m.note = "|Y| differs from |X^q|";
  }
  cert.clauses.push_back(m);

  Clause decl;
  decl.name = "generation_declared";
  decl.pass = true;
  decl.applicable = false;
  decl.note = "B generated by pi^*(A) and h0 is the caller's declaration";
  cert.clauses.push_back(decl);

  if (bijective) {
    double section = 0.0, negation = 0.0, p_res = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      if (piq(psi[y]) != pi(y)) section = 1.0;
      const Complex pv = cb.p_q.values[static_cast<Eigen::Index>(psi[y])];
      negation = std::max(negation, std::abs(cb.p_q.values[static_cast<Eigen::Index>(psi[rho[y]])] + pv));
      p_res = std::max(p_res, std::abs(pv - h0[static_cast<Eigen::Index>(y)]));
    }
    double pullback = 0.0;
    const CMatrix& q = cb.bundle.b.basis();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
      CVector g(static_cast<Eigen::Index>(ny));
      for (std::size_t y = 0; y < ny; ++y) g[static_cast<Eigen::Index>(y)] = q(static_cast<Eigen::Index>(psi[y]), k);
      pullback = std::max(pullback, span_residual(bundle.b, g));
    }
    auto add = [&](std::string name, double residual, double tolerance, std::string note = {}) {
      Clause c;
      c.name = std::move(name);
      c.residual = residual;
      c.tolerance = tolerance;
      c.pass = residual <= tolerance;
      c.note = std::move(note);
      cert.clauses.push_back(std::move(c));
    };
    add("projection_compatible", section, 0.0, "pi_q o psi = pi");
    add("rho_is_root_negation", negation, tol);
    add("psi_pulls_p_to_h0", p_res, tol);
    std::ostringstream note;
    note << "dim A^q = " << cb.bundle.b.dim() << ", dim B = " << bundle.b.dim();
    add("pullback_in_b", pullback, 1e-8, note.str());
    out.psi = psi;
  }
  out.cole = std::move(cb);
  return out;
}

}  // namespace uaext
