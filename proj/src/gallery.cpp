#include "uaext/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uaext/errors.hpp"
#include "uaext/measures.hpp"

namespace uaext {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CVector coordinate_table(const SpacePtr& s, std::size_t k) {
  CVector v(static_cast<Eigen::Index>(s->size()));
  for (std::size_t i = 0; i < s->size(); ++i) v[static_cast<Eigen::Index>(i)] = s->coord(i, k);
  return v;
}

// Z_M rotating each fiber whose m raw points start at one of
// `rotating_raw_starts`; all other points are fixed.
GroupAction rotation_action(const SpaceBuild& built, const std::vector<std::size_t>& rotating_raw_starts,
                            std::size_t m) {
  const std::size_t n = built.space->size();
  std::vector<IndexList> perms;
  for (std::size_t s = 0; s < m; ++s) {
    IndexList perm(n);
    for (std::size_t y = 0; y < n; ++y) perm[y] = y;
    for (std::size_t start : rotating_raw_starts)
      for (std::size_t k = 0; k < m; ++k)
        perm[built.point_of_raw[start + k]] = built.point_of_raw[start + (k + s) % m];
    perms.push_back(std::move(perm));
  }
  return make_action(built.space, std::move(perms));
}

}  // namespace

SpacePtr disk_grid(const DiskGridSpec& spec) {
  if (spec.boundary < 3) throw InputError("disk grid: at least 3 boundary points are required");
  if (spec.rings > 0 && !(0.0 < spec.inner_radius && spec.inner_radius <= spec.outer_radius && spec.outer_radius < 1.0))
    throw InputError("disk grid: ring radii must satisfy 0 < inner <= outer < 1");
  std::vector<std::vector<Complex>> raw;
  for (std::size_t j = 0; j < spec.boundary; ++j)
    raw.push_back({std::polar(1.0, kTwoPi * double(j) / double(spec.boundary))});
  raw.push_back({Complex(0.0)});
  for (std::size_t r = 0; r < spec.rings; ++r) {
    const double t = spec.rings > 1 ? double(r) / double(spec.rings - 1) : 0.0;
    const double radius = spec.inner_radius + (spec.outer_radius - spec.inner_radius) * t;
    for (std::size_t j = 0; j < spec.ring_size; ++j)
      raw.push_back({std::polar(radius, kTwoPi * (double(j) + 0.5 * double(r % 2)) / double(spec.ring_size))});
  }
  return make_space(raw);
}

SpacePtr diameter_grid(std::size_t n) {
  if (n < 2) throw InputError("diameter grid: at least 2 points are required");
  std::vector<std::vector<Complex>> raw;
  for (std::size_t i = 0; i < n; ++i) raw.push_back({Complex(-1.0 + 2.0 * double(i) / double(n - 1))});
  return make_space(raw);
}

DiskAlgebra build_disk_algebra(const SpacePtr& grid, int degree_cap) {
  if (grid->arity() != 1) throw InputError("disk algebra: grid points must have one coordinate");
  DiskAlgebra out{generate_system(grid, {FunctionTable(grid, coordinate_table(grid, 0), "z")}, degree_cap), {}};
  std::size_t on_circle = 0;
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (std::abs(std::abs(grid->coord(i, 0)) - 1.0) <= 1e-12) ++on_circle;
  if (on_circle == 0) out.warnings.push_back("grid has no boundary circle samples");
  return out;
}

DiskAlgebra build_disk_algebra(const DiskGridSpec& spec, int degree_cap) {
  return build_disk_algebra(disk_grid(spec), degree_cap);
}

GalleryBuild build_basener(const BasenerSpec& spec) {
  if (!(0.0 < spec.r0 && spec.r0 < spec.r1 && spec.r1 <= 1.0 - 1e-3))
    throw InputError("basener: radii must satisfy 0 < r0 < r1 <= 1 - 1e-3");
  if (spec.n_r < 1 || spec.n_theta < 3) throw InputError("basener: grid needs n_r >= 1 and n_theta >= 3");
  if (spec.m < 2) throw InputError("basener: M must be at least 2");
  if (spec.cap < 1) throw InputError("basener: cap must be positive");

  std::vector<std::vector<Complex>> base_raw;
  for (std::size_t i = 0; i < spec.n_r; ++i) {
    const double r = spec.n_r == 1 ? spec.r0 : spec.r0 + (spec.r1 - spec.r0) * double(i) / double(spec.n_r - 1);
    for (std::size_t j = 0; j < spec.n_theta; ++j) base_raw.push_back({std::polar(r, kTwoPi * double(j) / double(spec.n_theta))});
  }
  const SpaceBuild xb = build_space(base_raw, kDefaultMergeTol, "x");
  const SpacePtr& x = xb.space;
  const CVector z = coordinate_table(x, 0);
  const CVector zinv = z.cwiseInverse();
  FunctionSystem a = generate_system(x, {FunctionTable(x, z, "z"), FunctionTable(x, zinv, "1/z")}, spec.cap);

  std::vector<std::vector<Complex>> raw;
  std::vector<std::size_t> base_of_raw, starts;
  for (std::size_t i = 0; i < x->size(); ++i) {
    const Complex zi = x->coord(i, 0);
    const double radius = std::sqrt(1.0 - std::norm(zi));
    starts.push_back(raw.size());
    for (std::size_t k = 0; k < spec.m; ++k) {
      raw.push_back({zi, std::polar(radius, kTwoPi * double(k) / double(spec.m))});
      base_of_raw.push_back(i);
    }
  }
  const SpaceBuild yb = build_space(raw, kDefaultMergeTol, "y");
  const SpacePtr& y = yb.space;
  IndexList assignment(y->size());
  for (std::size_t r = 0; r < raw.size(); ++r) assignment[yb.point_of_raw[r]] = base_of_raw[r];
  SurjectionMap pi(y, x, assignment);

  const CVector p = coordinate_table(y, 1);
  FunctionSystem b = generate_system(y,
                                     {FunctionTable(y, p, "p"), FunctionTable(y, p.cwiseInverse(), "1/p"),
                                      FunctionTable(y, pull_back(pi, z), "z"), FunctionTable(y, pull_back(pi, zinv), "1/z")},
                                     spec.cap);
  OperatorTable t = fiber_average_operator(pi);
  GroupAction action = rotation_action(yb, starts, spec.m);

  ExtensionFlags flags;
  flags.open_map = true;
  flags.group_implemented = true;
  nlohmann::json meta;
  meta["builder"] = "basener";
  meta["r0"] = spec.r0;
  meta["r1"] = spec.r1;
  meta["n_r"] = spec.n_r;
  meta["n_theta"] = spec.n_theta;
  meta["M"] = spec.m;
  meta["cap"] = spec.cap;
  meta["note"] = "annulus base; naturality of B is not certified";
  return {{"basener", std::move(a), std::move(b), std::move(pi), std::move(t), flags, meta}, std::move(action)};
}

std::vector<FunctionTable> default_dfp_functions(const SpacePtr& disk, std::size_t count) {
  if (count < 1 || count > 8) throw InputError("dfp: between 1 and 8 default functions are available");
  const CVector z = coordinate_table(disk, 0);
  const CVector one = CVector::Ones(z.size());
  const CVector z2 = z.cwiseProduct(z), z3 = z2.cwiseProduct(z);
  const Complex i(0.0, 1.0);
  const std::vector<CVector> g = {one,
                                  z,
                                  z2,
                                  z3,
                                  (one + z) / 2.0,
                                  (one - z) / 2.0,
                                  (one + i * z2) / 2.0,
                                  (one - z3) / 2.0};
  std::vector<FunctionTable> out;
  for (std::size_t n = 0; n < count; ++n)
    out.emplace_back(disk, z.cwiseProduct(g[n]), "f" + std::to_string(n + 1));
  return out;
}

GalleryBuild build_dfp(const FunctionSystem& base, std::size_t x0, const std::vector<FunctionTable>& f,
                       const DfpSpec& spec) {
  const SpacePtr& x = base.space();
  if (f.empty()) throw InputError("dfp: at least one function is required");
  if (x0 >= x->size()) throw InputError("dfp: x0 out of range");
  if (spec.m < 2) throw InputError("dfp: M must be at least 2");
  for (const auto& fn : f) {
    require_same_space(fn.space, x, "dfp function");
    if (std::abs(fn.values[static_cast<Eigen::Index>(x0)]) > 1e-12)
      throw InputError("dfp: " + fn.name + " does not vanish at x0");
    if (span_residual(base, fn) > 1e-9) throw InputError("dfp: " + fn.name + " is not in the base span");
  }
  const std::size_t nf = f.size();

  std::vector<std::vector<Complex>> raw;
  std::vector<std::size_t> base_of_raw, starts;
  for (std::size_t i = 0; i < x->size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double mx = 0.0;
    for (const auto& fn : f) mx = std::max(mx, std::abs(fn.values[ii]));
    std::vector<Complex> coords(nf + 2, Complex(0.0));
    coords[0] = x->coord(i, 0);
    if (mx <= 1e-12) {
      raw.push_back(coords);
      base_of_raw.push_back(i);
      continue;
    }
    starts.push_back(raw.size());
    for (std::size_t k = 0; k < spec.m; ++k) {
      const Complex w = std::polar(std::sqrt(mx), kTwoPi * double(k) / double(spec.m));
      for (std::size_t n = 0; n < nf; ++n) coords[n + 1] = f[n].values[ii] / w;
      coords[nf + 1] = w;
      raw.push_back(coords);
      base_of_raw.push_back(i);
    }
  }
  const SpaceBuild yb = build_space(raw, kDefaultMergeTol, "y");
  const SpacePtr& y = yb.space;
  IndexList assignment(y->size());
  for (std::size_t r = 0; r < raw.size(); ++r) assignment[yb.point_of_raw[r]] = base_of_raw[r];
  SurjectionMap pi(y, x, assignment);

  std::vector<FunctionTable> gens;
  std::vector<int> weights;
  if (base.generators().empty()) {
    for (std::size_t k = 0; k < base.dim(); ++k) {
      gens.emplace_back(y, pull_back(pi, base.basis().col(static_cast<Eigen::Index>(k))), "a" + std::to_string(k));
      weights.push_back(1);
    }
  }
  for (std::size_t k = 0; k < base.generators().size(); ++k) {
    gens.emplace_back(y, pull_back(pi, base.generators()[k].values), base.generators()[k].name);
    weights.push_back(base.generator_weights()[k]);
  }
  for (std::size_t n = 0; n < nf; ++n) {
    gens.emplace_back(y, coordinate_table(y, n + 1), "z" + std::to_string(n + 1));
    weights.push_back(2);
  }
  gens.emplace_back(y, coordinate_table(y, nf + 1), "w");
  weights.push_back(2);
  const int cap = spec.cap > 0 ? spec.cap : base.degree_cap();
  FunctionSystem b = generate_system(y, std::move(gens), cap, base.rank_tol(), std::move(weights));

  OperatorTable t = fiber_average_operator(pi);
  GroupAction action = rotation_action(yb, starts, spec.m);
  ExtensionFlags flags;
  flags.group_implemented = true;
  nlohmann::json meta;
  meta["builder"] = "dfp";
  meta["x0"] = x->point(x0).label;
  meta["N"] = nf;
  meta["M"] = spec.m;
  meta["cap"] = cap;
  meta["note"] = "null sequence truncated to N terms";
  return {{"dfp", base, std::move(b), std::move(pi), std::move(t), flags, meta}, std::move(action)};
}

ExtensionBundle build_tensor_disk(const SpacePtr& grid, std::size_t m, int cap) {
  if (grid->arity() != 1) throw InputError("tensor disk: grid points must have one coordinate");
  if (m < 2) throw InputError("tensor disk: M must be at least 2");
  std::vector<std::vector<Complex>> raw;
  std::vector<std::size_t> base_of_raw;
  std::vector<std::size_t> section_raw(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    section_raw[i] = raw.size();
    for (std::size_t k = 0; k < m; ++k) {
      raw.push_back({grid->coord(i, 0), std::polar(1.0, kTwoPi * double(k) / double(m))});
      base_of_raw.push_back(i);
    }
  }
  const SpaceBuild yb = build_space(raw, kDefaultMergeTol, "y");
  const SpacePtr& y = yb.space;
  IndexList assignment(y->size());
  for (std::size_t r = 0; r < raw.size(); ++r) assignment[yb.point_of_raw[r]] = base_of_raw[r];
  SurjectionMap pi(y, grid, assignment);

  FunctionSystem a = generate_system(grid, {FunctionTable(grid, coordinate_table(grid, 0), "z")}, cap);
  FunctionSystem b = generate_system(
      y, {FunctionTable(y, coordinate_table(y, 0), "z"), FunctionTable(y, coordinate_table(y, 1), "w")}, cap);
  std::vector<SparseRow> rows(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) rows[i] = {{yb.point_of_raw[section_raw[i]], 1.0}};
  OperatorTable t(y, grid, std::move(rows));

  ExtensionFlags flags;
  flags.open_map = true;
  nlohmann::json meta;
  meta["builder"] = "tensor_disk";
  meta["M"] = m;
  meta["cap"] = cap;
  meta["section"] = "w = 1";
  meta["homomorphism"] = true;
  return {"tensor_disk", std::move(a), std::move(b), std::move(pi), std::move(t), flags, meta};
}

ExtensionBundle build_contraction(const SpacePtr& y, const IndexList& k_set, const FunctionSystem& a0) {
  IndexList k = k_set;
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  if (k.size() < 2) throw InputError("contraction: K needs at least 2 points");
  if (k.size() >= y->size()) throw InputError("contraction: K must be a proper subset");
  if (k.back() >= y->size()) throw InputError("contraction: K index out of range");
  const SpacePtr ks = subspace(y, k);
  if (!same_space(a0.space(), ks)) throw InputError("contraction: A0 must live on the subspace K");

  std::vector<bool> in_k(y->size(), false);
  for (std::size_t v : k) in_k[v] = true;
  std::vector<Point> xp;
  IndexList assignment(y->size());
  std::size_t class_index = 0;
  for (std::size_t v = 0; v < y->size(); ++v) {
    if (in_k[v] && v != k.front()) continue;
    if (v == k.front()) class_index = xp.size();
    assignment[v] = xp.size();
    xp.push_back(y->point(v));
  }
  for (std::size_t v : k) assignment[v] = class_index;
  auto x = std::make_shared<const FiniteSpace>(std::move(xp));
  SurjectionMap pi(y, x, assignment);

  // f in B iff sum_k mu_k f(k) = 0 for every annihilator mu of A0.
  const AnnihilatorBasis perp = annihilator_basis(a0);
  const auto n = static_cast<Eigen::Index>(y->size());
  CMatrix constraints = CMatrix::Zero(n, static_cast<Eigen::Index>(perp.size()));
  for (std::size_t i = 0; i < k.size(); ++i)
    constraints.row(static_cast<Eigen::Index>(k[i])) = perp.weights.row(static_cast<Eigen::Index>(i)).conjugate();
  CMatrix basis;
  if (perp.size() == 0) {
    basis = CMatrix::Identity(n, n);
  } else {
    Eigen::ColPivHouseholderQR<CMatrix> qr(constraints);
    qr.setThreshold(a0.rank_tol());
    const Eigen::Index rank = qr.rank();
    const CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    basis = q.rightCols(n - rank);
  }
  FunctionSystem b = FunctionSystem::from_orthonormal(y, basis, {}, 1, a0.rank_tol());

  nlohmann::json meta;
  meta["builder"] = "contraction";
  meta["k_size"] = k.size();
  meta["note"] = "B is non-natural in general; only measure-level facts are checked";
  return {"contraction", full_system(x), std::move(b), std::move(pi), std::nullopt, {}, meta};
}

}  // namespace uaext
