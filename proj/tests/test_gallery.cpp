#include "doctest.h"

#include "uaext/boundary.hpp"
#include "uaext/errors.hpp"
#include "uaext/gallery.hpp"

using namespace uaext;

namespace {

std::size_t centre_index(const SpacePtr& s) {
  for (std::size_t i = 0; i < s->size(); ++i)
    if (s->coord(i, 0) == Complex(0.0)) return i;
  return s->size();
}

void check_all_pass(const Certificate& cert) {
  CHECK(cert.applicable);
  for (const auto& c : cert.clauses) CHECK_MESSAGE(c.pass, cert.name << ": " << c.name << " " << c.residual);
}

}  // namespace

TEST_CASE("disk algebra") {
  CHECK(build_disk_algebra(DiskGridSpec{}, 1).system.dim() == 2);
  const auto d = build_disk_algebra(DiskGridSpec{}, 10);
  CHECK(d.system.size() == 81);
  CHECK(d.system.dim() == 11);
  CHECK(d.warnings.empty());
  const auto gamma = choquet_set(d.system);
  CHECK(gamma.size() == 32);
  for (std::size_t i : gamma) CHECK(std::abs(std::abs(d.system.space()->coord(i, 0)) - 1.0) <= 1e-12);

  const auto inner = build_disk_algebra(make_space({{Complex(0.1)}, {Complex(0.2)}, {Complex(0.3, 0.1)}}), 1);
  CHECK(inner.warnings.size() == 1);
  CHECK_THROWS_AS(disk_grid(DiskGridSpec{32, 3, 16, 0.2, 1.0}), InputError);
}

TEST_CASE("basener circle bundle") {
  const BasenerSpec spec{0.4, 0.7, 2, 8, 16, 4};
  const auto built = build_basener(spec);
  const auto& bundle = built.bundle;
  const auto& x = bundle.pi.target();
  const auto& y = bundle.pi.source();
  CHECK(x->size() == 16);
  CHECK(y->size() == 256);
  for (std::size_t i = 0; i < x->size(); ++i) {
    const double radius = std::sqrt(1.0 - std::norm(x->coord(i, 0)));
    const auto& fib = bundle.pi.fiber(i);
    REQUIRE(fib.size() == spec.m);
    for (std::size_t v : fib) CHECK(std::abs(std::abs(y->coord(v, 1)) - radius) <= 1e-15);
    for (std::size_t n = 1; n < spec.m; ++n) {
      Complex sum = 0.0;
      for (std::size_t v : fib) sum += std::pow(y->coord(v, 1), double(n));
      CHECK(std::abs(sum) / double(spec.m) <= 1e-10 * std::pow(radius, double(n)));
    }
  }
  CHECK(built.action.order() == spec.m);
  for (std::size_t o = 0; o < built.action.orbits.size(); ++o)
    CHECK(built.action.orbits[o] == bundle.pi.fiber(bundle.pi(built.action.orbits[o].front())));

  const auto probes = default_probes(bundle.b);
  check_all_pass(gce_certificate(bundle, probes));
  check_all_pass(implemented_report(bundle, built.action, probes));

  // cap >= M/2 gives the full function space on each fiber.
  const auto wide = build_basener({0.4, 0.7, 1, 4, 8, 4});
  for (const auto& fib : wide.bundle.pi.fibers()) {
    CMatrix rows(Eigen::Index(fib.size()), wide.bundle.b.basis().cols());
    for (std::size_t i = 0; i < fib.size(); ++i) rows.row(Eigen::Index(i)) = wide.bundle.b.basis().row(Eigen::Index(fib[i]));
    CHECK(Eigen::FullPivLU<CMatrix>(rows).rank() == Eigen::Index(fib.size()));
  }
  CHECK_THROWS_AS(build_basener({0.7, 0.4}), InputError);
  CHECK_THROWS_AS(build_basener({0.4, 1.0}), InputError);
}

TEST_CASE("dfp distinguished point extension") {
  const auto base = build_disk_algebra(DiskGridSpec{16, 2, 8}, 6).system;
  const auto& x = base.space();
  const std::size_t x0 = centre_index(x);
  const auto f = default_dfp_functions(x);
  REQUIRE(f.size() == 8);
  const auto built = build_dfp(base, x0, f, {});
  const auto& bundle = built.bundle;
  const auto& y = bundle.pi.source();
  CHECK(bundle.pi.fiber(x0).size() == 1);
  const std::size_t star = bundle.pi.fiber(x0).front();
  REQUIRE(bundle.t->row(x0).size() == 1);
  CHECK(bundle.t->row(x0).front().index == star);
  CHECK(bundle.t->row(x0).front().weight == Complex(1.0));

  double worst = 0.0;
  for (std::size_t v = 0; v < y->size(); ++v) {
    const auto xi = Eigen::Index(bundle.pi(v));
    const Complex w = y->coord(v, 9);
    double m = 0.0;
    for (const auto& fn : f) m = std::max(m, std::abs(fn.values[xi]));
    worst = std::max(worst, std::abs(std::abs(w) - std::sqrt(m)));
    for (std::size_t n = 0; n < 8; ++n) {
      const Complex zn = y->coord(v, n + 1);
      worst = std::max(worst, std::abs(zn * w - f[n].values[xi]));
      worst = std::max(worst, std::norm(zn) - std::abs(f[n].values[xi]));
    }
  }
  CHECK(worst <= 1e-10);

  const auto probes = default_probes(bundle.b);
  check_all_pass(gce_certificate(bundle, probes));
  check_all_pass(implemented_report(bundle, built.action, probes));

  auto shifted = f;
  shifted[0].values.array() += 0.5;
  CHECK_THROWS_AS(build_dfp(base, x0, shifted, {}), InputError);
}

TEST_CASE("tensor disk") {
  const auto bundle = build_tensor_disk(diameter_grid(11), 16, 4);
  const auto& y = bundle.pi.source();
  CHECK(y->size() == 176);
  for (const auto& fib : bundle.pi.fibers()) CHECK(fib.size() == 16);
  for (std::size_t x = 0; x < 11; ++x) {
    REQUIRE(bundle.t->row(x).size() == 1);
    CHECK(y->coord(bundle.t->row(x).front().index, 1) == Complex(1.0));
  }
  // T(z^a w^b) = z^a.
  CVector f(Eigen::Index(y->size()));
  for (std::size_t v = 0; v < y->size(); ++v) f[Eigen::Index(v)] = std::pow(y->coord(v, 0), 2.0) * std::pow(y->coord(v, 1), 3.0);
  const CVector tf = bundle.t->apply(f);
  for (std::size_t x = 0; x < 11; ++x) CHECK(tf[Eigen::Index(x)] == std::pow(bundle.pi.target()->coord(x, 0), 2.0));

  const auto probes = default_probes(bundle.b);
  CHECK(multiplicativity_residual(*bundle.t, probes) <= 1e-12);
  check_all_pass(gce_certificate(bundle, probes));
  const auto p = OperatorTable::composition_operator(bundle.pi).after(*bundle.t);
  const auto bc = bicontractive_analyze(p, bundle.b, probes);
  CHECK_FALSE(bc.is_bicontractive);
  // Row of I - P at (x, w) with w != 1 is delta_y - delta_(x,1).
  CHECK(bc.norm_i_minus_p == 2.0);
}

TEST_CASE("contraction of a closed set") {
  std::vector<std::vector<Complex>> raw;
  for (int i = 0; i < 7; ++i) raw.push_back({Complex(i)});
  const auto y = make_space(raw);
  const IndexList k{1, 2, 3};
  const auto ks = subspace(y, k);

  const auto trivial = build_contraction(y, k, full_system(ks));
  CHECK(trivial.b.dim() == 7);
  CHECK_FALSE(trivial.t);
  CHECK(trivial.pi.target()->size() == 5);

  const auto flat = build_contraction(y, k, constants_system(ks));
  CHECK(flat.b.dim() == 5);
  const auto flat_cert = extension_certificate(flat);
  CHECK(flat_cert.find("pullback_inclusion")->pass);
  CHECK_FALSE(flat_cert.find("b_separates_points")->pass);

  CVector zk(3);
  zk << 1.0, 2.0, 3.0;
  const auto bundle = build_contraction(y, k, generate_system(ks, {FunctionTable(ks, zk, "z")}, 1));
  CHECK(bundle.b.dim() == 6);
  check_all_pass(extension_certificate(bundle));
  const std::size_t x0 = bundle.pi(1);
  CHECK(bundle.pi.fiber(x0) == k);

  // {x0} peaks for C(X); its preimage K peaks for B.
  CHECK(peak_set_feasible(bundle.a, {x0}).feasible);
  const auto lifted = peak_set_feasible(bundle.b, k);
  CHECK(lifted.feasible);
  CHECK(is_peak_witness(lifted.values, k, kPeakMargin, kPeakPolygonSides));
  CHECK_FALSE(peak_set_feasible(flat.b, {1}).feasible);

  CHECK_THROWS_AS(build_contraction(y, {0, 1, 2, 3, 4, 5, 6}, full_system(y)), InputError);
  CHECK_THROWS_AS(build_contraction(y, {2}, full_system(subspace(y, {2}))), InputError);
}
