#include "doctest.h"

#include <numbers>

#include "uaext/errors.hpp"
#include "uaext/measures.hpp"
#include "uaext/random.hpp"

using namespace uaext;

namespace {

SpacePtr circle_space(std::size_t n) {
  std::vector<std::vector<Complex>> raw;
  for (std::size_t j = 0; j < n; ++j) raw.push_back({std::polar(1.0, 2.0 * std::numbers::pi * double(j) / double(n))});
  return make_space(raw);
}

FunctionTable coordinate(const SpacePtr& s) {
  CVector v(static_cast<Eigen::Index>(s->size()));
  for (std::size_t i = 0; i < s->size(); ++i) v[static_cast<Eigen::Index>(i)] = s->coord(i, 0);
  return {s, v, "z"};
}

SurjectionMap double_cover() {
  std::vector<std::vector<Complex>> up, down;
  for (int j = 0; j < 4; ++j) up.push_back({Complex(j, 0.0)});
  for (int j = 0; j < 2; ++j) down.push_back({Complex(j, 0.0)});
  return make_surjection(make_space(up), make_space(down), {0, 0, 1, 1});
}

}  // namespace

TEST_CASE("annihilator bases") {
  const auto c = circle_space(5);
  CHECK(annihilator_basis(full_system(c)).size() == 0);

  const auto two = make_space({{Complex(0.0)}, {Complex(1.0)}});
  const auto ann = annihilator_basis(constants_system(two));
  REQUIRE(ann.size() == 1);
  const CVector w = ann.weights.col(0);
  CHECK(std::abs(w[0] + w[1]) < 1e-15);
  CHECK(std::abs(std::abs(w[0]) - 1.0 / std::sqrt(2.0)) < 1e-15);

  const auto c64 = circle_space(64);
  const auto sys = generate_system(c64, {coordinate(c64)}, 3);
  const auto a64 = annihilator_basis(sys);
  CHECK(a64.size() == 60);
  CHECK(annihilation_residual(sys, a64.weights) <= 1e-10);
  const CMatrix gram = a64.weights.adjoint() * a64.weights;
  CHECK((gram - CMatrix::Identity(60, 60)).norm() < 1e-10);
  const CVector z = coordinate(c64).values;
  for (std::size_t j = 0; j < a64.size(); ++j) {
    const Measure nu = a64.measure(j);
    for (int k = 0; k <= 3; ++k)
      CHECK(std::abs(nu.integrate(CVector(z.array().pow(k)))) <= 1e-10 * nu.total_variation());
  }
}

TEST_CASE("sampled annihilators lie in the annihilator and span it") {
  const auto c = circle_space(24);
  const auto sys = generate_system(c, {coordinate(c)}, 4);
  const auto s = sample_annihilators(sys, 30, 99);
  CHECK(annihilation_residual(sys, s.weights) <= 1e-12);
  CHECK(Eigen::FullPivLU<CMatrix>(s.weights).rank() == 24 - 5);
  const auto again = sample_annihilators(sys, 30, 99);
  CHECK(again.weights == s.weights);
}

TEST_CASE("adjoint measures") {
  const auto pi = double_cover();
  std::vector<SparseRow> rows{{{0, 0.5}, {1, 0.5}}, {{2, 0.5}, {3, 0.5}}};
  const OperatorTable t(pi.source(), pi.target(), rows);
  const Measure delta = Measure::point_mass(pi.target(), 1);
  CHECK(adjoint_measure(t, delta).weights() == t.row_measure(1).weights());

  const Measure lam(pi.target(), (CVector(2) << 1.0, -1.0).finished());
  const auto mu = adjoint_measure(t, lam);
  CHECK(mu.weights() == (CVector(4) << 0.5, 0.5, -0.5, -0.5).finished());

  Rng rng(3);
  std::vector<SparseRow> random_rows(2);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 4; ++y) random_rows[x].push_back({y, rng.complex()});
  const OperatorTable r(pi.source(), pi.target(), random_rows);
  const Measure rl(pi.target(), rng.complex_vector(2));
  const auto rmu = adjoint_measure(r, rl);
  for (int k = 0; k < 20; ++k) {
    const CVector f = rng.complex_vector(4);
    CHECK(std::abs(rmu.integrate(f) - rl.integrate(r.apply(f))) <= 1e-12);
  }
  CHECK_THROWS_AS(adjoint_measure(t, Measure::point_mass(pi.source(), 0)), InputError);
}

TEST_CASE("jensen checks") {
  const auto c64 = circle_space(64);
  std::vector<std::vector<Complex>> raw;
  for (std::size_t i = 0; i < 64; ++i) raw.push_back({c64->coord(i, 0)});
  raw.push_back({Complex(0.0)});
  raw.push_back({Complex(0.3, -0.2)});
  const auto s = make_space(raw);
  const auto z = coordinate(s);
  const auto sys = generate_system(s, {z}, 4);
  const auto probes = default_jensen_probes(sys);
  CHECK(probes.size() >= sys.dim());

  for (std::size_t x = 0; x < s->size(); ++x) {
    const auto r = jensen_check(Measure::point_mass(s, x), evaluation_functional(sys, x), sys, probes);
    CHECK(r.holds);
    CHECK(r.worst_violation <= 1e-12);
  }

  std::size_t origin = 0, off = 0;
  for (std::size_t i = 0; i < s->size(); ++i) {
    if (std::abs(s->coord(i, 0)) < 1e-15) origin = i;
    if (std::abs(s->coord(i, 0) - Complex(0.3, -0.2)) < 1e-15) off = i;
  }
  CVector w = CVector::Zero(static_cast<Eigen::Index>(s->size()));
  for (std::size_t i = 0; i < s->size(); ++i)
    if (std::abs(std::abs(s->coord(i, 0)) - 1.0) < 1e-12) w[static_cast<Eigen::Index>(i)] = 1.0 / 64.0;
  const Measure uniform(s, w);
  const auto r = jensen_check(uniform, evaluation_functional(sys, origin), sys, probes);
  CHECK(r.holds);
  // Direct oracle for z + 1/2: |1/2| <= exp(mean log|z + 1/2|) on the circle.
  double mean_log = 0.0;
  for (std::size_t i = 0; i < 64; ++i) mean_log += std::log(std::abs(c64->coord(i, 0) + 0.5)) / 64.0;
  CHECK(0.5 <= std::exp(mean_log) + 1e-12);
  const CVector shifted = z.values.array() + 0.5;
  CHECK(jensen_check(uniform, evaluation_functional(sys, origin), sys, {shifted}).holds);

  // Evaluation at x0 = 0.3-0.2i is not represented by the circle average:
  // f = 1 + c z with |c| < 1 has geometric circle mean 1 but |f(x0)| > 1.
  const Complex x0(0.3, -0.2);
  const Complex cdir = 0.9 * std::conj(x0) / std::abs(x0);
  const CVector probe = 1.0 + cdir * z.values.array();
  const auto bad = jensen_check(uniform, evaluation_functional(sys, off), sys, {probe});
  CHECK_FALSE(bad.holds);
  double probe_log = 0.0;
  for (std::size_t i = 0; i < 64; ++i) probe_log += std::log(std::abs(1.0 + cdir * c64->coord(i, 0))) / 64.0;
  CHECK(bad.worst_violation == doctest::Approx(std::abs(1.0 + cdir * x0) - std::exp(probe_log)).epsilon(1e-9));

  CHECK_THROWS_AS(jensen_check(Measure(s, 2.0 * w), evaluation_functional(sys, origin), sys, probes), InputError);
  CHECK_THROWS_AS(jensen_check(uniform, evaluation_functional(sys, origin), sys, {CVector(z.values.conjugate())}),
                  InputError);
}

TEST_CASE("jensen pushforward along a cover") {
  const auto base = circle_space(16);
  std::vector<std::vector<Complex>> raw;
  IndexList raw_assign;
  for (std::size_t x = 0; x < 16; ++x)
    for (double s : {-1.0, 1.0}) {
      raw.push_back({base->coord(x, 0), Complex(s, 0.0)});
      raw_assign.push_back(x);
    }
  const auto built = build_space(raw);
  IndexList assign(built.space->size());
  for (std::size_t i = 0; i < raw.size(); ++i) assign[built.point_of_raw[i]] = raw_assign[i];
  const auto pi = make_surjection(built.space, base, assign);
  const auto a = generate_system(base, {coordinate(base)}, 3);
  const auto b = pullback_system(pi, a);

  for (std::size_t y = 0; y < built.space->size(); ++y) {
    const Measure mu = Measure::point_mass(built.space, y);
    const CVector phi_b = evaluation_functional(b, y);
    REQUIRE(jensen_check(mu, phi_b, b, default_jensen_probes(b)).holds);
    const Measure pushed = pushforward_measure(pi, mu);
    const CVector phi_a = pullback_functional(pi, a, b, phi_b);
    CHECK(jensen_check(pushed, phi_a, a, default_jensen_probes(a)).holds);
    CHECK((phi_a - evaluation_functional(a, pi(y))).norm() < 1e-12);
  }
}
