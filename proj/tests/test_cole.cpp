#include "doctest.h"

#include "support.hpp"
#include "uaext/cole.hpp"
#include "uaext/errors.hpp"

using namespace uaext;
using testing_support::coordinate;
using testing_support::disk_grid;
using testing_support::line;

namespace {

ColeBundle square_root_of_z(std::size_t boundary = 16, std::size_t rings = 2, std::size_t ring_size = 8) {
  const auto s = disk_grid(boundary, rings, ring_size);
  const auto z = coordinate(s);
  const auto a = generate_system(s, {z}, 6);
  return cole_extend({a, {FunctionTable(s, -z.values, "h0"), FunctionTable(s, CVector::Zero(z.values.size()), "h1")}});
}

}  // namespace

TEST_CASE("roots of small monic polynomials") {
  auto r = roots_of_monic({-1.0, 0.0});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] + 1.0) <= 1e-14);
  CHECK(std::abs(r[1] - 1.0) <= 1e-14);

  r = roots_of_monic({1.0, 0.0});
  CHECK(std::abs(r[0] - Complex(0, -1)) <= 1e-14);
  CHECK(std::abs(r[1] - Complex(0, 1)) <= 1e-14);

  r = roots_of_monic({-6.0, 11.0, -6.0});
  REQUIRE(r.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(r[std::size_t(k)] - double(k + 1)) <= 1e-12);

  r = roots_of_monic({1.0, -2.0});
  for (const auto& z : r) {
    CHECK(std::abs(z - 1.0) <= 1e-6);
    CHECK(std::abs(eval_monic({1.0, -2.0}, z)) <= kRootTol * root_scale({1.0, -2.0}, z));
  }
  CHECK(eval_monic({-6.0, 11.0, -6.0}, 4.0) == Complex(6.0));
  CHECK_THROWS_AS(roots_of_monic({}), InputError);
}

TEST_CASE("copy extension over a discrete base") {
  const auto s = line(3);
  const auto a = full_system(s);
  const auto cb = cole_extend({a, {FunctionTable(s, CVector::Constant(3, -1.0)), FunctionTable(s, CVector::Zero(3))}});
  CHECK(cb.bundle.b.size() == 6);
  for (const auto& fib : cb.bundle.pi.fibers()) CHECK(fib.size() == 2);
  for (const auto& row : cb.bundle.t->rows())
    for (const auto& e : row) CHECK(e.weight == Complex(0.5));
  CHECK(cb.bundle.b.dim() == 6);
  const auto cert = cole_report(cb, default_probes(cb.bundle.b));
  for (const auto& c : cert.clauses) CHECK_MESSAGE(c.pass, c.name);
}

TEST_CASE("square root of z over the disk") {
  const auto cb = square_root_of_z();
  const auto& bundle = cb.bundle;
  const auto& x = bundle.pi.target();
  for (std::size_t i = 0; i < x->size(); ++i) {
    const Complex z = x->coord(i, 0);
    const auto& fib = bundle.pi.fiber(i);
    if (std::abs(z) < 1e-12) {
      CHECK(fib.size() == 1);
      CHECK(cb.root_slots[i].size() == 2);
      continue;
    }
    REQUIRE(fib.size() == 2);
    const Complex w = std::sqrt(z);
    for (std::size_t y : fib) {
      const Complex v = cb.p_q.values[Eigen::Index(y)];
      CHECK(std::min(std::abs(v - w), std::abs(v + w)) <= 1e-12);
    }
    CHECK(std::abs(cb.p_q.values[Eigen::Index(fib[0])] + cb.p_q.values[Eigen::Index(fib[1])]) <= 1e-12);
  }
  CHECK(sup_norm(bundle.t->apply(cb.p_q.values)) <= 1e-12);
  const auto v = vieta_check(cb);
  CHECK(v.sum_residual <= 1e-10);
  CHECK(v.product_residual <= 1e-10);
  CHECK(v.root_residual <= kRootTol);

  double image = 0.0;
  for (std::size_t k = 0; k < bundle.b.dim(); ++k)
    image = std::max(image, span_residual(bundle.a, bundle.t->apply(bundle.b.basis().col(Eigen::Index(k)))));
  CHECK(image <= 1e-8);

  const auto cert = cole_report(cb, default_probes(bundle.b));
  for (const auto& c : cert.clauses) CHECK_MESSAGE(c.pass, c.name);
  CHECK(cert.find("naturality")->applicable == false);
  CHECK(bundle.metadata["generator_weights"] == nlohmann::json::array({1, 2}));
}

TEST_CASE("root slots agree between serial and parallel") {
  const auto s = disk_grid(24, 3, 12);
  Rng rng(3);
  std::vector<FunctionTable> h;
  for (int i = 0; i < 3; ++i) h.emplace_back(s, rng.complex_vector(Eigen::Index(s->size())));
  const auto a = root_slots(h);
  const auto b = root_slots_serial(h);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("coefficients outside the base span are rejected") {
  const auto s = disk_grid(8, 1, 4);
  const auto a = generate_system(s, {coordinate(s)}, 1);
  CVector zz = coordinate(s).values.cwiseAbs2().cast<Complex>();
  CHECK_THROWS_AS(cole_extend({a, {FunctionTable(s, zz), FunctionTable(s, CVector::Zero(zz.size()))}}), InputError);
  CHECK_THROWS_AS(cole_extend({a, {FunctionTable(s, zz)}}), InputError);
}

TEST_CASE("two-step tower composes") {
  const auto lower = square_root_of_z(12, 1, 6);
  const auto& y = lower.bundle.pi.source();
  const auto w = lower.p_q.values;
  const auto upper =
      cole_extend({lower.bundle.b, {FunctionTable(y, -w), FunctionTable(y, CVector::Zero(w.size()))}, 0});
  const auto tower = compose_extensions(lower.bundle, upper.bundle);
  CHECK(tower.pi.source()->size() == upper.bundle.pi.source()->size());
  for (std::size_t x = 0; x < tower.pi.target()->size(); ++x) {
    const bool centre = std::abs(tower.pi.target()->coord(x, 0)) < 1e-12;
    CHECK(tower.pi.fiber(x).size() == (centre ? 1u : 4u));
  }
  const auto cert = gce_certificate(tower, default_probes(tower.b));
  for (const auto& c : cert.clauses) CHECK_MESSAGE(c.pass, c.name);
  // T of the tower is the average over fourth roots.
  const CVector fourth = upper.p_q.values;
  CHECK(sup_norm(tower.t->apply(fourth)) <= 1e-12);
}
