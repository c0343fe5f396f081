#include "doctest.h"

#include "support.hpp"
#include "uaext/averaging.hpp"
#include "uaext/errors.hpp"

using namespace uaext;
using testing_support::line;

namespace {

// Seven points over three: fibers {0,1}, {2,3}, {4,5,6}.
SurjectionMap three_fiber_cover() {
  return make_surjection(line(7), line(3), {0, 0, 1, 1, 2, 2, 2});
}

OperatorTable random_positive(const SurjectionMap& pi, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SparseRow> rows(pi.target()->size());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    double total = 0.0;
    for (std::size_t y : pi.fiber(x)) {
      const double w = 0.1 + rng.uniform();
      rows[x].push_back({y, w});
      total += w;
    }
    for (auto& e : rows[x]) e.weight /= total;
  }
  return OperatorTable(pi.source(), pi.target(), std::move(rows));
}

ExtensionBundle full_bundle(const SurjectionMap& pi, OperatorTable t) {
  return {"test", full_system(pi.target()), full_system(pi.source()), pi, std::move(t), {}, {}};
}

}  // namespace

TEST_CASE("fiber averages satisfy every equivalence") {
  const auto pi = three_fiber_cover();
  const auto probes = default_probes(full_system(pi.source()));
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto t = random_positive(pi, seed);
    const auto cert = equivalences_report(t, pi, probes);
    CHECK(cert.applicable);
    CHECK_MESSAGE(cert.passed(), doctest::toString(cert.failures().size()));
  }
  const auto avg = fiber_average_operator(pi);
  CHECK(avg.unital_residual() <= 1e-15);
  CHECK(avg.section_residual(pi) <= 1e-15);
}

TEST_CASE("kelley identity computed directly") {
  const auto pi = three_fiber_cover();
  const auto t = random_positive(pi, 9);
  const OperatorTable pstar = OperatorTable::composition_operator(pi);
  const OperatorTable p = pstar.after(t);
  Rng rng(5);
  const CVector f = rng.complex_vector(7), g = rng.complex_vector(7);
  const CVector lhs = p.apply(CVector(p.apply(f).cwiseProduct(g)));
  const CVector rhs = p.apply(f).cwiseProduct(p.apply(g));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("off-fiber signed mass keeps the section identity but breaks the module property") {
  const auto pi = three_fiber_cover();
  std::vector<SparseRow> rows = {
      {{0, 0.5}, {1, 0.5}, {2, 0.05}, {3, -0.05}},
      {{2, 0.5}, {3, 0.5}},
      {{4, 1.0 / 3}, {5, 1.0 / 3}, {6, 1.0 / 3}},
  };
  const OperatorTable t(pi.source(), pi.target(), rows);
  const auto cert = equivalences_report(t, pi, default_probes(full_system(pi.source())));
  REQUIRE(cert.find("section_identity"));
  CHECK(cert.find("section_identity")->pass);
  CHECK(cert.find("unital")->pass);
  CHECK(cert.find("fiber_support")->residual == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_FALSE(cert.find("fiber_support")->pass);
  CHECK_FALSE(cert.find("module")->pass);
  CHECK_FALSE(cert.passed());
}

TEST_CASE("missing section identity makes the report inapplicable") {
  const auto pi = three_fiber_cover();
  std::vector<SparseRow> rows = {{{2, 1.0}}, {{0, 1.0}}, {{4, 1.0}}};
  const OperatorTable t(pi.source(), pi.target(), rows);
  const auto cert = equivalences_report(t, pi, default_probes(full_system(pi.source())));
  CHECK_FALSE(cert.applicable);
  CHECK_FALSE(cert.passed());
}

TEST_CASE("signed fiber row fails norm and positivity only") {
  const auto pi = three_fiber_cover();
  std::vector<SparseRow> rows = {{{0, 1.1}, {1, -0.1}}, {{2, 0.5}, {3, 0.5}}, {{4, 0.2}, {5, 0.3}, {6, 0.5}}};
  const auto bundle = full_bundle(pi, OperatorTable(pi.source(), pi.target(), rows));
  const auto cert = gce_certificate(bundle, default_probes(bundle.b));
  const auto fails = cert.failures();
  REQUIRE(fails.size() == 2);
  CHECK(cert.find("norm_one")->residual == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_FALSE(cert.find("norm_one")->pass);
  CHECK_FALSE(cert.find("positivity")->pass);
}

TEST_CASE("positive fiber operators certify the trivial extension") {
  const auto pi = three_fiber_cover();
  const auto bundle = full_bundle(pi, random_positive(pi, 11));
  const auto cert = gce_certificate(bundle, default_probes(bundle.b));
  CHECK(cert.passed());
  CHECK(extension_certificate(bundle).passed());
}

TEST_CASE("invariant intersection detects an oversized B") {
  // A = constants on X but B = C(Y): fiber-constant members of B exceed pi^*(A).
  const auto pi = three_fiber_cover();
  ExtensionBundle bundle{"t", constants_system(pi.target()), full_system(pi.source()), pi,
                         fiber_average_operator(pi), {}, {}};
  const Clause c = invariant_intersection_clause(bundle, 1e-9);
  CHECK_FALSE(c.pass);
  CHECK(fiber_constant_part(bundle.b, pi).cols() == 3);
}

TEST_CASE("multiplicative rows are point evaluations") {
  const auto pi = three_fiber_cover();
  std::vector<SparseRow> rows = {{{1, 1.0}}, {{2, 1.0}}, {{6, 1.0}}};
  const OperatorTable t(pi.source(), pi.target(), rows);
  const auto probes = default_probes(full_system(pi.source()));
  CHECK(multiplicativity_residual(t, probes) <= 1e-12);
  const auto rc = row_character_check(t, full_system(pi.source()));
  CHECK(rc.residual <= 1e-12);
  CHECK(rc.points == IndexList{1, 2, 6});
  CHECK(multiplicativity_residual(fiber_average_operator(pi), probes) > 1e-3);
}

TEST_CASE("restriction to a closed subset is local") {
  const auto pi = three_fiber_cover();
  const auto t = random_positive(pi, 21);
  const auto bundle = full_bundle(pi, t);
  const auto r = restrict_bundle(bundle, {0, 2});
  CHECK(r.pi.target()->size() == 2);
  CHECK(r.pi.source()->size() == 5);
  CHECK(r.name == "test|K");
  REQUIRE(r.t);
  // Rows over K are the original rows, re-indexed.
  for (std::size_t x = 0; x < 2; ++x) {
    const std::size_t orig = x == 0 ? 0 : 2;
    CVector lifted = CVector::Zero(7);
    const auto mu = r.t->row_measure(x);
    for (std::size_t y = 0; y < r.pi.source()->size(); ++y)
      lifted[Eigen::Index(pi.source()->index_of(r.pi.source()->point(y).label))] = mu.weights()[Eigen::Index(y)];
    CHECK((lifted - t.row_measure(orig).weights()).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(gce_certificate(r, default_probes(r.b)).passed());

  std::vector<SparseRow> leaky = {{{0, 0.5}, {1, 0.5}, {2, 0.05}, {3, -0.05}}, {{2, 1.0}}, {{4, 1.0}}};
  const auto bad = full_bundle(pi, OperatorTable(pi.source(), pi.target(), leaky));
  CHECK_THROWS_AS(restrict_bundle(bad, {0, 2}), InputError);
}

TEST_CASE("bundle shape is validated") {
  const auto pi = three_fiber_cover();
  ExtensionBundle bad{"bad", full_system(pi.source()), full_system(pi.source()), pi, std::nullopt, {}, {}};
  CHECK_THROWS_AS(check_bundle_shape(bad), InputError);
  ExtensionBundle no_t{"no_t", full_system(pi.target()), full_system(pi.source()), pi, std::nullopt, {}, {}};
  const auto cert = gce_certificate(no_t, {});
  CHECK_FALSE(cert.applicable);
}
