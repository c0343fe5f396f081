#include "doctest.h"

#include <numbers>
#include <numeric>

#include "uaext/errors.hpp"
#include "uaext/funcsys.hpp"
#include "uaext/random.hpp"

using namespace uaext;

namespace {

SpacePtr circle_space(std::size_t n, double r = 1.0) {
  std::vector<std::vector<Complex>> raw;
  for (std::size_t j = 0; j < n; ++j) raw.push_back({std::polar(r, 2.0 * std::numbers::pi * double(j) / double(n))});
  return make_space(raw);
}

SpacePtr disk_samples(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<Complex>> raw;
  while (raw.size() < n) {
    const Complex z = rng.complex();
    if (std::abs(z) <= 1.0) raw.push_back({z});
  }
  return make_space(raw);
}

FunctionTable coordinate(const SpacePtr& s, const std::string& name = "z") {
  CVector v(static_cast<Eigen::Index>(s->size()));
  for (std::size_t i = 0; i < s->size(); ++i) v[static_cast<Eigen::Index>(i)] = s->coord(i, 0);
  return {s, v, name};
}

}  // namespace

TEST_CASE("monomial ordering") {
  const auto e = monomial_exponents(2, 2);
  REQUIRE(e.size() == 6);
  CHECK(e[0] == std::vector<int>{0, 0});
  CHECK(e[1] == std::vector<int>{1, 0});
  CHECK(e[2] == std::vector<int>{0, 1});
  CHECK(e[3] == std::vector<int>{2, 0});
  const auto w = monomial_exponents(2, 4, {1, 2});
  for (const auto& v : w) CHECK(v[0] + 2 * v[1] <= 4);
  CHECK(w.size() == 9);
}

TEST_CASE("generate_system dimensions") {
  const auto disk = disk_samples(100, 3);
  const auto poly = generate_system(disk, {coordinate(disk)}, 5);
  CHECK(poly.dim() == 6);
  CHECK(poly.separates_points());

  const auto one = constants_system(disk);
  CHECK(one.dim() == 1);
  CHECK_FALSE(one.separates_points());

  Rng rng(5);
  std::vector<std::vector<Complex>> raw;
  for (int i = 0; i < 80; ++i) raw.push_back({std::polar(rng.uniform(0.4, 0.7), rng.uniform(0.0, 6.283185307179586))});
  const auto annulus = make_space(raw);
  const auto z = coordinate(annulus);
  const FunctionTable inv(annulus, z.values.cwiseInverse(), "1/z");
  const auto laurent = generate_system(annulus, {z, inv}, 4);
  CHECK(laurent.dim() == 9);
}

TEST_CASE("system invariants: orthonormal basis, constants, generator products") {
  const auto disk = disk_samples(60, 9);
  const auto z = coordinate(disk);
  const auto sys = generate_system(disk, {z}, 6);
  const CMatrix gram = sys.basis().adjoint() * sys.basis();
  CHECK((gram - CMatrix::Identity(gram.rows(), gram.cols())).norm() < 1e-10);
  CHECK(span_residual(sys, CVector::Ones(60)) <= 1e-10);
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 6 && b <= 3; ++b) {
      const CVector prod = z.values.array().pow(a) * z.values.array().pow(b);
      CHECK(span_residual(sys, prod) <= 1e-10);
    }
  const Eigen::JacobiSVD<CMatrix> svd(sys.basis());
  CHECK(svd.singularValues().minCoeff() >= sys.rank_tol());
}

TEST_CASE("sup norms") {
  const auto c64 = circle_space(64);
  CHECK(sup_norm(CVector::Ones(64)) == 1.0);
  const auto z = coordinate(c64);
  CHECK(sup_norm(z) == doctest::Approx(1.0).epsilon(1e-15));
  const CVector f = z.values.array().square() - 1.0;
  CHECK(sup_norm(f) == doctest::Approx(2.0).epsilon(1e-15));
  const auto sys = generate_system(c64, {z}, 3);
  const CVector c = sys.coefficients(f);
  CHECK(sup_norm(sys, c) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("span residuals") {
  const auto disk = disk_samples(120, 4);
  const auto z = coordinate(disk);
  const auto sys = generate_system(disk, {z}, 5);
  for (std::size_t k = 0; k < sys.dim(); ++k) CHECK(span_residual(sys, sys.basis_table(k)) <= 1e-12);
  // conj(z) has unit-order distance from analytic polynomials; compare with
  // a direct least-squares fit on the monomials.
  const CVector cz = z.values.conjugate();
  const double r = span_residual(sys, cz);
  CHECK(r > 0.1);
  CMatrix vand(120, 6);
  for (int k = 0; k < 6; ++k) vand.col(k) = z.values.array().pow(k);
  const CVector fit = vand.colPivHouseholderQr().solve(cz);
  CHECK(std::abs((vand * fit - cz).norm() - r) < 1e-9);

  const auto c64 = circle_space(64);
  const auto zc = coordinate(c64);
  const auto sys64 = generate_system(c64, {zc}, 5);
  CHECK(span_residual(sys64, CVector(zc.values.array().pow(6))) > 0.5);
  CHECK_THROWS_AS(span_residual(sys64, CVector::Ones(3)), InputError);
}

TEST_CASE("circle aliasing drops rank") {
  const auto c4 = circle_space(4);
  const auto sys = generate_system(c4, {coordinate(c4)}, 6);
  CHECK(sys.dim() == 4);
}

TEST_CASE("restriction") {
  const auto disk = disk_samples(50, 12);
  const auto sys = generate_system(disk, {coordinate(disk)}, 5);
  IndexList all(50);
  std::iota(all.begin(), all.end(), 0);
  CHECK(restrict_system(sys, all).dim() == sys.dim());
  const auto small = restrict_system(sys, {3, 17, 40});
  CHECK(small.dim() <= 3);
  CHECK(small.space()->size() == 3);
  CHECK_THROWS_AS(restrict_system(sys, {}), InputError);
  for (std::size_t m : {1, 4, 9, 20}) {
    IndexList sub(m);
    std::iota(sub.begin(), sub.end(), 0);
    CHECK(restrict_system(sys, sub).dim() <= std::min<std::size_t>(sys.dim(), m));
  }
}

TEST_CASE("pullback isometry") {
  const auto base = disk_samples(20, 1);
  std::vector<std::vector<Complex>> raw;
  IndexList assign;
  for (std::size_t x = 0; x < base->size(); ++x)
    for (double s : {-1.0, 1.0}) {
      raw.push_back({base->coord(x, 0), Complex(s, 0.0)});
      assign.push_back(x);
    }
  const auto built = build_space(raw);
  IndexList assignment(built.space->size());
  for (std::size_t i = 0; i < raw.size(); ++i) assignment[built.point_of_raw[i]] = assign[i];
  const auto pi = make_surjection(built.space, base, assignment);

  const auto sys = generate_system(base, {coordinate(base)}, 4);
  const auto pulled = pullback_system(pi, sys);
  CHECK(pulled.dim() == sys.dim());
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const CVector f = sys.evaluate(rng.complex_vector(static_cast<Eigen::Index>(sys.dim())));
    const CVector pf = pull_back(pi, f);
    CHECK(sup_norm(pf) == sup_norm(f));
    for (std::size_t x = 0; x < base->size(); ++x) {
      const auto& fib = pi.fiber(x);
      CHECK(pf[static_cast<Eigen::Index>(fib[0])] == pf[static_cast<Eigen::Index>(fib[1])]);
    }
    CHECK(span_residual(pulled, pf) <= 1e-10);
  }
  const auto same = pullback_system(identity_map(base), sys);
  CHECK((same.basis() * same.basis().adjoint() - sys.basis() * sys.basis().adjoint()).norm() < 1e-10);
}

TEST_CASE("interpolation feasibility") {
  const auto c = circle_space(12);
  CHECK(interpolation_feasible(full_system(c), {0, 1}, {5, 6, 7}).feasible);
  CHECK_FALSE(interpolation_feasible(constants_system(c), {0}, {5}).feasible);
  CHECK_THROWS_AS(interpolation_feasible(full_system(c), {0, 1}, {1, 2}), InputError);
  CHECK_THROWS_AS(interpolation_feasible(full_system(c), {}, {1}), InputError);

  // Two far-apart small clusters against a direct monomial fit.
  const auto disk = disk_samples(200, 21);
  const auto z = coordinate(disk);
  const auto sys = generate_system(disk, {z}, 8);
  IndexList k_set, e_set;
  for (std::size_t i = 0; i < disk->size(); ++i) {
    if (std::abs(disk->coord(i, 0) - Complex(0.7, 0.0)) < 0.15) k_set.push_back(i);
    if (std::abs(disk->coord(i, 0) - Complex(-0.7, 0.0)) < 0.15) e_set.push_back(i);
  }
  REQUIRE(!k_set.empty());
  REQUIRE(!e_set.empty());
  const auto res = interpolation_feasible(sys, k_set, e_set);
  CMatrix vand(static_cast<Eigen::Index>(k_set.size() + e_set.size()), 9);
  CVector rhs(vand.rows());
  Eigen::Index r = 0;
  for (auto i : k_set) {
    for (int k = 0; k < 9; ++k) vand(r, k) = std::pow(disk->coord(i, 0), k);
    rhs[r++] = 1.0;
  }
  for (auto i : e_set) {
    for (int k = 0; k < 9; ++k) vand(r, k) = std::pow(disk->coord(i, 0), k);
    rhs[r++] = 0.0;
  }
  const CVector fit = vand.completeOrthogonalDecomposition().solve(rhs);
  const double oracle = (vand * fit - rhs).norm();
  CHECK(res.feasible == (oracle <= 1e-8));
  CHECK(std::abs(res.residual - oracle) < 1e-8);
}

TEST_CASE("separation scan agrees with brute force") {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    CMatrix b(30, 2);
    for (Eigen::Index i = 0; i < 30; ++i) {
      b(i, 0) = 1.0;
      b(i, 1) = Complex(double(rng.index(12)), 0.0);
    }
    bool brute = true;
    for (Eigen::Index i = 0; i < 30; ++i)
      for (Eigen::Index j = i + 1; j < 30; ++j)
        if ((b.row(i) - b.row(j)).cwiseAbs().maxCoeff() <= 1e-10) brute = false;
    CHECK(separates_points_scan(b) == brute);
  }
}
