#include "doctest.h"

#include "uaext/hull.hpp"
#include "uaext/random.hpp"

using namespace uaext;
using namespace uaext::hull;

TEST_CASE("orientation signs") {
  CHECK(orientation({0, 0}, {1, 0}, {0, 1}) == 1);
  CHECK(orientation({0, 0}, {0, 1}, {1, 0}) == -1);
  CHECK(orientation({0, 0}, {1, 1}, {2, 2}) == 0);
  // Near-collinear input where naive evaluation rounds to the wrong sign.
  const Complex a(0.5, 0.5), b(12.0, 12.0), c(24.0, 24.0);
  CHECK(orientation(a, b, c) == 0);
  const Complex c2(24.0, std::nextafter(24.0, 25.0));
  CHECK(orientation(a, b, c2) == 1);
}

TEST_CASE("hull shapes") {
  std::vector<Complex> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}};
  const auto h = convex_hull(sq);
  CHECK(h.size() == 4);
  CHECK(convex_hull({{1, 1}, {1, 1}}).size() == 1);
  CHECK(convex_hull({{0, 0}, {1, 1}, {2, 2}, {0.5, 0.5}}).size() == 2);
}

TEST_CASE("distance to hull") {
  const auto sq = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(distance_to_hull({0.5, 0.5}, sq) == 0.0);
  CHECK(distance_to_hull({1.0, 0.5}, sq) == 0.0);
  CHECK(distance_to_hull({2.0, 0.5}, sq) == doctest::Approx(1.0));
  const auto seg = convex_hull({{0, 0}, {2, 0}});
  CHECK(distance_to_hull({1, 0}, seg) == 0.0);
  CHECK(distance_to_hull({1, 1}, seg) == doctest::Approx(1.0));
  CHECK(distance_to_hull({3, 0}, seg) == doctest::Approx(1.0));
  CHECK(distance_to_hull({4, 3}, {{0, 0}}) == doctest::Approx(5.0));
}

TEST_CASE("convex combinations lie in the hull") {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<Complex> pts(1 + rng.index(6));
    for (auto& p : pts) p = rng.complex();
    std::vector<double> w(pts.size());
    double s = 0.0;
    for (auto& v : w) s += (v = rng.uniform());
    Complex c = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) c += w[i] / s * pts[i];
    CHECK(distance_to_hull(c, convex_hull(pts)) <= 1e-12);
  }
}
