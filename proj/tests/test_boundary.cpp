#include "doctest.h"

#include <numbers>
#include <sstream>

#include "uaext/boundary.hpp"
#include "uaext/errors.hpp"

using namespace uaext;

namespace {

// Circle samples, the centre, and rings of interior points.
SpacePtr disk_grid(std::size_t boundary, std::size_t rings, std::size_t ring_size) {
  std::vector<std::vector<Complex>> raw;
  for (std::size_t j = 0; j < boundary; ++j)
    raw.push_back({std::polar(1.0, 2.0 * std::numbers::pi * double(j) / double(boundary))});
  raw.push_back({Complex(0.0)});
  for (std::size_t r = 0; r < rings; ++r) {
    const double radius = 0.2 + 0.5 * double(r) / double(std::max<std::size_t>(rings - 1, 1));
    for (std::size_t j = 0; j < ring_size; ++j)
      raw.push_back({std::polar(radius, 2.0 * std::numbers::pi * (double(j) + 0.5 * double(r % 2)) / double(ring_size))});
  }
  return make_space(raw);
}

FunctionTable coordinate(const SpacePtr& s) {
  CVector v(static_cast<Eigen::Index>(s->size()));
  for (std::size_t i = 0; i < s->size(); ++i) v[static_cast<Eigen::Index>(i)] = s->coord(i, 0);
  return {s, v, "z"};
}

bool on_circle(const SpacePtr& s, std::size_t i) { return std::abs(std::abs(s->coord(i, 0)) - 1.0) < 1e-12; }

}  // namespace

TEST_CASE("full and constant systems") {
  const auto s = disk_grid(8, 1, 6);
  const auto full = choquet_scan(full_system(s));
  for (const auto& r : full) {
    CHECK(r.is_choquet);
    CHECK(r.escaping_mass <= 1e-9);
  }
  const auto consts = choquet_scan(constants_system(s));
  for (const auto& r : consts) {
    CHECK_FALSE(r.is_choquet);
    CHECK(r.escaping_mass == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(choquet_set(constants_system(s)).empty());
  CHECK(choquet_set(full_system(s)).size() == s->size());
}

TEST_CASE("truncated disk algebra boundary is the circle grid") {
  const auto s = disk_grid(32, 3, 16);
  const auto sys = generate_system(s, {coordinate(s)}, 10);
  const auto reports = choquet_scan(sys);
  for (std::size_t i = 0; i < s->size(); ++i) {
    const auto& r = reports[i];
    REQUIRE(r.witness);
    CHECK(r.witness->is_probability(1e-8));
    // The witness represents evaluation at the point.
    CHECK((sys.basis().transpose() * r.witness->weights() - sys.basis().row(Eigen::Index(i)).transpose()).norm() <
          1e-8);
    if (on_circle(s, i)) {
      CHECK(r.is_choquet);
      CHECK(r.escaping_mass <= 1e-6);
    } else {
      CHECK(r.escaping_mass >= 0.9);
    }
  }
}

TEST_CASE("parallel and serial scans agree exactly") {
  const auto s = disk_grid(16, 2, 8);
  const auto sys = generate_system(s, {coordinate(s)}, 5);
  const auto a = choquet_scan(sys);
  const auto b = choquet_scan_serial(sys);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].escaping_mass == b[i].escaping_mass);
    CHECK(a[i].witness->weights() == b[i].witness->weights());
  }
}

TEST_CASE("escaping mass does not grow with the cap") {
  const auto s = disk_grid(12, 2, 6);
  std::vector<double> prev(s->size(), 1.0);
  for (int cap = 1; cap <= 6; ++cap) {
    const auto reports = choquet_scan(generate_system(s, {coordinate(s)}, cap));
    for (std::size_t i = 0; i < s->size(); ++i) {
      CHECK(reports[i].escaping_mass <= prev[i] + 1e-9);
      prev[i] = reports[i].escaping_mass;
    }
  }
}

TEST_CASE("choquet CSV") {
  const auto s = disk_grid(4, 0, 0);
  const auto sys = full_system(s);
  std::ostringstream out;
  write_choquet_csv(out, sys, choquet_scan(sys));
  const std::string text = out.str();
  CHECK(text.rfind("label,escaping_mass,is_choquet\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  CHECK(text.find("p0,0,true\n") != std::string::npos);
}

TEST_CASE("peak sets") {
  const auto s = disk_grid(12, 1, 6);
  CHECK(peak_set_feasible(full_system(s), {0, 3}).feasible);
  CHECK_FALSE(peak_set_feasible(constants_system(s), {0, 3}).feasible);

  // A boundary point peaks for the disk algebra: ((1 + conj(x) z) / 2)^k.
  const auto sys = generate_system(s, {coordinate(s)}, 8);
  std::size_t circle_point = 0;
  while (!on_circle(s, circle_point)) ++circle_point;
  const auto res = peak_set_feasible(sys, {circle_point});
  CHECK(res.feasible);
  CHECK(is_peak_witness(res.values, {circle_point}, kPeakMargin, kPeakPolygonSides));
  // An interior point never peaks.
  std::size_t inner = 0;
  while (on_circle(s, inner)) ++inner;
  CHECK_FALSE(peak_set_feasible(sys, {inner}).feasible);

  CHECK_THROWS_AS(peak_set_feasible(sys, {0}, 0.0), InputError);
  CHECK_THROWS_AS(peak_set_feasible(sys, {0}, 0.1, 4), InputError);
  CHECK_THROWS_AS(peak_set_feasible(sys, {}), InputError);
}
