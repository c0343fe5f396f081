#pragma once

#include <numbers>

#include "uaext/funcsys.hpp"
#include "uaext/random.hpp"

namespace testing_support {

using namespace uaext;

inline SpacePtr disk_grid(std::size_t boundary, std::size_t rings, std::size_t ring_size) {
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

inline FunctionTable coordinate(const SpacePtr& s, std::size_t k = 0, std::string name = "z") {
  CVector v(static_cast<Eigen::Index>(s->size()));
  for (std::size_t i = 0; i < s->size(); ++i) v[static_cast<Eigen::Index>(i)] = s->coord(i, k);
  return {s, v, std::move(name)};
}

inline SpacePtr line(std::size_t n) {
  std::vector<std::vector<Complex>> raw;
  for (std::size_t i = 0; i < n; ++i) raw.push_back({Complex(double(i))});
  return make_space(raw);
}

}  // namespace testing_support
