#include "uaext/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uaext::hull {

namespace {

void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  err = (a - av) + (b - bv);
}

void two_product(double a, double b, double& p, double& err) {
  p = a * b;
  err = std::fma(a, b, -p);
}

// Shewchuk's grow-expansion: adds `b` to the non-overlapping expansion `e`.
void grow(std::vector<double>& e, double b) {
  double q = b;
  for (double& component : e) {
    double s, h;
    two_sum(q, component, s, h);
    component = h;
    q = s;
  }
  e.push_back(q);
}

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

int orientation(Complex a, Complex b, Complex c) {
  const double ax = a.real(), ay = a.imag(), bx = b.real(), by = b.imag(), cx = c.real(), cy = c.imag();
  // (b-a) x (c-a) expanded into six exact products.
  const double terms[6][3] = {{bx, cy, 1.0}, {bx, ay, -1.0}, {ax, cy, -1.0},
                              {by, cx, -1.0}, {by, ax, 1.0}, {ay, cx, 1.0}};
  std::vector<double> e;
  e.reserve(24);
  for (const auto& t : terms) {
    double p, err;
    two_product(t[0], t[1], p, err);
    grow(e, t[2] * p);
    grow(e, t[2] * err);
  }
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    if (*it > 0.0) return 1;
    if (*it < 0.0) return -1;
  }
  return 0;
}

std::vector<Complex> convex_hull(std::vector<Complex> pts) {
  auto less = [](Complex a, Complex b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  std::vector<Complex> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orientation(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double distance_to_hull(Complex p, const std::vector<Complex>& v) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  if (v.size() == 1) return std::abs(p - v[0]);
  if (v.size() == 2) return segment_distance(p, v[0], v[1]);
  bool inside = true;
  for (std::size_t i = 0; i < v.size() && inside; ++i)
    if (orientation(v[i], v[(i + 1) % v.size()], p) < 0) inside = false;
  if (inside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, segment_distance(p, v[i], v[(i + 1) % v.size()]));
  return best;
}

}  // namespace uaext::hull
