#include "uaext/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "uaext/errors.hpp"

namespace uaext {

namespace {

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
  return std::sqrt(s);
}

bool coord_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].real() != b[k].real()) return a[k].real() < b[k].real();
    if (a[k].imag() != b[k].imag()) return a[k].imag() < b[k].imag();
  }
  return false;
}

double sort_key(const std::vector<Complex>& c) { return c.front().real(); }

// Pairs (i, j), i < j, whose coordinates lie within tol. Sweep over the
// first real coordinate so only a window of candidates is compared.
template <typename Visit>
void close_pairs(const std::vector<const std::vector<Complex>*>& pts, double tol, Visit visit) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sort_key(*pts[a]) < sort_key(*pts[b]); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (sort_key(*pts[order[j]]) - sort_key(*pts[order[i]]) > tol) break;
      if (distance(*pts[order[i]], *pts[order[j]]) <= tol)
        visit(std::min(order[i], order[j]), std::max(order[i], order[j]));
    }
  }
}

}  // namespace

FiniteSpace::FiniteSpace(std::vector<Point> points, double merge_tol) : points_(std::move(points)) {
  if (points_.empty()) throw InputError("space: a finite space needs at least one point");
  const std::size_t arity = points_.front().coords.size();
  if (arity == 0) throw InputError("space: points need at least one coordinate");
  std::vector<const std::vector<Complex>*> coords;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].coords.size() != arity) throw InputError("space: mixed coordinate arity");
    for (const auto& c : points_[i].coords)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw InputError("space: non-finite coordinate at point " + points_[i].label);
    if (!by_label_.emplace(points_[i].label, i).second)
      throw ValidationError("space: duplicate label " + points_[i].label);
    coords.push_back(&points_[i].coords);
  }
  close_pairs(coords, merge_tol, [&](std::size_t a, std::size_t b) {
    throw ValidationError("space: points " + points_[a].label + " and " + points_[b].label +
                          " are closer than the merge tolerance");
  });
}

std::optional<std::size_t> FiniteSpace::find(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteSpace::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw InputError("space: unknown point label " + std::string(label));
}

bool FiniteSpace::same_as(const FiniteSpace& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (points_[i].label != other.points_[i].label) return false;
    if (points_[i].coords != other.points_[i].coords) return false;
  }
  return true;
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->same_as(*b);
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, std::string_view context) {
  if (!same_space(a, b)) throw InputError(std::string(context) + ": space mismatch");
}

SpaceBuild build_space(const std::vector<std::vector<Complex>>& raw, double merge_tol, std::string_view prefix) {
  if (raw.empty()) throw InputError("make_space: empty point list");
  const std::size_t arity = raw.front().size();
  std::vector<const std::vector<Complex>*> pts;
  for (const auto& r : raw) {
    if (r.size() != arity || arity == 0) throw InputError("make_space: mixed coordinate arity");
    pts.push_back(&r);
  }

  // Union-find over close pairs; the representative is the earliest raw point.
  std::vector<std::size_t> parent(raw.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  close_pairs(pts, merge_tol, [&](std::size_t a, std::size_t b) {
    const std::size_t ra = root(a), rb = root(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  });

  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (root(i) == i) reps.push_back(i);
  std::stable_sort(reps.begin(), reps.end(), [&](std::size_t a, std::size_t b) { return coord_less(raw[a], raw[b]); });

  std::vector<std::size_t> slot_of_rep(raw.size(), 0);
  std::vector<Point> points;
  points.reserve(reps.size());
  for (std::size_t k = 0; k < reps.size(); ++k) {
    slot_of_rep[reps[k]] = k;
    points.push_back({std::string(prefix) + std::to_string(k), raw[reps[k]]});
  }
  SpaceBuild out;
  out.point_of_raw.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out.point_of_raw[i] = slot_of_rep[root(i)];
  // Merged clusters can chain past merge_tol; validate with a looser bound.
  out.space = std::make_shared<const FiniteSpace>(std::move(points), 0.0);
  return out;
}

SpacePtr make_space(const std::vector<std::vector<Complex>>& raw, double merge_tol) {
  return build_space(raw, merge_tol).space;
}

SpacePtr subspace(const SpacePtr& space, const IndexList& indices) {
  if (indices.empty()) throw InputError("subspace: empty index set");
  IndexList sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("subspace: repeated index");
  std::vector<Point> pts;
  for (std::size_t i : sorted) {
    if (i >= space->size()) throw InputError("subspace: index out of range");
    pts.push_back(space->point(i));
  }
  return std::make_shared<const FiniteSpace>(std::move(pts), 0.0);
}

SurjectionMap::SurjectionMap(SpacePtr source, SpacePtr target, IndexList assignment)
    : source_(std::move(source)), target_(std::move(target)), assignment_(std::move(assignment)) {
  if (!source_ || !target_) throw InputError("surjection: null space");
  if (assignment_.size() != source_->size())
    throw InputError("surjection: assignment length " + std::to_string(assignment_.size()) +
                     " differs from source size " + std::to_string(source_->size()));
  fibers_.assign(target_->size(), {});
  for (std::size_t y = 0; y < assignment_.size(); ++y) {
    if (assignment_[y] >= target_->size())
      throw InputError("surjection: assignment index out of range at source point " + source_->point(y).label);
    fibers_[assignment_[y]].push_back(y);
  }
  for (std::size_t x = 0; x < fibers_.size(); ++x)
    if (fibers_[x].empty())
      throw ValidationError("surjection: target point " + target_->point(x).label + " is not hit");
}

const IndexList& SurjectionMap::fiber(std::size_t x) const {
  if (x >= fibers_.size()) throw InputError("fiber: point index out of range");
  return fibers_[x];
}

const IndexList& SurjectionMap::fiber(std::string_view label) const { return fiber(target_->index_of(label)); }

std::size_t SurjectionMap::max_fiber_size() const {
  std::size_t m = 0;
  for (const auto& f : fibers_) m = std::max(m, f.size());
  return m;
}

SurjectionMap SurjectionMap::after(const SurjectionMap& inner) const {
  require_same_space(inner.target(), source_, "compose");
  IndexList a(inner.source()->size());
  for (std::size_t z = 0; z < a.size(); ++z) a[z] = assignment_[inner(z)];
  return SurjectionMap(inner.source(), target_, std::move(a));
}

SurjectionMap make_surjection(SpacePtr source, SpacePtr target, IndexList assignment) {
  return SurjectionMap(std::move(source), std::move(target), std::move(assignment));
}

SurjectionMap identity_map(const SpacePtr& space) {
  IndexList a(space->size());
  std::iota(a.begin(), a.end(), 0);
  return SurjectionMap(space, space, std::move(a));
}

CVector pull_back(const SurjectionMap& pi, const CVector& f) {
  if (static_cast<std::size_t>(f.size()) != pi.target()->size())
    throw InputError("pull_back: table length does not match the target space");
  CVector g(static_cast<Eigen::Index>(pi.source()->size()));
  for (std::size_t y = 0; y < pi.source()->size(); ++y) g[static_cast<Eigen::Index>(y)] = f[static_cast<Eigen::Index>(pi(y))];
  return g;
}

Measure::Measure(SpacePtr space, CVector weights) : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw InputError("measure: null space");
  if (static_cast<std::size_t>(weights_.size()) != space_->size())
    throw InputError("measure: weight count does not match the space");
}

Measure Measure::zero(SpacePtr space) {
  const auto n = static_cast<Eigen::Index>(space->size());
  return Measure(std::move(space), CVector::Zero(n));
}

Measure Measure::point_mass(SpacePtr space, std::size_t at) {
  if (at >= space->size()) throw InputError("point_mass: index out of range");
  Measure m = zero(std::move(space));
  m.weights_[static_cast<Eigen::Index>(at)] = 1.0;
  return m;
}

Complex Measure::integrate(const CVector& f) const {
  if (f.size() != weights_.size()) throw InputError("integrate: table length does not match the measure");
  return (weights_.array() * f.array()).sum();
}

IndexList Measure::support(double tol) const {
  IndexList s;
  for (Eigen::Index i = 0; i < weights_.size(); ++i)
    if (std::abs(weights_[i]) > tol) s.push_back(static_cast<std::size_t>(i));
  return s;
}

bool Measure::is_probability(double tol) const {
  Complex total = 0.0;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (std::abs(weights_[i].imag()) > tol || weights_[i].real() < -tol) return false;
    total += weights_[i];
  }
  return std::abs(total - 1.0) <= kProbabilityTol;
}

Measure pushforward_measure(const SurjectionMap& pi, const Measure& mu) {
  require_same_space(mu.space(), pi.source(), "pushforward_measure");
  CVector w = CVector::Zero(static_cast<Eigen::Index>(pi.target()->size()));
  for (std::size_t y = 0; y < pi.source()->size(); ++y)
    w[static_cast<Eigen::Index>(pi(y))] += mu.weights()[static_cast<Eigen::Index>(y)];
  return Measure(pi.target(), std::move(w));
}

}  // namespace uaext
