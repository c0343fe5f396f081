#pragma once

// Finite stand-ins for compact spaces: labelled points with complex
// coordinates, surjections with precomputed fibers, and complex measures.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "uaext/types.hpp"

namespace uaext {

struct Point {
  std::string label;
  std::vector<Complex> coords;
};

class FiniteSpace {
 public:
  /// Validates: non-empty, uniform arity, unique labels, and no two points
  /// closer than `merge_tol`.
  explicit FiniteSpace(std::vector<Point> points, double merge_tol = kDefaultMergeTol);

  std::size_t size() const { return points_.size(); }
  std::size_t arity() const { return points_.front().coords.size(); }
  const Point& point(std::size_t i) const { return points_.at(i); }
  const std::vector<Point>& points() const { return points_; }
  const Complex& coord(std::size_t i, std::size_t k) const { return points_[i].coords[k]; }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws InputError for unknown labels.
  std::size_t index_of(std::string_view label) const;

  /// Same labels and bit-identical coordinates, in the same order.
  bool same_as(const FiniteSpace& other) const;

 private:
  std::vector<Point> points_;
  std::unordered_map<std::string, std::size_t> by_label_;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

bool same_space(const SpacePtr& a, const SpacePtr& b);
void require_same_space(const SpacePtr& a, const SpacePtr& b, std::string_view context);

struct SpaceBuild {
  SpacePtr space;
  /// For every raw input point, the index of the (merged) point it became.
  IndexList point_of_raw;
};

/// Merges raw points closer than `merge_tol`, sorts the survivors
/// lexicographically by (re, im) of each coordinate, and labels them
/// `<prefix><index>`.
SpaceBuild build_space(const std::vector<std::vector<Complex>>& raw, double merge_tol = kDefaultMergeTol,
                       std::string_view prefix = "p");
SpacePtr make_space(const std::vector<std::vector<Complex>>& raw, double merge_tol = kDefaultMergeTol);

/// The points at `indices` (kept in ascending order, labels preserved).
SpacePtr subspace(const SpacePtr& space, const IndexList& indices);

class SurjectionMap {
 public:
  /// Throws ValidationError naming the first target point not hit.
  SurjectionMap(SpacePtr source, SpacePtr target, IndexList assignment);

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  const IndexList& assignment() const { return assignment_; }
  std::size_t operator()(std::size_t y) const { return assignment_[y]; }

  /// E_x = preimage of x, in ascending source order.
  const IndexList& fiber(std::size_t x) const;
  const IndexList& fiber(std::string_view label) const;
  const std::vector<IndexList>& fibers() const { return fibers_; }
  std::size_t max_fiber_size() const;

  /// (this after inner): inner maps Z -> Y = this->source().
  SurjectionMap after(const SurjectionMap& inner) const;

 private:
  SpacePtr source_;
  SpacePtr target_;
  IndexList assignment_;
  std::vector<IndexList> fibers_;
};

SurjectionMap make_surjection(SpacePtr source, SpacePtr target, IndexList assignment);
SurjectionMap identity_map(const SpacePtr& space);

/// f o pi as a table on pi.source().
CVector pull_back(const SurjectionMap& pi, const CVector& f);

/// A complex measure on a finite space: one weight per point.
class Measure {
 public:
  Measure(SpacePtr space, CVector weights);
  static Measure zero(SpacePtr space);
  static Measure point_mass(SpacePtr space, std::size_t at);

  const SpacePtr& space() const { return space_; }
  const CVector& weights() const { return weights_; }
  CVector& weights() { return weights_; }

  /// sum_y f(y) w_y; f must be aligned with the space.
  Complex integrate(const CVector& f) const;
  double total_variation() const { return weights_.cwiseAbs().sum(); }
  IndexList support(double tol = kSupportTol) const;
  bool is_probability(double tol = kSupportTol) const;

 private:
  SpacePtr space_;
  CVector weights_;
};

Measure pushforward_measure(const SurjectionMap& pi, const Measure& mu);

}  // namespace uaext
