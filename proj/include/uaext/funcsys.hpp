#pragma once

// Discretized uniform algebras: finite-dimensional spans of function tables
// generated by named generators under a (weighted) degree cap.

#include <optional>
#include <string>
#include <vector>

#include "uaext/space.hpp"
#include "uaext/types.hpp"

namespace uaext {

struct FunctionTable {
  SpacePtr space;
  CVector values;
  std::string name;

  FunctionTable() = default;
  FunctionTable(SpacePtr s, CVector v, std::string n = {});
};

/// A span of tables on a finite space, stored as an orthonormal basis (the
/// columns of an n x r matrix) together with the generators it came from.
class FunctionSystem {
 public:
  /// Reduces `spanning` (columns of an n x k matrix) to an orthonormal basis
  /// with column-pivoted Householder QR. Columns no longer than rank_tol times
  /// the longest are dropped, the rest normalised, and a pivot counts as
  /// independent when it exceeds rank_tol times the largest.
  static FunctionSystem from_span(SpacePtr space, const CMatrix& spanning, std::vector<FunctionTable> generators,
                                  int degree_cap, double rank_tol = kDefaultRankTol,
                                  std::vector<int> generator_weights = {});

  /// Adopts an existing basis as-is after checking it is orthonormal to 1e-8.
  static FunctionSystem from_orthonormal(SpacePtr space, CMatrix basis, std::vector<FunctionTable> generators,
                                         int degree_cap, double rank_tol = kDefaultRankTol,
                                         std::vector<int> generator_weights = {});

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return space_->size(); }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
  const CMatrix& basis() const { return basis_; }
  FunctionTable basis_table(std::size_t k) const;
  const std::vector<FunctionTable>& generators() const { return generators_; }
  const std::vector<int>& generator_weights() const { return weights_; }
  int degree_cap() const { return degree_cap_; }
  double rank_tol() const { return rank_tol_; }
  bool separates_points() const { return separates_; }

  /// Orthogonal projection coefficients B^H f.
  CVector coefficients(const CVector& f) const;
  CVector evaluate(const CVector& coefficients) const;
  CVector project(const CVector& f) const;

 private:
  FunctionSystem(SpacePtr space, CMatrix basis, std::vector<FunctionTable> generators, int degree_cap,
                 double rank_tol, std::vector<int> weights);

  SpacePtr space_;
  CMatrix basis_;
  std::vector<FunctionTable> generators_;
  std::vector<int> weights_;
  int degree_cap_ = 1;
  double rank_tol_ = kDefaultRankTol;
  bool separates_ = false;
};

/// Exponent vectors with sum_i weights[i] * e[i] <= cap, ordered by weighted
/// total degree, then lexicographically by generator index.
std::vector<std::vector<int>> monomial_exponents(std::size_t generator_count, int cap,
                                                 const std::vector<int>& weights = {});

/// Span of {1} and every generator monomial within the degree cap. Weights
/// default to 1 (plain total degree).
FunctionSystem generate_system(const SpacePtr& space, std::vector<FunctionTable> generators, int degree_cap,
                               double rank_tol = kDefaultRankTol, std::vector<int> generator_weights = {});

/// C(space): the span of all point indicators.
FunctionSystem full_system(const SpacePtr& space);
/// The constants only.
FunctionSystem constants_system(const SpacePtr& space);

double sup_norm(const CVector& f);
double sup_norm(const FunctionTable& f);
double sup_norm(const FunctionSystem& system, const CVector& coefficients);

/// Euclidean distance from f to the span.
double span_residual(const FunctionSystem& system, const CVector& f);
double span_residual(const FunctionSystem& system, const FunctionTable& f);

/// Restriction to the points `subset`; the result lives on subspace(space, subset).
FunctionSystem restrict_system(const FunctionSystem& system, const IndexList& subset);

/// Same system with every table composed with pi.
FunctionSystem pullback_system(const SurjectionMap& pi, const FunctionSystem& system);

struct Interpolation {
  bool feasible = false;
  CVector coefficients;
  double residual = 0.0;
};

/// Least-squares search for f in the span with f|K = value_on_k, f|E = 0.
Interpolation interpolation_feasible(const FunctionSystem& system, const IndexList& k_set, const IndexList& e_set,
                                     Complex value_on_k = 1.0, double tol = 1e-8);

/// Direct scan: every pair of points is separated by some basis column
/// differing by more than tol.
bool separates_points_scan(const CMatrix& basis, double tol = 1e-10);

}  // namespace uaext
