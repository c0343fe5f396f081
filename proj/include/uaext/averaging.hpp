#pragma once

// Extension bundles (A on X, B on Y, pi: Y -> X, optional T: C(Y) -> C(X))
// and the certificate suites that check averaging and generalised Cole
// extension properties clause by clause.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "uaext/funcsys.hpp"
#include "uaext/measures.hpp"
#include "uaext/operator.hpp"

namespace uaext {

struct ExtensionFlags {
  bool open_map = false;
  bool group_implemented = false;
};

struct ExtensionBundle {
  std::string name;
  FunctionSystem a;
  FunctionSystem b;
  SurjectionMap pi;
  std::optional<OperatorTable> t;
  ExtensionFlags flags;
  nlohmann::json metadata = nlohmann::json::object();
};

/// Throws InputError when the systems, map and operator do not fit together.
void check_bundle_shape(const ExtensionBundle& bundle);

struct AveragingOperator {
  OperatorTable table;
  double unital_residual = 0.0;
  double section_residual = 0.0;
};

/// Builds T from one row measure per point of pi.target() and records how
/// far it is from unital and from T o pi^* = id.
AveragingOperator make_operator(const SurjectionMap& pi, const std::vector<Measure>& rows);

/// Uniform average over each fiber.
OperatorTable fiber_average_operator(const SurjectionMap& pi);

struct Clause {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::size_t probe_count = 0;
  std::string note;
  bool applicable = true;
};

struct Certificate {
  std::string name;
  /// False when a precondition failed; clauses are still reported.
  bool applicable = true;
  std::vector<Clause> clauses;

  bool passed() const;
  const Clause* find(const std::string& clause) const;
  std::vector<std::string> failures() const;
};

struct CertTolerances {
  double unital = 1e-12;
  double norm = 1e-10;
  double section = 1e-12;
  double pullback_inclusion = 1e-9;
  double image_in_a = 1e-8;
  double onto = 1e-10;
  double adjoint_annihilation = 1e-9;
  double pushforward_inversion = 1e-12;
  double pushforward_annihilation = 1e-9;
  double invariant_intersection = 1e-9;
  double positivity = 1e-12;
  double kelley = 1e-10;
  double module = 1e-10;
  double off_fiber = 1e-12;
  double hull = 1e-9;
  double multiplicative = 1e-10;
  double stability = 1e-9;
  double orbit_measure = 1e-12;
};

inline constexpr std::size_t kDefaultRandomProbes = 20;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// The basis columns of `system` followed by `random_count` seeded random
/// combinations, each scaled to sup norm 1.
std::vector<CVector> default_probes(const FunctionSystem& system, std::size_t random_count = kDefaultRandomProbes,
                                    std::uint64_t seed = kDefaultSeed);

/// Clauses (a)-(d) of the averaging equivalences for P = pi^* o T:
/// Kelley identity, module property, fiber support and the fiberwise convex
/// hull condition. `g_tables` default to the point indicators of X.
Certificate equivalences_report(const OperatorTable& t, const SurjectionMap& pi, const std::vector<CVector>& probes,
                                const std::vector<CVector>& g_tables = {}, const CertTolerances& tol = {});

/// Every generalised Cole extension clause for a bundle with T.
Certificate gce_certificate(const ExtensionBundle& bundle, const std::vector<CVector>& probes,
                            const CertTolerances& tol = {}, std::uint64_t seed = kDefaultSeed);

/// The (A, B, pi) part only: pi^*(A) inside B and separation of B.
Certificate extension_certificate(const ExtensionBundle& bundle, const CertTolerances& tol = {});

/// Functions in B that are constant on every fiber, as an orthonormal basis
/// (columns), found as the null space of (I - fiber average) on B.
CMatrix fiber_constant_part(const FunctionSystem& b, const SurjectionMap& pi, double null_tol = 1e-7);

/// Clause checking pi^*(C(X)) intersected with B equals pi^*(A).
Clause invariant_intersection_clause(const ExtensionBundle& bundle, double tol);

/// max |T(f g) - T(f) T(g)| over ordered probe pairs.
double multiplicativity_residual(const OperatorTable& t, const std::vector<CVector>& probes);

struct RowCharacterReport {
  /// Worst distance between B^T mu_x and the nearest evaluation row of B.
  double residual = 0.0;
  /// For each x, the source point whose evaluation mu_x best matches.
  IndexList points;
};

/// Whether each row of T represents the evaluation at a single point of Y on B.
RowCharacterReport row_character_check(const OperatorTable& t, const FunctionSystem& b);

/// The bundle over K: A restricted to K, B restricted to pi^{-1}(K), and T
/// restricted rowwise. Rows with mass outside pi^{-1}(K) raise InputError.
ExtensionBundle restrict_bundle(const ExtensionBundle& bundle, const IndexList& k_set);

}  // namespace uaext
