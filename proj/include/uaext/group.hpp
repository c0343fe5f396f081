#pragma once

// Finite group actions by permutations, Haar-average projections, and the
// reconstruction of Cole extensions from bicontractive projections.

#include <optional>
#include <utility>
#include <vector>

#include "uaext/averaging.hpp"
#include "uaext/cole.hpp"

namespace uaext {

struct GroupAction {
  SpacePtr space;
  /// elements[s][y] = s . y
  std::vector<IndexList> elements;
  /// multiplication[s][t] = index of s o t (apply t first).
  std::vector<IndexList> multiplication;
  std::size_t identity_index = 0;
  IndexList inverse;
  /// Orbits in order of their smallest point; each sorted ascending.
  std::vector<IndexList> orbits;
  IndexList orbit_of;

  std::size_t order() const { return elements.size(); }
};

/// Validates bijectivity, closure, identity and inverses (ValidationError
/// naming the offending element or pair) and computes the orbits.
GroupAction make_action(SpacePtr space, std::vector<IndexList> permutations);

/// f_s(y) = f(s . y).
CVector act(const GroupAction& action, std::size_t s, const CVector& f);

/// P(f)(y) = (1/|G|) sum_s f(s . y), as an operator on C(Y).
OperatorTable haar_projection(const GroupAction& action);

/// X = orbit space (coordinates are orbit means, labels from the smallest
/// orbit member), pi the orbit map, T the Haar average through the quotient,
/// and A the span of T(b) over B's basis plus `extra_invariants` (tables on X).
ExtensionBundle haar_extension(const GroupAction& action, const FunctionSystem& b,
                               const std::vector<CVector>& extra_invariants = {});

/// Orbits equal fibers, T rows equal orbit averages, B stable under the
/// action, and the invariant intersection clause.
Certificate implemented_report(const ExtensionBundle& bundle, const GroupAction& action,
                               const std::vector<CVector>& probes, const CertTolerances& tol = {});

struct BicontractiveResult {
  bool is_bicontractive = false;
  double norm_p = 0.0;
  double norm_i_minus_p = 0.0;
  OperatorTable theta;
  /// The involution recovered from theta's rows, when every row is a unit
  /// point mass.
  std::optional<IndexList> rho;
  std::optional<GroupAction> action;
  Certificate certificate;
};

/// Requires P^2 = P and P(1) = 1 to 1e-10 (InputError otherwise).
BicontractiveResult bicontractive_analyze(const OperatorTable& p, const FunctionSystem& b,
                                          const std::vector<CVector>& probes, const CertTolerances& tol = {});

struct Reconstruction {
  bool matched = false;
  /// psi as point indices into the Cole space, when every y found a partner.
  std::optional<IndexList> psi;
  std::optional<std::pair<std::size_t, std::size_t>> collision;
  std::optional<ColeBundle> cole;
  Certificate certificate;
};

/// Rebuilds the bundle as the Cole extension for t^2 - h with h0^2 = pi^*(h).
/// Throws HypothesisError when T(h0) != 0 or h0^2 is not constant on fibers.
/// `extension_degree_cap` truncates the rebuilt A^q (0: the cole_extend default)
/// and should match the truncation of B for pullback_in_b to be meaningful.
Reconstruction reconstruct_cole(const ExtensionBundle& bundle, const IndexList& rho, const CVector& h0,
                                double tol = 1e-9, int extension_degree_cap = 0);

}  // namespace uaext
