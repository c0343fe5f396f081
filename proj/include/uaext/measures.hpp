#pragma once

// Annihilating measures, adjoints of operators on measures, and Jensen
// inequality checks against finite probe sets.

#include <cstdint>
#include <vector>

#include "uaext/funcsys.hpp"
#include "uaext/operator.hpp"

namespace uaext {

struct AnnihilatorBasis {
  SpacePtr space;
  /// Orthonormal columns; column j is the weight vector of the j-th measure.
  CMatrix weights;

  std::size_t size() const { return static_cast<std::size_t>(weights.cols()); }
  Measure measure(std::size_t j) const;
  std::vector<Measure> measures() const;
};

/// Orthonormal basis of { nu : sum_y nu_y f(y) = 0 for all f in the system }.
AnnihilatorBasis annihilator_basis(const FunctionSystem& system);

/// `count` seeded random annihilators (projections of random weight vectors
/// onto the annihilator), normalised to unit Euclidean norm. Cheap when the
/// space is large and the full basis is not needed.
AnnihilatorBasis sample_annihilators(const FunctionSystem& system, std::size_t count, std::uint64_t seed);

/// Worst |integral of a basis member| / total variation over the measures.
double annihilation_residual(const FunctionSystem& system, const CMatrix& weights);

/// mu_lambda on the source of T with integral f d(mu_lambda) = integral T(f) d(lambda).
Measure adjoint_measure(const OperatorTable& t, const Measure& lambda);
/// The same map applied column-wise to a matrix of weight vectors on T's target.
CMatrix adjoint_weights(const OperatorTable& t, const CMatrix& lambdas);
/// Column-wise pushforward of weight vectors along pi.
CMatrix pushforward_weights(const SurjectionMap& pi, const CMatrix& weights);

/// phi(b_k) for every basis member b_k.
CVector evaluation_functional(const FunctionSystem& system, std::size_t x);
/// phi o pi^* on `a_system`, given phi on `b_system` (which must contain pi^*(A)).
CVector pullback_functional(const SurjectionMap& pi, const FunctionSystem& a_system,
                            const FunctionSystem& b_system, const CVector& phi_on_b);

struct JensenReport {
  bool holds = true;
  /// max over probes of |phi(f)| - exp(integral log|f| d mu), floored at 0.
  double worst_violation = 0.0;
  std::size_t probe_count = 0;
};

/// Basis members plus every product of at most two generators that lies in
/// the span, each normalised to sup norm 1.
std::vector<CVector> default_jensen_probes(const FunctionSystem& system);

/// Checks log|phi(f)| <= integral log|f| d mu for each probe. A probe holds
/// when |phi(f)| <= exp(integral log|f| d mu) + 1e-10 * sup|f|; values below
/// 1e-300 count as log 0 = -infinity. Throws InputError when mu is not a
/// probability measure or a probe leaves the span.
JensenReport jensen_check(const Measure& mu, const CVector& phi_values, const FunctionSystem& system,
                          const std::vector<CVector>& probes);

}  // namespace uaext
