#pragma once

// Cole extensions by adjoining the roots of a monic polynomial
//   q(x)(t) = h_0(x) + h_1(x) t + ... + h_{n-1}(x) t^{n-1} + t^n
// over a base system A on X.

#include <vector>

#include "uaext/averaging.hpp"
#include "uaext/boundary.hpp"

namespace uaext {

inline constexpr double kRootTol = 1e-10;

/// Horner evaluation of the monic polynomial with lower coefficients `h`.
Complex eval_monic(const std::vector<Complex>& h, Complex t);

/// The residual scale of the root contract: max(1, max|h_i|) (1 + |z|)^n.
double root_scale(const std::vector<Complex>& h, Complex z);

/// All n roots with multiplicity (companion-matrix eigenvalues refined by
/// Newton steps), sorted by (real, imag). Throws RootFinderError when some
/// root misses |q(z)| <= kRootTol * root_scale.
std::vector<Complex> roots_of_monic(const std::vector<Complex>& h);

struct ColeSpec {
  FunctionSystem base;
  /// h_0, ..., h_{n-1}, each in the span of `base`.
  std::vector<FunctionTable> coefficients;
  /// 0 selects n * (base cap) + n - 1, enough for every p_q^j a with j < n.
  int extension_degree_cap = 0;
  double merge_tol = kDefaultMergeTol;
};

struct ColeBundle {
  ExtensionBundle bundle;
  /// Roots with multiplicity, one list per base point.
  std::vector<std::vector<Complex>> root_slots;
  FunctionTable p_q;
  std::vector<FunctionTable> coefficients;
  int degree = 0;
};

/// Root slots for every base point; the parallel version splits base points
/// across threads and agrees bit for bit with the serial one.
std::vector<std::vector<Complex>> root_slots(const std::vector<FunctionTable>& coefficients);
std::vector<std::vector<Complex>> root_slots_serial(const std::vector<FunctionTable>& coefficients);

/// X^q = deduplicated (x, root) pairs; pi_q the first-coordinate projection;
/// A^q generated by p_q (weight 1) and the pulled-back base generators
/// (weight n); T the root average with multiplicity weights.
ColeBundle cole_extend(const ColeSpec& spec);

struct VietaReport {
  /// max_x |sum of roots + h_{n-1}(x)|.
  double sum_residual = 0.0;
  /// max_x |product of roots - (-1)^n h_0(x)| / max(1, max_i |h_i(x)|).
  double product_residual = 0.0;
  /// max over slots of |q(z)| / root_scale.
  double root_residual = 0.0;
};
VietaReport vieta_check(const ColeBundle& cb);

/// Generalised Cole extension clauses plus fiber size, full span on each
/// fiber, Vieta consistency and the Shilov pullback comparison.
Certificate cole_report(const ColeBundle& cb, const std::vector<CVector>& probes, const CertTolerances& tol = {},
                        std::uint64_t seed = kDefaultSeed, double choquet_tol = kChoquetTol);

/// Stacks `upper` (an extension of lower.b) on top of `lower`: the composite
/// map is lower.pi o upper.pi and the composite operator lower.T o upper.T.
ExtensionBundle compose_extensions(const ExtensionBundle& lower, const ExtensionBundle& upper);

}  // namespace uaext
