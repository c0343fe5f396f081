#include "uaext/measures.hpp"

#include <cmath>

#include "uaext/errors.hpp"
#include "uaext/random.hpp"

namespace uaext {

Measure AnnihilatorBasis::measure(std::size_t j) const {
  return Measure(space, weights.col(static_cast<Eigen::Index>(j)));
}

std::vector<Measure> AnnihilatorBasis::measures() const {
  std::vector<Measure> out;
  out.reserve(size());
  for (std::size_t j = 0; j < size(); ++j) out.push_back(measure(j));
  return out;
}

AnnihilatorBasis annihilator_basis(const FunctionSystem& system) {
  const auto n = static_cast<Eigen::Index>(system.size());
  const auto r = static_cast<Eigen::Index>(system.dim());
  // nu annihilates b iff nu is Hermitian-orthogonal to conj(b); the basis is
  // orthonormal, so the trailing columns of a full QR of conj(B) span the rest.
  const CMatrix cb = system.basis().conjugate();
  Eigen::HouseholderQR<CMatrix> qr(cb);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return {system.space(), q.rightCols(n - r)};
}

AnnihilatorBasis sample_annihilators(const FunctionSystem& system, std::size_t count, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(system.size());
  const CMatrix cb = system.basis().conjugate();
  Rng rng(seed);
  CMatrix w(n, static_cast<Eigen::Index>(count));
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    CVector r = rng.complex_vector(n);
    r -= cb * (cb.adjoint() * r);
    r -= cb * (cb.adjoint() * r);
    const double nr = r.norm();
    w.col(j) = nr > 0.0 ? CVector(r / nr) : r;
  }
  return {system.space(), w};
}

double annihilation_residual(const FunctionSystem& system, const CMatrix& weights) {
  double worst = 0.0;
  const CMatrix integrals = system.basis().transpose() * weights;
  for (Eigen::Index j = 0; j < weights.cols(); ++j) {
    const double tv = weights.col(j).cwiseAbs().sum();
    if (tv == 0.0) continue;
    worst = std::max(worst, integrals.col(j).cwiseAbs().maxCoeff() / tv);
  }
  return worst;
}

Measure adjoint_measure(const OperatorTable& t, const Measure& lambda) {
  require_same_space(lambda.space(), t.target(), "adjoint measure");
  CMatrix lam = lambda.weights();
  return Measure(t.source(), adjoint_weights(t, lam).col(0));
}

CMatrix adjoint_weights(const OperatorTable& t, const CMatrix& lambdas) {
  if (static_cast<std::size_t>(lambdas.rows()) != t.target()->size())
    throw InputError("adjoint: weights do not match operator target");
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(t.source()->size()), lambdas.cols());
  for (std::size_t x = 0; x < t.rows().size(); ++x)
    for (const auto& e : t.row(x))
      out.row(static_cast<Eigen::Index>(e.index)) += e.weight * lambdas.row(static_cast<Eigen::Index>(x));
  return out;
}

CMatrix pushforward_weights(const SurjectionMap& pi, const CMatrix& weights) {
  if (static_cast<std::size_t>(weights.rows()) != pi.source()->size())
    throw InputError("pushforward: weights do not match map source");
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(pi.target()->size()), weights.cols());
  for (std::size_t y = 0; y < pi.source()->size(); ++y)
    out.row(static_cast<Eigen::Index>(pi(y))) += weights.row(static_cast<Eigen::Index>(y));
  return out;
}

CVector evaluation_functional(const FunctionSystem& system, std::size_t x) {
  if (x >= system.size()) throw InputError("evaluation point out of range");
  return system.basis().row(static_cast<Eigen::Index>(x)).transpose();
}

CVector pullback_functional(const SurjectionMap& pi, const FunctionSystem& a_system, const FunctionSystem& b_system,
                            const CVector& phi_on_b) {
  require_same_space(pi.target(), a_system.space(), "pullback functional");
  require_same_space(pi.source(), b_system.space(), "pullback functional");
  CVector out(static_cast<Eigen::Index>(a_system.dim()));
  for (std::size_t k = 0; k < a_system.dim(); ++k) {
    const CVector pulled = pull_back(pi, a_system.basis().col(static_cast<Eigen::Index>(k)));
    if (span_residual(b_system, pulled) > 1e-9) throw InputError("pullback functional: pi^*(A) is not inside B");
    out[static_cast<Eigen::Index>(k)] = b_system.coefficients(pulled).cwiseProduct(phi_on_b).sum();
  }
  return out;
}

std::vector<CVector> default_jensen_probes(const FunctionSystem& system) {
  std::vector<CVector> probes;
  auto add = [&](const CVector& f) {
    const double s = sup_norm(f);
    if (s > 0.0) probes.push_back(f / s);
  };
  for (std::size_t k = 0; k < system.dim(); ++k) add(system.basis().col(static_cast<Eigen::Index>(k)));
  const auto& gens = system.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    add(gens[i].values);
    for (std::size_t j = i; j < gens.size(); ++j) {
      const CVector prod = gens[i].values.cwiseProduct(gens[j].values);
      if (span_residual(system, prod) <= 1e-10 * std::max(1.0, prod.norm())) add(prod);
    }
  }
  return probes;
}

JensenReport jensen_check(const Measure& mu, const CVector& phi_values, const FunctionSystem& system,
                          const std::vector<CVector>& probes) {
  require_same_space(mu.space(), system.space(), "jensen check");
  if (!mu.is_probability()) throw InputError("jensen check needs a probability measure");
  if (static_cast<std::size_t>(phi_values.size()) != system.dim())
    throw InputError("jensen check: functional length does not match the system");
  const IndexList support = mu.support();
  JensenReport report;
  report.probe_count = probes.size();
  for (const auto& f : probes) {
    if (static_cast<std::size_t>(f.size()) != system.size()) throw InputError("jensen probe has the wrong length");
    const double scale = sup_norm(f);
    if (span_residual(system, f) > 1e-9 * std::max(1.0, f.norm())) throw InputError("jensen probe is not in the span");
    const double phi = std::abs(system.coefficients(f).cwiseProduct(phi_values).sum());
    double log_integral = 0.0;
    bool minus_infinity = false;
    for (std::size_t y : support) {
      const double m = std::abs(f[static_cast<Eigen::Index>(y)]);
      if (m < 1e-300) {
        minus_infinity = true;
        break;
      }
      log_integral += mu.weights()[static_cast<Eigen::Index>(y)].real() * std::log(m);
    }
    const double bound = minus_infinity ? 0.0 : std::exp(log_integral);
    const double violation = std::max(0.0, phi - bound);
    report.worst_violation = std::max(report.worst_violation, violation);
    if (violation > 1e-10 * scale) report.holds = false;
  }
  return report;
}

}  // namespace uaext
