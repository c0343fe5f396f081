#include "uaext/cole.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "uaext/errors.hpp"

namespace uaext {

Complex eval_monic(const std::vector<Complex>& h, Complex t) {
  Complex v = 1.0;
  for (auto it = h.rbegin(); it != h.rend(); ++it) v = v * t + *it;
  return v;
}

namespace {

Complex eval_monic_derivative(const std::vector<Complex>& h, Complex t) {
  const std::size_t n = h.size();
  Complex v = static_cast<double>(n);
  for (std::size_t k = n - 1; k >= 1; --k) v = v * t + static_cast<double>(k) * h[k];
  return v;
}

}  // namespace

double root_scale(const std::vector<Complex>& h, Complex z) {
  double m = 1.0;
  for (const auto& c : h) m = std::max(m, std::abs(c));
  return m * std::pow(1.0 + std::abs(z), static_cast<double>(h.size()));
}

std::vector<Complex> roots_of_monic(const std::vector<Complex>& h) {
  const std::size_t n = h.size();
  if (n == 0) throw InputError("roots_of_monic: degree must be at least 1");
  for (const auto& c : h)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InputError("roots_of_monic: non-finite coefficient");
  std::vector<Complex> roots(n);
  if (n == 1) {
    roots[0] = -h[0];
  } else {
    const auto ni = static_cast<Eigen::Index>(n);
    CMatrix companion = CMatrix::Zero(ni, ni);
    for (Eigen::Index i = 1; i < ni; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < ni; ++i) companion(i, ni - 1) = -h[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<CMatrix> es(companion, false);
    if (es.info() != Eigen::Success) throw RootFinderError("roots_of_monic: eigenvalue iteration failed", INFINITY);
    for (std::size_t i = 0; i < n; ++i) roots[i] = es.eigenvalues()[static_cast<Eigen::Index>(i)];
  }
  double worst = 0.0;
  for (auto& z : roots) {
    double res = std::abs(eval_monic(h, z));
    for (int step = 0; step < 8 && res > 0.0; ++step) {
      const Complex d = eval_monic_derivative(h, z);
      if (d == Complex(0.0)) break;
      const Complex cand = z - eval_monic(h, z) / d;
      const double cres = std::abs(eval_monic(h, cand));
      if (!(cres < res)) break;
      z = cand;
      res = cres;
    }
    worst = std::max(worst, res / root_scale(h, z));
  }
  if (worst > kRootTol) {
    std::ostringstream os;
    os << "roots_of_monic: residual " << worst << " exceeds " << kRootTol;
    throw RootFinderError(os.str(), worst);
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

namespace {

void check_coefficients(const std::vector<FunctionTable>& coefficients) {
  if (coefficients.empty()) throw InputError("cole: at least one coefficient is required");
  for (const auto& c : coefficients) require_same_space(c.space, coefficients.front().space, "cole coefficients");
}

std::vector<Complex> coefficients_at(const std::vector<FunctionTable>& coefficients, std::size_t x) {
  std::vector<Complex> h(coefficients.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = coefficients[i].values[static_cast<Eigen::Index>(x)];
  return h;
}

[[noreturn]] void rethrow_at(const RootFinderError& e, const FiniteSpace& space, std::size_t x) {
  throw RootFinderError(std::string(e.what()) + " at base point " + space.point(x).label, e.worst_residual());
}

}  // namespace

std::vector<std::vector<Complex>> root_slots_serial(const std::vector<FunctionTable>& coefficients) {
  check_coefficients(coefficients);
  const auto& space = *coefficients.front().space;
  std::vector<std::vector<Complex>> out(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) {
    try {
      out[x] = roots_of_monic(coefficients_at(coefficients, x));
    } catch (const RootFinderError& e) {
      rethrow_at(e, space, x);
    }
  }
  return out;
}

std::vector<std::vector<Complex>> root_slots(const std::vector<FunctionTable>& coefficients) {
  check_coefficients(coefficients);
  const auto& space = *coefficients.front().space;
  const auto n = static_cast<std::ptrdiff_t>(space.size());
  std::vector<std::vector<Complex>> out(space.size());
  std::vector<std::exception_ptr> errors(space.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < n; ++x) {
    const auto xi = static_cast<std::size_t>(x);
    try {
      out[xi] = roots_of_monic(coefficients_at(coefficients, xi));
    } catch (...) {
      errors[xi] = std::current_exception();
    }
  }
  for (std::size_t x = 0; x < errors.size(); ++x) {
    if (!errors[x]) continue;
    try {
      std::rethrow_exception(errors[x]);
    } catch (const RootFinderError& e) {
      rethrow_at(e, space, x);
    }
  }
  return out;
}

ColeBundle cole_extend(const ColeSpec& spec) {
  const FunctionSystem& base = spec.base;
  const SpacePtr& x_space = base.space();
  const std::size_t n = spec.coefficients.size();
  if (n < 2) throw InputError("cole_extend: the polynomial degree must be at least 2");
  for (std::size_t i = 0; i < n; ++i) {
    require_same_space(spec.coefficients[i].space, x_space, "cole_extend coefficient");
    const double r = span_residual(base, spec.coefficients[i]);
    if (r > 1e-9) {
      std::ostringstream os;
      os << "cole_extend: coefficient h_" << i << " is not in the base span (residual " << r << ")";
      throw InputError(os.str());
    }
  }
  const int ext_cap = spec.extension_degree_cap > 0 ? spec.extension_degree_cap
                                                    : static_cast<int>(n) * base.degree_cap() + static_cast<int>(n) - 1;

  const auto slots = root_slots(spec.coefficients);

  std::vector<std::vector<Complex>> raw;
  raw.reserve(x_space->size() * n);
  IndexList raw_base;
  for (std::size_t x = 0; x < x_space->size(); ++x) {
    for (const auto& z : slots[x]) {
      std::vector<Complex> c = x_space->point(x).coords;
      c.push_back(z);
      raw.push_back(std::move(c));
      raw_base.push_back(x);
    }
  }
  SpaceBuild built = build_space(raw, spec.merge_tol, "q");
  const SpacePtr& y_space = built.space;
  IndexList assignment(y_space->size());
  for (std::size_t i = 0; i < raw.size(); ++i) assignment[built.point_of_raw[i]] = raw_base[i];
  SurjectionMap pi(y_space, x_space, assignment);

  std::vector<SparseRow> rows(x_space->size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto& row = rows[raw_base[i]];
    const std::size_t y = built.point_of_raw[i];
    auto it = std::find_if(row.begin(), row.end(), [&](const RowEntry& e) { return e.index == y; });
    if (it == row.end())
      row.push_back({y, 1.0 / static_cast<double>(n)});
    else
      it->weight += 1.0 / static_cast<double>(n);
  }
  for (auto& row : rows)
    std::sort(row.begin(), row.end(), [](const RowEntry& a, const RowEntry& b) { return a.index < b.index; });
  OperatorTable t(y_space, x_space, std::move(rows));

  const std::size_t last = y_space->arity() - 1;
  CVector p(static_cast<Eigen::Index>(y_space->size()));
  for (std::size_t y = 0; y < y_space->size(); ++y) p[static_cast<Eigen::Index>(y)] = y_space->coord(y, last);
  FunctionTable p_q(y_space, p, "p_q");

  std::vector<FunctionTable> gens{p_q};
  std::vector<int> weights{1};
  if (base.generators().empty()) {
    for (std::size_t k = 0; k < base.dim(); ++k) {
      gens.emplace_back(y_space, pull_back(pi, base.basis().col(static_cast<Eigen::Index>(k))), "a" + std::to_string(k));
      weights.push_back(static_cast<int>(n));
    }
  } else {
    for (std::size_t i = 0; i < base.generators().size(); ++i) {
      const auto& g = base.generators()[i];
      gens.emplace_back(y_space, pull_back(pi, g.values), g.name);
      weights.push_back(static_cast<int>(n) * base.generator_weights()[i]);
    }
  }
  FunctionSystem aq = generate_system(y_space, std::move(gens), ext_cap, base.rank_tol(), std::move(weights));

  nlohmann::json meta;
  meta["degree"] = n;
  meta["extension_degree_cap"] = ext_cap;
  meta["generator_weights"] = aq.generator_weights();
  ExtensionBundle bundle{"cole", base, std::move(aq), std::move(pi), std::move(t), {}, meta};
  return {std::move(bundle), slots, std::move(p_q), spec.coefficients, static_cast<int>(n)};
}

VietaReport vieta_check(const ColeBundle& cb) {
  VietaReport r;
  const std::size_t n = static_cast<std::size_t>(cb.degree);
  for (std::size_t x = 0; x < cb.root_slots.size(); ++x) {
    const auto h = coefficients_at(cb.coefficients, x);
    Complex sum = 0.0, prod = 1.0;
    for (const auto& z : cb.root_slots[x]) {
      sum += z;
      prod *= z;
      r.root_residual = std::max(r.root_residual, std::abs(eval_monic(h, z)) / root_scale(h, z));
    }
    double scale = 1.0;
    for (const auto& c : h) scale = std::max(scale, std::abs(c));
    r.sum_residual = std::max(r.sum_residual, std::abs(sum + h[n - 1]));
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    r.product_residual = std::max(r.product_residual, std::abs(prod - sign * h[0]) / scale);
  }
  return r;
}

Certificate cole_report(const ColeBundle& cb, const std::vector<CVector>& probes, const CertTolerances& tol,
                        std::uint64_t seed, double choquet_tol) {
  const ExtensionBundle& bundle = cb.bundle;
  Certificate cert = gce_certificate(bundle, probes, tol, seed);
  cert.name = "cole_extension";

  const auto n = static_cast<std::size_t>(cb.degree);
  const std::size_t max_fiber = bundle.pi.max_fiber_size();
  std::ostringstream fiber_note;
  fiber_note << "largest fiber " << max_fiber << ", degree " << n;
  Clause fiber;
  fiber.name = "fiber_size";
  fiber.residual = static_cast<double>(max_fiber);
  fiber.tolerance = static_cast<double>(n);
  fiber.pass = max_fiber <= n;
  fiber.note = fiber_note.str();
  cert.clauses.push_back(fiber);

  std::size_t deficient = 0;
  for (const auto& fib : bundle.pi.fibers()) {
    CMatrix rows(static_cast<Eigen::Index>(fib.size()), bundle.b.basis().cols());
    for (std::size_t i = 0; i < fib.size(); ++i)
      rows.row(static_cast<Eigen::Index>(i)) = bundle.b.basis().row(static_cast<Eigen::Index>(fib[i]));
    Eigen::ColPivHouseholderQR<CMatrix> qr(rows);
    qr.setThreshold(bundle.b.rank_tol());
    if (static_cast<std::size_t>(qr.rank()) != fib.size()) ++deficient;
  }
  Clause span;
  span.name = "fiber_full_span";
  span.residual = static_cast<double>(deficient);
  span.pass = deficient == 0;
  span.probe_count = bundle.pi.fibers().size();
  span.note = "fibers where A^q does not restrict to the full function space";
  cert.clauses.push_back(span);

  const VietaReport v = vieta_check(cb);
  Clause vieta;
  vieta.name = "vieta";
  vieta.residual = std::max(v.sum_residual, v.product_residual);
  vieta.tolerance = 1e-10;
  vieta.pass = vieta.residual <= vieta.tolerance;
  cert.clauses.push_back(vieta);
  Clause roots;
  roots.name = "root_residual";
  roots.residual = v.root_residual;
  roots.tolerance = kRootTol;
  roots.pass = v.root_residual <= kRootTol;
  cert.clauses.push_back(roots);

  const IndexList gamma_a = choquet_set(bundle.a, choquet_tol);
  const IndexList gamma_b = choquet_set(bundle.b, choquet_tol);
  IndexList pulled;
  std::vector<bool> in_a(bundle.a.size(), false);
  for (auto x : gamma_a) in_a[x] = true;
  for (std::size_t y = 0; y < bundle.b.size(); ++y)
    if (in_a[bundle.pi(y)]) pulled.push_back(y);
  IndexList diff;
  std::set_symmetric_difference(gamma_b.begin(), gamma_b.end(), pulled.begin(), pulled.end(), std::back_inserter(diff));
  Clause shilov;
  shilov.name = "shilov_pullback";
  shilov.residual = static_cast<double>(diff.size());
  shilov.pass = diff.empty();
  shilov.probe_count = bundle.b.size();
  std::ostringstream sn;
  sn << "|Gamma(A^q)| = " << gamma_b.size() << ", |pi^-1(Gamma(A))| = " << pulled.size();
  shilov.note = sn.str();
  cert.clauses.push_back(shilov);

  Clause nat;
  nat.name = "naturality";
  nat.pass = true;
  nat.applicable = false;
  nat.note = "character spaces are not modelled";
  cert.clauses.push_back(nat);
  return cert;
}

ExtensionBundle compose_extensions(const ExtensionBundle& lower, const ExtensionBundle& upper) {
  require_same_space(upper.pi.target(), lower.pi.source(), "compose_extensions");
  std::optional<OperatorTable> t;
  if (lower.t && upper.t) t = lower.t->after(*upper.t);
  nlohmann::json meta;
  meta["lower"] = lower.name;
  meta["upper"] = upper.name;
  return {lower.name + "+" + upper.name, lower.a, upper.b, lower.pi.after(upper.pi), std::move(t), {}, meta};
}

}  // namespace uaext
