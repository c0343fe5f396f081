#include "uaext/operator.hpp"

#include <algorithm>
#include <map>

#include "uaext/errors.hpp"

namespace uaext {

OperatorTable::OperatorTable(SpacePtr source, SpacePtr target, std::vector<SparseRow> rows)
    : source_(std::move(source)), target_(std::move(target)), rows_(std::move(rows)) {
  if (!source_ || !target_) throw InputError("operator needs source and target spaces");
  if (rows_.size() != target_->size()) throw InputError("operator row count does not match target space");
  for (auto& row : rows_) {
    std::erase_if(row, [](const RowEntry& e) { return e.weight == Complex(0.0); });
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k].index >= source_->size()) throw InputError("operator row index out of range");
      if (k > 0 && row[k].index <= row[k - 1].index) throw InputError("operator row indices must be strictly increasing");
      if (!std::isfinite(row[k].weight.real()) || !std::isfinite(row[k].weight.imag()))
        throw InputError("operator weight is not finite");
    }
  }
}

OperatorTable OperatorTable::from_measures(SpacePtr source, SpacePtr target, const std::vector<Measure>& rows) {
  std::vector<SparseRow> sparse(rows.size());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    require_same_space(rows[x].space(), source, "operator row measure");
    const CVector& w = rows[x].weights();
    for (Eigen::Index y = 0; y < w.size(); ++y)
      if (w[y] != Complex(0.0)) sparse[x].push_back({static_cast<std::size_t>(y), w[y]});
  }
  return OperatorTable(std::move(source), std::move(target), std::move(sparse));
}

OperatorTable OperatorTable::identity(const SpacePtr& space) {
  std::vector<SparseRow> rows(space->size());
  for (std::size_t x = 0; x < rows.size(); ++x) rows[x].push_back({x, 1.0});
  return OperatorTable(space, space, std::move(rows));
}

OperatorTable OperatorTable::composition_operator(const SurjectionMap& pi) {
  std::vector<SparseRow> rows(pi.source()->size());
  for (std::size_t y = 0; y < rows.size(); ++y) rows[y].push_back({pi(y), 1.0});
  return OperatorTable(pi.target(), pi.source(), std::move(rows));
}

Measure OperatorTable::row_measure(std::size_t x) const {
  CVector w = CVector::Zero(static_cast<Eigen::Index>(source_->size()));
  for (const auto& e : rows_.at(x)) w[static_cast<Eigen::Index>(e.index)] = e.weight;
  return Measure(source_, std::move(w));
}

CVector OperatorTable::apply(const CVector& f) const {
  if (static_cast<std::size_t>(f.size()) != source_->size()) throw InputError("function does not match operator source");
  CVector out(static_cast<Eigen::Index>(rows_.size()));
#pragma omp parallel for schedule(static) if (rows_.size() > 2048)
  for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(rows_.size()); ++x) {
    Complex s = 0.0;
    for (const auto& e : rows_[static_cast<std::size_t>(x)]) s += e.weight * f[static_cast<Eigen::Index>(e.index)];
    out[x] = s;
  }
  return out;
}

double OperatorTable::row_total_variation(std::size_t x) const {
  double s = 0.0;
  for (const auto& e : rows_.at(x)) s += std::abs(e.weight);
  return s;
}

OperatorTable OperatorTable::after(const OperatorTable& inner) const {
  require_same_space(inner.target(), source_, "operator composition");
  std::vector<SparseRow> rows(rows_.size());
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    std::map<std::size_t, Complex> acc;
    for (const auto& e : rows_[x])
      for (const auto& g : inner.row(e.index)) acc[g.index] += e.weight * g.weight;
    for (const auto& [idx, w] : acc) rows[x].push_back({idx, w});
  }
  return OperatorTable(inner.source(), target_, std::move(rows));
}

OperatorTable OperatorTable::combine(Complex a, const OperatorTable& other, Complex b) const {
  require_same_space(other.source(), source_, "operator combination");
  require_same_space(other.target(), target_, "operator combination");
  std::vector<SparseRow> rows(rows_.size());
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    std::map<std::size_t, Complex> acc;
    for (const auto& e : rows_[x]) acc[e.index] += a * e.weight;
    for (const auto& e : other.rows_[x]) acc[e.index] += b * e.weight;
    for (const auto& [idx, w] : acc) rows[x].push_back({idx, w});
  }
  return OperatorTable(source_, target_, std::move(rows));
}

OperatorTable OperatorTable::scaled_row(std::size_t x, Complex factor) const {
  auto rows = rows_;
  for (auto& e : rows.at(x)) e.weight *= factor;
  return OperatorTable(source_, target_, std::move(rows));
}

double OperatorTable::unital_residual() const {
  double worst = 0.0;
  for (const auto& row : rows_) {
    Complex s = 0.0;
    for (const auto& e : row) s += e.weight;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double OperatorTable::section_residual(const SurjectionMap& pi) const {
  require_same_space(pi.source(), source_, "section residual");
  require_same_space(pi.target(), target_, "section residual");
  double worst = 0.0;
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    std::map<std::size_t, Complex> pushed;
    for (const auto& e : rows_[x]) pushed[pi(e.index)] += e.weight;
    double r = 0.0;
    bool seen_x = false;
    for (const auto& [z, w] : pushed) {
      if (z == x) {
        r += std::abs(w - 1.0);
        seen_x = true;
      } else {
        r += std::abs(w);
      }
    }
    if (!seen_x) r += 1.0;
    worst = std::max(worst, r);
  }
  return worst;
}

double OperatorTable::off_fiber_mass(const SurjectionMap& pi) const {
  require_same_space(pi.source(), source_, "off-fiber mass");
  double worst = 0.0;
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    double m = 0.0;
    for (const auto& e : rows_[x])
      if (pi(e.index) != x) m += std::abs(e.weight);
    worst = std::max(worst, m);
  }
  return worst;
}

double OperatorTable::max_difference(const OperatorTable& other) const {
  const OperatorTable d = combine(1.0, other, -1.0);
  double worst = 0.0;
  for (const auto& row : d.rows())
    for (const auto& e : row) worst = std::max(worst, std::abs(e.weight));
  return worst;
}

double operator_norm(const OperatorTable& t) {
  double worst = 0.0;
  for (std::size_t x = 0; x < t.rows().size(); ++x) worst = std::max(worst, t.row_total_variation(x));
  return worst;
}

}  // namespace uaext
