#include "wlens/space.hpp"

#include <algorithm>
#include <set>

#include "wlens/errors.hpp"
#include "wlens/wcat.hpp"

namespace wlens {

FiniteSpace::FiniteSpace(std::vector<std::string> labels,
                         std::optional<Matrix<double>> cost)
    : labels_(std::move(labels)), cost_(std::move(cost)) {
  if (labels_.empty()) throw StructuralError("space: no points");
  std::set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second)
      throw StructuralError("space: duplicate label '" + l + "'");
  if (cost_) {
    if (cost_->rows() != size() || cost_->cols() != size())
      throw StructuralError("space: cost matrix is not " +
                            std::to_string(size()) + "x" +
                            std::to_string(size()));
    for (Index i = 0; i < size(); ++i)
      for (Index j = 0; j < size(); ++j)
        if (!is_ext_nonneg((*cost_)(i, j)))
          throw StructuralError("space: negative or NaN cost at (" +
                                labels_[i] + ", " + labels_[j] + ")");
  }
}

std::optional<Index> FiniteSpace::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Index>(it - labels_.begin());
}

const Matrix<double>& FiniteSpace::cost() const {
  if (!cost_) throw ArgumentError("space carries no cost function");
  return *cost_;
}

SpacePtr make_space(std::vector<std::string> labels,
                    std::optional<Matrix<double>> cost) {
  return std::make_shared<const FiniteSpace>(std::move(labels), std::move(cost));
}

SpacePtr make_space(Index n, const std::string& prefix,
                    std::optional<Matrix<double>> cost) {
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return make_space(std::move(labels), std::move(cost));
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && a->labels() == b->labels());
}

LawReport validate_cost(const FiniteSpace& space, double tol) {
  if (!space.has_cost()) return {};
  return check_pq_metric(PQMetric{space.labels(), space.cost()}, tol);
}

SpacePtr product_space(const FiniteSpace& y, const FiniteSpace& z,
                       ProductCost kind) {
  const Index ny = y.size(), nz = z.size();
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(ny * nz));
  for (Index a = 0; a < ny; ++a)
    for (Index b = 0; b < nz; ++b)
      labels.push_back("(" + y.label(a) + "," + z.label(b) + ")");
  if (!y.has_cost() || !z.has_cost()) return make_space(std::move(labels));

  Matrix<double> cost(ny * nz, ny * nz);
  for (Index a = 0; a < ny; ++a)
    for (Index b = 0; b < nz; ++b)
      for (Index a2 = 0; a2 < ny; ++a2)
        for (Index b2 = 0; b2 < nz; ++b2) {
          const double cy = y.cost()(a, a2), cz = z.cost()(b, b2);
          cost(a * nz + b, a2 * nz + b2) =
              kind == ProductCost::sum ? cy + cz : std::max(cy, cz);
        }
  return make_space(std::move(labels), std::move(cost));
}

}  // namespace wlens
