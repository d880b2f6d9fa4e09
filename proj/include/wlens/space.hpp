#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wlens/report.hpp"
#include "wlens/types.hpp"

namespace wlens {

/// Labeled finite point set with an optional cost function c(x, y) in
/// [0, inf]. The cost is not assumed to be a pq-metric; see validate_cost.
class FiniteSpace {
 public:
  explicit FiniteSpace(std::vector<std::string> labels,
                       std::optional<Matrix<double>> cost = std::nullopt);

  Index size() const { return static_cast<Index>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Index i) const { return labels_[i]; }
  std::optional<Index> index_of(const std::string& label) const;

  bool has_cost() const { return cost_.has_value(); }
  /// Throws ArgumentError when the space carries no cost.
  const Matrix<double>& cost() const;

 private:
  std::vector<std::string> labels_;
  std::optional<Matrix<double>> cost_;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

SpacePtr make_space(std::vector<std::string> labels,
                    std::optional<Matrix<double>> cost = std::nullopt);

/// Points named prefix0, prefix1, ...
SpacePtr make_space(Index n, const std::string& prefix = "x",
                    std::optional<Matrix<double>> cost = std::nullopt);

/// Same labels in the same order. Two handles to one space are trivially equal.
bool same_space(const SpacePtr& a, const SpacePtr& b);

/// pq-metric axioms of the attached cost (empty report when none attached).
LawReport validate_cost(const FiniteSpace& space, double tol = 1e-9);

enum class ProductCost {
  sum,  ///< c((y,z),(y',z')) = cY(y,y') + cZ(z,z')
  max,  ///< c((y,z),(y',z')) = max(cY(y,y'), cZ(z,z'))
};

/// Y x Z in lexicographic order, point (y, z) at index y * |Z| + z, labeled
/// "(y,z)". The cost is attached only when both factors carry one; both
/// choices restrict to cY on every slice Y x {z}.
SpacePtr product_space(const FiniteSpace& y, const FiniteSpace& z,
                       ProductCost kind = ProductCost::sum);

}  // namespace wlens
