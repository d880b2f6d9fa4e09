#pragma once

// Hand-built lenses with metrics attached, shared by the unit tests and the
// acceptance binary.

#include <string>
#include <vector>

#include "wlens/lens.hpp"
#include "wlens/random.hpp"

namespace wlens::fixtures {

struct NamedLens {
  std::string name;
  SetLens lens;
};

inline SpacePtr metric_space(InstanceGenerator& gen, Index n,
                             const std::string& prefix) {
  return make_space(n, prefix, gen.euclidean_metric(n));
}

/// pi_1: Y x Z -> Y.
inline SetLens product(InstanceGenerator& gen, Index ny, Index nz,
                       ProductCost kind = ProductCost::sum) {
  return product_projection_lens(*metric_space(gen, ny, "y"),
                                 *metric_space(gen, nz, "z"), kind);
}

inline SetLens identity(InstanceGenerator& gen, Index n) {
  return SetLens::identity(metric_space(gen, n, "x"));
}

/// X -> 1, every point lifts to itself.
inline SetLens terminal(InstanceGenerator& gen, Index n) {
  const auto X = metric_space(gen, n, "x");
  const auto one = make_space({"*"}, Matrix<double>::Zero(1, 1));
  IndexMatrix phi(n, 1);
  for (Index x = 0; x < n; ++x) phi(x, 0) = x;
  return SetLens(X, one, PointMap(static_cast<std::size_t>(n), 0), phi);
}

/// A product in disguise: six points r0..r5 over Y = {y0, y1, y2} with
/// f(r) = r mod 3 and the complement r div 3 kept by the lift. The metric
/// is the l1 product metric read through that relabeling.
inline SetLens relabeled(InstanceGenerator& gen) {
  const Matrix<double> dy = gen.euclidean_metric(3);
  const Matrix<double> dz = gen.euclidean_metric(2);
  Matrix<double> dx(6, 6);
  for (Index a = 0; a < 6; ++a)
    for (Index b = 0; b < 6; ++b) dx(a, b) = dy(a % 3, b % 3) + dz(a / 3, b / 3);
  const auto X = make_space(6, "r", dx);
  const auto Y = make_space(3, "y", dy);
  PointMap f(6);
  IndexMatrix phi(6, 3);
  for (Index r = 0; r < 6; ++r) {
    f[static_cast<std::size_t>(r)] = r % 3;
    for (Index y = 0; y < 3; ++y) phi(r, y) = y + 3 * (r / 3);
  }
  return SetLens(X, Y, std::move(f), std::move(phi));
}

/// (Y x Z) x W -> Y x Z -> Y as one composite lens, max metrics throughout.
inline SetLens stacked(InstanceGenerator& gen) {
  const auto inner = product(gen, 2, 2, ProductCost::max);
  const auto outer = product_projection_lens(*inner.domain(),
                                             *metric_space(gen, 2, "w"),
                                             ProductCost::max);
  return compose_lenses(outer, inner);
}

/// The suite used for the lifting theorem: all metric lenses.
inline std::vector<NamedLens> suite(InstanceGenerator& gen) {
  std::vector<NamedLens> out;
  out.push_back({"product 3x2 (sum)", product(gen, 3, 2)});
  out.push_back({"product 2x3 (max)", product(gen, 2, 3, ProductCost::max)});
  out.push_back({"identity 4", identity(gen, 4)});
  out.push_back({"terminal 4", terminal(gen, 4)});
  out.push_back({"relabeled product 6->3", relabeled(gen)});
  out.push_back({"stacked projection 8->2", stacked(gen)});
  return out;
}

}  // namespace wlens::fixtures
