#pragma once

// Seeded instance generation for randomized law suites. Uniform draws are
// built from raw 64-bit engine output, so a seed reproduces the same
// instances with any standard library.

#include <cstdint>
#include <random>

#include "wlens/prob.hpp"

namespace wlens {

class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  /// Uniform integer in [lo, hi].
  Index integer(Index lo, Index hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<Index>(engine_() % span);
  }
  bool chance(double probability) { return uniform() < probability; }

  /// Probability vector; each entry is zero with probability `sparsity`,
  /// but at least one entry stays positive.
  Vector<double> probability_vector(Index n, double sparsity = 0.0) {
    Vector<double> v(n);
    for (Index i = 0; i < n; ++i)
      v(i) = chance(sparsity) ? 0.0 : 0.05 + uniform();
    if (v.sum() == 0.0) v(integer(0, n - 1)) = 1.0;
    return v / v.sum();
  }

  Measure measure(const SpacePtr& space, double sparsity = 0.0) {
    return Measure(space, probability_vector(space->size(), sparsity));
  }

  Kernel kernel(const SpacePtr& from, const SpacePtr& to,
                double sparsity = 0.0) {
    Matrix<double> rows(from->size(), to->size());
    for (Index x = 0; x < from->size(); ++x)
      rows.row(x) = probability_vector(to->size(), sparsity).transpose();
    return Kernel(from, to, std::move(rows));
  }

  /// Coupling with first marginal p: joint(x, .) = p(x) k(. | x).
  Coupling coupling_from(const Measure& p, const SpacePtr& target,
                         double sparsity = 0.0) {
    const Kernel k = kernel(p.space(), target, sparsity);
    return Coupling::from_joint(p.space(), target,
                                p.mass().asDiagonal() * k.rows());
  }

  /// Random joint on a x b, marginals read off.
  Coupling coupling(const SpacePtr& a, const SpacePtr& b,
                    double sparsity = 0.0) {
    const Vector<double> flat = probability_vector(a->size() * b->size(), sparsity);
    Matrix<double> joint(a->size(), b->size());
    for (Index i = 0; i < a->size(); ++i)
      for (Index j = 0; j < b->size(); ++j) joint(i, j) = flat(i * b->size() + j);
    return Coupling::from_joint(a, b, std::move(joint));
  }

  /// Euclidean distances between random points in [0, 1]^dim.
  Matrix<double> euclidean_metric(Index n, Index dim = 2) {
    Matrix<double> pts(n, dim);
    for (Index i = 0; i < n; ++i)
      for (Index d = 0; d < dim; ++d) pts(i, d) = uniform();
    Matrix<double> out(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) out(i, j) = (pts.row(i) - pts.row(j)).norm();
    return out;
  }

  /// Asymmetric pq-metric: shortest-path closure of random arc weights.
  /// Arcs are missing with probability `missing`, which can leave inf.
  Matrix<double> pq_metric(Index n, double missing = 0.0) {
    Matrix<double> d(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        d(i, j) = i == j ? 0.0 : (chance(missing) ? kInf<double> : 0.1 + uniform());
    for (Index k = 0; k < n; ++k)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return d;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wlens
