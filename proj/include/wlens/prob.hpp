#pragma once

// Finite probability: measures, couplings (transport plans), Markov kernels,
// conditionals and gluing. All types are immutable values templated on the
// scalar; the double instantiations are aliased at the bottom.

#include <cmath>
#include <span>
#include <string>

#include "wlens/errors.hpp"
#include "wlens/extended.hpp"
#include "wlens/report.hpp"
#include "wlens/space.hpp"
#include "wlens/types.hpp"

namespace wlens {

/// Tolerance on every normalization invariant (sums to one, marginals).
template <typename Scalar>
inline constexpr Scalar kMassTol = Scalar(1e-12);

namespace detail {

inline std::string pt(const SpacePtr& s, Index i) { return s->label(i); }

template <typename Scalar>
std::string num(Scalar v) {
  return format_number(static_cast<double>(v));
}

template <typename Scalar>
void require_probability_vector(const auto& v, const SpacePtr& space,
                                const std::string& what) {
  for (Index i = 0; i < v.size(); ++i)
    if (std::isnan(v(i)) || v(i) < Scalar(0))
      throw InvariantError(what + ": negative mass " + num(v(i)) + " at " +
                           pt(space, i));
  const Scalar total = v.sum();
  if (std::abs(total - Scalar(1)) > kMassTol<Scalar>)
    throw InvariantError(what + ": masses sum to " + num(total) +
                         ", not 1");
}

}  // namespace detail

template <typename Scalar>
class BasicMeasure {
 public:
  BasicMeasure(SpacePtr space, Vector<Scalar> mass)
      : space_(std::move(space)), mass_(std::move(mass)) {
    if (!space_) throw StructuralError("measure: null space");
    if (mass_.size() != space_->size())
      throw StructuralError("measure: " + std::to_string(mass_.size()) +
                            " masses for a space of " +
                            std::to_string(space_->size()) + " points");
    detail::require_probability_vector<Scalar>(mass_, space_, "measure");
  }

  static BasicMeasure dirac(SpacePtr space, Index point) {
    Vector<Scalar> m = Vector<Scalar>::Zero(space->size());
    m(point) = Scalar(1);
    return BasicMeasure(std::move(space), std::move(m));
  }

  static BasicMeasure uniform(SpacePtr space) {
    const Index n = space->size();
    return BasicMeasure(std::move(space),
                        Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n)));
  }

  const SpacePtr& space() const { return space_; }
  const Vector<Scalar>& mass() const { return mass_; }
  Scalar operator()(Index i) const { return mass_(i); }
  Index size() const { return mass_.size(); }

 private:
  SpacePtr space_;
  Vector<Scalar> mass_;
};

/// Joint distribution on source x target whose marginals are the source and
/// target measures, each within kMassTol.
template <typename Scalar>
class BasicCoupling {
 public:
  BasicCoupling(BasicMeasure<Scalar> source, BasicMeasure<Scalar> target,
                Matrix<Scalar> joint)
      : source_(std::move(source)),
        target_(std::move(target)),
        joint_(std::move(joint)) {
    if (joint_.rows() != source_.size() || joint_.cols() != target_.size())
      throw StructuralError("coupling: joint is " +
                            std::to_string(joint_.rows()) + "x" +
                            std::to_string(joint_.cols()) + ", expected " +
                            std::to_string(source_.size()) + "x" +
                            std::to_string(target_.size()));
    for (Index i = 0; i < joint_.rows(); ++i)
      for (Index j = 0; j < joint_.cols(); ++j)
        if (std::isnan(joint_(i, j)) || joint_(i, j) < Scalar(0))
          throw InvariantError("coupling: negative mass " +
                               detail::num(joint_(i, j)) + " at (" +
                               detail::pt(source_.space(), i) + ", " +
                               detail::pt(target_.space(), j) + ")");
    const Vector<Scalar> rows = joint_.rowwise().sum();
    for (Index i = 0; i < rows.size(); ++i)
      if (std::abs(rows(i) - source_(i)) > kMassTol<Scalar>)
        throw InvariantError("coupling: row marginal " +
                             detail::num(rows(i)) + " != source mass " +
                             detail::num(source_(i)) + " at " +
                             detail::pt(source_.space(), i));
    const Vector<Scalar> cols = joint_.colwise().sum().transpose();
    for (Index j = 0; j < cols.size(); ++j)
      if (std::abs(cols(j) - target_(j)) > kMassTol<Scalar>)
        throw InvariantError("coupling: column marginal " +
                             detail::num(cols(j)) + " != target mass " +
                             detail::num(target_(j)) + " at " +
                             detail::pt(target_.space(), j));
  }

  /// Marginals read off the joint.
  static BasicCoupling from_joint(SpacePtr source_space, SpacePtr target_space,
                                  Matrix<Scalar> joint) {
    if (joint.rows() != source_space->size() ||
        joint.cols() != target_space->size())
      throw StructuralError("coupling: joint shape does not match spaces");
    Vector<Scalar> p = joint.rowwise().sum();
    Vector<Scalar> q = joint.colwise().sum().transpose();
    return BasicCoupling(BasicMeasure<Scalar>(std::move(source_space), p),
                         BasicMeasure<Scalar>(std::move(target_space), q),
                         std::move(joint));
  }

  const BasicMeasure<Scalar>& source() const { return source_; }
  const BasicMeasure<Scalar>& target() const { return target_; }
  const Matrix<Scalar>& joint() const { return joint_; }
  Scalar operator()(Index i, Index j) const { return joint_(i, j); }
  Index rows() const { return joint_.rows(); }
  Index cols() const { return joint_.cols(); }
  bool is_endo() const {
    return same_space(source_.space(), target_.space());
  }

 private:
  BasicMeasure<Scalar> source_;
  BasicMeasure<Scalar> target_;
  Matrix<Scalar> joint_;
};

/// Markov kernel: row x is the distribution k(. | x) on the target space.
template <typename Scalar>
class BasicKernel {
 public:
  BasicKernel(SpacePtr source, SpacePtr target, Matrix<Scalar> rows)
      : source_(std::move(source)),
        target_(std::move(target)),
        rows_(std::move(rows)) {
    if (rows_.rows() != source_->size() || rows_.cols() != target_->size())
      throw StructuralError("kernel: matrix shape does not match spaces");
    for (Index x = 0; x < rows_.rows(); ++x)
      detail::require_probability_vector<Scalar>(
          rows_.row(x).transpose(), target_,
          "kernel row " + source_->label(x));
  }

  static BasicKernel identity(const SpacePtr& space) {
    return BasicKernel(space, space,
                       Matrix<Scalar>::Identity(space->size(), space->size()));
  }

  const SpacePtr& source_space() const { return source_; }
  const SpacePtr& target_space() const { return target_; }
  const Matrix<Scalar>& rows() const { return rows_; }
  /// Probability of y given x.
  Scalar operator()(Index x, Index y) const { return rows_(x, y); }

 private:
  SpacePtr source_;
  SpacePtr target_;
  Matrix<Scalar> rows_;
};

template <typename Scalar>
BasicCoupling<Scalar> identity_coupling(const BasicMeasure<Scalar>& p) {
  return BasicCoupling<Scalar>(p, p, p.mass().asDiagonal().toDenseMatrix());
}

/// Independent coupling p (x) q.
template <typename Scalar>
BasicCoupling<Scalar> product_coupling(const BasicMeasure<Scalar>& p,
                                       const BasicMeasure<Scalar>& q) {
  return BasicCoupling<Scalar>(p, q, p.mass() * q.mass().transpose());
}

enum class Direction { forward, backward };

/// Conditional distribution of a coupling. Forward conditions on the
/// source, backward on the target. Rows are normalized by the joint's own
/// marginal; a zero-mass row becomes the uniform distribution.
template <typename Scalar>
BasicKernel<Scalar> conditional(const BasicCoupling<Scalar>& s,
                                Direction direction) {
  const bool fwd = direction == Direction::forward;
  Matrix<Scalar> rows = fwd ? s.joint() : Matrix<Scalar>(s.joint().transpose());
  for (Index i = 0; i < rows.rows(); ++i) {
    const Scalar total = rows.row(i).sum();
    if (total > Scalar(0))
      rows.row(i) /= total;
    else
      rows.row(i).setConstant(Scalar(1) / Scalar(rows.cols()));
  }
  const SpacePtr& from = fwd ? s.source().space() : s.target().space();
  const SpacePtr& to = fwd ? s.target().space() : s.source().space();
  return BasicKernel<Scalar>(from, to, std::move(rows));
}

/// Both disintegration identities on every singleton rectangle {x} x {y}:
/// fwd(y|x) p(x) = s(x,y) = bwd(x|y) q(y).
template <typename Scalar>
LawReport bayes_check(const BasicCoupling<Scalar>& s, Scalar tol = Scalar(1e-9)) {
  const auto fwd = conditional(s, Direction::forward);
  const auto bwd = conditional(s, Direction::backward);
  LawReport report;
  for (Index x = 0; x < s.rows(); ++x)
    for (Index y = 0; y < s.cols(); ++y) {
      const Scalar joint = s(x, y);
      const Scalar via_source = fwd(x, y) * s.source()(x);
      const Scalar via_target = bwd(y, x) * s.target()(y);
      const std::vector<std::string> w{s.source().space()->label(x),
                                       s.target().space()->label(y)};
      if (std::abs(via_source - joint) > tol)
        report.add("forward-disintegration", w, double(via_source), double(joint));
      if (std::abs(via_target - joint) > tol)
        report.add("backward-disintegration", w, double(via_target), double(joint));
    }
  return report;
}

/// Gluing t o s: (t o s)(x, z) = sum_y bwd_s(x|y) fwd_t(z|y) q(y), where q is
/// the shared middle marginal.
template <typename Scalar>
BasicCoupling<Scalar> compose(const BasicCoupling<Scalar>& t,
                              const BasicCoupling<Scalar>& s,
                              Scalar tol = Scalar(1e-9)) {
  if (!same_space(s.target().space(), t.source().space()))
    throw CompositionError("compose: middle spaces differ");
  const Vector<Scalar>& q = s.target().mass();
  for (Index y = 0; y < q.size(); ++y)
    if (std::abs(q(y) - t.source()(y)) > tol)
      throw CompositionError("compose: middle marginal mismatch at " +
                             s.target().space()->label(y) + ": " +
                             detail::num(q(y)) + " vs " +
                             detail::num(t.source()(y)));
  // bwd_s(x|y) q(y) is the joint s(x, y) on every column of positive mass
  // and zero elsewhere, so the sum collapses to a matrix product.
  const auto t_fwd = conditional(t, Direction::forward);
  Matrix<Scalar> joint = s.joint() * t_fwd.rows();
  Vector<Scalar> r = joint.colwise().sum().transpose();
  return BasicCoupling<Scalar>(
      s.source(), BasicMeasure<Scalar>(t.target().space(), std::move(r)),
      std::move(joint));
}

/// Chapman-Kolmogorov: (t o s)(z|x) = sum_y t(z|y) s(y|x).
template <typename Scalar>
BasicKernel<Scalar> kernel_compose(const BasicKernel<Scalar>& t,
                                   const BasicKernel<Scalar>& s) {
  if (!same_space(s.target_space(), t.source_space()))
    throw StructuralError("kernel_compose: shapes are not compatible");
  return BasicKernel<Scalar>(s.source_space(), t.target_space(),
                             s.rows() * t.rows());
}

/// (sum c(x,y)^k s(x,y))^(1/k), with 0 * inf = 0.
template <typename Scalar>
Scalar cost_k(const BasicCoupling<Scalar>& s, const Matrix<Scalar>& cost,
              int k) {
  if (k < 1) throw ArgumentError("cost_k: k must be an integer >= 1");
  if (cost.rows() != s.rows() || cost.cols() != s.cols())
    throw StructuralError("cost_k: cost matrix shape does not match coupling");
  Scalar total(0);
  for (Index x = 0; x < s.rows(); ++x)
    for (Index y = 0; y < s.cols(); ++y) {
      const Scalar m = s(x, y);
      if (m == Scalar(0)) continue;
      const Scalar c = cost(x, y);
      if (is_inf(c)) return kInf<Scalar>;
      total += (k == 1 ? c : std::pow(c, k)) * m;
    }
  return k == 1 ? total : std::pow(total, Scalar(1) / Scalar(k));
}

/// cost_k(t o s) <= cost_k(s) + cost_k(t).
template <typename Scalar>
LawReport cost_triangle_check(const BasicCoupling<Scalar>& s,
                              const BasicCoupling<Scalar>& t,
                              const Matrix<Scalar>& cost, int k,
                              Scalar tol = Scalar(1e-9)) {
  const auto ts = compose(t, s, tol);
  const Scalar lhs = cost_k(ts, cost, k);
  const Scalar rhs = cost_k(s, cost, k) + cost_k(t, cost, k);
  LawReport report;
  if (!ext_le(lhs, rhs, tol))
    report.add("cost-triangle", {"k=" + std::to_string(k)}, double(lhs),
               double(rhs));
  return report;
}

/// Transpose with swapped marginals.
template <typename Scalar>
BasicCoupling<Scalar> dagger_coupling(const BasicCoupling<Scalar>& s) {
  return BasicCoupling<Scalar>(s.target(), s.source(), s.joint().transpose());
}

namespace detail {

inline void require_total_map(std::span<const Index> f, Index domain,
                              Index codomain, const char* what) {
  if (static_cast<Index>(f.size()) != domain)
    throw StructuralError(std::string(what) + ": map is not total");
  for (Index v : f)
    if (v < 0 || v >= codomain)
      throw StructuralError(std::string(what) + ": image out of range");
}

}  // namespace detail

/// f#p(y) = sum of p(x) over f(x) = y.
template <typename Scalar>
BasicMeasure<Scalar> pushforward_measure(std::span<const Index> f,
                                         const BasicMeasure<Scalar>& p,
                                         const SpacePtr& codomain) {
  detail::require_total_map(f, p.size(), codomain->size(), "pushforward");
  Vector<Scalar> out = Vector<Scalar>::Zero(codomain->size());
  for (Index x = 0; x < p.size(); ++x) out(f[x]) += p(x);
  return BasicMeasure<Scalar>(codomain, std::move(out));
}

/// (f x f)# s on the codomain squared.
template <typename Scalar>
BasicCoupling<Scalar> pushforward_coupling(std::span<const Index> f,
                                           const BasicCoupling<Scalar>& s,
                                           const SpacePtr& codomain) {
  if (!s.is_endo())
    throw StructuralError("pushforward_coupling: coupling is not on one space");
  detail::require_total_map(f, s.rows(), codomain->size(),
                            "pushforward_coupling");
  Matrix<Scalar> out = Matrix<Scalar>::Zero(codomain->size(), codomain->size());
  for (Index x = 0; x < s.rows(); ++x)
    for (Index x2 = 0; x2 < s.cols(); ++x2) out(f[x], f[x2]) += s(x, x2);
  return BasicCoupling<Scalar>(pushforward_measure(f, s.source(), codomain),
                               pushforward_measure(f, s.target(), codomain),
                               std::move(out));
}

using Measure = BasicMeasure<double>;
using Coupling = BasicCoupling<double>;
using Kernel = BasicKernel<double>;

}  // namespace wlens
