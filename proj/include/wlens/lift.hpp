#pragma once

// Lifting couplings along a set-based lens (f, phi): X -> Y. Given an anchor
// p on X and a coupling s on Y whose first marginal is f#p,
//   lift(p, s)(x, x') = p(x) * sum over y with phi(x, y) = x' of fwd_s(y | f(x)).
// Together with the pushforward f# this is a delta lens between the
// categories of couplings, weighted when (f, phi) is a metric lens.

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "wlens/errors.hpp"
#include "wlens/lens.hpp"
#include "wlens/prob.hpp"

namespace wlens {

template <typename Scalar>
struct BasicLiftedCoupling {
  BasicCoupling<Scalar> base;    // s on Y
  BasicMeasure<Scalar> anchor;   // p on X
  BasicCoupling<Scalar> result;  // lift on X
};

using LiftedCoupling = BasicLiftedCoupling<double>;

namespace detail {

/// Entrywise comparison of two joints of the same shape.
template <typename Scalar>
void compare_joints(LawReport& report, const std::string& law,
                    const Matrix<Scalar>& lhs, const Matrix<Scalar>& rhs,
                    const SpacePtr& rows, const SpacePtr& cols, Scalar tol) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    report.add(law, {"shape"}, double(lhs.size()), double(rhs.size()));
    return;
  }
  for (Index i = 0; i < lhs.rows(); ++i)
    for (Index j = 0; j < lhs.cols(); ++j)
      if (!(std::abs(lhs(i, j) - rhs(i, j)) <= tol))
        report.add(law, {rows->label(i), cols->label(j)}, double(lhs(i, j)),
                   double(rhs(i, j)));
}

template <typename Scalar>
void require_lift_inputs(const SetLens& l, const BasicMeasure<Scalar>& p,
                         const BasicCoupling<Scalar>& s, Scalar tol) {
  if (!same_space(p.space(), l.domain()))
    throw StructuralError("lift: anchor is not a measure on the lens domain");
  if (!same_space(s.source().space(), l.codomain()) ||
      !same_space(s.target().space(), l.codomain()))
    throw StructuralError("lift: coupling is not on the lens codomain");
  const auto pushed = pushforward_measure(l.project(), p, l.codomain());
  for (Index y = 0; y < pushed.size(); ++y)
    if (std::abs(pushed(y) - s.source()(y)) > tol)
      throw LiftingError("lift: marginal precondition violated at " +
                         l.codomain()->label(y) + ": first marginal " +
                         num(s.source()(y)) + " but pushforward of anchor " +
                         num(pushed(y)));
}

}  // namespace detail

/// The lifted coupling on X. The first marginal of s is taken to be f#p
/// exactly: s enters only through its forward conditional.
template <typename Scalar>
BasicCoupling<Scalar> lift_coupling(const SetLens& l,
                                    const BasicMeasure<Scalar>& p,
                                    const BasicCoupling<Scalar>& s,
                                    Scalar tol = Scalar(1e-9)) {
  detail::require_lift_inputs(l, p, s, tol);
  const Index nx = l.domain()->size(), ny = l.codomain()->size();
  const Vector<Scalar> row_mass = s.joint().rowwise().sum();
  Matrix<Scalar> joint = Matrix<Scalar>::Zero(nx, nx);
  for (Index x = 0; x < nx; ++x) {
    if (p(x) == Scalar(0)) continue;
    const Index base = l.f(x);
    for (Index y = 0; y < ny; ++y) {
      const Scalar step = row_mass(base) > Scalar(0)
                              ? s(base, y) / row_mass(base)
                              : Scalar(1) / Scalar(ny);
      joint(x, l.phi(x, y)) += p(x) * step;
    }
  }
  Vector<Scalar> target = joint.colwise().sum().transpose();
  return BasicCoupling<Scalar>(
      p, BasicMeasure<Scalar>(l.domain(), std::move(target)), std::move(joint));
}

template <typename Scalar>
BasicLiftedCoupling<Scalar> lift(const SetLens& l, const BasicMeasure<Scalar>& p,
                                 const BasicCoupling<Scalar>& s,
                                 Scalar tol = Scalar(1e-9)) {
  return {s, p, lift_coupling(l, p, s, tol)};
}

/// Marginal and pushforward invariants: the result starts at the anchor and
/// projects back onto the base coupling.
template <typename Scalar>
LawReport check_lifted(const SetLens& l, const BasicLiftedCoupling<Scalar>& lc,
                       Scalar tol = Scalar(1e-9)) {
  LawReport report;
  const auto& X = l.domain();
  for (Index x = 0; x < X->size(); ++x)
    if (std::abs(lc.result.source()(x) - lc.anchor(x)) > tol)
      report.add("marginal", {X->label(x)}, double(lc.result.source()(x)),
                 double(lc.anchor(x)));
  const auto pushed = pushforward_coupling(l.project(), lc.result, l.codomain());
  detail::compare_joints(report, "pushforward", pushed.joint(), lc.base.joint(),
                         l.codomain(), l.codomain(), tol);
  return report;
}

/// Conditional form of the lift; independent of any anchor.
template <typename Scalar>
BasicKernel<Scalar> lift_kernel(const SetLens& l, const BasicKernel<Scalar>& k) {
  if (!same_space(k.source_space(), l.codomain()) ||
      !same_space(k.target_space(), l.codomain()))
    throw StructuralError("lift_kernel: kernel is not on the lens codomain");
  const Index nx = l.domain()->size(), ny = l.codomain()->size();
  Matrix<Scalar> rows = Matrix<Scalar>::Zero(nx, nx);
  for (Index x = 0; x < nx; ++x)
    for (Index y = 0; y < ny; ++y) rows(x, l.phi(x, y)) += k(l.f(x), y);
  return BasicKernel<Scalar>(l.domain(), l.domain(), std::move(rows));
}

/// Delta-lens laws of (f#, lift) at one instance:
///   lifting      lift(p, s) starts at p and pushes forward to s
///   identity     lift(p, I_{f#p}) = I_p
///   composition  lift(p, s2 o s) = lift(p', s2) o lift(p, s), p' the
///                second marginal of lift(p, s)
template <typename Scalar>
LawReport check_lift_delta_laws(const SetLens& l, const BasicMeasure<Scalar>& p,
                                const BasicCoupling<Scalar>& s,
                                const BasicCoupling<Scalar>& s2,
                                Scalar tol = Scalar(1e-9)) {
  LawReport report;
  const auto first = lift(l, p, s, tol);
  report.merge(check_lifted(l, first, tol));

  const auto base = pushforward_measure(l.project(), p, l.codomain());
  const auto lifted_id = lift_coupling(l, p, identity_coupling(base), tol);
  detail::compare_joints(report, "identity", lifted_id.joint(),
                         identity_coupling(p).joint(), l.domain(), l.domain(),
                         tol);

  const auto& p2 = first.result.target();
  const auto second = lift(l, p2, s2, tol);
  report.merge(check_lifted(l, second, tol), "second");
  const auto direct = lift_coupling(l, p, compose(s2, s, tol), tol);
  const auto glued = compose(second.result, first.result, tol);
  detail::compare_joints(report, "composition", direct.joint(), glued.joint(),
                         l.domain(), l.domain(), tol);
  return report;
}

/// |cost_k(lift(p, s)) - cost_k(s)| <= tol for every requested k.
template <typename Scalar>
LawReport check_weight_preservation(const SetLens& l, const Matrix<Scalar>& dx,
                                    const Matrix<Scalar>& dy,
                                    const BasicMeasure<Scalar>& p,
                                    const BasicCoupling<Scalar>& s,
                                    std::span<const int> ks,
                                    Scalar tol = Scalar(1e-9)) {
  const auto lifted = lift_coupling(l, p, s, tol);
  LawReport report;
  for (int k : ks) {
    const Scalar up = cost_k(lifted, dx, k);
    const Scalar down = cost_k(s, dy, k);
    if (!ext_near(up, down, tol))
      report.add("weight-preservation", {"k=" + std::to_string(k)}, double(up),
                 double(down));
  }
  return report;
}

/// Conditional of the pushforward coupling against the pushed conditional:
/// fwd_{f#s}(y' | f(x)) = fwd_s(f^-1(y') | x) wherever p(x) > 0.
template <typename Scalar>
LawReport check_pushforward_conditional(std::span<const Index> f,
                                        const BasicCoupling<Scalar>& s,
                                        const SpacePtr& codomain,
                                        Scalar tol = Scalar(1e-9)) {
  const auto pushed = pushforward_coupling(f, s, codomain);
  const auto down = conditional(pushed, Direction::forward);
  const auto up = conditional(s, Direction::forward);
  LawReport report;
  for (Index x = 0; x < s.rows(); ++x) {
    if (s.source()(x) == Scalar(0)) continue;
    for (Index y = 0; y < codomain->size(); ++y) {
      Scalar fiber(0);
      for (Index x2 = 0; x2 < s.cols(); ++x2)
        if (f[static_cast<std::size_t>(x2)] == y) fiber += up(x, x2);
      const Scalar lhs = down(f[static_cast<std::size_t>(x)], y);
      if (!(std::abs(lhs - fiber) <= tol))
        report.add("pushforward-conditional",
                   {s.source().space()->label(x), codomain->label(y)},
                   double(lhs), double(fiber));
    }
  }
  return report;
}

template <typename Scalar>
struct BasicEmbeddingCheckOptions {
  /// Costs on X and Y; weight preservation is checked when both are set.
  std::optional<Matrix<Scalar>> cost_x, cost_y;
  std::vector<int> ks{1, 2, 3};
  /// Extra couplings of (p, q) on X and of (i#p, i#q) on Y to test.
  std::vector<BasicCoupling<Scalar>> samples_x, samples_y;
};

using EmbeddingCheckOptions = BasicEmbeddingCheckOptions<double>;

namespace detail {

/// Vertex coupling of (p, q) from the north-west-corner rule.
template <typename Scalar>
BasicCoupling<Scalar> north_west_coupling(const BasicMeasure<Scalar>& p,
                                          const BasicMeasure<Scalar>& q) {
  Vector<Scalar> a = p.mass(), b = q.mass();
  Matrix<Scalar> joint = Matrix<Scalar>::Zero(a.size(), b.size());
  Index i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Scalar x = std::min(a(i), b(j));
    joint(i, j) = x;
    a(i) -= x;
    b(j) -= x;
    if (a(i) <= b(j))
      ++i;
    else
      ++j;
  }
  return BasicCoupling<Scalar>(p, q, std::move(joint));
}

}  // namespace detail

/// i#: Gamma(p, q) -> Gamma(i#p, i#q) is a bijection for injective i, and
/// weight preserving when i is isometric. Injectivity is checked by the
/// roundtrip r -> i#r -> restriction; surjectivity by showing both pushed
/// marginals vanish off the image (so every coupling lives on image x image)
/// and that sample couplings pull back to couplings of (p, q).
template <typename Scalar>
LawReport check_pushforward_embedding(
    std::span<const Index> i, const BasicMeasure<Scalar>& p,
    const BasicMeasure<Scalar>& q, const SpacePtr& codomain,
    Scalar tol = Scalar(1e-9),
    const BasicEmbeddingCheckOptions<Scalar>& options = {}) {
  if (!same_space(p.space(), q.space()))
    throw StructuralError("embedding check: p and q on different spaces");
  detail::require_total_map(i, p.size(), codomain->size(), "embedding check");
  std::set<Index> image(i.begin(), i.end());
  if (static_cast<Index>(image.size()) != p.size())
    throw PreconditionError("embedding check: map is not injective");

  const SpacePtr& X = p.space();
  const auto ip = pushforward_measure(i, p, codomain);
  const auto iq = pushforward_measure(i, q, codomain);
  LawReport report;

  auto restrict = [&](const BasicCoupling<Scalar>& s) {
    Matrix<Scalar> r(p.size(), q.size());
    for (Index a = 0; a < p.size(); ++a)
      for (Index b = 0; b < q.size(); ++b)
        r(a, b) = s(i[static_cast<std::size_t>(a)], i[static_cast<std::size_t>(b)]);
    return r;
  };

  std::vector<BasicCoupling<Scalar>> xs{product_coupling(p, q),
                                        detail::north_west_coupling(p, q)};
  xs.insert(xs.end(), options.samples_x.begin(), options.samples_x.end());
  for (const auto& r : xs) {
    const auto pushed = pushforward_coupling(i, r, codomain);
    const Matrix<Scalar> back = restrict(pushed);
    // exact: every entry of the restriction is one entry of r
    detail::compare_joints(report, "roundtrip", back, r.joint(), X, X, Scalar(0));
    if (options.cost_x && options.cost_y)
      for (int k : options.ks) {
        const Scalar up = cost_k(pushed, *options.cost_y, k);
        const Scalar down = cost_k(r, *options.cost_x, k);
        if (!ext_near(up, down, tol))
          report.add("weight-preserving", {"k=" + std::to_string(k)},
                     double(up), double(down));
      }
  }

  for (Index y = 0; y < codomain->size(); ++y) {
    if (image.contains(y)) continue;
    if (ip(y) != Scalar(0) || iq(y) != Scalar(0))
      report.add("support-on-image", {codomain->label(y)}, double(ip(y)),
                 double(iq(y)));
  }

  std::vector<BasicCoupling<Scalar>> ys{product_coupling(ip, iq),
                                        detail::north_west_coupling(ip, iq)};
  ys.insert(ys.end(), options.samples_y.begin(), options.samples_y.end());
  for (const auto& s : ys) {
    Matrix<Scalar> r = restrict(s);
    const Scalar lost = s.joint().sum() - r.sum();
    if (!(std::abs(lost) <= tol))
      report.add("support-on-image", {"sample"}, double(lost), 0.0);
    try {
      const BasicCoupling<Scalar> pulled(p, q, r);
      detail::compare_joints(report, "pullback",
                             pushforward_coupling(i, pulled, codomain).joint(),
                             s.joint(), codomain, codomain, tol);
    } catch (const InvariantError& e) {
      report.add("pullback", {"marginals"}, 0.0, 0.0);
    }
  }
  return report;
}

/// Lifting along a composite lens equals lifting twice:
/// lift_{l2 o l1}(p, s) = lift_{l1}(p, lift_{l2}(f#p, s)).
template <typename Scalar>
LawReport check_lens_functoriality(const SetLens& l1, const SetLens& l2,
                                   const BasicMeasure<Scalar>& p,
                                   const BasicCoupling<Scalar>& s,
                                   Scalar tol = Scalar(1e-9)) {
  const SetLens composite = compose_lenses(l1, l2);
  const auto direct = lift_coupling(composite, p, s, tol);
  const auto fp = pushforward_measure(l1.project(), p, l1.codomain());
  const auto middle = lift_coupling(l2, fp, s, tol);
  const auto stepwise = lift_coupling(l1, p, middle, tol);
  LawReport report;
  detail::compare_joints(report, "lens-functoriality", direct.joint(),
                         stepwise.joint(), l1.domain(), l1.domain(), tol);
  return report;
}

/// Conditional product along the Y-marginal for the product projection
/// Y x Z -> Y: r is a joint on Y x Z (a coupling of its marginals), s a
/// coupling on Y starting at r's Y-marginal. Entry ((y,z), (y',z')) is
/// [z = z'] fwd_r(z | y) fwd_s(y' | y) p(y).
template <typename Scalar>
BasicCoupling<Scalar> product_lift(const BasicCoupling<Scalar>& r,
                                   const BasicCoupling<Scalar>& s,
                                   Scalar tol = Scalar(1e-9),
                                   ProductCost kind = ProductCost::sum) {
  const SpacePtr& Y = r.source().space();
  const SpacePtr& Z = r.target().space();
  if (!same_space(s.source().space(), Y) || !same_space(s.target().space(), Y))
    throw StructuralError("product_lift: s is not a coupling on Y");
  for (Index y = 0; y < Y->size(); ++y)
    if (std::abs(r.source()(y) - s.source()(y)) > tol)
      throw LiftingError("product_lift: marginal mismatch at " + Y->label(y));
  const auto rz = conditional(r, Direction::forward);
  const auto sy = conditional(s, Direction::forward);
  const Vector<Scalar>& p = r.source().mass();
  const Index ny = Y->size(), nz = Z->size();
  SpacePtr X = product_space(*Y, *Z, kind);
  Matrix<Scalar> joint = Matrix<Scalar>::Zero(ny * nz, ny * nz);
  for (Index y = 0; y < ny; ++y)
    for (Index z = 0; z < nz; ++z)
      for (Index y2 = 0; y2 < ny; ++y2)
        joint(y * nz + z, y2 * nz + z) = rz(y, z) * sy(y, y2) * p(y);
  Vector<Scalar> flat(ny * nz);
  for (Index y = 0; y < ny; ++y)
    for (Index z = 0; z < nz; ++z) flat(y * nz + z) = r(y, z);
  Vector<Scalar> target = joint.colwise().sum().transpose();
  return BasicCoupling<Scalar>(BasicMeasure<Scalar>(X, std::move(flat)),
                               BasicMeasure<Scalar>(X, std::move(target)),
                               std::move(joint));
}

/// A joint on Y x Z read as a measure on the product space.
template <typename Scalar>
BasicMeasure<Scalar> flatten(const BasicCoupling<Scalar>& r,
                             const SpacePtr& product) {
  Vector<Scalar> flat(r.rows() * r.cols());
  for (Index y = 0; y < r.rows(); ++y)
    for (Index z = 0; z < r.cols(); ++z) flat(y * r.cols() + z) = r(y, z);
  return BasicMeasure<Scalar>(product, std::move(flat));
}

}  // namespace wlens
