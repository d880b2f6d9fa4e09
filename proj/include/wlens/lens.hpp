#pragma once

// Set-based lenses between finite sets: a projection f: X -> Y with a choice
// of lifts phi: X x Y -> X. The three laws are
//   lifting      f(phi(x, y)) = y
//   identity     phi(x, f(x)) = x
//   composition  phi(phi(x, y), y') = phi(x, y')

#include <span>
#include <string>
#include <vector>

#include "wlens/extended.hpp"
#include "wlens/report.hpp"
#include "wlens/space.hpp"
#include "wlens/types.hpp"

namespace wlens {

class SetLens {
 public:
  /// Validates totality and ranges of both tables; the laws are not assumed.
  SetLens(SpacePtr domain, SpacePtr codomain, PointMap project,
          IndexMatrix lift);

  static SetLens identity(const SpacePtr& space);

  const SpacePtr& domain() const { return domain_; }
  const SpacePtr& codomain() const { return codomain_; }
  const PointMap& project() const { return project_; }
  const IndexMatrix& lift() const { return lift_; }

  Index f(Index x) const { return project_[static_cast<std::size_t>(x)]; }
  Index phi(Index x, Index y) const { return lift_(x, y); }

 private:
  SpacePtr domain_;
  SpacePtr codomain_;
  PointMap project_;
  IndexMatrix lift_;
};

struct LensLawReport {
  struct Witness {
    Index x, y, y2;  // y2 only meaningful for the composition law
  };
  std::vector<Witness> lifting;
  std::vector<Witness> identity;
  std::vector<Witness> composition;

  bool lifting_ok() const { return lifting.empty(); }
  bool identity_ok() const { return identity.empty(); }
  bool composition_ok() const { return composition.empty(); }
  bool passed() const {
    return lifting_ok() && identity_ok() && composition_ok();
  }
  /// Flattened into the shared report format, witnesses as labels.
  LawReport to_report(const SetLens& lens) const;
};

/// Exhaustive over X x Y x Y; exact, the laws are discrete equalities.
LensLawReport check_lens_laws(const SetLens& lens);

/// Same laws for a bare pair (f, phi) that may not form a SetLens yet.
LensLawReport check_lens_laws(std::span<const Index> f, const IndexMatrix& phi);

/// g o f with lift (x, z) -> phi(x, psi(f(x), z)).
SetLens compose_lenses(const SetLens& first, const SetLens& second);

/// pi_1: Y x Z -> Y with phi((y, z), y') = (y', z), on product_space(Y, Z).
SetLens product_projection_lens(const FiniteSpace& y, const FiniteSpace& z,
                                ProductCost kind = ProductCost::sum);

enum class MetricMode {
  metric,  ///< inputs must be metrics: symmetric and separating
  pq,      ///< pseudo-quasimetrics; identity law only up to distance zero
};

/// f 1-Lipschitz and d(x, phi(x, y)) = d(f(x), y). phi itself is
/// unconstrained.
LawReport check_metric_lens(const SetLens& lens, const Matrix<double>& dx,
                            const Matrix<double>& dy, double tol = kDefaultTol,
                            MetricMode mode = MetricMode::metric);

/// f 1-Lipschitz and every (x, y') has a witness x' in the fiber over y'
/// with d(x, x') = d(f(x), y').
LawReport check_submetry(std::span<const Index> f, const Matrix<double>& dx,
                         const Matrix<double>& dy, double tol = kDefaultTol,
                         MetricMode mode = MetricMode::metric);

/// Lift table choosing the lowest-index witness for every (x, y').
/// Throws ConstructionError when some pair has no witness.
IndexMatrix submetry_to_lifting(std::span<const Index> f,
                                const Matrix<double>& dx,
                                const Matrix<double>& dy,
                                double tol = kDefaultTol);

/// Lens laws of (f, phi) as they apply to a lifting built from a submetry:
/// lifting law exact; identity law exact in metric mode and as
/// d(x, phi(x, f(x))) = 0 in pq mode; composition reported under its own
/// name since it is not guaranteed.
LawReport check_partial_lens_laws(std::span<const Index> f,
                                  const IndexMatrix& phi,
                                  const Matrix<double>& dx,
                                  double tol = kDefaultTol,
                                  MetricMode mode = MetricMode::metric);

/// Symmetric and zero only on the diagonal, on top of the pq-metric axioms.
LawReport check_metric_axioms(const Matrix<double>& d, double tol = kDefaultTol);

}  // namespace wlens
