#include "wlens/lens.hpp"

#include "wlens/errors.hpp"
#include "wlens/wcat.hpp"

namespace wlens {

SetLens::SetLens(SpacePtr domain, SpacePtr codomain, PointMap project,
                 IndexMatrix lift)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      project_(std::move(project)),
      lift_(std::move(lift)) {
  if (!domain_ || !codomain_) throw StructuralError("lens: null space");
  const Index nx = domain_->size(), ny = codomain_->size();
  if (static_cast<Index>(project_.size()) != nx)
    throw StructuralError("lens: projection table is partial");
  for (Index x = 0; x < nx; ++x)
    if (project_[static_cast<std::size_t>(x)] < 0 ||
        project_[static_cast<std::size_t>(x)] >= ny)
      throw StructuralError("lens: projection of " + domain_->label(x) +
                            " out of range");
  if (lift_.rows() != nx || lift_.cols() != ny)
    throw StructuralError("lens: lift table is partial");
  for (Index x = 0; x < nx; ++x)
    for (Index y = 0; y < ny; ++y)
      if (lift_(x, y) < 0 || lift_(x, y) >= nx)
        throw StructuralError("lens: lift of (" + domain_->label(x) + ", " +
                              codomain_->label(y) + ") out of range");
}

SetLens SetLens::identity(const SpacePtr& space) {
  const Index n = space->size();
  PointMap f(static_cast<std::size_t>(n));
  IndexMatrix phi(n, n);
  for (Index x = 0; x < n; ++x) {
    f[static_cast<std::size_t>(x)] = x;
    for (Index y = 0; y < n; ++y) phi(x, y) = y;
  }
  return SetLens(space, space, std::move(f), std::move(phi));
}

LensLawReport check_lens_laws(std::span<const Index> f, const IndexMatrix& phi) {
  LensLawReport r;
  const Index nx = phi.rows(), ny = phi.cols();
  for (Index x = 0; x < nx; ++x) {
    if (phi(x, f[static_cast<std::size_t>(x)]) != x)
      r.identity.push_back({x, f[static_cast<std::size_t>(x)], 0});
    for (Index y = 0; y < ny; ++y) {
      const Index lifted = phi(x, y);
      if (f[static_cast<std::size_t>(lifted)] != y) r.lifting.push_back({x, y, 0});
      for (Index y2 = 0; y2 < ny; ++y2)
        if (phi(lifted, y2) != phi(x, y2)) r.composition.push_back({x, y, y2});
    }
  }
  return r;
}

LensLawReport check_lens_laws(const SetLens& lens) {
  return check_lens_laws(lens.project(), lens.lift());
}

LawReport LensLawReport::to_report(const SetLens& lens) const {
  const auto& X = *lens.domain();
  const auto& Y = *lens.codomain();
  LawReport out;
  for (const auto& w : lifting)
    out.add("lifting", {X.label(w.x), Y.label(w.y)},
            double(lens.f(lens.phi(w.x, w.y))), double(w.y));
  for (const auto& w : identity)
    out.add("identity", {X.label(w.x)}, double(lens.phi(w.x, w.y)),
            double(w.x));
  for (const auto& w : composition)
    out.add("composition", {X.label(w.x), Y.label(w.y), Y.label(w.y2)},
            double(lens.phi(lens.phi(w.x, w.y), w.y2)),
            double(lens.phi(w.x, w.y2)));
  return out;
}

SetLens compose_lenses(const SetLens& first, const SetLens& second) {
  if (!same_space(first.codomain(), second.domain()))
    throw StructuralError("compose_lenses: codomain of the first lens is not "
                          "the domain of the second");
  const Index nx = first.domain()->size(), nz = second.codomain()->size();
  PointMap g_f(static_cast<std::size_t>(nx));
  IndexMatrix lift(nx, nz);
  for (Index x = 0; x < nx; ++x) {
    const Index y = first.f(x);
    g_f[static_cast<std::size_t>(x)] = second.f(y);
    for (Index z = 0; z < nz; ++z) lift(x, z) = first.phi(x, second.phi(y, z));
  }
  return SetLens(first.domain(), second.codomain(), std::move(g_f),
                 std::move(lift));
}

SetLens product_projection_lens(const FiniteSpace& y, const FiniteSpace& z,
                                ProductCost kind) {
  const Index ny = y.size(), nz = z.size();
  auto codomain = make_space(y.labels(), y.has_cost()
                                             ? std::optional(y.cost())
                                             : std::nullopt);
  auto domain = product_space(y, z, kind);
  PointMap f(static_cast<std::size_t>(ny * nz));
  IndexMatrix phi(ny * nz, ny);
  for (Index a = 0; a < ny; ++a)
    for (Index b = 0; b < nz; ++b) {
      f[static_cast<std::size_t>(a * nz + b)] = a;
      for (Index a2 = 0; a2 < ny; ++a2) phi(a * nz + b, a2) = a2 * nz + b;
    }
  return SetLens(std::move(domain), std::move(codomain), std::move(f),
                 std::move(phi));
}

LawReport check_metric_axioms(const Matrix<double>& d, double tol) {
  std::vector<std::string> names;
  for (Index i = 0; i < d.rows(); ++i) names.push_back(std::to_string(i));
  LawReport r = check_pq_metric(PQMetric{names, d}, tol);
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = 0; j < d.cols(); ++j) {
      if (!ext_near(d(i, j), d(j, i), tol))
        r.add("symmetry", {names[i], names[j]}, d(i, j), d(j, i));
      if (i != j && d(i, j) <= tol)
        r.add("separation", {names[i], names[j]}, d(i, j), 0.0);
    }
  return r;
}

namespace {

void require_square(const Matrix<double>& d, Index n, const char* what) {
  if (d.rows() != n || d.cols() != n)
    throw StructuralError(std::string(what) + ": distance matrix shape does "
                          "not match the point set");
}

void check_inputs(std::span<const Index> f, const Matrix<double>& dx,
                  const Matrix<double>& dy, const char* what) {
  require_square(dx, dx.rows(), what);
  require_square(dy, dy.rows(), what);
  if (static_cast<Index>(f.size()) != dx.rows())
    throw StructuralError(std::string(what) + ": map is not total");
  for (Index v : f)
    if (v < 0 || v >= dy.rows())
      throw StructuralError(std::string(what) + ": image out of range");
}

void check_modes(LawReport& r, const Matrix<double>& dx,
                 const Matrix<double>& dy, double tol, MetricMode mode) {
  if (mode == MetricMode::metric) {
    r.merge(check_metric_axioms(dx, tol), "domain-metric");
    r.merge(check_metric_axioms(dy, tol), "codomain-metric");
  } else {
    std::vector<std::string> nx, ny;
    for (Index i = 0; i < dx.rows(); ++i) nx.push_back(std::to_string(i));
    for (Index i = 0; i < dy.rows(); ++i) ny.push_back(std::to_string(i));
    r.merge(check_pq_metric(PQMetric{nx, dx}, tol), "domain-metric");
    r.merge(check_pq_metric(PQMetric{ny, dy}, tol), "codomain-metric");
  }
}

void check_lipschitz(LawReport& r, std::span<const Index> f,
                     const Matrix<double>& dx, const Matrix<double>& dy,
                     double tol) {
  for (Index a = 0; a < dx.rows(); ++a)
    for (Index b = 0; b < dx.rows(); ++b) {
      const double image = dy(f[static_cast<std::size_t>(a)], f[static_cast<std::size_t>(b)]);
      if (!ext_le(image, dx(a, b), tol))
        r.add("1-lipschitz", {std::to_string(a), std::to_string(b)}, image,
              dx(a, b));
    }
}

}  // namespace

LawReport check_metric_lens(const SetLens& lens, const Matrix<double>& dx,
                            const Matrix<double>& dy, double tol,
                            MetricMode mode) {
  require_square(dx, lens.domain()->size(), "check_metric_lens");
  require_square(dy, lens.codomain()->size(), "check_metric_lens");
  LawReport r;
  check_modes(r, dx, dy, tol, mode);
  check_lipschitz(r, lens.project(), dx, dy, tol);
  const auto& X = *lens.domain();
  const auto& Y = *lens.codomain();
  for (Index x = 0; x < X.size(); ++x)
    for (Index y = 0; y < Y.size(); ++y) {
      const double up = dx(x, lens.phi(x, y));
      const double down = dy(lens.f(x), y);
      if (!ext_near(up, down, tol))
        r.add("distance-equation", {X.label(x), Y.label(y)}, up, down);
    }
  return r;
}

LawReport check_submetry(std::span<const Index> f, const Matrix<double>& dx,
                         const Matrix<double>& dy, double tol,
                         MetricMode mode) {
  check_inputs(f, dx, dy, "check_submetry");
  LawReport r;
  check_modes(r, dx, dy, tol, mode);
  check_lipschitz(r, f, dx, dy, tol);
  for (Index x = 0; x < dx.rows(); ++x)
    for (Index y2 = 0; y2 < dy.rows(); ++y2) {
      const double target = dy(f[static_cast<std::size_t>(x)], y2);
      bool found = false;
      for (Index x2 = 0; x2 < dx.rows() && !found; ++x2)
        found = f[static_cast<std::size_t>(x2)] == y2 &&
                ext_near(dx(x, x2), target, tol);
      if (!found)
        r.add("lift-witness", {std::to_string(x), std::to_string(y2)}, kInf<double>,
              target);
    }
  return r;
}

IndexMatrix submetry_to_lifting(std::span<const Index> f,
                                const Matrix<double>& dx,
                                const Matrix<double>& dy, double tol) {
  check_inputs(f, dx, dy, "submetry_to_lifting");
  IndexMatrix phi(dx.rows(), dy.rows());
  for (Index x = 0; x < dx.rows(); ++x)
    for (Index y2 = 0; y2 < dy.rows(); ++y2) {
      const double target = dy(f[static_cast<std::size_t>(x)], y2);
      Index chosen = -1;
      for (Index x2 = 0; x2 < dx.rows() && chosen < 0; ++x2)
        if (f[static_cast<std::size_t>(x2)] == y2 && ext_near(dx(x, x2), target, tol))
          chosen = x2;
      if (chosen < 0)
        throw ConstructionError("submetry_to_lifting: no point over " +
                                std::to_string(y2) + " at distance " +
                                format_number(target) + " from " +
                                std::to_string(x));
      phi(x, y2) = chosen;
    }
  return phi;
}

LawReport check_partial_lens_laws(std::span<const Index> f,
                                  const IndexMatrix& phi,
                                  const Matrix<double>& dx, double tol,
                                  MetricMode mode) {
  const auto laws = check_lens_laws(f, phi);
  LawReport r;
  for (const auto& w : laws.lifting)
    r.add("lifting", {std::to_string(w.x), std::to_string(w.y)},
          double(f[static_cast<std::size_t>(phi(w.x, w.y))]), double(w.y));
  if (mode == MetricMode::metric) {
    for (const auto& w : laws.identity)
      r.add("identity", {std::to_string(w.x)}, double(phi(w.x, w.y)), double(w.x));
  } else {
    for (Index x = 0; x < phi.rows(); ++x) {
      const double d = dx(x, phi(x, f[static_cast<std::size_t>(x)]));
      if (!(d <= tol)) r.add("identity-up-to-zero", {std::to_string(x)}, d, 0.0);
    }
  }
  for (const auto& w : laws.composition)
    r.add("composition",
          {std::to_string(w.x), std::to_string(w.y), std::to_string(w.y2)},
          double(phi(phi(w.x, w.y), w.y2)), double(phi(w.x, w.y2)));
  return r;
}

}  // namespace wlens
