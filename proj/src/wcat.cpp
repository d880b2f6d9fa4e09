#include "wlens/wcat.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wlens/errors.hpp"

namespace wlens {

namespace {

std::string idx(Index i) { return std::to_string(i); }

}  // namespace

LawReport check_pq_metric(const PQMetric& m, double tol) {
  const Index n = m.size();
  if (m.dist.rows() != n || m.dist.cols() != n)
    throw StructuralError("pq-metric: distance matrix is not " + idx(n) +
                          "x" + idx(n));
  LawReport report;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!is_ext_nonneg(m.dist(i, j)))
        report.add("nonnegative", {m.points[i], m.points[j]}, m.dist(i, j),
                   0.0);
  for (Index i = 0; i < n; ++i)
    if (!(std::abs(m.dist(i, i)) <= tol))
      report.add("diagonal-zero", {m.points[i]}, m.dist(i, i), 0.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        const double direct = m.dist(i, k);
        const double via = m.dist(i, j) + m.dist(j, k);
        if (!ext_le(direct, via, tol))
          report.add("triangle", {m.points[i], m.points[j], m.points[k]},
                     direct, via);
      }
  return report;
}

FinWeightedCategory::FinWeightedCategory(std::vector<std::string> objects,
                                         std::vector<Morphism> morphisms,
                                         std::vector<Index> identities,
                                         CompositionTable composition)
    : objects_(std::move(objects)),
      morphisms_(std::move(morphisms)),
      identities_(std::move(identities)),
      composition_(std::move(composition)) {
  const Index n = object_count();
  const Index m = morphism_count();
  if (std::set<std::string>(objects_.begin(), objects_.end()).size() !=
      objects_.size())
    throw StructuralError("category: duplicate object name");
  std::set<std::string> names;
  for (const auto& f : morphisms_) {
    if (!names.insert(f.name).second)
      throw StructuralError("category: duplicate morphism name '" + f.name +
                            "'");
    if (f.source < 0 || f.source >= n || f.target < 0 || f.target >= n)
      throw StructuralError("category: morphism '" + f.name +
                            "' has a dangling endpoint");
    if (!is_ext_nonneg(f.weight))
      throw StructuralError("category: morphism '" + f.name +
                            "' has a negative or NaN weight");
  }
  if (static_cast<Index>(identities_.size()) != n)
    throw StructuralError("category: identity table does not cover all objects");
  for (Index x = 0; x < n; ++x) {
    const Index id = identities_[x];
    if (id < 0 || id >= m)
      throw StructuralError("category: identity of '" + objects_[x] +
                            "' is a dangling id");
    if (morphisms_[id].source != x || morphisms_[id].target != x)
      throw StructuralError("category: identity of '" + objects_[x] +
                            "' is not an endomorphism of it");
  }
  for (const auto& [key, gf] : composition_) {
    const auto [f, g] = key;
    if (f < 0 || f >= m || g < 0 || g >= m || gf < 0 || gf >= m)
      throw StructuralError("category: composition entry with dangling id");
    if (morphisms_[f].target != morphisms_[g].source)
      throw StructuralError("category: composite of non-composable pair (" +
                            morphisms_[f].name + ", " + morphisms_[g].name +
                            ")");
    if (morphisms_[gf].source != morphisms_[f].source ||
        morphisms_[gf].target != morphisms_[g].target)
      throw StructuralError("category: composite '" + morphisms_[gf].name +
                            "' has wrong endpoints");
  }
  for (Index f = 0; f < m; ++f)
    for (Index g = 0; g < m; ++g)
      if (morphisms_[f].target == morphisms_[g].source &&
          !composition_.contains({f, g}))
        throw StructuralError("category: composition table misses (" +
                              morphisms_[f].name + ", " + morphisms_[g].name +
                              ")");
}

FinWeightedCategory FinWeightedCategory::from_names(
    std::vector<std::string> objects,
    const std::vector<NamedMorphism>& morphisms,
    const std::map<std::string, std::string>& identities,
    const std::vector<NamedComposite>& composition) {
  std::map<std::string, Index> object_index;
  for (Index i = 0; i < static_cast<Index>(objects.size()); ++i)
    object_index.emplace(objects[i], i);
  auto object_of = [&](const std::string& name) {
    auto it = object_index.find(name);
    if (it == object_index.end())
      throw StructuralError("category: unknown object '" + name + "'");
    return it->second;
  };

  std::vector<Morphism> arrows;
  std::map<std::string, Index> arrow_index;
  for (const auto& f : morphisms) {
    arrow_index.emplace(f.name, static_cast<Index>(arrows.size()));
    arrows.push_back({f.name, object_of(f.source), object_of(f.target),
                      f.weight});
  }
  auto arrow_of = [&](const std::string& name) {
    auto it = arrow_index.find(name);
    if (it == arrow_index.end())
      throw StructuralError("category: unknown morphism '" + name + "'");
    return it->second;
  };

  std::vector<Index> ids(objects.size(), -1);
  for (const auto& [object, arrow] : identities) ids[object_of(object)] = arrow_of(arrow);
  for (Index x = 0; x < static_cast<Index>(ids.size()); ++x)
    if (ids[x] < 0)
      throw StructuralError("category: object '" + objects[x] +
                            "' has no identity");

  CompositionTable table;
  for (const auto& c : composition)
    table[{arrow_of(c.first), arrow_of(c.second)}] = arrow_of(c.composite);
  return FinWeightedCategory(std::move(objects), std::move(arrows),
                             std::move(ids), std::move(table));
}

FinWeightedCategory FinWeightedCategory::from_pq_metric(const PQMetric& m) {
  const Index n = m.size();
  std::vector<Morphism> arrows;
  arrows.reserve(static_cast<std::size_t>(n * n));
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      arrows.push_back({m.points[x] + "->" + m.points[y], x, y, m.dist(x, y)});
  std::vector<Index> ids;
  for (Index x = 0; x < n; ++x) ids.push_back(x * n + x);
  CompositionTable table;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z) table[{x * n + y, y * n + z}] = x * n + z;
  return FinWeightedCategory(m.points, std::move(arrows), std::move(ids),
                             std::move(table));
}

std::optional<Index> FinWeightedCategory::compose(Index f, Index g) const {
  auto it = composition_.find({f, g});
  if (it == composition_.end()) return std::nullopt;
  return it->second;
}

std::vector<Index> FinWeightedCategory::hom(Index source, Index target) const {
  std::vector<Index> out;
  for (Index f = 0; f < morphism_count(); ++f)
    if (morphisms_[f].source == source && morphisms_[f].target == target)
      out.push_back(f);
  return out;
}

std::optional<Index> FinWeightedCategory::find_object(
    const std::string& name) const {
  auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) return std::nullopt;
  return static_cast<Index>(it - objects_.begin());
}

std::optional<Index> FinWeightedCategory::find_morphism(
    const std::string& name) const {
  for (Index f = 0; f < morphism_count(); ++f)
    if (morphisms_[f].name == name) return f;
  return std::nullopt;
}

LawReport check_weighted_category(const FinWeightedCategory& c, double tol) {
  LawReport report;
  const auto& arrows = c.morphisms();
  for (Index x = 0; x < c.object_count(); ++x) {
    const Index id = c.identity(x);
    if (!(c.weight(id) <= tol))
      report.add("identity-weight", {c.objects()[x], arrows[id].name},
                 c.weight(id), 0.0);
  }
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& a = arrows[f];
    if (*c.compose(c.identity(a.source), f) != f)
      report.add("right-unit", {a.name}, 0.0, 0.0);
    if (*c.compose(f, c.identity(a.target)) != f)
      report.add("left-unit", {a.name}, 0.0, 0.0);
  }
  for (const auto& [key, gf] : c.composition()) {
    const auto [f, g] = key;
    const double sum = c.weight(f) + c.weight(g);
    if (!ext_le(c.weight(gf), sum, tol))
      report.add("triangle", {arrows[f].name, arrows[g].name}, c.weight(gf),
                 sum);
  }
  // associativity: h o (g o f) == (h o g) o f
  for (const auto& [key, gf] : c.composition()) {
    const auto [f, g] = key;
    for (Index h = 0; h < c.morphism_count(); ++h) {
      if (arrows[h].source != arrows[g].target) continue;
      const Index left = *c.compose(gf, h);
      const Index right = *c.compose(f, *c.compose(g, h));
      if (left != right)
        report.add("associativity",
                   {arrows[f].name, arrows[g].name, arrows[h].name},
                   c.weight(left), c.weight(right));
    }
  }
  return report;
}

PQMetric optimize(const FinWeightedCategory& c) {
  const Index n = c.object_count();
  PQMetric out{c.objects(), Matrix<double>::Constant(n, n, kInf<double>)};
  for (const auto& f : c.morphisms())
    out.dist(f.source, f.target) = std::min(out.dist(f.source, f.target), f.weight);
  return out;
}

namespace {

void check_functor_shape(const FunctorMap& F, const FinWeightedCategory& c,
                         const FinWeightedCategory& d) {
  if (static_cast<Index>(F.objects.size()) != c.object_count())
    throw StructuralError("functor: object map does not cover the domain");
  if (static_cast<Index>(F.morphisms.size()) != c.morphism_count())
    throw StructuralError("functor: morphism map does not cover the domain");
  for (Index x : F.objects)
    if (x < 0 || x >= d.object_count())
      throw StructuralError("functor: object image out of range");
  for (Index f = 0; f < c.morphism_count(); ++f) {
    if (!F.morphisms[f])
      throw StructuralError("functor: undefined on morphism '" +
                            c.morphism(f).name + "'");
    if (*F.morphisms[f] < 0 || *F.morphisms[f] >= d.morphism_count())
      throw StructuralError("functor: image of '" + c.morphism(f).name +
                            "' out of range");
  }
}

}  // namespace

LawReport check_weighted_functor(const FunctorMap& F,
                                 const FinWeightedCategory& c,
                                 const FinWeightedCategory& d, double tol) {
  check_functor_shape(F, c, d);
  LawReport report;
  auto image = [&](Index f) { return *F.morphisms[f]; };
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& a = c.morphism(f);
    const auto& b = d.morphism(image(f));
    if (b.source != F.objects[a.source] || b.target != F.objects[a.target])
      report.add("endpoints", {a.name, b.name}, 0.0, 0.0);
    if (!ext_le(b.weight, a.weight, tol))
      report.add("weight", {a.name, b.name}, b.weight, a.weight);
  }
  for (Index x = 0; x < c.object_count(); ++x)
    if (image(c.identity(x)) != d.identity(F.objects[x]))
      report.add("identity", {c.objects()[x]}, 0.0, 0.0);
  for (const auto& [key, gf] : c.composition()) {
    const auto [f, g] = key;
    const auto composite = d.compose(image(f), image(g));
    if (!composite || *composite != image(gf))
      report.add("composition", {c.morphism(f).name, c.morphism(g).name},
                 d.weight(image(gf)),
                 composite ? d.weight(*composite) : kInf<double>);
  }
  return report;
}

LawReport check_dagger(const FinWeightedCategory& c,
                       std::span<const Index> dagger, double tol) {
  if (static_cast<Index>(dagger.size()) != c.morphism_count())
    throw StructuralError("dagger: not defined on every morphism");
  for (Index f : dagger)
    if (f < 0 || f >= c.morphism_count())
      throw StructuralError("dagger: image out of range");
  LawReport report;
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& a = c.morphism(f);
    const auto& b = c.morphism(dagger[f]);
    if (b.source != a.target || b.target != a.source)
      report.add("reverses-endpoints", {a.name, b.name}, 0.0, 0.0);
    if (dagger[dagger[f]] != f)
      report.add("involution", {a.name}, 0.0, 0.0);
    if (!ext_near(a.weight, b.weight, tol))
      report.add("weight", {a.name, b.name}, b.weight, a.weight);
  }
  for (Index x = 0; x < c.object_count(); ++x)
    if (dagger[c.identity(x)] != c.identity(x))
      report.add("identity", {c.objects()[x]}, 0.0, 0.0);
  // (g o f)^dag == f^dag o g^dag
  for (const auto& [key, gf] : c.composition()) {
    const auto [f, g] = key;
    const auto reversed = c.compose(dagger[g], dagger[f]);
    if (!reversed || *reversed != dagger[gf])
      report.add("contravariance", {c.morphism(f).name, c.morphism(g).name},
                 0.0, 0.0);
  }
  return report;
}

const char* to_string(PairRelation r) {
  switch (r) {
    case PairRelation::isomorphic:
      return "isomorphic";
    case PairRelation::quasi_isomorphic:
      return "quasi-isomorphic";
    case PairRelation::neither:
      break;
  }
  return "neither";
}

PairRelation classify_pair(const FinWeightedCategory& c, Index x, Index y,
                           double tol) {
  bool quasi = false;
  for (Index f : c.hom(x, y))
    for (Index g : c.hom(y, x)) {
      if (*c.compose(f, g) != c.identity(x) || *c.compose(g, f) != c.identity(y))
        continue;
      if (c.weight(f) <= tol && c.weight(g) <= tol)
        return PairRelation::isomorphic;
      if (!is_inf(c.weight(f)) && !is_inf(c.weight(g))) quasi = true;
    }
  return quasi ? PairRelation::quasi_isomorphic : PairRelation::neither;
}

LawReport check_embedding(const FunctorMap& F, const FinWeightedCategory& c,
                          const FinWeightedCategory& d, double tol) {
  LawReport report;
  report.merge(check_weighted_functor(F, c, d, tol), "functor");
  for (Index x = 0; x < c.object_count(); ++x)
    for (Index y = 0; y < c.object_count(); ++y) {
      const auto source_hom = c.hom(x, y);
      const auto target_hom = d.hom(F.objects[x], F.objects[y]);
      std::set<Index> hit;
      for (Index f : source_hom) {
        const Index ff = *F.morphisms[f];
        if (!hit.insert(ff).second)
          report.add("injective", {c.morphism(f).name, d.morphism(ff).name},
                     0.0, 0.0);
        if (!ext_near(d.weight(ff), c.weight(f), tol))
          report.add("weight-preserving",
                     {c.morphism(f).name, d.morphism(ff).name}, d.weight(ff),
                     c.weight(f));
      }
      for (Index g : target_hom)
        if (!hit.contains(g))
          report.add("surjective", {c.objects()[x], c.objects()[y],
                                    d.morphism(g).name},
                     0.0, 0.0);
    }
  return report;
}

double lipschitz_weight(std::span<const Index> f, const PQMetric& x,
                        const PQMetric& y) {
  if (static_cast<Index>(f.size()) != x.size())
    throw StructuralError("lipschitz_weight: map is not total on the domain");
  for (Index v : f)
    if (v < 0 || v >= y.size())
      throw StructuralError("lipschitz_weight: image out of range");
  double sup = 0.0;  // clamp: negative logarithms count as zero
  for (Index a = 0; a < x.size(); ++a)
    for (Index b = 0; b < x.size(); ++b) {
      if (a == b) continue;
      const double num = y.dist(f[a], f[b]);
      const double den = x.dist(a, b);
      if (num == 0.0) continue;  // log 0 = -inf, or 0/0 skipped
      if (is_inf(den)) continue;  // any finite constant bounds this pair
      if (den == 0.0 || is_inf(num)) return kInf<double>;
      sup = std::max(sup, std::log(num / den));
    }
  return sup;
}

bool check_normed(const FinWeightedCategory& c, double tol) {
  const PQMetric opt = optimize(c);
  for (Index x = 0; x < c.object_count(); ++x)
    for (Index y = 0; y < c.object_count(); ++y) {
      const bool iso_in_c = classify_pair(c, x, y, tol) == PairRelation::isomorphic;
      const bool iso_in_opt = opt.dist(x, y) <= tol && opt.dist(y, x) <= tol;
      if (iso_in_c != iso_in_opt) return false;
    }
  return true;
}

CompletenessReport check_optimization_complete(const FinWeightedCategory& c) {
  CompletenessReport out;
  for (Index x = 0; x < c.object_count(); ++x)
    for (Index y = 0; y < c.object_count(); ++y)
      if (c.hom(x, y).empty()) out.empty_hom_sets.emplace_back(x, y);
  // A finite nonempty hom-set always attains its minimum.
  out.complete = true;
  return out;
}

}  // namespace wlens
