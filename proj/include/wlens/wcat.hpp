#pragma once

// Finite weighted categories: categories whose arrows carry weights in
// [0, inf], zero on identities and subadditive under composition.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wlens/extended.hpp"
#include "wlens/report.hpp"
#include "wlens/types.hpp"

namespace wlens {

/// Pseudo-quasimetric (Lawvere metric) on a finite point set. The distance
/// may be asymmetric, may vanish off the diagonal and may be infinite.
struct PQMetric {
  std::vector<std::string> points;
  Matrix<double> dist;

  Index size() const { return static_cast<Index>(points.size()); }
};

/// Checks zero diagonal, nonnegativity and the triangle inequality.
LawReport check_pq_metric(const PQMetric& metric, double tol = kDefaultTol);

struct Morphism {
  std::string name;
  Index source = 0;
  Index target = 0;
  double weight = 0.0;
};

/// A weighted category with finitely many objects and arrows, stored as
/// explicit tables. Construction validates structure only; the weighted
/// category laws are checked by check_weighted_category.
class FinWeightedCategory {
 public:
  /// Key (f, g) maps to g o f, defined when target(f) == source(g).
  using CompositionTable = std::map<std::pair<Index, Index>, Index>;

  FinWeightedCategory(std::vector<std::string> objects,
                      std::vector<Morphism> morphisms,
                      std::vector<Index> identities,
                      CompositionTable composition);

  struct NamedMorphism {
    std::string name, source, target;
    double weight = 0.0;
  };
  struct NamedComposite {
    std::string first, second, composite;  // composite = second o first
  };
  /// Resolves names to indices; dangling names raise StructuralError.
  static FinWeightedCategory from_names(
      std::vector<std::string> objects,
      const std::vector<NamedMorphism>& morphisms,
      const std::map<std::string, std::string>& identities,
      const std::vector<NamedComposite>& composition);

  /// The encoding with exactly one arrow x -> y of weight dist(x, y).
  static FinWeightedCategory from_pq_metric(const PQMetric& metric);

  Index object_count() const { return static_cast<Index>(objects_.size()); }
  Index morphism_count() const {
    return static_cast<Index>(morphisms_.size());
  }
  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<Morphism>& morphisms() const { return morphisms_; }
  const Morphism& morphism(Index f) const { return morphisms_[f]; }
  double weight(Index f) const { return morphisms_[f].weight; }
  Index identity(Index object) const { return identities_[object]; }
  const CompositionTable& composition() const { return composition_; }

  /// g o f, or nothing when the pair is not composable.
  std::optional<Index> compose(Index f, Index g) const;
  std::vector<Index> hom(Index source, Index target) const;

  std::optional<Index> find_object(const std::string& name) const;
  std::optional<Index> find_morphism(const std::string& name) const;

 private:
  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<Index> identities_;
  CompositionTable composition_;
};

/// Category laws plus zero identity weights and w(g o f) <= w(g) + w(f).
LawReport check_weighted_category(const FinWeightedCategory& c,
                                  double tol = kDefaultTol);

/// dist(X, Y) = least weight of an arrow X -> Y, inf for an empty hom-set.
PQMetric optimize(const FinWeightedCategory& c);

/// Object and arrow assignment of a would-be functor. An arrow without an
/// image is a structural error when checked.
struct FunctorMap {
  std::vector<Index> objects;
  std::vector<std::optional<Index>> morphisms;
};

/// Functor laws and w(Ff) <= w(f) + tol.
LawReport check_weighted_functor(const FunctorMap& functor,
                                 const FinWeightedCategory& c,
                                 const FinWeightedCategory& d,
                                 double tol = kDefaultTol);

/// Identity on objects, involutive, contravariantly functorial and weight
/// preserving. `dagger[f]` is the arrow assigned to f.
LawReport check_dagger(const FinWeightedCategory& c,
                       std::span<const Index> dagger,
                       double tol = kDefaultTol);

enum class PairRelation { isomorphic, quasi_isomorphic, neither };

const char* to_string(PairRelation r);

/// Searches hom(X,Y) x hom(Y,X) for mutually inverse pairs.
PairRelation classify_pair(const FinWeightedCategory& c, Index x, Index y,
                           double tol = kDefaultTol);

/// Every hom(X,Y) -> hom(FX,FY) must be a weight-preserving bijection.
/// Functor-law failures are reported first under the "functor/" scope.
LawReport check_embedding(const FunctorMap& functor,
                          const FinWeightedCategory& c,
                          const FinWeightedCategory& d,
                          double tol = kDefaultTol);

/// Logarithm (natural) of the Lipschitz constant of f, clamped at zero.
double lipschitz_weight(std::span<const Index> f, const PQMetric& x,
                        const PQMetric& y);

/// X iso Y in C exactly when X and Y are at distance zero both ways in Opt(C).
bool check_normed(const FinWeightedCategory& c, double tol = kDefaultTol);

struct CompletenessReport {
  bool complete = true;
  /// Pairs (X, Y) with empty hom-set; vacuously satisfied.
  std::vector<std::pair<Index, Index>> empty_hom_sets;
};

CompletenessReport check_optimization_complete(const FinWeightedCategory& c);

}  // namespace wlens
