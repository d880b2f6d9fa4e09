#include <doctest.h>

#include <cmath>

#include "wlens/errors.hpp"
#include "wlens/random.hpp"
#include "wlens/wcat.hpp"

using namespace wlens;

namespace {

const double inf = kInf<double>;

PQMetric line3() {
  Matrix<double> d(3, 3);
  d << 0, 1, 2,
       1, 0, 1,
       2, 1, 0;
  return {{"a", "b", "c"}, d};
}

// A --f(2)--> B, A --g(1)--> B; nothing back.
FinWeightedCategory two_arrows() {
  return FinWeightedCategory::from_names(
      {"A", "B"},
      {{"idA", "A", "A", 0}, {"idB", "B", "B", 0}, {"f", "A", "B", 2},
       {"g", "A", "B", 1}},
      {{"A", "idA"}, {"B", "idB"}},
      {{"idA", "idA", "idA"}, {"idB", "idB", "idB"}, {"idA", "f", "f"},
       {"idA", "g", "g"}, {"f", "idB", "f"}, {"g", "idB", "g"}});
}

}  // namespace

TEST_CASE("pq-metric axioms") {
  CHECK(check_pq_metric(line3()).passed());

  PQMetric bad = line3();
  bad.dist(0, 2) = 2.5;
  const auto r = check_pq_metric(bad);
  REQUIRE(r.count("triangle") == 1);
  CHECK(r.violations()[0].witness == std::vector<std::string>{"a", "b", "c"});
  CHECK(r.violations()[0].lhs == 2.5);
  CHECK(r.violations()[0].rhs == 2.0);

  bad = line3();
  bad.dist(1, 1) = 0.5;
  CHECK(check_pq_metric(bad).count("diagonal-zero") == 1);

  // asymmetric, zero off the diagonal and infinite distances are all allowed
  Matrix<double> d(3, 3);
  d << 0, 0, inf,
       5, 0, inf,
       1, 1, 0;
  CHECK(check_pq_metric({{"x", "y", "z"}, d}).passed());
}

TEST_CASE("unique-arrow encoding is a weighted category and Opt recovers it") {
  InstanceGenerator gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = gen.integer(1, 5);
    PQMetric m{{}, gen.pq_metric(n, 0.3)};
    for (Index i = 0; i < n; ++i) m.points.push_back("p" + std::to_string(i));
    const auto c = FinWeightedCategory::from_pq_metric(m);
    CHECK(check_weighted_category(c).passed());
    const PQMetric opt = optimize(c);
    CHECK(opt.points == m.points);
    CHECK((opt.dist.array() == m.dist.array()).all());
  }
}

TEST_CASE("optimize takes the least weight and inf on empty hom-sets") {
  const auto c = two_arrows();
  CHECK(check_weighted_category(c).passed());
  const auto opt = optimize(c);
  CHECK(opt.dist(0, 1) == 1.0);
  CHECK(opt.dist(1, 0) == inf);
  CHECK(opt.dist(0, 0) == 0.0);
  CHECK(check_pq_metric(opt).passed());

  const auto completeness = check_optimization_complete(c);
  CHECK(completeness.complete);
  REQUIRE(completeness.empty_hom_sets.size() == 1);
  CHECK(completeness.empty_hom_sets[0] == std::pair<Index, Index>{1, 0});
}

TEST_CASE("structural errors are thrown, not reported") {
  using NM = FinWeightedCategory::NamedMorphism;
  CHECK_THROWS_AS(FinWeightedCategory::from_names(
                      {"A"}, std::vector<NM>{{"idA", "A", "A", 0}},
                      {{"A", "idA"}}, {}),
                  StructuralError);  // missing idA o idA
  CHECK_THROWS_AS(FinWeightedCategory::from_names(
                      {"A"}, std::vector<NM>{{"idA", "A", "Q", 0}},
                      {{"A", "idA"}}, {{"idA", "idA", "idA"}}),
                  StructuralError);  // dangling object
  CHECK_THROWS_AS(FinWeightedCategory::from_names(
                      {"A", "A"}, std::vector<NM>{{"idA", "A", "A", 0}},
                      {{"A", "idA"}}, {{"idA", "idA", "idA"}}),
                  StructuralError);  // duplicate object
  CHECK_THROWS_AS(FinWeightedCategory::from_names(
                      {"A"}, std::vector<NM>{{"idA", "A", "A", 0}},
                      {{"A", "idA"}}, {{"idA", "idA", "nope"}}),
                  StructuralError);  // dangling composite
}

TEST_CASE("weighted category law violations carry witnesses") {
  SUBCASE("identity with positive weight") {
    const auto c = FinWeightedCategory::from_names(
        {"A"}, {{"idA", "A", "A", 0.5}}, {{"A", "idA"}},
        {{"idA", "idA", "idA"}});
    const auto r = check_weighted_category(c);
    CHECK(r.count("identity-weight") == 1);
  }
  SUBCASE("composite heavier than its factors") {
    const auto c = FinWeightedCategory::from_names(
        {"A", "B", "C"},
        {{"idA", "A", "A", 0}, {"idB", "B", "B", 0}, {"idC", "C", "C", 0},
         {"f", "A", "B", 1}, {"g", "B", "C", 1}, {"h", "A", "C", 3}},
        {{"A", "idA"}, {"B", "idB"}, {"C", "idC"}},
        {{"idA", "idA", "idA"}, {"idB", "idB", "idB"}, {"idC", "idC", "idC"},
         {"idA", "f", "f"}, {"f", "idB", "f"}, {"idB", "g", "g"},
         {"g", "idC", "g"}, {"idA", "h", "h"}, {"h", "idC", "h"},
         {"f", "g", "h"}});
    const auto r = check_weighted_category(c);
    REQUIRE(r.count("triangle") == 1);
    CHECK(r.violations()[0].lhs == 3.0);
    CHECK(r.violations()[0].rhs == 2.0);
  }
  SUBCASE("table that is not unital") {
    // e o idA = e but idA o e recorded as idA
    const auto c = FinWeightedCategory::from_names(
        {"A"}, {{"idA", "A", "A", 0}, {"e", "A", "A", 0}}, {{"A", "idA"}},
        {{"idA", "idA", "idA"}, {"idA", "e", "e"}, {"e", "idA", "idA"},
         {"e", "e", "e"}});
    const auto r = check_weighted_category(c);
    CHECK(r.count("right-unit") + r.count("left-unit") >= 1);
  }
}

TEST_CASE("functors, embeddings and daggers") {
  const PQMetric big = line3();
  const PQMetric small{{"a", "c"}, (Matrix<double>(2, 2) << 0, 2, 2, 0).finished()};
  const auto C = FinWeightedCategory::from_pq_metric(small);
  const auto D = FinWeightedCategory::from_pq_metric(big);

  // a -> a, c -> c; arrow x->y of C is index x*2+y, of D index x*3+y
  const std::vector<Index> obj{0, 2};
  FunctorMap F{obj, {}};
  for (Index x = 0; x < 2; ++x)
    for (Index y = 0; y < 2; ++y) F.morphisms.push_back(obj[x] * 3 + obj[y]);
  CHECK(check_weighted_functor(F, C, D).passed());
  CHECK(check_embedding(F, C, D).passed());

  // stretch the source so F is a contraction, not an isometry
  PQMetric stretched = small;
  stretched.dist *= 2.0;
  const auto C2 = FinWeightedCategory::from_pq_metric(stretched);
  CHECK(check_weighted_functor(F, C2, D).passed());
  CHECK(check_embedding(F, C2, D).count("weight-preserving") == 2);
  // and the other way the weight law fails
  PQMetric shrunk = small;
  shrunk.dist *= 0.5;
  const auto C3 = FinWeightedCategory::from_pq_metric(shrunk);
  CHECK(check_weighted_functor(F, C3, D).count("weight") == 2);

  FunctorMap partial = F;
  partial.morphisms[1].reset();
  CHECK_THROWS_AS(check_weighted_functor(partial, C, D), StructuralError);

  std::vector<Index> dagger;
  for (Index x = 0; x < 3; ++x)
    for (Index y = 0; y < 3; ++y) dagger.push_back(y * 3 + x);
  CHECK(check_dagger(D, dagger).passed());

  PQMetric skew = big;
  skew.dist(0, 1) = 0.5;
  const auto S = FinWeightedCategory::from_pq_metric(skew);
  CHECK(check_dagger(S, dagger).count("weight") == 2);
}

TEST_CASE("pair relations and normed categories") {
  Matrix<double> d(3, 3);
  d << 0, 0, 1,
       0, 0, 1,
       2, 2, 0;
  const auto c = FinWeightedCategory::from_pq_metric({{"a", "b", "c"}, d});
  CHECK(classify_pair(c, 0, 1) == PairRelation::isomorphic);
  CHECK(classify_pair(c, 0, 2) == PairRelation::quasi_isomorphic);
  CHECK(std::string(to_string(PairRelation::quasi_isomorphic)) == "quasi-isomorphic");
  CHECK(check_normed(c));

  // zero-weight arrows both ways that are not mutually inverse
  const auto odd = FinWeightedCategory::from_names(
      {"A", "B"},
      {{"idA", "A", "A", 0}, {"idB", "B", "B", 0}, {"e", "A", "A", 0},
       {"f", "A", "B", 0}, {"g", "B", "A", 0}},
      {{"A", "idA"}, {"B", "idB"}},
      {{"idA", "idA", "idA"}, {"idB", "idB", "idB"}, {"idA", "e", "e"},
       {"e", "idA", "e"}, {"e", "e", "e"}, {"idA", "f", "f"},
       {"f", "idB", "f"}, {"idB", "g", "g"}, {"g", "idA", "g"},
       {"e", "f", "f"}, {"g", "e", "g"}, {"f", "g", "e"}, {"g", "f", "idB"}});
  CHECK(check_weighted_category(odd).passed());
  CHECK(classify_pair(odd, 0, 1) == PairRelation::neither);
  CHECK_FALSE(check_normed(odd));
}

TEST_CASE("lipschitz weight") {
  const PQMetric x = line3();
  PQMetric y = x;
  y.dist *= 2.0;
  const std::vector<Index> id{0, 1, 2};
  CHECK(lipschitz_weight(id, x, y) == doctest::Approx(std::log(2.0)));
  CHECK(lipschitz_weight(id, y, x) == 0.0);  // contraction, clamped

  // collapsing b onto a while d(a, b) = 0 in the source is fine
  Matrix<double> z(2, 2);
  z << 0, 0, 0, 0;
  const PQMetric flat{{"u", "v"}, z};
  const std::vector<Index> to_line{0, 2};
  CHECK(lipschitz_weight(to_line, flat, x) == inf);
}
