// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--known-failures 6,...]
//
// Exits 0 when the set of failing criteria equals the known-failure list
// (empty by default), 1 otherwise.

#include <chrono>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "golden_cases.hpp"
#include "wlens/lift.hpp"
#include "wlens/ot.hpp"
#include "wlens/wcat.hpp"

using namespace wlens;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double max_gap(const Matrix<double>& a, const Matrix<double>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return kInf<double>;
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome solver_vs_oracle() {
  InstanceGenerator gen(1001);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int bad = 0, n = 0;
  for (; n < 300; ++n) {
    const auto X = make_space(gen.integer(1, 5));
    const auto Y = make_space(gen.integer(1, 5), "y");
    Matrix<double> c(X->size(), Y->size());
    for (Index i = 0; i < c.rows(); ++i)
      for (Index j = 0; j < c.cols(); ++j)
        c(i, j) = gen.chance(0.05) ? kInf<double> : gen.uniform() * 3.0;
    const auto p = gen.measure(X, 0.25), q = gen.measure(Y, 0.25);
    const int k = n % 3 + 1;
    const double a = wasserstein(p, q, c, k), b = brute_force_wasserstein(p, q, c, k);
    if (!ext_near(a, b, 1e-9)) ++bad;
    if (a != b) worst = std::max(worst, std::abs(a - b));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {bad == 0 && secs < 10.0,
          std::to_string(n) + " instances, " + std::to_string(bad) + " disagreements, max gap " +
              fmt("%.1e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome coupling_category() {
  InstanceGenerator gen(1002);
  int bad_id = 0, bad_unit = 0, bad_assoc = 0, bad_tri = 0, n = 0;
  for (; n < 600; ++n) {
    const Index nx = gen.integer(1, 5);
    const auto X = make_space(nx);
    const Matrix<double> c = gen.pq_metric(nx, 0.2);
    const auto s = gen.coupling(X, X, 0.3);
    const auto t = gen.coupling_from(s.target(), X, 0.3);
    const auto u = gen.coupling_from(t.target(), X, 0.3);
    for (int k = 1; k <= 3; ++k) {
      if (cost_k(identity_coupling(s.source()), c, k) != 0.0) ++bad_id;
      if (!cost_triangle_check(s, t, c, k).passed()) ++bad_tri;
    }
    if (max_gap(compose(s, identity_coupling(s.source())).joint(), s.joint()) > 1e-9 ||
        max_gap(compose(identity_coupling(s.target()), s).joint(), s.joint()) > 1e-9)
      ++bad_unit;
    if (max_gap(compose(u, compose(t, s)).joint(), compose(compose(u, t), s).joint()) > 1e-9)
      ++bad_assoc;
  }
  const int bad = bad_id + bad_unit + bad_assoc + bad_tri;
  return {bad == 0, std::to_string(n) + " triples; failures: identity " + std::to_string(bad_id) +
                        ", unit " + std::to_string(bad_unit) + ", associativity " +
                        std::to_string(bad_assoc) + ", triangle " + std::to_string(bad_tri)};
}

Outcome dirac_embedding() {
  InstanceGenerator gen(1003);
  double worst = 0.0;
  int pairs = 0;
  for (int space = 0; space < 40; ++space) {
    const Index n = gen.integer(1, 6);
    const auto X = make_space(n);
    const Matrix<double> c = space % 2 ? gen.pq_metric(n, 0.3) : gen.euclidean_metric(n);
    for (int k = 1; k <= 3; ++k)
      for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y, ++pairs) {
          const double w = wasserstein(Measure::dirac(X, x), Measure::dirac(X, y), c, k);
          if (!ext_near(w, c(x, y), 0.0))
            worst = std::max(worst, std::isinf(w - c(x, y)) ? kInf<double> : std::abs(w - c(x, y)));
        }
  }
  return {worst <= 1e-12, std::to_string(pairs) + " pairs over 40 spaces, max gap " +
                              fmt("%.1e", worst)};
}

Outcome lifting_theorem() {
  InstanceGenerator gen(1004);
  const auto lenses = fixtures::suite(gen);
  const std::vector<int> ks{1, 2, 3};
  int instances = 0, law_fail = 0, weight_fail = 0;
  for (const auto& [name, l] : lenses) {
    if (!check_lens_laws(l).passed() ||
        !check_metric_lens(l, l.domain()->cost(), l.codomain()->cost()).passed())
      return {false, name + " is not a metric lens"};
    for (int c = 0; c < 100; ++c, ++instances) {
      const auto p = gen.measure(l.domain(), 0.3);
      const auto s = gen.coupling_from(pushforward_measure(l.project(), p, l.codomain()),
                                       l.codomain(), 0.3);
      const auto s2 = gen.coupling_from(s.target(), l.codomain(), 0.3);
      if (!check_lift_delta_laws(l, p, s, s2).passed()) ++law_fail;
      if (!check_weight_preservation(l, l.domain()->cost(), l.codomain()->cost(), p, s,
                                     std::span<const int>(ks))
               .passed())
        ++weight_fail;
    }
  }
  return {law_fail + weight_fail == 0,
          std::to_string(lenses.size()) + " lenses, " + std::to_string(instances) +
              " instances; lift-law failures " + std::to_string(law_fail) +
              ", weight failures " + std::to_string(weight_fail)};
}

Outcome product_cross_path() {
  InstanceGenerator gen(1005);
  double worst = 0.0;
  int n = 0;
  for (; n < 200; ++n) {
    const Index ny = gen.integer(1, 5), nz = gen.integer(1, 5);
    const auto Y = make_space(ny, "y"), Z = make_space(nz, "z");
    const auto kind = n % 2 ? ProductCost::max : ProductCost::sum;
    const auto r = gen.coupling(Y, Z, 0.3);
    const auto s = gen.coupling_from(r.source(), Y, 0.3);
    const auto l = product_projection_lens(*Y, *Z, kind);
    const auto generic = lift_coupling(l, flatten(r, l.domain()), s);
    worst = std::max(worst, max_gap(product_lift(r, s, 1e-9, kind).joint(), generic.joint()));
  }
  return {worst <= 1e-12, std::to_string(n) + " instances, max gap " + fmt("%.1e", worst)};
}

// Random maps onto a smaller set, so at least one fiber has two points.
Outcome pushforward_functoriality() {
  InstanceGenerator gen(1006);
  int n = 0, functor_fail = 0, lemma_fail = 0, injective_fail = 0;
  double worst = 0.0;
  for (; n < 300; ++n) {
    const Index nx = gen.integer(2, 5), ny = gen.integer(1, nx - 1);
    const auto X = make_space(nx), Y = make_space(ny, "y");
    std::vector<Index> f(static_cast<std::size_t>(nx));
    for (auto& v : f) v = gen.integer(0, ny - 1);
    const auto s = gen.coupling(X, X, 0.3);
    const auto t = gen.coupling_from(s.target(), X, 0.3);
    const double gap = max_gap(pushforward_coupling(f, compose(t, s), Y).joint(),
                               compose(pushforward_coupling(f, t, Y),
                                       pushforward_coupling(f, s, Y)).joint());
    worst = std::max(worst, gap);
    if (gap > 1e-9) ++functor_fail;
    if (!check_pushforward_conditional(f, s, Y).passed()) ++lemma_fail;

    // control: an injective map into a larger space
    const auto W = make_space(nx + 1, "w");
    std::vector<Index> i(static_cast<std::size_t>(nx));
    for (Index x = 0; x < nx; ++x) i[static_cast<std::size_t>(x)] = (x + 1) % (nx + 1);
    if (max_gap(pushforward_coupling(i, compose(t, s), W).joint(),
                compose(pushforward_coupling(i, t, W), pushforward_coupling(i, s, W)).joint()) >
            1e-9 ||
        !check_pushforward_conditional(i, s, W).passed())
      ++injective_fail;
  }
  return {functor_fail + lemma_fail + injective_fail == 0,
          std::to_string(n) + " non-injective instances; functoriality fails on " +
              std::to_string(functor_fail) + " (max gap " + fmt("%.3g", worst) +
              "), conditional identity fails on " + std::to_string(lemma_fail) +
              "; injective controls failing: " + std::to_string(injective_fail)};
}

Outcome embedding_suite() {
  InstanceGenerator gen(1007);
  int roundtrip_fail = 0, check_fail = 0, n = 0;
  for (; n < 100; ++n) {
    const Index nx = gen.integer(1, 4), ny = nx + gen.integer(0, 2);
    const Matrix<double> dy = gen.euclidean_metric(ny);
    std::vector<Index> all(static_cast<std::size_t>(ny));
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), gen.engine());
    const std::vector<Index> i(all.begin(), all.begin() + nx);
    Matrix<double> dx(nx, nx);
    for (Index a = 0; a < nx; ++a)
      for (Index b = 0; b < nx; ++b) dx(a, b) = dy(i[a], i[b]);
    const auto X = make_space(nx, "x", dx), Y = make_space(ny, "y", dy);
    const auto p = gen.measure(X, 0.3), q = gen.measure(X, 0.3);
    const auto r = gen.coupling_from(p, X, 0.3);

    const auto pushed = pushforward_coupling(i, r, Y);
    for (Index a = 0; a < nx; ++a)
      for (Index b = 0; b < nx; ++b)
        if (pushed(i[a], i[b]) != r(a, b)) ++roundtrip_fail;

    EmbeddingCheckOptions options;
    options.cost_x = dx;
    options.cost_y = dy;
    options.samples_x = {gen.coupling_from(p, X)};
    if (!check_pushforward_embedding(i, p, q, Y, 1e-9, options).passed()) ++check_fail;
  }

  // a stretched distance must be caught
  const std::vector<Index> i{2, 0};
  Matrix<double> dy(3, 3);
  dy << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  Matrix<double> dx(2, 2);
  dx << 0, 3, 3, 0;
  const auto X = make_space(2, "x", dx), Y = make_space(3, "y", dy);
  EmbeddingCheckOptions bent;
  bent.cost_x = dx;
  bent.cost_y = dy;
  const bool caught = check_pushforward_embedding(i, Measure::dirac(X, 0), Measure::dirac(X, 1),
                                                  Y, 1e-9, bent)
                          .count("weight-preserving") > 0;
  return {roundtrip_fail + check_fail == 0 && caught,
          std::to_string(n) + " isometric embeddings; roundtrip mismatches " +
              std::to_string(roundtrip_fail) + ", check failures " + std::to_string(check_fail) +
              "; stretched metric " + (caught ? "detected" : "missed")};
}

Outcome lens_exhaustives() {
  int products = 0, product_fail = 0, metric = 0, submetry_fail = 0, lifting_fail = 0;
  for (Index ny = 1; ny <= 5; ++ny)
    for (Index nz = 1; nz <= 5; ++nz, ++products)
      if (!check_lens_laws(product_projection_lens(*make_space(ny, "y"), *make_space(nz, "z")))
               .passed())
        ++product_fail;

  InstanceGenerator gen(1008);
  std::vector<SetLens> lenses;
  for (auto& named : fixtures::suite(gen)) lenses.push_back(std::move(named.lens));
  for (int c = 0; c < 40; ++c)
    lenses.push_back(fixtures::product(gen, gen.integer(1, 4), gen.integer(1, 4),
                                       c % 2 ? ProductCost::max : ProductCost::sum));
  for (const auto& l : lenses) {
    const auto& dx = l.domain()->cost();
    const auto& dy = l.codomain()->cost();
    if (!check_metric_lens(l, dx, dy).passed()) continue;
    ++metric;
    if (!check_submetry(l.project(), dx, dy).passed()) {
      ++submetry_fail;
      continue;
    }
    const auto phi = submetry_to_lifting(l.project(), dx, dy);
    // composition is not promised for the lowest-index witness
    const auto r = check_partial_lens_laws(l.project(), phi, dx, 0.0);
    if (r.count("lifting") + r.count("identity") > 0) ++lifting_fail;
  }
  return {product_fail + submetry_fail + lifting_fail == 0 && metric == int(lenses.size()),
          std::to_string(products) + " product lenses (" + std::to_string(product_fail) +
              " failing); " + std::to_string(metric) + " metric lenses, submetry failures " +
              std::to_string(submetry_fail) + ", lifting/identity failures " +
              std::to_string(lifting_fail)};
}

Outcome opt_correctness() {
  InstanceGenerator gen(1009);
  int batches = 0, metric_fail = 0, encode_fail = 0, encodings = 0;
  for (; batches < 60; ++batches) {
    const Index n = gen.integer(1, 5);
    const auto X = make_space(n);
    const Matrix<double> c = batches % 2 ? gen.pq_metric(n, 0.2) : gen.euclidean_metric(n);
    std::vector<Measure> ms;
    const Index count = gen.integer(1, 5);
    for (Index i = 0; i < count; ++i) ms.push_back(gen.measure(X, 0.3));
    for (int k = 1; k <= 3; ++k)
      if (!check_pq_metric(optimal_pq_metric(std::span<const Measure>(ms), c, k)).passed())
        ++metric_fail;
  }
  for (; encodings < 60; ++encodings) {
    const Index n = gen.integer(1, 6);
    PQMetric m{{}, encodings % 2 ? gen.pq_metric(n, 0.3) : gen.euclidean_metric(n)};
    for (Index i = 0; i < n; ++i) m.points.push_back("p" + std::to_string(i));
    const PQMetric opt = optimize(FinWeightedCategory::from_pq_metric(m));
    if (opt.points != m.points || !(opt.dist.array() == m.dist.array()).all()) ++encode_fail;
  }
  return {metric_fail + encode_fail == 0,
          std::to_string(batches) + " batches x 3 exponents, pq-metric failures " +
              std::to_string(metric_fail) + "; " + std::to_string(encodings) +
              " unique-arrow encodings, mismatches " + std::to_string(encode_fail)};
}

Outcome cli_determinism() {
  const std::filesystem::path dir = WLENS_GOLDEN_DIR;
  std::set<std::string> verbs;
  int cases = 0, mismatch = 0, unstable = 0;
  for (const auto& name : golden::case_names(dir)) {
    const auto args = golden::case_args(dir, name);
    const auto a = golden::replay(dir, args), b = golden::replay(dir, args);
    ++cases;
    if (!args.empty()) verbs.insert(args.front());
    if (a.out != golden::slurp(dir / (name + ".out")) ||
        a.code != std::stoi(golden::slurp(dir / (name + ".exit"))))
      ++mismatch;
    if (a.out != b.out || a.err != b.err || a.code != b.code) ++unstable;
  }
  int seeds = 0, seed_unstable = 0;
  for (const char* seed : {"1", "7", "42", "12345"}) {
    const std::vector<std::string> args{"verify", "--seed", seed, "--cases", "30",
                                        "inputs/product.json"};
    if (golden::replay(dir, args).out != golden::replay(dir, args).out) ++seed_unstable;
    ++seeds;
  }
  int missing = 0;
  for (const auto& v : cli::verb_table()) missing += verbs.count(v.name) ? 0 : 1;
  return {mismatch + unstable + seed_unstable + missing == 0 && cases > 0,
          std::to_string(cases) + " golden cases, " + std::to_string(mismatch) +
              " mismatches, " + std::to_string(unstable) + " unstable; " +
              std::to_string(seeds) + " seeds replayed, " + std::to_string(seed_unstable) +
              " unstable; verbs without a golden case " + std::to_string(missing)};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--known-failures" && a + 1 < argc) {
      known = parse_list(argv[++a]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-failures N,M,...]\n");
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"solver vs brute-force oracle", solver_vs_oracle},
      {"couplings form a weighted category", coupling_category},
      {"Dirac measures embed the cost", dirac_embedding},
      {"lifting along metric lenses", lifting_theorem},
      {"product lens cross-path", product_cross_path},
      {"pushforward functoriality", pushforward_functoriality},
      {"pushforward embeddings", embedding_suite},
      {"lens law exhaustives", lens_exhaustives},
      {"Opt correctness", opt_correctness},
      {"CLI determinism", cli_determinism},
  };
  std::set<int> failed;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int id = static_cast<int>(c) + 1;
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) failed.insert(id);
    std::printf("%s %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, criteria[c].first.c_str(),
                o.detail.c_str(), !o.pass && known.count(id) ? " [known]" : "");
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed.size(), criteria.size());
  return failed == known ? 0 : 1;
}
