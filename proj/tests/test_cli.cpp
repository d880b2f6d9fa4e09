#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "golden_cases.hpp"
#include "wlens/cli.hpp"

using namespace wlens;

namespace {

const std::filesystem::path kDir = WLENS_GOLDEN_DIR;

golden::Result run(std::vector<std::string> args) {
  return golden::replay(kDir, args);
}

}  // namespace

TEST_CASE("every library check belongs to exactly one verb") {
  // check_metric_axioms is reached through the domain-metric and
  // codomain-metric laws, so it has no entry of its own.
  const std::set<std::string> library{
      "bayes_check", "brute_force_wasserstein", "check_dagger", "check_embedding",
      "check_lens_functoriality", "check_lens_laws", "check_lift_delta_laws",
      "check_lifted", "check_metric_lens", "check_normed",
      "check_optimization_complete", "check_optimization_complete[couplings]",
      "check_partial_lens_laws", "check_pq_metric", "check_pushforward_conditional",
      "check_pushforward_embedding", "check_submetry", "check_weight_preservation",
      "check_weighted_category", "check_weighted_functor", "cost_triangle_check",
      "validate_cost"};
  std::map<std::string, int> owners;
  for (const auto& verb : cli::verb_table())
    for (const auto& c : verb.checks) ++owners[c];
  for (const auto& c : library) {
    CAPTURE(c);
    CHECK(owners[c] == 1);
  }
  CHECK(owners.size() == library.size());
}

TEST_CASE("Dirac measures one step apart") {
  const auto r = run({"wasserstein", "--k", "1", "inputs/line2.json",
                      "inputs/delta_a.json", "inputs/delta_b.json"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("value: 1.0\n") != std::string::npos);
}

TEST_CASE("verify is seeded") {
  const std::vector<std::string> args{"verify", "--seed", "42", "inputs/product.json"};
  const auto a = run(args), b = run(args);
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  const auto c = run({"verify", "--seed", "43", "--cases", "20", "inputs/product.json"});
  CHECK(c.code == cli::kExitOk);
  CHECK(c.out.find("seed: 43") != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
  const auto lift = run({"lift", "inputs/product.json", "inputs/anchor.json",
                         "inputs/base_wrong.json"});
  CHECK(lift.code == cli::kExitInputError);
  CHECK(lift.out.empty());
  CHECK(lift.err.find("marginal precondition") != std::string::npos);

  const auto verb = run({"transport"});
  CHECK(verb.code == cli::kExitInputError);
  CHECK(verb.err == "error: unknown verb 'transport'\n");

  CHECK(run({"wasserstein", "inputs/line2.json", "inputs/nothing.json",
             "inputs/delta_b.json"}).code == cli::kExitInputError);
  CHECK(run({"wasserstein", "--k", "0", "inputs/line2.json", "inputs/delta_a.json",
             "inputs/delta_b.json"}).code == cli::kExitInputError);
  CHECK(run({"compose"}).code == cli::kExitInputError);
  CHECK(run({}).code == cli::kExitInputError);
}

TEST_CASE("help") {
  const auto top = run({"--help"});
  CHECK(top.code == cli::kExitOk);
  for (const auto& verb : cli::verb_table()) CHECK(top.out.find(verb.name) != std::string::npos);
  CHECK(run({"lift", "--help"}).code == cli::kExitOk);
}

TEST_CASE("violations exit with 1 and keep the report") {
  const auto r = run({"push", "inputs/four.json", "inputs/two.json", "inputs/merge.json", "inputs/mixing.json"});
  INFO(r.err);
  CHECK(r.code == cli::kExitViolation);
  CHECK(r.out.find("status: violation") != std::string::npos);
}

TEST_CASE("golden cases replay in-process") {
  for (const auto& name : golden::case_names(kDir)) {
    CAPTURE(name);
    const auto args = golden::case_args(kDir, name);
    const auto r = run(args);
    CHECK(r.code == std::stoi(golden::slurp(kDir / (name + ".exit"))));
    CHECK(r.out == golden::slurp(kDir / (name + ".out")));
    if (std::filesystem::exists(kDir / (name + ".err")))
      CHECK(r.err == golden::slurp(kDir / (name + ".err")));
  }
}
