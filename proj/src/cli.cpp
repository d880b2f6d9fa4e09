#include "wlens/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "wlens/io.hpp"
#include "wlens/lift.hpp"
#include "wlens/ot.hpp"
#include "wlens/random.hpp"

namespace wlens::cli {

const std::vector<VerbInfo>& verb_table() {
  static const std::vector<VerbInfo> table{
      {"wasserstein", "optimal k-cost between two measures",
       {"brute_force_wasserstein", "check_optimization_complete[couplings]"}},
      {"compose", "glue two couplings along their shared marginal",
       {"bayes_check", "cost_triangle_check", "validate_cost"}},
      {"push", "push a coupling forward along a point map",
       {"check_pushforward_conditional", "check_pushforward_embedding"}},
      {"lift", "lift a coupling along a lens at an anchor measure",
       {"check_lifted"}},
      {"verify", "randomized delta-lens and weight suite for a lens",
       {"check_lift_delta_laws", "check_weight_preservation",
        "check_lens_functoriality"}},
      {"lens-check", "lens laws, metric lens and submetry checks",
       {"check_lens_laws", "check_metric_lens", "check_submetry",
        "check_partial_lens_laws"}},
      {"opt", "weighted category laws and its optimization Opt(C)",
       {"check_weighted_category", "check_pq_metric", "check_normed",
        "check_optimization_complete", "check_dagger",
        "check_weighted_functor", "check_embedding"}},
  };
  return table;
}

namespace {

// Law names each check can report, listed even when they pass.
const std::map<std::string, std::vector<std::string>>& declared_laws() {
  static const std::map<std::string, std::vector<std::string>> laws{
      {"brute_force_wasserstein", {"oracle-agreement"}},
      {"check_optimization_complete[couplings]", {"plan-attains-value"}},
      {"bayes_check", {"forward-disintegration", "backward-disintegration"}},
      {"cost_triangle_check", {"cost-triangle"}},
      {"validate_cost", {"nonnegative", "diagonal-zero", "triangle"}},
      {"check_pushforward_conditional", {"pushforward-conditional"}},
      {"check_pushforward_embedding",
       {"roundtrip", "weight-preserving", "support-on-image", "pullback"}},
      {"check_lifted", {"marginal", "pushforward"}},
      {"check_lift_delta_laws",
       {"marginal", "pushforward", "identity", "second", "composition"}},
      {"check_weight_preservation", {"weight-preservation"}},
      {"check_lens_functoriality", {"lens-functoriality"}},
      {"check_lens_laws", {"lifting", "identity", "composition"}},
      {"check_metric_lens",
       {"domain-metric", "codomain-metric", "1-lipschitz", "distance-equation"}},
      {"check_submetry",
       {"domain-metric", "codomain-metric", "1-lipschitz", "lift-witness"}},
      {"check_partial_lens_laws", {"lifting", "identity"}},
      {"check_weighted_category",
       {"identity-weight", "right-unit", "left-unit", "triangle",
        "associativity"}},
      {"check_pq_metric", {"nonnegative", "diagonal-zero", "triangle"}},
      {"check_normed", {"normed"}},
      {"check_optimization_complete", {"optimization-complete"}},
      {"check_dagger",
       {"reverses-endpoints", "involution", "weight", "identity",
        "contravariance"}},
      {"check_weighted_functor", {"endpoints", "weight", "identity", "composition"}},
      {"check_embedding", {"functor", "injective", "weight-preserving", "surjective"}},
  };
  return laws;
}

struct Options {
  std::vector<std::string> files;
  int k = 1;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int cases = 100;
  bool oracle = false;
  std::string format = "text";
  std::string mode = "metric";
  std::string functor, functor_target, dagger;
};

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json number(double v) { return extended_to_json(round12(v)); }

void round_numbers(Json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& child : j) round_numbers(child);
  }
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number_float()) return format_number(j.get<double>());
  if (j.is_number()) return j.dump();
  if (j.is_null()) return "none";
  std::string out = "[";
  bool first = true;
  for (const auto& e : j) {
    out += (first ? "" : ", ") + scalar_text(e);
    first = false;
  }
  return out + "]";
}

bool is_matrix(const Json& j) {
  return j.is_array() && !j.empty() &&
         std::all_of(j.begin(), j.end(), [](const Json& r) { return r.is_array(); });
}

void render_text(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      os << pad << key << ":\n";
      render_text(os, value, indent + 2);
    } else if (is_matrix(value)) {
      os << pad << key << ":\n";
      for (const auto& row : value) {
        os << pad << " ";
        for (const auto& e : row) os << ' ' << scalar_text(e);
        os << '\n';
      }
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      os << pad << key << ":\n";
      for (const auto& item : value) {
        os << pad << "  -";
        for (const auto& [k, v] : item.items()) os << ' ' << k << '=' << scalar_text(v);
        os << '\n';
      }
    } else {
      os << pad << key << ": " << scalar_text(value) << '\n';
    }
  }
}

/// Collects the output document and the law checks a verb runs.
class Output {
 public:
  explicit Output(const std::string& verb) : verb_(verb) { doc_["verb"] = verb; }

  Json& operator[](const std::string& key) { return doc_[key]; }

  void check(const std::string& name, const LawReport& report) {
    const auto& table = verb_table();
    const auto verb = std::find_if(table.begin(), table.end(),
                                   [&](const VerbInfo& v) { return v.name == verb_; });
    if (verb == table.end() ||
        std::find(verb->checks.begin(), verb->checks.end(), name) == verb->checks.end())
      throw std::logic_error("check " + name + " is not registered for " + verb_);

    Json laws = Json::object();
    for (const auto& law : declared_laws().at(name)) laws[law] = 0;
    for (const auto& v : report.violations()) {
      const std::string head = v.law.substr(0, v.law.find('/'));
      laws[head] = laws.value(head, 0) + 1;
    }
    Json entry{{"status", report.passed() ? "pass" : "fail"}};
    Json summary = Json::object();
    for (const auto& [law, n] : laws.items())
      summary[law] = n.get<int>() == 0 ? Json("pass")
                                       : Json("fail (" + std::to_string(n.get<int>()) + ")");
    entry["laws"] = std::move(summary);
    if (!report.passed()) {
      Json violations = Json::array();
      for (const auto& v : report.violations())
        violations.push_back({{"law", v.law},
                              {"at", v.witness},
                              {"lhs", number(v.lhs)},
                              {"rhs", number(v.rhs)}});
      entry["violations"] = std::move(violations);
    }
    checks_[name] = std::move(entry);
    passed_ = passed_ && report.passed();
  }

  int write(std::ostream& os, bool json) {
    doc_["checks"] = checks_;
    doc_["status"] = passed_ ? "ok" : "violation";
    if (json) {
      round_numbers(doc_);
      os << doc_.dump(2) << '\n';
    } else {
      render_text(os, doc_, 0);
    }
    return passed_ ? kExitOk : kExitViolation;
  }

 private:
  std::string verb_;
  Json doc_;
  Json checks_ = Json::object();
  bool passed_ = true;
};

Json coupling_doc(const Coupling& s) { return coupling_to_json(s); }

Measure read_measure(const std::string& path, const SpacePtr& space) {
  return measure_from_json(read_json_file(path), space);
}

Coupling read_coupling(const std::string& path, const SpacePtr& space) {
  return coupling_from_json(read_json_file(path), space, space);
}

void tag_case(LawReport& into, const LawReport& from, int c) {
  for (Violation v : from.violations()) {
    v.witness.insert(v.witness.begin(), "case=" + std::to_string(c));
    into.add(std::move(v));
  }
}

int run_wasserstein(const Options& o, Output& out) {
  const auto space = space_from_json(read_json_file(o.files.at(0)));
  const auto p = read_measure(o.files.at(1), space);
  const auto q = read_measure(o.files.at(2), space);
  const auto& cost = space->cost();
  const auto sol = solve_transport(p, q, cost, o.k);
  out["k"] = o.k;
  out["value"] = number(sol.value);
  out["plan"] = coupling_doc(sol.plan);

  const std::vector<Measure> pair{p, q};
  const auto complete =
      check_optimization_complete(std::span<const Measure>(pair), cost, o.k, o.tol);
  LawReport attained;
  if (!complete.complete) attained.add("plan-attains-value", {"p", "q"}, 0.0, 0.0);
  out.check("check_optimization_complete[couplings]", attained);

  if (o.oracle) {
    try {
      const double oracle = brute_force_wasserstein(p, q, cost, o.k);
      out["oracle"] = number(oracle);
      LawReport agree;
      if (!ext_near(sol.value, oracle, o.tol))
        agree.add("oracle-agreement", {"p", "q"}, sol.value, oracle);
      out.check("brute_force_wasserstein", agree);
    } catch (const SizeLimitError&) {
      out["oracle"] = "skipped: support too large";
    }
  }
  return 0;
}

int run_compose(const Options& o, Output& out) {
  const auto space = space_from_json(read_json_file(o.files.at(0)));
  const auto s = read_coupling(o.files.at(1), space);
  const auto t = read_coupling(o.files.at(2), space);
  const auto ts = compose(t, s, o.tol);
  out["composite"] = coupling_doc(ts);
  out.check("bayes_check", bayes_check(ts, o.tol));
  if (space->has_cost()) {
    const auto& cost = space->cost();
    out["k"] = o.k;
    out["cost"] = Json{{"s", number(cost_k(s, cost, o.k))},
                       {"t", number(cost_k(t, cost, o.k))},
                       {"t o s", number(cost_k(ts, cost, o.k))}};
    out.check("validate_cost", validate_cost(*space, o.tol));
    out.check("cost_triangle_check", cost_triangle_check(s, t, cost, o.k, o.tol));
  }
  return 0;
}

int run_push(const Options& o, Output& out) {
  const auto X = space_from_json(read_json_file(o.files.at(0)));
  const auto Y = space_from_json(read_json_file(o.files.at(1)));
  const auto f = point_map_from_json(read_json_file(o.files.at(2)), *X, *Y);
  const auto s = read_coupling(o.files.at(3), X);
  out["pushed"] = coupling_doc(pushforward_coupling(f, s, Y));
  out.check("check_pushforward_conditional",
            check_pushforward_conditional(f, s, Y, o.tol));
  if (std::set<Index>(f.begin(), f.end()).size() == f.size()) {
    EmbeddingCheckOptions options;
    if (X->has_cost() && Y->has_cost()) {
      options.cost_x = X->cost();
      options.cost_y = Y->cost();
    }
    options.ks = {o.k};
    options.samples_x = {s};
    out.check("check_pushforward_embedding",
              check_pushforward_embedding(f, s.source(), s.target(), Y, o.tol,
                                          options));
  } else {
    out["embedding"] = "skipped: map is not injective";
  }
  return 0;
}

int run_lift(const Options& o, Output& out) {
  const auto lens = lens_from_json(read_json_file(o.files.at(0)));
  const auto p = read_measure(o.files.at(1), lens.domain());
  const auto s = read_coupling(o.files.at(2), lens.codomain());
  const auto lifted = lift(lens, p, s, o.tol);
  out["lifted"] = coupling_doc(lifted.result);
  if (lens.domain()->has_cost() && lens.codomain()->has_cost()) {
    out["k"] = o.k;
    out["cost"] = Json{{"base", number(cost_k(s, lens.codomain()->cost(), o.k))},
                       {"lifted", number(cost_k(lifted.result, lens.domain()->cost(), o.k))}};
  }
  out.check("check_lifted", check_lifted(lens, lifted, o.tol));
  return 0;
}

int run_verify(const Options& o, Output& out) {
  const auto lens = lens_from_json(read_json_file(o.files.at(0)));
  const auto second = o.files.size() > 1
                           ? lens_from_json(read_json_file(o.files.at(1)))
                           : SetLens::identity(lens.codomain());
  if (!same_space(lens.codomain(), second.domain()))
    throw StructuralError("verify: second lens does not start at the codomain");
  const bool metric = lens.domain()->has_cost() && lens.codomain()->has_cost();
  const std::vector<int> ks{1, 2, 3};
  const SetLens composite = compose_lenses(lens, second);

  InstanceGenerator gen(o.seed);
  LawReport delta, weight, functorial;
  for (int c = 0; c < o.cases; ++c) {
    const auto p = gen.measure(lens.domain(), 0.3);
    const auto fp = pushforward_measure(lens.project(), p, lens.codomain());
    const auto s = gen.coupling_from(fp, lens.codomain(), 0.3);
    const auto s2 = gen.coupling_from(s.target(), lens.codomain(), 0.3);
    tag_case(delta, check_lift_delta_laws(lens, p, s, s2, o.tol), c);
    if (metric)
      tag_case(weight,
               check_weight_preservation(lens, lens.domain()->cost(),
                                         lens.codomain()->cost(), p, s,
                                         std::span<const int>(ks), o.tol),
               c);
    const auto gfp = pushforward_measure(composite.project(), p, composite.codomain());
    const auto sz = gen.coupling_from(gfp, composite.codomain(), 0.3);
    tag_case(functorial, check_lens_functoriality(lens, second, p, sz, o.tol), c);
  }
  out["seed"] = o.seed;
  out["cases"] = o.cases;
  out.check("check_lift_delta_laws", delta);
  if (metric) {
    out["ks"] = ks;
    out.check("check_weight_preservation", weight);
  }
  out.check("check_lens_functoriality", functorial);
  return 0;
}

MetricMode parse_mode(const std::string& mode) {
  return mode == "pq" ? MetricMode::pq : MetricMode::metric;
}

int run_lens_check(const Options& o, Output& out) {
  const auto lens = lens_from_json(read_json_file(o.files.at(0)));
  out.check("check_lens_laws", check_lens_laws(lens).to_report(lens));
  if (!lens.domain()->has_cost() || !lens.codomain()->has_cost()) return 0;

  const auto mode = parse_mode(o.mode);
  const auto& dx = lens.domain()->cost();
  const auto& dy = lens.codomain()->cost();
  out["mode"] = o.mode;
  out.check("check_metric_lens", check_metric_lens(lens, dx, dy, o.tol, mode));
  const auto sub = check_submetry(lens.project(), dx, dy, o.tol, mode);
  out.check("check_submetry", sub);
  if (!sub.passed()) return 0;

  // the lowest-index lifting need not compose; reported, not enforced
  const auto phi = submetry_to_lifting(lens.project(), dx, dy, o.tol);
  const auto partial = check_partial_lens_laws(lens.project(), phi, dx, o.tol, mode);
  LawReport enforced;
  std::size_t broken = 0;
  for (const auto& v : partial.violations())
    if (v.law == "composition")
      ++broken;
    else
      enforced.add(v.law == "identity-up-to-zero" ? Violation{"identity", v.witness, v.lhs, v.rhs}
                                                  : v);
  const SetLens chosen(lens.domain(), lens.codomain(), lens.project(), phi);
  out["submetry_lifting"] = Json{
      {"lift", lens_to_json(chosen)["lift"]},
      {"composition", broken == 0 ? "holds"
                                  : "fails at " + std::to_string(broken) + " triples"}};
  out.check("check_partial_lens_laws", enforced);
  return 0;
}

int run_opt(const Options& o, Output& out) {
  const auto c = category_from_json(read_json_file(o.files.at(0)));
  out.check("check_weighted_category", check_weighted_category(c, o.tol));
  const PQMetric opt = optimize(c);
  out["opt"] = metric_to_json(opt);
  out.check("check_pq_metric", check_pq_metric(opt, o.tol));

  LawReport normed;
  if (!check_normed(c, o.tol)) normed.add("normed", {}, 0.0, 0.0);
  out.check("check_normed", normed);

  const auto complete = check_optimization_complete(c);
  LawReport completeness;
  if (!complete.complete) completeness.add("optimization-complete", {}, 0.0, 0.0);
  Json empty = Json::array();
  for (const auto& [x, y] : complete.empty_hom_sets)
    empty.push_back({c.objects()[static_cast<std::size_t>(x)],
                     c.objects()[static_cast<std::size_t>(y)]});
  out["empty_hom_sets"] = std::move(empty);
  out.check("check_optimization_complete", completeness);

  Json relations = Json::object();
  for (Index x = 0; x < c.object_count(); ++x)
    for (Index y = x + 1; y < c.object_count(); ++y) {
      const auto r = classify_pair(c, x, y, o.tol);
      if (r != PairRelation::neither)
        relations[c.objects()[static_cast<std::size_t>(x)] + " ~ " +
                  c.objects()[static_cast<std::size_t>(y)]] = to_string(r);
    }
  out["relations"] = std::move(relations);

  if (!o.dagger.empty()) {
    const auto dag = dagger_from_json(read_json_file(o.dagger), c);
    out.check("check_dagger", check_dagger(c, dag, o.tol));
  }
  if (!o.functor.empty()) {
    const auto d = category_from_json(read_json_file(o.functor_target));
    const auto f = functor_from_json(read_json_file(o.functor), c, d);
    out.check("check_weighted_functor", check_weighted_functor(f, c, d, o.tol));
    out.check("check_embedding", check_embedding(f, c, d, o.tol));
  }
  return 0;
}

using Handler = int (*)(const Options&, Output&);

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  if (!args.empty() && !args.front().starts_with("-") &&
      std::none_of(verb_table().begin(), verb_table().end(),
                   [&](const VerbInfo& v) { return v.name == args.front(); })) {
    err << "error: unknown verb '" << args.front() << "'\n";
    return kExitInputError;
  }

  CLI::App app{"Weighted lenses, couplings and optimal transport on finite spaces",
               "wlens"};
  app.require_subcommand(1);
  Options o;

  const std::map<std::string, std::pair<Handler, std::vector<std::string>>> verbs{
      {"wasserstein", {run_wasserstein, {"space", "p", "q"}}},
      {"compose", {run_compose, {"space", "s", "t"}}},
      {"push", {run_push, {"space-x", "space-y", "map", "coupling"}}},
      {"lift", {run_lift, {"lens", "anchor", "coupling"}}},
      {"verify", {run_verify, {"lens", "second-lens"}}},
      {"lens-check", {run_lens_check, {"lens"}}},
      {"opt", {run_opt, {"category"}}},
  };

  std::map<std::string, CLI::App*> subs;
  for (const auto& info : verb_table()) {
    CLI::App* sub = app.add_subcommand(info.name, info.summary);
    const auto& inputs = verbs.at(info.name).second;
    std::string usage;
    for (const auto& name : inputs) usage += " " + name;
    auto* files = sub->add_option("files", o.files, "input files:" + usage);
    if (info.name == "verify")
      files->expected(1, 2);
    else
      files->expected(static_cast<int>(inputs.size()));
    files->required()->check(CLI::ExistingFile);
    sub->add_option("--format", o.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--tol", o.tol, "law tolerance")->capture_default_str();
    if (info.name == "wasserstein" || info.name == "compose" ||
        info.name == "push" || info.name == "lift")
      sub->add_option("--k", o.k, "cost exponent")->check(CLI::PositiveNumber);
    if (info.name == "wasserstein")
      sub->add_flag("--oracle", o.oracle, "cross-check with brute force");
    if (info.name == "verify") {
      sub->add_option("--seed", o.seed, "generator seed");
      sub->add_option("--cases", o.cases, "random instances")->check(CLI::PositiveNumber);
    }
    if (info.name == "lens-check")
      sub->add_option("--mode", o.mode, "metric or pq")
          ->check(CLI::IsMember({"metric", "pq"}));
    if (info.name == "opt") {
      sub->add_option("--dagger", o.dagger, "dagger assignment file")
          ->check(CLI::ExistingFile);
      auto* target = sub->add_option("--target", o.functor_target,
                                     "codomain category of --functor")
                         ->check(CLI::ExistingFile);
      sub->add_option("--functor", o.functor, "functor file")
          ->check(CLI::ExistingFile)
          ->needs(target);
      target->needs(sub->get_option("--functor"));
    }
    subs[info.name] = sub;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    Output doc(name);
    try {
      verbs.at(name).first(o, doc);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitInputError;
    } catch (const Json::exception& e) {
      err << "error: malformed input: " << e.what() << '\n';
      return kExitInputError;
    }
    return doc.write(out, o.format == "json");
  }
  return kExitInputError;
}

}  // namespace wlens::cli
