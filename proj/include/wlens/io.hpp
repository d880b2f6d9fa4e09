#pragma once

// JSON file formats shared by every module. Extended reals are numbers or
// the string "inf". Labels keep file order.
//
//   space     {"labels": [..], "cost": [[..]]?}
//   measure   {"mass": {label: number}}            missing labels carry 0
//   coupling  {"source": [..]?, "target": [..]?, "joint": [[..]]}
//   kernel    {"rows": [[..]]}
//   map       {"map": {label: label}}
//   lens      {"domain": [..], "codomain": [..], "project": [[x, y]],
//              "lift": [[x, y, x']], "domain_cost": [[..]]?,
//              "codomain_cost": [[..]]?}
//   category  {"objects": [..], "morphisms": [{"id", "source", "target",
//              "weight"}], "identities": {object: id},
//              "composition": [[f, g, g o f]]}
//   metric    {"points": [..], "dist": [[..]]}
//   functor   {"objects": {X: FX}, "morphisms": {f: Ff}}
//   dagger    {"dagger": {f: f_dagger}}

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wlens/lens.hpp"
#include "wlens/prob.hpp"
#include "wlens/wcat.hpp"

namespace wlens {

using Json = nlohmann::ordered_json;

/// Unreadable file, malformed JSON, or a document that breaks its schema.
class InputError : public Error {
 public:
  using Error::Error;
};

Json read_json_file(const std::filesystem::path& path);

Json extended_to_json(double value);
double extended_from_json(const Json& j);

Json matrix_to_json(const Matrix<double>& m);
Matrix<double> matrix_from_json(const Json& j);

Json space_to_json(const FiniteSpace& space);
SpacePtr space_from_json(const Json& j);

Json measure_to_json(const Measure& p);
Measure measure_from_json(const Json& j, const SpacePtr& space);

Json coupling_to_json(const Coupling& s);
Coupling coupling_from_json(const Json& j, const SpacePtr& source,
                            const SpacePtr& target);

Json kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const Json& j, const SpacePtr& source,
                        const SpacePtr& target);

Json point_map_to_json(std::span<const Index> f, const FiniteSpace& from,
                       const FiniteSpace& to);
PointMap point_map_from_json(const Json& j, const FiniteSpace& from,
                             const FiniteSpace& to);

Json lens_to_json(const SetLens& lens);
SetLens lens_from_json(const Json& j);

Json category_to_json(const FinWeightedCategory& c);
FinWeightedCategory category_from_json(const Json& j);

Json metric_to_json(const PQMetric& m);
PQMetric metric_from_json(const Json& j);

Json functor_to_json(const FunctorMap& f, const FinWeightedCategory& c,
                     const FinWeightedCategory& d);
FunctorMap functor_from_json(const Json& j, const FinWeightedCategory& c,
                             const FinWeightedCategory& d);

std::vector<Index> dagger_from_json(const Json& j, const FinWeightedCategory& c);

}  // namespace wlens
