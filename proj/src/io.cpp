#include "wlens/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace wlens {

namespace {

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string(what) + ": missing field \"" + key + "\"");
  return j.at(key);
}

std::vector<std::string> labels_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": labels must be an array");
  std::vector<std::string> out;
  for (const auto& l : j) {
    if (!l.is_string())
      throw InputError(std::string(what) + ": labels must be strings");
    out.push_back(l.get<std::string>());
  }
  return out;
}

Index lookup(const FiniteSpace& space, const Json& label, const char* what) {
  if (!label.is_string())
    throw InputError(std::string(what) + ": point names must be strings");
  const auto i = space.index_of(label.get<std::string>());
  if (!i)
    throw InputError(std::string(what) + ": unknown point '" +
                     label.get<std::string>() + "'");
  return *i;
}

void check_labels(const Json& j, const char* key, const FiniteSpace& space,
                  const char* what) {
  if (!j.contains(key)) return;
  if (labels_from_json(j.at(key), what) != space.labels())
    throw InputError(std::string(what) + ": \"" + key +
                     "\" labels do not match the space");
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json extended_to_json(double value) {
  if (is_inf(value)) return "inf";
  return value;
}

double extended_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInf<double>;
  if (!j.is_number()) throw InputError("expected a number or \"inf\"");
  return j.get<double>();
}

Json matrix_to_json(const Matrix<double>& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(extended_to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix<double> matrix_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("matrix must be an array of rows");
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows ? static_cast<Index>(j.at(0).size()) : 0;
  Matrix<double> m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw InputError("matrix rows have different lengths");
    for (Index c = 0; c < cols; ++c)
      m(i, c) = extended_from_json(row.at(static_cast<std::size_t>(c)));
  }
  return m;
}

Json space_to_json(const FiniteSpace& space) {
  Json out{{"labels", space.labels()}};
  if (space.has_cost()) out["cost"] = matrix_to_json(space.cost());
  return out;
}

SpacePtr space_from_json(const Json& j) {
  auto labels = labels_from_json(field(j, "labels", "space"), "space");
  std::optional<Matrix<double>> cost;
  if (j.contains("cost")) cost = matrix_from_json(j.at("cost"));
  return make_space(std::move(labels), std::move(cost));
}

Json measure_to_json(const Measure& p) {
  Json mass = Json::object();
  for (Index i = 0; i < p.size(); ++i) mass[p.space()->label(i)] = p(i);
  return Json{{"mass", std::move(mass)}};
}

Measure measure_from_json(const Json& j, const SpacePtr& space) {
  const Json& mass = field(j, "mass", "measure");
  if (!mass.is_object()) throw InputError("measure: \"mass\" must map labels to numbers");
  Vector<double> v = Vector<double>::Zero(space->size());
  for (const auto& [label, value] : mass.items()) {
    const auto i = space->index_of(label);
    if (!i) throw InputError("measure: unknown point '" + label + "'");
    if (!value.is_number()) throw InputError("measure: mass of '" + label + "' is not a number");
    v(*i) = value.get<double>();
  }
  return Measure(space, std::move(v));
}

Json coupling_to_json(const Coupling& s) {
  return Json{{"source", s.source().space()->labels()},
              {"target", s.target().space()->labels()},
              {"joint", matrix_to_json(s.joint())}};
}

Coupling coupling_from_json(const Json& j, const SpacePtr& source,
                            const SpacePtr& target) {
  check_labels(j, "source", *source, "coupling");
  check_labels(j, "target", *target, "coupling");
  return Coupling::from_joint(source, target,
                              matrix_from_json(field(j, "joint", "coupling")));
}

Json kernel_to_json(const Kernel& k) {
  return Json{{"source", k.source_space()->labels()},
              {"target", k.target_space()->labels()},
              {"rows", matrix_to_json(k.rows())}};
}

Kernel kernel_from_json(const Json& j, const SpacePtr& source,
                        const SpacePtr& target) {
  check_labels(j, "source", *source, "kernel");
  check_labels(j, "target", *target, "kernel");
  return Kernel(source, target, matrix_from_json(field(j, "rows", "kernel")));
}

Json point_map_to_json(std::span<const Index> f, const FiniteSpace& from,
                       const FiniteSpace& to) {
  Json map = Json::object();
  for (Index x = 0; x < from.size(); ++x)
    map[from.label(x)] = to.label(f[static_cast<std::size_t>(x)]);
  return Json{{"map", std::move(map)}};
}

PointMap point_map_from_json(const Json& j, const FiniteSpace& from,
                             const FiniteSpace& to) {
  const Json& map = field(j, "map", "point map");
  PointMap f(static_cast<std::size_t>(from.size()), -1);
  for (const auto& [label, image] : map.items())
    f[static_cast<std::size_t>(lookup(from, Json(label), "point map"))] =
        lookup(to, image, "point map");
  for (Index x = 0; x < from.size(); ++x)
    if (f[static_cast<std::size_t>(x)] < 0)
      throw StructuralError("point map: no image for '" + from.label(x) + "'");
  return f;
}

Json lens_to_json(const SetLens& lens) {
  const auto& X = *lens.domain();
  const auto& Y = *lens.codomain();
  Json project = Json::array(), lift = Json::array();
  for (Index x = 0; x < X.size(); ++x) {
    project.push_back({X.label(x), Y.label(lens.f(x))});
    for (Index y = 0; y < Y.size(); ++y)
      lift.push_back({X.label(x), Y.label(y), X.label(lens.phi(x, y))});
  }
  Json out{{"domain", X.labels()},
           {"codomain", Y.labels()},
           {"project", std::move(project)},
           {"lift", std::move(lift)}};
  if (X.has_cost()) out["domain_cost"] = matrix_to_json(X.cost());
  if (Y.has_cost()) out["codomain_cost"] = matrix_to_json(Y.cost());
  return out;
}

SetLens lens_from_json(const Json& j) {
  std::optional<Matrix<double>> dx, dy;
  if (j.contains("domain_cost")) dx = matrix_from_json(j.at("domain_cost"));
  if (j.contains("codomain_cost")) dy = matrix_from_json(j.at("codomain_cost"));
  auto X = make_space(labels_from_json(field(j, "domain", "lens"), "lens"), dx);
  auto Y = make_space(labels_from_json(field(j, "codomain", "lens"), "lens"), dy);

  PointMap f(static_cast<std::size_t>(X->size()), -1);
  for (const auto& pair : field(j, "project", "lens")) {
    if (!pair.is_array() || pair.size() != 2)
      throw InputError("lens: \"project\" entries are [x, y] pairs");
    f[static_cast<std::size_t>(lookup(*X, pair[0], "lens"))] = lookup(*Y, pair[1], "lens");
  }
  IndexMatrix phi = IndexMatrix::Constant(X->size(), Y->size(), -1);
  for (const auto& triple : field(j, "lift", "lens")) {
    if (!triple.is_array() || triple.size() != 3)
      throw InputError("lens: \"lift\" entries are [x, y, x'] triples");
    phi(lookup(*X, triple[0], "lens"), lookup(*Y, triple[1], "lens")) =
        lookup(*X, triple[2], "lens");
  }
  // partial tables surface as StructuralError from the constructor
  return SetLens(std::move(X), std::move(Y), std::move(f), std::move(phi));
}

Json category_to_json(const FinWeightedCategory& c) {
  Json morphisms = Json::array();
  for (const auto& f : c.morphisms())
    morphisms.push_back({{"id", f.name},
                         {"source", c.objects()[static_cast<std::size_t>(f.source)]},
                         {"target", c.objects()[static_cast<std::size_t>(f.target)]},
                         {"weight", extended_to_json(f.weight)}});
  Json identities = Json::object();
  for (Index x = 0; x < c.object_count(); ++x)
    identities[c.objects()[static_cast<std::size_t>(x)]] = c.morphism(c.identity(x)).name;
  Json composition = Json::array();
  for (const auto& [key, gf] : c.composition())
    composition.push_back({c.morphism(key.first).name, c.morphism(key.second).name,
                           c.morphism(gf).name});
  return Json{{"objects", c.objects()},
              {"morphisms", std::move(morphisms)},
              {"identities", std::move(identities)},
              {"composition", std::move(composition)}};
}

FinWeightedCategory category_from_json(const Json& j) {
  auto objects = labels_from_json(field(j, "objects", "category"), "category");
  std::vector<FinWeightedCategory::NamedMorphism> morphisms;
  for (const auto& m : field(j, "morphisms", "category"))
    morphisms.push_back({field(m, "id", "morphism").get<std::string>(),
                         field(m, "source", "morphism").get<std::string>(),
                         field(m, "target", "morphism").get<std::string>(),
                         extended_from_json(field(m, "weight", "morphism"))});
  std::map<std::string, std::string> identities;
  for (const auto& [object, id] : field(j, "identities", "category").items())
    identities[object] = id.get<std::string>();
  std::vector<FinWeightedCategory::NamedComposite> composition;
  for (const auto& t : field(j, "composition", "category")) {
    if (!t.is_array() || t.size() != 3)
      throw InputError("category: composition entries are [f, g, g o f] triples");
    composition.push_back({t[0].get<std::string>(), t[1].get<std::string>(),
                           t[2].get<std::string>()});
  }
  return FinWeightedCategory::from_names(std::move(objects), morphisms,
                                         identities, composition);
}

Json metric_to_json(const PQMetric& m) {
  return Json{{"points", m.points}, {"dist", matrix_to_json(m.dist)}};
}

PQMetric metric_from_json(const Json& j) {
  PQMetric m{labels_from_json(field(j, "points", "metric"), "metric"),
             matrix_from_json(field(j, "dist", "metric"))};
  if (m.dist.rows() != m.size() || m.dist.cols() != m.size())
    throw StructuralError("metric: distance matrix does not match the points");
  return m;
}

Json functor_to_json(const FunctorMap& f, const FinWeightedCategory& c,
                     const FinWeightedCategory& d) {
  Json objects = Json::object(), morphisms = Json::object();
  for (Index x = 0; x < c.object_count(); ++x)
    objects[c.objects()[static_cast<std::size_t>(x)]] =
        d.objects()[static_cast<std::size_t>(f.objects[static_cast<std::size_t>(x)])];
  for (Index m = 0; m < c.morphism_count(); ++m)
    if (f.morphisms[static_cast<std::size_t>(m)])
      morphisms[c.morphism(m).name] = d.morphism(*f.morphisms[static_cast<std::size_t>(m)]).name;
  return Json{{"objects", std::move(objects)}, {"morphisms", std::move(morphisms)}};
}

FunctorMap functor_from_json(const Json& j, const FinWeightedCategory& c,
                             const FinWeightedCategory& d) {
  FunctorMap f{std::vector<Index>(static_cast<std::size_t>(c.object_count()), -1),
               std::vector<std::optional<Index>>(static_cast<std::size_t>(c.morphism_count()))};
  for (const auto& [name, image] : field(j, "objects", "functor").items()) {
    const auto x = c.find_object(name);
    const auto fx = d.find_object(image.get<std::string>());
    if (!x || !fx) throw StructuralError("functor: dangling object '" + name + "'");
    f.objects[static_cast<std::size_t>(*x)] = *fx;
  }
  for (Index x = 0; x < c.object_count(); ++x)
    if (f.objects[static_cast<std::size_t>(x)] < 0)
      throw StructuralError("functor: undefined on object '" +
                            c.objects()[static_cast<std::size_t>(x)] + "'");
  for (const auto& [name, image] : field(j, "morphisms", "functor").items()) {
    const auto m = c.find_morphism(name);
    const auto fm = d.find_morphism(image.get<std::string>());
    if (!m || !fm) throw StructuralError("functor: dangling morphism '" + name + "'");
    f.morphisms[static_cast<std::size_t>(*m)] = *fm;
  }
  return f;
}

std::vector<Index> dagger_from_json(const Json& j, const FinWeightedCategory& c) {
  std::vector<Index> dag(static_cast<std::size_t>(c.morphism_count()), -1);
  for (const auto& [name, image] : field(j, "dagger", "dagger").items()) {
    const auto m = c.find_morphism(name);
    const auto dm = c.find_morphism(image.get<std::string>());
    if (!m || !dm) throw StructuralError("dagger: dangling morphism '" + name + "'");
    dag[static_cast<std::size_t>(*m)] = *dm;
  }
  for (Index m = 0; m < c.morphism_count(); ++m)
    if (dag[static_cast<std::size_t>(m)] < 0)
      throw StructuralError("dagger: undefined on morphism '" + c.morphism(m).name + "'");
  return dag;
}

}  // namespace wlens
