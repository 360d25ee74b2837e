#include "strata/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "strata/gallery.hpp"

namespace strata::harness {
namespace {

const Json& require(const Json& obj, const char* key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(field, std::string("missing \"") + key + "\"");
  return obj.at(key);
}

std::string sub(const std::string& field, const std::string& key) {
  return field.empty() ? key : field + "." + key;
}

double number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "expected a finite number");
  return x;
}

int integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<int>();
}

MetricGraph parse_graph(const Json& spec, const std::string& field) {
  std::vector<VertexId> vs;
  std::vector<Edge> es;
  const Json& vertices = require(spec, "vertices", field);
  if (!vertices.is_array()) throw ConfigError(sub(field, "vertices"), "expected an array");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    vs.push_back(VertexId{integer(vertices[i], sub(field, "vertices[" + std::to_string(i) + "]"))});
  }
  if (spec.contains("edges")) {
    const Json& edges = spec.at("edges");
    if (!edges.is_array()) throw ConfigError(sub(field, "edges"), "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string f = sub(field, "edges[" + std::to_string(i) + "]");
      es.push_back(Edge{EdgeId{integer(require(edges[i], "id", f), sub(f, "id"))},
                        VertexId{integer(require(edges[i], "from", f), sub(f, "from"))},
                        VertexId{integer(require(edges[i], "to", f), sub(f, "to"))},
                        number(require(edges[i], "length", f), sub(f, "length"))});
    }
  }
  try {
    return MetricGraph(std::move(vs), std::move(es));
  } catch (const ValidationError& e) {
    throw ConfigError(field, e.what());
  }
}

int param_int(const Json& params, const char* key, const std::string& field, std::optional<int> fallback = {}) {
  if (!params.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(field, std::string("missing \"") + key + "\"");
  }
  return integer(params.at(key), sub(field, key));
}

double param_num(const Json& params, const char* key, const std::string& field) {
  return number(require(params, key, field), sub(field, key));
}

std::optional<double> kale_circumference(const Json& space) {
  if (space.is_object() && space.contains("gallery")) {
    const Json& g = space.at("gallery");
    if (g.is_object() && g.value("name", "") == "kale" && g.contains("params") &&
        g.at("params").contains("c") && g.at("params").at("c").is_number()) {
      return g.at("params").at("c").get<double>();
    }
  }
  return std::nullopt;
}

}  // namespace

ConeSpace parse_space(const Json& spec, const std::string& field) {
  if (!spec.is_object()) throw ConfigError(field, "expected an object");
  try {
    if (spec.contains("gallery")) {
      const std::string f = sub(field, "gallery");
      const Json& g = spec.at("gallery");
      const Json& nameJ = require(g, "name", f);
      if (!nameJ.is_string()) throw ConfigError(sub(f, "name"), "expected a string");
      const std::string name = nameJ.get<std::string>();
      const Json params = g.contains("params") ? g.at("params") : Json::object();
      const std::string pf = sub(f, "params");
      if (name == "spider") return gallery::spider(param_int(params, "k", pf));
      if (name == "open_book") return gallery::open_book(param_int(params, "k", pf), param_int(params, "s", pf));
      if (name == "kale") return gallery::kale(param_num(params, "c", pf));
      if (name == "sector") return gallery::sector(param_num(params, "angle", pf));
      if (name == "euclidean") return gallery::euclidean(param_int(params, "s", pf));
      if (name == "theta") {
        const Json& ls = require(params, "lengths", pf);
        if (!ls.is_array() || ls.size() != 3) throw ConfigError(sub(pf, "lengths"), "expected three lengths");
        return gallery::cone_over(gallery::theta_graph(number(ls[0], sub(pf, "lengths[0]")),
                                                       number(ls[1], sub(pf, "lengths[1]")),
                                                       number(ls[2], sub(pf, "lengths[2]"))),
                                  param_int(params, "s", pf, 0));
      }
      if (name == "cone_over") {
        return gallery::cone_over(parse_graph(require(params, "graph", pf), sub(pf, "graph")),
                                  param_int(params, "s", pf, 0));
      }
      throw ConfigError(sub(f, "name"), "unknown gallery space \"" + name + "\"");
    }
    const int s = integer(require(spec, "spine_dim", field), sub(field, "spine_dim"));
    MetricGraph g = spec.contains("graph") ? parse_graph(spec.at("graph"), sub(field, "graph")) : MetricGraph{};
    return ConeSpace::create(s, std::move(g));
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(field, e.what());
  }
}

GraphPoint parse_graph_point(const ConeSpace& X, const Json& spec, const std::string& field,
                             std::optional<double> kale_c) {
  if (!spec.is_object()) throw ConfigError(field, "expected an object");
  try {
    if (spec.contains("vertex")) {
      const GraphPoint g = OnVertex{VertexId{integer(spec.at("vertex"), sub(field, "vertex"))}};
      X.link().check_point(g);
      return g;
    }
    if (spec.contains("edge")) {
      const EdgeId e{integer(spec.at("edge"), sub(field, "edge"))};
      const double t = number(require(spec, "t", field), sub(field, "t"));
      return X.link().point_on_edge(e, t);
    }
    if (spec.contains("arc")) {
      if (!kale_c) throw ConfigError(sub(field, "arc"), "arc positions are only defined on kale spaces");
      return gallery::kale_point(*kale_c, number(spec.at("arc"), sub(field, "arc")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field, "expected \"vertex\", \"edge\" or \"arc\"");
}

Point parse_point(const ConeSpace& X, const Json& spec, const std::string& field,
                  std::optional<double> kale_c) {
  if (!spec.is_object()) throw ConfigError(field, "expected an object");
  Point p;
  if (spec.contains("u")) {
    const Json& u = spec.at("u");
    if (!u.is_array()) throw ConfigError(sub(field, "u"), "expected an array");
    for (std::size_t j = 0; j < u.size(); ++j) p.u.push_back(number(u[j], sub(field, "u[" + std::to_string(j) + "]")));
  }
  if (p.u.empty() && X.spine_dim() > 0) p.u.assign(static_cast<std::size_t>(X.spine_dim()), 0.0);
  if (p.u.size() != static_cast<std::size_t>(X.spine_dim())) {
    throw ConfigError(sub(field, "u"), "expected " + std::to_string(X.spine_dim()) + " spine coordinates");
  }
  const bool has_point = spec.contains("point") && !spec.at("point").is_null();
  const double r = spec.contains("r") ? number(spec.at("r"), sub(field, "r")) : 0.0;
  if (has_point) {
    const GraphPoint g = parse_graph_point(X, spec.at("point"), sub(field, "point"), kale_c);
    if (r < 0.0) throw ConfigError(sub(field, "r"), "radius must be nonnegative");
    if (r > 0.0) p.cone = ConePart{g, r};
  } else if (r != 0.0) {
    throw ConfigError(sub(field, "r"), "a nonzero radius needs a link point");
  }
  return p;
}

ExperimentConfig parse_config_json(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  ExperimentConfig cfg;
  cfg.source = doc;
  cfg.name = doc.value("name", "");
  cfg.space = parse_space(require(doc, "space", ""), "space");
  const auto kc = kale_circumference(doc.at("space"));

  const Json& measure = require(doc, "measure", "");
  const Json& atoms = require(measure, "atoms", "measure");
  if (!atoms.is_array() || atoms.empty()) throw ConfigError("measure.atoms", "expected a nonempty array");
  std::vector<Atom> list;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string f = "measure.atoms[" + std::to_string(i) + "]";
    const Point p = parse_point(cfg.space, atoms[i], f, kc);
    const double w = number(require(atoms[i], "weight", f), f + ".weight");
    if (!(w > 0.0)) throw ConfigError(f + ".weight", "weight must be positive");
    total += w;
    list.push_back(Atom{p, w});
  }
  if (std::abs(total - 1.0) > kRenormalizeTol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", total);
    throw ConfigError("measure.atoms", std::string("weights sum to ") + buf + ", expected 1");
  }
  if (total != 1.0) {
    for (Atom& a : list) a.weight /= total;
    cfg.renormalized = true;
  }
  try {
    cfg.measure = DiscreteMeasure(std::move(list));
  } catch (const ValidationError& e) {
    throw ConfigError("measure", e.what());
  }

  if (doc.contains("tol")) cfg.tol = number(doc.at("tol"), "tol");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("directions")) {
    if (!doc.at("directions").is_array()) throw ConfigError("directions", "expected an array");
    for (const Json& d : doc.at("directions")) cfg.directions.push_back(d);
  }
  if (doc.contains("perturb")) cfg.perturb = doc.at("perturb");
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
  return parse_config_json(doc);
}

std::string config_hash(const Json& doc) {
  const std::string text = doc.dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace strata::harness
