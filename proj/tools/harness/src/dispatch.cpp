#include "strata/harness/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "strata/devissage.hpp"
#include "strata/errors.hpp"
#include "strata/harness/fixtures.hpp"
#include "strata/harness/json_io.hpp"
#include "strata/harness/properties.hpp"
#include "strata/sampling.hpp"

#ifndef STRATA_VERSION
#define STRATA_VERSION "0.0.0"
#endif

namespace strata::harness {
namespace {

constexpr double kOracleStep = 1e-3;
constexpr std::size_t kCollapseBudget = 200;

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string csv_point(const Point& p) {
  std::string u;
  for (std::size_t i = 0; i < p.u.size(); ++i) u += (i ? ";" : "") + format_double(p.u[i]);
  return u + "," + (p.cone ? to_string(p.cone->g) : std::string()) + "," + format_double(p.radius());
}

std::string atom_table(const DiscreteMeasure& mu, const std::vector<std::vector<double>>* images = nullptr) {
  std::string out = "index,weight,u,link_point,r";
  if (images) out += ",image";
  out += "\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out += std::to_string(i) + "," + format_double(mu[i].weight) + "," + csv_point(mu[i].point);
    if (images) {
      out += ",";
      for (std::size_t j = 0; j < (*images)[i].size(); ++j) out += (j ? ";" : "") + format_double((*images)[i][j]);
    }
    out += "\n";
  }
  return out;
}

Json tangent_json(const ConeSpace& X, const MeanReport& mean) {
  const ConeSpace T = tangent_cone(X, mean.mean);
  return Json{{"space", to_json(T)}, {"stratum", to_json(stratum_of(X, mean.mean))}};
}

Json run_validate(const ExperimentConfig& cfg, RunReport& report) {
  const LocalizationReport loc = check_localized(cfg.space, cfg.measure);
  report.csv = atom_table(cfg.measure);
  return Json{{"space", to_json(cfg.space)},
              {"description", describe(cfg.space)},
              {"cat1", true},
              {"atoms", cfg.measure.size()},
              {"renormalized", cfg.renormalized},
              {"localized", Json{{"punctual", loc.punctual},
                                 {"retractable", loc.retractable},
                                 {"ambiguous_atoms", loc.ambiguous_atoms}}}};
}

Json run_mean(const ExperimentConfig& cfg, const CommandOptions& opt, RunReport& report) {
  const MeanReport mean = frechet_mean(cfg.space, cfg.measure);
  Json result = to_json(mean);
  result["tangent"] = tangent_json(cfg.space, mean);
  report.csv = atom_table(cfg.measure);
  if (opt.oracle) {
    const Point oracle = frechet_mean_oracle(cfg.space, cfg.measure, kOracleStep);
    const double d = distance(cfg.space, mean.mean, oracle);
    const bool agree = d <= 2.0 * kOracleStep;
    result["oracle"] = Json{{"point", to_json(oracle)},
                            {"grid_step", kOracleStep},
                            {"distance", d},
                            {"agrees", agree}};
    if (!agree) report.exit_code = kExitNumerical;
  }
  return result;
}

Json run_grad(const ExperimentConfig& cfg, RunReport& report) {
  const MeanReport mean = frechet_mean(cfg.space, cfg.measure);
  const ConeSpace T = tangent_cone(cfg.space, mean.mean);
  std::vector<TangentVector> dirs;
  if (cfg.directions.empty()) {
    dirs = direction_sample(T);
  } else {
    for (std::size_t i = 0; i < cfg.directions.size(); ++i) {
      dirs.push_back(parse_point(T, cfg.directions[i], "directions[" + std::to_string(i) + "]"));
    }
  }
  Json rows = Json::array();
  double smallest = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double g = directional_derivative(cfg.space, cfg.measure, mean.mean, dirs[i]);
    smallest = i == 0 ? g : std::min(smallest, g);
    rows.push_back(Json{{"direction", to_json(dirs[i])}, {"grad", g}});
  }
  report.csv = atom_table(cfg.measure);
  return Json{{"mean", to_json(mean.mean)},
              {"tangent_space", to_json(T)},
              {"directions", rows},
              {"min_grad", smallest}};
}

Json run_escape(const ExperimentConfig& cfg, const CommandOptions& opt, RunReport& report) {
  const Ravel r = initial_ravel(cfg.space, cfg.measure);
  const double tol = opt.tol.value_or(kEscapeTol);
  const EscapeSections E = escape_sections(r.space, r.measure, tol);
  report.csv = atom_table(r.measure);
  return Json{{"tangent_space", to_json(r.space)},
              {"tangent_measure", to_json(r.measure)},
              {"tol", tol},
              {"escape", to_json(E)},
              {"link_components", region_components(r.space.link(), E.zero_set)}};
}

Json run_fluct(const ExperimentConfig& cfg, RunReport& report) {
  const Ravel r = initial_ravel(cfg.space, cfg.measure);
  const ConvexCone H = hull_cone(r.space, r.measure);
  Json resolving = r.resolving.resolved_at_point
                       ? Json(nullptr)
                       : Json{{"direction", to_json(r.resolving.direction)},
                              {"stratum", to_string(r.resolving.stratum)}};
  report.csv = atom_table(r.measure);
  return Json{{"tangent_space", to_json(r.space)},
              {"tangent_measure", to_json(r.measure)},
              {"hull", to_json(H)},
              {"fluctuating", to_json(r.working_cone)},
              {"resolving", resolving}};
}

Json run_collapse(const ExperimentConfig& cfg, const CommandOptions& opt, RunReport& report) {
  const CollapseMap cm = collapse(cfg.space, cfg.measure);
  const DiscreteMeasure& nu = cm.trace().ravels.front().measure;
  std::vector<std::vector<double>> images;
  Json atoms = Json::array();
  for (const Atom& a : nu.atoms()) {
    images.push_back(cm(a.point));
    atoms.push_back(Json{{"image", images.back()}, {"weight", a.weight}});
  }
  std::vector<double> mean(static_cast<std::size_t>(cm.m()), 0.0);
  for (std::size_t i = 0; i < nu.size(); ++i) {
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += nu[i].weight * images[i][j];
  }
  const CollapseVerification v = verify_collapse(cm, kCollapseBudget, opt.seed.value_or(cfg.seed));
  Json checks = Json::array();
  for (const auto& c : v.checks) checks.push_back(to_json(c));
  if (!v.all_pass()) report.exit_code = kExitNumerical;
  report.csv = atom_table(nu, &images);
  return Json{{"trace", to_json(cm.trace())},
              {"m", cm.m()},
              {"k", cm.trace().k ? Json(*cm.trace().k) : Json(nullptr)},
              {"pushforward_atoms", atoms},
              {"pushforward_mean", mean},
              {"verification", checks},
              {"verified", v.all_pass()}};
}

Json run_perturb(const ExperimentConfig& cfg, const CommandOptions& opt, RunReport& report) {
  if (!cfg.perturb.is_object()) throw ConfigError("perturb", "expected {\"direction\": ..., \"epsilon\": x}");
  if (!cfg.perturb.contains("epsilon") || !cfg.perturb.at("epsilon").is_number()) {
    throw ConfigError("perturb.epsilon", "expected a number");
  }
  const double eps = cfg.perturb.at("epsilon").get<double>();
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("perturb.epsilon", "expected a value in (0, 1)");
  if (!cfg.perturb.contains("direction")) throw ConfigError("perturb", "missing \"direction\"");

  const Ravel r = initial_ravel(cfg.space, cfg.measure);
  const MeanReport before = frechet_mean(cfg.space, cfg.measure);
  const TangentVector D = parse_point(r.space, cfg.perturb.at("direction"), "perturb.direction");
  if (norm(D) == 0.0) throw ConfigError("perturb.direction", "direction must be nonzero");
  Point x;
  try {
    x = shoot(cfg.space, before.mean, D, 1.0);
  } catch (const StepTooLargeError& e) {
    throw ConfigError("perturb.direction", e.what());
  }
  std::vector<Atom> atoms;
  for (const Atom& a : cfg.measure.atoms()) atoms.push_back(Atom{a.point, (1.0 - eps) * a.weight});
  atoms.push_back(Atom{x, eps});
  const DiscreteMeasure perturbed(std::move(atoms));
  const MeanReport after = frechet_mean(cfg.space, perturbed);
  const TangentVector disp = log_map(cfg.space, before.mean, after.mean);

  Json angle_to_c = nullptr;
  const ConvexCone& C = r.working_cone;
  if (norm(disp) > 0.0 && !C.is_zero()) {
    double best = cone_contains(C, disp) ? 0.0 : kPi;
    Rng rng(opt.seed.value_or(cfg.seed));
    std::vector<TangentVector> members = C.generators;
    for (std::size_t n = 0; n < kCollapseBudget; ++n) members.push_back(random_cone_member(C, rng));
    for (const auto& m : members) best = std::min(best, angle(r.space, disp, m));
    angle_to_c = best;
  }
  report.csv = atom_table(perturbed);
  return Json{{"epsilon", eps},
              {"added_point", to_json(x)},
              {"mean_before", to_json(before.mean)},
              {"mean_after", to_json(after.mean)},
              {"displacement", to_json(disp)},
              {"displacement_norm", norm(disp)},
              {"angle_to_fluctuating_cone", angle_to_c}};
}

Json report_json(const FixtureReport& fr, std::size_t& passed, std::size_t& failed, std::size_t& vacuous) {
  Json checks = Json::array();
  for (const auto& r : fr.results) {
    Json j = to_json(r.check);
    j["module"] = r.module;
    if (r.criterion) j["criterion"] = r.criterion;
    checks.push_back(j);
    switch (r.check.status) {
      case CheckStatus::kPass:
        ++passed;
        break;
      case CheckStatus::kFail:
        ++failed;
        break;
      case CheckStatus::kVacuous:
        ++vacuous;
        break;
    }
  }
  return Json{{"fixture", fr.fixture}, {"pass", fr.all_pass()}, {"checks", checks}};
}

Json run_verify(const std::vector<Fixture>& fixtures, const CommandOptions& opt, RunReport& report) {
  SuiteOptions so;
  so.seed = opt.seed.value_or(0);
  const auto reports = run_suite(fixtures, so, opt.threads);
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t vacuous = 0;
  Json rows = Json::array();
  for (const auto& fr : reports) rows.push_back(report_json(fr, passed, failed, vacuous));
  if (failed > 0) report.exit_code = kExitNumerical;
  return Json{{"fixtures", rows},
              {"passed", passed},
              {"failed", failed},
              {"vacuous", vacuous},
              {"all_pass", failed == 0}};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"validate", "mean",     "grad",   "escape",
                                                 "fluct",    "collapse", "verify", "perturb"};
  return names;
}

std::string version_string() { return STRATA_VERSION; }

unsigned default_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STRATA_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

RunReport dispatch(const CommandOptions& opt) {
  RunReport report;
  Json& doc = report.document;
  doc["command"] = opt.command;
  doc["config"] = opt.config ? Json(opt.config->string()) : Json(nullptr);
  doc["version"] = version_string();

  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), opt.command) == names.end()) {
    doc["error"] = Json{{"kind", "validation"}, {"message", "unknown command \"" + opt.command + "\""}};
    report.exit_code = kExitValidation;
    return report;
  }

  try {
    if (opt.command == "verify" && !opt.config) {
      doc["config_hash"] = nullptr;
      doc["seed"] = opt.seed.value_or(0);
      doc["result"] = run_verify(bundled_fixtures(), opt, report);
      return report;
    }
    if (!opt.config) throw ConfigError("", "command \"" + opt.command + "\" needs a config path");
    const ExperimentConfig cfg = parse_config(*opt.config);
    doc["config_hash"] = config_hash(cfg.source);
    doc["seed"] = opt.seed.value_or(cfg.seed);
    if (cfg.renormalized) doc["warnings"] = Json::array({"weights renormalized to sum 1"});

    Json result;
    if (opt.command == "validate") result = run_validate(cfg, report);
    if (opt.command == "mean") result = run_mean(cfg, opt, report);
    if (opt.command == "grad") result = run_grad(cfg, report);
    if (opt.command == "escape") result = run_escape(cfg, opt, report);
    if (opt.command == "fluct") result = run_fluct(cfg, report);
    if (opt.command == "collapse") result = run_collapse(cfg, opt, report);
    if (opt.command == "perturb") result = run_perturb(cfg, opt, report);
    if (opt.command == "verify") {
      const std::string name = cfg.name.empty() ? opt.config->stem().string() : cfg.name;
      result = run_verify({Fixture{name, "", cfg}}, opt, report);
    }
    doc["result"] = std::move(result);
  } catch (const ConfigError& e) {
    doc["error"] = Json{{"kind", "validation"}, {"field", e.field()}, {"message", e.what()}};
    report.exit_code = kExitValidation;
  } catch (const ValidationError& e) {
    doc["error"] = Json{{"kind", "validation"}, {"message", e.what()}};
    report.exit_code = kExitValidation;
  } catch (const CutLocusError& e) {
    doc["error"] = Json{{"kind", "validation"}, {"message", e.what()}, {"atoms", e.atoms()}};
    report.exit_code = kExitValidation;
  } catch (const Error& e) {
    doc["error"] = Json{{"kind", "numerical"}, {"message", e.what()}};
    report.exit_code = kExitNumerical;
  }
  return report;
}

}  // namespace strata::harness
