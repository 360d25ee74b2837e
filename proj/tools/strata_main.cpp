#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "strata/harness/dispatch.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace strata::harness;

  CLI::App app{"Frechet means, fluctuating cones and tangential collapse on R^s x Cone(G)", "strata"};
  app.set_version_flag("--version", version_string());

  CommandOptions opt;
  std::string config;
  std::string csv;
  std::string out;
  double tol = 0.0;
  std::uint64_t seed = 0;
  app.add_option("command", opt.command, "validate | mean | grad | escape | fluct | collapse | verify | perturb")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("config", config, "experiment config (JSON); optional for verify");
  auto* tol_opt = app.add_option("--tol", tol, "escape-cone tolerance");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (default: config seed, else 0)");
  app.add_flag("--oracle", opt.oracle, "compare the mean with the grid oracle");
  app.add_option("--csv", csv, "write the atom table as CSV");
  app.add_option("--out", out, "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (!config.empty()) opt.config = config;
  if (*tol_opt) opt.tol = tol;
  if (*seed_opt) opt.seed = seed;
  opt.threads = default_threads();

  const RunReport report = dispatch(opt);
  const std::string text = report.document.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else if (!write_file(out, text)) {
    std::cerr << "strata: cannot write " << out << "\n";
    return kExitValidation;
  }
  if (!csv.empty() && !report.csv.empty() && !write_file(csv, report.csv)) {
    std::cerr << "strata: cannot write " << csv << "\n";
    return kExitValidation;
  }
  if (report.document.contains("error")) {
    std::cerr << "strata: " << report.document["error"]["message"].get<std::string>() << "\n";
  }
  return report.exit_code;
}
