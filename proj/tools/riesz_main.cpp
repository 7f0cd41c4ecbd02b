#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "riesz/scenario.hpp"
#include "riesz/version.hpp"

namespace {

struct OutputOptions {
  std::string format = "json";
  std::string out_path;
  std::uint64_t seed = 0;
  double tolerance_scale = 0.0;
};

void add_output_flags(CLI::App* cmd, OutputOptions& opt) {
  cmd->add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--out", opt.out_path, "write the report to this path");
  cmd->add_option("--seed", opt.seed, "override the scenario seed");
  cmd->add_option("--tolerance-scale", opt.tolerance_scale,
                  "multiply all default tolerances");
}

int run(riesz::cli::Scenario scenario, const OutputOptions& opt) {
  if (opt.seed != 0) scenario.seed = opt.seed;
  if (opt.tolerance_scale != 0.0) scenario.tolerance_scale = opt.tolerance_scale;

  auto report = riesz::cli::run_scenario(scenario);
  auto format = opt.format == "text" ? riesz::cli::ReportFormat::Text
                                     : riesz::cli::ReportFormat::Json;
  if (opt.out_path.empty()) {
    riesz::cli::emit_report(report, format, std::cout);
  } else {
    std::ofstream out(opt.out_path);
    if (!out) {
      std::cerr << "error: cannot open " << opt.out_path << "\n";
      return 2;
    }
    riesz::cli::emit_report(report, format, out);
  }
  return riesz::cli::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operators defined by weighted biorthogonal bases: scenario "
               "runner and demos"};
  app.set_version_flag("--version", std::string(riesz::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  OutputOptions run_opt;
  auto* run_cmd = app.add_subcommand("run", "run a scenario configuration");
  run_cmd->add_option("config", config_path, "scenario json document")
      ->required();
  add_output_flags(run_cmd, run_opt);

  OutputOptions demo_opt;
  std::string demo_name;
  auto* demo_cmd = app.add_subcommand("demo", "run a built-in scenario");
  demo_cmd->add_option("name", demo_name, "hermite | corollary33")
      ->required()
      ->check(CLI::IsMember({"hermite", "corollary33"}));
  add_output_flags(demo_cmd, demo_opt);

  OutputOptions lemma_opt;
  std::int64_t lemma_order = 0;
  auto* lemma_cmd =
      app.add_subcommand("lemma22", "polar-decomposition frame check on "
                                    "random matrices");
  lemma_cmd->add_option("--order", lemma_order,
                        "matrix order (0 sweeps orders 2..16)");
  add_output_flags(lemma_cmd, lemma_opt);

  try {
    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot open " << config_path << "\n";
        return 2;
      }
      std::ostringstream text;
      text << in.rdbuf();
      return run(riesz::cli::parse_scenario(text.str()), run_opt);
    }
    if (demo_cmd->parsed()) {
      auto scenario = demo_name == "hermite"
                          ? riesz::cli::demo_hermite_scenario()
                          : riesz::cli::demo_corollary33_scenario();
      return run(std::move(scenario), demo_opt);
    }
    if (lemma_cmd->parsed()) {
      return run(riesz::cli::lemma22_scenario(lemma_order, lemma_opt.seed),
                 lemma_opt);
    }
  } catch (const riesz::cli::SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
