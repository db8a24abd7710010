// fdlab: run a fixed-disc analysis described by a config file.
//
// Exit status: 0 consistent or hypothesis_failed, 2 REFUTATION_CANDIDATE,
// 1 configuration or runtime error.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fdlab/fdlab.hpp"

namespace {

std::string absolute(const std::string& p) { return std::filesystem::absolute(p).string(); }

void list_catalog() {
  for (const auto& e : fdlab::catalog_entries()) {
    std::cout << e.name << ": " << e.description << "  (default space [" << fdlab::Expression::format_number(e.lo)
              << ", " << fdlab::Expression::format_number(e.hi) << "], N = " << e.count << ")\n";
    for (const auto& p : e.params)
      std::cout << "    " << p.name << " = " << fdlab::Expression::format_number(p.default_value) << "  "
                << p.description << "\n";
    for (const auto& x : fdlab::lookup(e.name).expected) std::cout << "    expect " << x.describe() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-disc verification for self-maps of metric spaces"};
  std::string config_path, report_path, csv_dir;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps_fix;
  bool want_list = false;
  bool want_regression = false;
  app.add_option("--config", config_path, "problem description file");
  app.add_option("--report", report_path, "write the JSON report here");
  app.add_option("--csv-dir", csv_dir, "write fixed_set.csv and disc.csv here");
  app.add_option("--samples", samples, "grid sample count per axis");
  app.add_option("--seed", seed, "seed for randomized probes (default: FDLAB_SEED, then built-in)");
  app.add_option("--tolerance-fix", eps_fix, "override eps_fix");
  app.add_flag("--list-catalog", want_list, "list built-in maps and their expected results");
  app.add_flag("--regression", want_regression, "run the catalog regression");
  CLI11_PARSE(app, argc, argv);

  try {
    if (want_list) {
      list_catalog();
      return 0;
    }
    if (want_regression) {
      const auto summary = fdlab::run_regression();
      std::cout << summary.to_text();
      return summary.mismatches() == 0 ? 0 : 1;
    }
    if (config_path.empty()) {
      std::cerr << "error: --config is required\n" << app.help();
      return 1;
    }

    fdlab::ProblemConfig cfg = fdlab::load_config(config_path);
    if (!report_path.empty()) cfg.analysis.report = absolute(report_path);
    if (!csv_dir.empty()) cfg.analysis.csv_dir = absolute(csv_dir);
    if (samples) cfg.analysis.samples = *samples;
    if (eps_fix) cfg.analysis.tol.eps_fix = *eps_fix;
    if (seed) {
      cfg.analysis.seed = *seed;
    } else if (const char* env = std::getenv("FDLAB_SEED"); env && !cfg.analysis.seed) {
      cfg.analysis.seed = fdlab::detail::parse_unsigned(env);
    }

    const fdlab::RunResult result = fdlab::run(cfg);
    std::cout << fdlab::to_text(result.report);
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
