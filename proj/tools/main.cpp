#include "choigram/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

struct CommonFlags {
  std::string config_path;
  std::string output_path;
  std::string format;
  std::string basis;
  double tol = 0.0;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_config) {
  if (with_config) {
    cmd->add_option("--config", flags.config_path, "JSON run configuration");
  }
  cmd->add_option("--output", flags.output_path, "output path (stdout when omitted)");
  cmd->add_option("--format", flags.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--tol", flags.tol, "positivity verdict tolerance");
  cmd->add_option("--basis", flags.basis, "pauli|weyl")
      ->check(CLI::IsMember({"pauli", "weyl"}));
  cmd->add_option("--seed", flags.seed, "seed for randomized subcommands");
}

choigram::RunConfig build_config(const CLI::App* cmd, const CommonFlags& flags,
                                 const std::string& default_format) {
  choigram::RunConfig cfg;
  if (cmd->count("--config") > 0) {
    cfg = choigram::load_run_config(flags.config_path);
  }
  cfg.format = default_format;
  if (cmd->count("--output") > 0) cfg.output_path = flags.output_path;
  if (cmd->count("--format") > 0) cfg.format = flags.format;
  if (cmd->count("--tol") > 0) cfg.tol = flags.tol;
  if (cmd->count("--basis") > 0) cfg.basis = flags.basis;
  if (cmd->count("--seed") > 0) cfg.seed = flags.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gram-matrix positivity diagnostics for quantum dynamical maps"};
  app.require_subcommand(1);

  CommonFlags check_flags;
  std::string check_input;
  auto* check = app.add_subcommand(
      "channel-check", "test a serialized channel for complete positivity");
  check->add_option("--input", check_input, "channel JSON file")->required();
  add_common(check, check_flags, false);

  CommonFlags scan_flags;
  auto* scan = app.add_subcommand(
      "scan", "CP-divisibility scan of a time-dependent model over a (t, s) grid");
  add_common(scan, scan_flags, true);

  CommonFlags figures_flags;
  auto* figures = app.add_subcommand(
      "figures", "export figure data series (rates, ratios, eigenvalue minima, "
                 "trace distance) as CSV");
  add_common(figures, figures_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : choigram::kExitError;
  }

  try {
    if (check->parsed()) {
      const std::string basis = check->count("--basis") ? check_flags.basis : "pauli";
      const double tol = check->count("--tol") ? check_flags.tol : choigram::kDefaultTol;
      const std::string format =
          check->count("--format") ? check_flags.format : std::string("json");
      return choigram::cmd_channel_check(check_input, basis, tol,
                                         check_flags.output_path, format);
    }
    if (scan->parsed()) {
      return choigram::cmd_scan(build_config(scan, scan_flags, "csv"));
    }
    return choigram::cmd_figures(build_config(figures, figures_flags, "csv"));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return choigram::kExitError;
  }
}
