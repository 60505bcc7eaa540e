#pragma once

// Command implementations behind the `choigram` binary. Split from the
// argument parser so the exit-code and file-format contracts are
// testable in-process.

#include "choigram/dynamics.hpp"

#include <cstdint>
#include <string>

namespace choigram {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotCp = 2;

struct RunConfig {
  ModelKind model = ModelKind::amplitude_damping;
  double gamma0 = 0.2;
  double a = 1.5;
  double omega = 4.0;
  double t_max = 6.0;
  int n_points = 121;
  double step = kDefaultStep;
  std::string basis = "pauli";
  double tol = kDefaultTol;
  std::string output_path;
  std::string format = "csv";
  std::uint64_t seed = 0;

  RateProfile profile() const;
  ScanGrid grid() const;
};

/// Strict JSON config loader; keys outside
/// {model, gamma0, a, omega, t_max, n_points, step, basis, tol} are
/// rejected with a diagnostic.
RunConfig load_run_config(const std::string& path);

/// CHOIGRAM_THREADS, 0 or unset meaning sequential.
int scan_threads_from_env();

/// Basis selection for a channel of dimension d (the basis lives on the
/// doubled space of dimension d^2).
UnitaryBasis basis_for_dim(const std::string& name, Eigen::Index d);

/// Bochner positivity report for a serialized channel. Exit 0 when CP,
/// 2 when not CP, 1 on any error (in which case no report is written).
int cmd_channel_check(const std::string& input_path, const std::string& basis_name,
                      double tol, const std::string& output_path,
                      const std::string& format);

/// CP-divisibility scan to CSV/JSON plus a violating-pair summary line.
int cmd_scan(const RunConfig& cfg);

/// Figure data series (decay rate, intermediate ratios, eigenvalue
/// minima, trace distance, coherence factor) as CSV files in the output
/// directory.
int cmd_figures(const RunConfig& cfg);

}  // namespace choigram
