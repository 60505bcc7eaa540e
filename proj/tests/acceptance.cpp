// Acceptance suite: one line of output per criterion, nonzero exit when
// any of them fails. Runs the library the way the CLI does, plus the
// determinism contract of the scan command itself.

#include "choigram/cli.hpp"
#include "choigram/dynamics.hpp"
#include "choigram/serialization.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace choigram;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> run;
};

Superoperator random_tp_superop(std::uint64_t seed) {
  static const Eigen::Index ranks[] = {1, 2, 2, 4};
  return kraus_to_superop(random_cp_channel(2, ranks[seed % 4], seed));
}

double uniform01(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

const ComplexMatrix kExcited = matrix_unit(2, 1, 1);
const ComplexMatrix kGround = matrix_unit(2, 0, 0);

ComplexMatrix ad_solution(const ComplexMatrix& rho0, double eta) {
  ComplexMatrix rho(2, 2);
  rho(0, 0) = rho0(0, 0) + (1.0 - eta) * rho0(1, 1);
  rho(1, 1) = eta * rho0(1, 1);
  rho(0, 1) = std::sqrt(eta) * rho0(0, 1);
  rho(1, 0) = std::sqrt(eta) * rho0(1, 0);
  return rho;
}

ComplexMatrix dephasing_solution(const ComplexMatrix& rho0, double q) {
  ComplexMatrix rho = rho0;
  rho(0, 1) *= q;
  rho(1, 0) *= q;
  return rho;
}

std::vector<std::pair<double, double>> negative_rate_intervals(const RateProfile& p,
                                                               double t_max) {
  const int fine = 20000;
  std::vector<std::pair<double, double>> out;
  const auto refine = [&](double lo, double hi) {
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if ((decay_rate(lo, p) < 0.0) == (decay_rate(mid, p) < 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  bool negative = decay_rate(0.0, p) < 0.0;
  double start = negative ? 0.0 : -1.0;
  for (int i = 1; i <= fine; ++i) {
    const double t = t_max * static_cast<double>(i) / fine;
    const bool now = decay_rate(t, p) < 0.0;
    if (now != negative) {
      const double boundary = refine(t_max * static_cast<double>(i - 1) / fine, t);
      if (now) {
        start = boundary;
      } else {
        out.emplace_back(start, boundary);
      }
      negative = now;
    }
  }
  if (negative) out.emplace_back(start, t_max);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 1. Equivalence of the Gram and Choi verdicts over 1000 trace-preserving
// maps: 500 CP channels plus 500 transpose-composed mixtures.
bool criterion_equivalence(std::string& detail) {
  const auto started = Clock::now();
  const UnitaryBasis basis = pauli_basis(2);
  const ComplexMatrix transpose = transpose_superop(2).matrix;
  std::size_t disagreements = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Superoperator phi = random_tp_superop(seed);
    if (seed >= 500) {
      const double lambda = 0.6 * uniform01(seed);
      phi = Superoperator(
          2, (1.0 - lambda) * phi.matrix + lambda * (transpose * phi.matrix));
    }
    const BochnerReport report = bochner_choi_check(phi, basis, 1e-10);
    if (!report.agree) ++disagreements;
  }
  const double seconds =
      std::chrono::duration<double>(Clock::now() - started).count();
  std::ostringstream msg;
  msg << disagreements << " disagreements in 1000 maps, " << seconds << " s";
  detail = msg.str();
  return disagreements == 0 && seconds < 10.0;
}

// 2. Gram spectrum equals the Choi spectrum scaled by 4, each value
// fourfold, for 100 random qubit channels.
bool criterion_spectral(std::string& detail) {
  const UnitaryBasis basis = pauli_basis(2);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ChoiOperator omega =
        normalize_choi(choi_from_superop(random_tp_superop(seed)));
    const auto omega_evs = hermitian_eigenvalues(omega.matrix);
    const auto gram_evs = hermitian_eigenvalues(gram_matrix(omega, basis).entries);
    std::vector<double> expected;
    for (double ev : omega_evs) {
      for (int copy = 0; copy < 4; ++copy) expected.push_back(4.0 * ev);
    }
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      worst = std::max(worst, std::abs(expected[i] - gram_evs[i]));
    }
  }
  std::ostringstream msg;
  msg << "max spectral deviation " << worst;
  detail = msg.str();
  return worst <= 1e-10;
}

// 3. The depolarizing-transpose mixture loses complete positivity at
// lambda = 1/3.
bool criterion_boundary(std::string& detail) {
  const ComplexMatrix depol = depolarizing_superop(2).matrix;
  const ComplexMatrix transpose = transpose_superop(2).matrix;
  const auto min_eig = [&](double lambda) {
    const Superoperator mix(2, (1.0 - lambda) * depol + lambda * transpose);
    return hermitian_eigenvalues(choi_from_superop(mix).matrix).front();
  };
  double lo = 0.0, hi = 1.0;
  if (!(min_eig(lo) > 0.0) || !(min_eig(hi) < 0.0)) {
    detail = "bracket failed";
    return false;
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (min_eig(mid) >= 0.0 ? lo : hi) = mid;
  }
  const double crossing = 0.5 * (lo + hi);
  std::ostringstream msg;
  msg << "crossing at " << crossing;
  detail = msg.str();
  return std::abs(crossing - 1.0 / 3.0) <= 1e-8;
}

// 4. Scan violations coincide with ratio > 1 on the default grid.
bool criterion_scan(std::string& detail) {
  const auto started = Clock::now();
  const DivisibilityReport report =
      cp_divisibility_scan(ModelKind::amplitude_damping, RateProfile{},
                           ScanGrid{6.0, 121}, pauli_basis(2), 1e-10, 0);
  const double seconds =
      std::chrono::duration<double>(Clock::now() - started).count();
  std::size_t mismatches = 0;
  std::size_t singular = 0;
  std::size_t violating = 0;
  for (const auto& rec : report.records) {
    if (rec.singular) {
      ++singular;
      continue;
    }
    const bool expected = rec.r > 1.0 + 1e-10;
    if (report.is_violating(rec)) ++violating;
    if (report.is_violating(rec) != expected) ++mismatches;
  }
  std::ostringstream msg;
  msg << report.records.size() << " pairs, " << violating << " violating, "
      << mismatches << " mismatches, " << singular << " singular, " << seconds << " s";
  detail = msg.str();
  return mismatches == 0 && singular == 0 && violating > 0 && seconds < 30.0;
}

// 5. Trace distance of the orthogonal pair reproduces the survival
// probability under amplitude damping.
bool criterion_trace_distance(std::string& detail) {
  const RateProfile profile;
  const std::vector<double> times = ScanGrid{6.0, 121}.times();
  const std::vector<double> dist = trace_distance_trajectory(
      ModelKind::amplitude_damping, profile, kExcited, kGround, times, 1e-3);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    worst = std::max(worst,
                     std::abs(dist[i] - survival_probability(times[i], profile)));
  }
  std::ostringstream msg;
  msg << "max |D - eta| = " << worst;
  detail = msg.str();
  return worst <= 1e-6;
}

// 6. Backflow intervals line up with the negative-rate windows within one
// grid step.
bool criterion_backflow(std::string& detail) {
  const RateProfile profile;
  const std::vector<double> times = ScanGrid{6.0, 121}.times();
  const double step = times[1] - times[0];
  const std::vector<double> dist = trace_distance_trajectory(
      ModelKind::amplitude_damping, profile, kExcited, kGround, times, 1e-3);
  const BackflowSummary summary = backflow_intervals(dist, times, 0.0);
  const auto negative = negative_rate_intervals(profile, 6.0);
  std::ostringstream msg;
  msg << summary.intervals.size() << " backflow vs " << negative.size()
      << " negative-rate intervals";
  detail = msg.str();
  if (summary.intervals.size() != negative.size()) return false;
  for (std::size_t i = 0; i < negative.size(); ++i) {
    if (std::abs(summary.intervals[i].start_time - negative[i].first) > step + 1e-12) {
      return false;
    }
    if (std::abs(summary.intervals[i].end_time - negative[i].second) > step + 1e-12) {
      return false;
    }
  }
  return true;
}

// 7. Inversion-path and closed-form intermediate maps agree on a 50x50
// grid for both models.
bool criterion_paths(std::string& detail) {
  const RateProfile profile;
  const std::vector<double> times = ScanGrid{6.0, 50}.times();
  double worst = 0.0;
  std::size_t skipped = 0;
  for (ModelKind model : {ModelKind::amplitude_damping, ModelKind::pure_dephasing}) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        try {
          const IntermediateMapPair paths =
              intermediate_map_paths(times[i], times[j], model, profile);
          worst = std::max(worst, paths.max_deviation);
        } catch (const SingularMapError&) {
          ++skipped;
        }
      }
    }
  }
  std::ostringstream msg;
  msg << "max path deviation " << worst << ", " << skipped << " singular pairs skipped";
  detail = msg.str();
  return worst <= 1e-8;
}

// 8. RK4 order: halving the step shrinks the closed-form error by a
// factor in [12, 20] for both models.
bool criterion_rk4_order(std::string& detail) {
  const RateProfile profile;
  std::vector<double> times;
  for (int i = 1; i <= 8; ++i) times.push_back(0.25 * i);
  ComplexMatrix rho0(2, 2);
  rho0 << Complex(0.3, 0.0), Complex(0.2, -0.1), Complex(0.2, 0.1), Complex(0.7, 0.0);

  std::ostringstream msg;
  bool ok = true;
  for (ModelKind model : {ModelKind::amplitude_damping, ModelKind::pure_dephasing}) {
    const auto max_error = [&](double step) {
      const Trajectory traj = integrate_master_equation(model, profile, rho0, times, step);
      double worst = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double eta = survival_probability(times[i], profile, 1e-13);
        const ComplexMatrix expected = model == ModelKind::amplitude_damping
                                           ? ad_solution(rho0, eta)
                                           : dephasing_solution(rho0, eta * eta);
        worst = std::max(worst, max_abs(traj.states[i] - expected));
      }
      return worst;
    };
    const double ratio = max_error(0.02) / max_error(0.01);
    msg << (model == ModelKind::amplitude_damping ? "ad" : "dephasing") << " ratio "
        << ratio << "  ";
    ok = ok && ratio >= 12.0 && ratio <= 20.0;
  }
  detail = msg.str();
  return ok;
}

// 9. cmd_scan writes byte-identical CSV across repeated runs and across
// CHOIGRAM_THREADS settings.
bool criterion_determinism(std::string& detail) {
  const fs::path dir =
      fs::temp_directory_path() / ("choigram_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  RunConfig cfg;  // default model, profile, and 121-point grid
  cfg.format = "csv";

  const auto scan_to = [&](const char* threads, const std::string& name) {
    ::setenv("CHOIGRAM_THREADS", threads, 1);
    cfg.output_path = (dir / name).string();
    // Drop the summary lines so the criterion report stays one per line.
    std::ostringstream sink;
    std::streambuf* saved = std::cout.rdbuf(sink.rdbuf());
    const int rc = cmd_scan(cfg);
    std::cout.rdbuf(saved);
    return rc == kExitOk;
  };
  bool ok = scan_to("1", "t1_a.csv") && scan_to("1", "t1_b.csv") &&
            scan_to("8", "t8_a.csv") && scan_to("8", "t8_b.csv");
  ::unsetenv("CHOIGRAM_THREADS");
  if (ok) {
    const std::string reference = slurp((dir / "t1_a.csv").string());
    ok = !reference.empty() && reference == slurp((dir / "t1_b.csv").string()) &&
         reference == slurp((dir / "t8_a.csv").string()) &&
         reference == slurp((dir / "t8_b.csv").string());
    detail = ok ? "4 runs byte-identical" : "outputs differ";
  } else {
    detail = "scan command failed";
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Gram/Choi verdict equivalence on 1000 maps", criterion_equivalence},
      {2, "spectral correspondence on 100 channels", criterion_spectral},
      {3, "CP boundary of the transpose mixture at 1/3", criterion_boundary},
      {4, "scan violations match ratio > 1 on the default grid", criterion_scan},
      {5, "trace distance equals survival for amplitude damping", criterion_trace_distance},
      {6, "backflow intervals align with negative rates", criterion_backflow},
      {7, "intermediate-map paths agree on a 50x50 grid", criterion_paths},
      {8, "RK4 error ratio in [12, 20]", criterion_rk4_order},
      {9, "scan output determinism across runs and threads", criterion_determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto started = Clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(Clock::now() - started).count();
    char elapsed[32];
    std::snprintf(elapsed, sizeof(elapsed), "%.2f", seconds);
    std::ostringstream line;
    line << (ok ? "[PASS] " : "[FAIL] ") << criterion.id << ". " << criterion.name
         << " (" << detail << ") [" << elapsed << " s]";
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " of " << criteria.size() << " criteria failed"
              << std::endl;
    return 1;
  }
  std::cout << "all " << criteria.size() << " criteria passed" << std::endl;
  return 0;
}
