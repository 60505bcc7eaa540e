#include "choigram/cli.hpp"

#include "choigram/serialization.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <utility>

namespace choigram {

using nlohmann::json;

namespace {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

// Output goes to the path when given, otherwise to stdout (with the
// summary diverted to stderr so the data stream stays clean).
void emit(const std::string& output_path, const std::string& content,
          const std::string& summary) {
  if (output_path.empty()) {
    std::cout << content;
    if (!summary.empty()) std::cerr << summary << "\n";
  } else {
    write_text_file(output_path, content);
    if (!summary.empty()) std::cout << summary << "\n";
  }
}

ModelKind model_from_string(const std::string& name) {
  if (name == "amplitude_damping") return ModelKind::amplitude_damping;
  if (name == "pure_dephasing") return ModelKind::pure_dephasing;
  throw std::runtime_error("config: model must be amplitude_damping or pure_dephasing");
}

std::string scan_csv(const DivisibilityReport& report) {
  std::ostringstream out;
  out << "t,s,r,choi_min,gram_min,flag\n";
  for (const auto& rec : report.records) {
    out << format_float(rec.t) << ',' << format_float(rec.s) << ','
        << format_float(rec.r) << ',' << format_float(rec.choi_min) << ','
        << format_float(rec.gram_min) << ',' << (rec.singular ? "singular" : "ok")
        << '\n';
  }
  return out.str();
}

std::string scan_json(const DivisibilityReport& report) {
  json records = json::array();
  for (const auto& rec : report.records) {
    json r{{"t", rec.t},
           {"s", rec.s},
           {"r", rec.r},
           {"flag", rec.singular ? "singular" : "ok"}};
    if (rec.singular) {
      r["choi_min"] = nullptr;
      r["gram_min"] = nullptr;
    } else {
      r["choi_min"] = rec.choi_min;
      r["gram_min"] = rec.gram_min;
    }
    records.push_back(std::move(r));
  }
  const json doc{{"tol", report.tol},
                 {"violating_pairs", report.violating_count()},
                 {"records", std::move(records)}};
  return doc.dump(2) + "\n";
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

// Orthogonal initial pair with D(0) = 1, chosen per model so the
// distinguishability couples to the decaying degree of freedom.
std::pair<ComplexMatrix, ComplexMatrix> initial_pair(ModelKind model) {
  if (model == ModelKind::amplitude_damping) {
    return {matrix_unit(2, 1, 1), matrix_unit(2, 0, 0)};  // |1><1|, |0><0|
  }
  ComplexVector plus(2), minus(2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  plus << inv_sqrt2, inv_sqrt2;
  minus << inv_sqrt2, -inv_sqrt2;
  return {projector(plus), projector(minus)};
}

}  // namespace

RateProfile RunConfig::profile() const { return RateProfile::parametric(gamma0, a, omega); }

ScanGrid RunConfig::grid() const { return ScanGrid{t_max, n_points}; }

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config: JSON parse failure in '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config: top-level JSON object required");

  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "model") {
      cfg.model = model_from_string(value.get<std::string>());
    } else if (key == "gamma0") {
      cfg.gamma0 = value.get<double>();
    } else if (key == "a") {
      cfg.a = value.get<double>();
    } else if (key == "omega") {
      cfg.omega = value.get<double>();
    } else if (key == "t_max") {
      cfg.t_max = value.get<double>();
    } else if (key == "n_points") {
      cfg.n_points = value.get<int>();
    } else if (key == "step") {
      cfg.step = value.get<double>();
    } else if (key == "basis") {
      cfg.basis = value.get<std::string>();
    } else if (key == "tol") {
      cfg.tol = value.get<double>();
    } else {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }
  if (cfg.n_points < 2) throw std::runtime_error("config: n_points >= 2 required");
  if (!(cfg.t_max > 0.0)) throw std::runtime_error("config: t_max > 0 required");
  if (!(cfg.step > 0.0)) throw std::runtime_error("config: step > 0 required");
  if (!(cfg.tol > 0.0)) throw std::runtime_error("config: tol > 0 required");
  if (cfg.basis != "pauli" && cfg.basis != "weyl") {
    throw std::runtime_error("config: basis must be pauli or weyl");
  }
  return cfg;
}

int scan_threads_from_env() {
  const char* env = std::getenv("CHOIGRAM_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || value < 0) {
    throw std::runtime_error("CHOIGRAM_THREADS must be a non-negative integer");
  }
  return static_cast<int>(value);
}

UnitaryBasis basis_for_dim(const std::string& name, Eigen::Index d) {
  if (name == "pauli") {
    int qubits = 0;
    Eigen::Index dd = d * d;
    while (dd > 1 && dd % 2 == 0) {
      dd /= 2;
      ++qubits;
    }
    if (dd != 1 || qubits == 0) {
      throw std::runtime_error(
          "basis: pauli requires a power-of-two channel dimension; use weyl");
    }
    return pauli_basis(qubits);
  }
  if (name == "weyl") return weyl_basis(d * d);
  throw std::runtime_error("basis: expected pauli or weyl, got '" + name + "'");
}

int cmd_channel_check(const std::string& input_path, const std::string& basis_name,
                      double tol, const std::string& output_path,
                      const std::string& format) {
  try {
    const LoadedChannel channel = load_channel_json(input_path);
    const UnitaryBasis basis = basis_for_dim(basis_name, channel.superop.dim);
    const BochnerReport report = bochner_choi_check(channel.superop, basis, tol);

    std::string content;
    if (format == "json") {
      const ChoiOperator omega = normalize_choi(choi_from_superop(channel.superop));
      const json doc{{"dim", channel.superop.dim},
                     {"representation", channel.representation},
                     {"basis", report.basis},
                     {"tol", tol},
                     {"choi_min", report.choi_min},
                     {"gram_min", report.gram_min},
                     {"agree", report.agree},
                     {"cp_verdict", report.cp},
                     {"trace_j", report.trace_j},
                     {"trace_omega", report.trace_omega},
                     {"spectral_correspondence", report.spectral_correspondence},
                     {"char_function", char_table_json(char_function_table(omega, basis), basis)},
                     {"gram", gram_json(gram_matrix(omega, basis), basis)}};
      content = doc.dump(2) + "\n";
    } else if (format == "csv") {
      std::ostringstream out;
      out << "dim,basis,tol,choi_min,gram_min,agree,cp_verdict,trace_j,trace_omega\n"
          << channel.superop.dim << ',' << report.basis << ',' << format_float(tol) << ','
          << format_float(report.choi_min) << ',' << format_float(report.gram_min) << ','
          << (report.agree ? "true" : "false") << ',' << (report.cp ? "true" : "false")
          << ',' << format_float(report.trace_j) << ','
          << format_float(report.trace_omega) << '\n';
      content = out.str();
    } else {
      throw std::runtime_error("format must be csv or json");
    }

    std::ostringstream summary;
    summary << "cp_verdict: " << (report.cp ? "cp" : "not_cp")
            << " (choi_min " << format_float(report.choi_min) << ", gram_min "
            << format_float(report.gram_min) << ")";
    emit(output_path, content, summary.str());
    return report.cp ? kExitOk : kExitNotCp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_scan(const RunConfig& cfg) {
  try {
    const UnitaryBasis basis = basis_for_dim(cfg.basis, 2);
    const DivisibilityReport report =
        cp_divisibility_scan(cfg.model, cfg.profile(), cfg.grid(), basis, cfg.tol,
                             scan_threads_from_env());
    const std::string content =
        (cfg.format == "json") ? scan_json(report) : scan_csv(report);

    std::ostringstream summary;
    summary << "violating pairs: " << report.violating_count() << " of "
            << report.records.size();
    emit(cfg.output_path, content, summary.str());
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_figures(const RunConfig& cfg) {
  try {
    if (cfg.output_path.empty()) {
      throw std::runtime_error("figures: --output directory required");
    }
    std::filesystem::create_directories(cfg.output_path);
    const RateProfile profile = cfg.profile();
    const std::vector<double> times = cfg.grid().times();
    const UnitaryBasis basis = basis_for_dim(cfg.basis, 2);

    std::vector<double> etas(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      etas[i] = survival_probability(times[i], profile);
    }

    {  // decay rate series
      std::ostringstream out;
      out << "t,gamma\n";
      for (double t : times) {
        out << format_float(t) << ',' << format_float(decay_rate(t, profile)) << '\n';
      }
      write_text_file(cfg.output_path + "/gamma.csv", out.str());
    }
    {  // survival and coherence factors
      std::ostringstream out;
      out << "t,survival,coherence\n";
      for (std::size_t i = 0; i < times.size(); ++i) {
        out << format_float(times[i]) << ',' << format_float(etas[i]) << ','
            << format_float(etas[i] * etas[i]) << '\n';
      }
      write_text_file(cfg.output_path + "/coherence.csv", out.str());
    }
    {  // intermediate parameter along the lag-one diagonal, both series
      std::ostringstream out;
      out << "t,s,r_survival,r_coherence\n";
      for (std::size_t i = 1; i < times.size(); ++i) {
        const double r = etas[i] / etas[i - 1];
        out << format_float(times[i]) << ',' << format_float(times[i - 1]) << ','
            << format_float(r) << ',' << format_float(r * r) << '\n';
      }
      write_text_file(cfg.output_path + "/intermediate_ratio.csv", out.str());
    }
    {  // eigenvalue minima along the lag-one diagonal
      std::ostringstream out;
      out << "t,s,choi_min,gram_min,flag\n";
      for (std::size_t i = 1; i < times.size(); ++i) {
        double choi_min = std::numeric_limits<double>::quiet_NaN();
        double gram_min = std::numeric_limits<double>::quiet_NaN();
        bool singular = false;
        try {
          const Superoperator phi =
              intermediate_map(times[i], times[i - 1], cfg.model, profile);
          const ChoiOperator omega =
              normalize_choi(choi_from_superop(phi, kIntermediateChoiRelTol));
          choi_min = hermitian_eigenvalues(omega.matrix).front();
          gram_min = gram_matrix(omega, basis).min_eigenvalue;
        } catch (const SingularMapError&) {
          singular = true;
        }
        out << format_float(times[i]) << ',' << format_float(times[i - 1]) << ','
            << format_float(choi_min) << ',' << format_float(gram_min) << ','
            << (singular ? "singular" : "ok") << '\n';
      }
      write_text_file(cfg.output_path + "/eigenvalue_minima.csv", out.str());
    }
    {  // trace distance and state trajectory for the orthogonal pair
      const auto [rho1, rho2] = initial_pair(cfg.model);
      const Trajectory traj =
          integrate_master_equation(cfg.model, profile, rho1, times, cfg.step);
      const Trajectory other =
          integrate_master_equation(cfg.model, profile, rho2, times, cfg.step);
      std::ostringstream dist_out;
      dist_out << "t,trace_distance\n";
      std::ostringstream traj_out;
      traj_out << "t,rho00_re,rho00_im,rho10_re,rho10_im,rho01_re,rho01_im,"
                  "rho11_re,rho11_im,trace_distance\n";
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double dist =
            0.5 * trace_norm(traj.states[i] - other.states[i]);
        dist_out << format_float(times[i]) << ',' << format_float(dist) << '\n';
        traj_out << format_float(times[i]);
        const ComplexVector flat = vec(traj.states[i]);  // column-stacking order
        for (Eigen::Index k = 0; k < flat.size(); ++k) {
          traj_out << ',' << format_float(flat(k).real()) << ','
                   << format_float(flat(k).imag());
        }
        traj_out << ',' << format_float(dist) << '\n';
      }
      write_text_file(cfg.output_path + "/trace_distance.csv", dist_out.str());
      write_text_file(cfg.output_path + "/trajectory.csv", traj_out.str());
    }

    std::cout << "wrote gamma.csv, coherence.csv, intermediate_ratio.csv, "
                 "eigenvalue_minima.csv, trace_distance.csv, trajectory.csv to "
              << cfg.output_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace choigram
