#include "choigram/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace choigram {

namespace {

constexpr int kMaxQuadDepth = 60;

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

struct QuadState {
  const RateProfile* profile;
  bool converged = true;
};

double adaptive_step(QuadState& st, double a, double fa, double b, double fb, double m,
                     double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = decay_rate(lm, *st.profile);
  const double frm = decay_rate(rm, *st.profile);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth >= kMaxQuadDepth) {
    st.converged = false;
    return left + right + delta / 15.0;
  }
  return adaptive_step(st, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
         adaptive_step(st, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

// Survival parameter of the intermediate map for the given model:
// eta itself for amplitude damping, the coherence factor eta^2 for
// dephasing (its superoperator conditioning is set by q, not eta).
double model_parameter(ModelKind model, double eta) {
  return model == ModelKind::amplitude_damping ? eta : eta * eta;
}

Superoperator map_from_parameter(ModelKind model, double param) {
  return model == ModelKind::amplitude_damping ? amplitude_damping_map(param).superop
                                               : dephasing_map(param);
}

IntermediateMapPair paths_from_etas(ModelKind model, double eta_t, double eta_s,
                                    double cond_limit) {
  const double param_t = model_parameter(model, eta_t);
  const double param_s = model_parameter(model, eta_s);
  if (param_s < kSurvivalFloor) {
    std::ostringstream msg;
    msg << "intermediate map: survival parameter at s (" << param_s
        << ") is below the floor " << kSurvivalFloor;
    throw SingularMapError(msg.str(), 1.0 / param_s);
  }
  const Superoperator at_t = map_from_parameter(model, param_t);
  const Superoperator at_s = map_from_parameter(model, param_s);
  Superoperator general(at_t.dim, at_t.matrix * invert(at_s.matrix, cond_limit));
  Superoperator closed = map_from_parameter(model, param_t / param_s);
  const double deviation = (general.matrix - closed.matrix).cwiseAbs().maxCoeff();
  return IntermediateMapPair{std::move(general), std::move(closed), deviation};
}

void validate_density_matrix(const ComplexMatrix& rho, const char* what) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw std::invalid_argument(std::string(what) + ": 2x2 density matrix required");
  }
  HermitianMatrix h(rho, 1e-8);
  if (std::abs(h.trace() - 1.0) > 1e-8) {
    throw std::invalid_argument(std::string(what) + ": trace must be 1 within 1e-8");
  }
  if (hermitian_eigenvalues(h).front() < -1e-8) {
    throw std::invalid_argument(std::string(what) + ": state is not positive within 1e-8");
  }
}

void validate_sample_times(const std::vector<double>& times) {
  if (times.empty()) {
    throw std::invalid_argument("integrate_master_equation: at least one sample time");
  }
  double prev = 0.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < prev) {
      throw std::invalid_argument(
          "integrate_master_equation: sample times must be nondecreasing and >= 0");
    }
    prev = t;
  }
}

}  // namespace

RateProfile RateProfile::parametric(double gamma0, double a, double omega) {
  if (!std::isfinite(gamma0) || !std::isfinite(a) || !std::isfinite(omega)) {
    throw std::invalid_argument("RateProfile: finite parameters required");
  }
  RateProfile p;
  p.gamma0 = gamma0;
  p.a = a;
  p.omega = omega;
  return p;
}

RateProfile RateProfile::from_table(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.size() < 2) {
    throw std::invalid_argument("RateProfile: table needs >= 2 aligned samples");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
      throw std::invalid_argument("RateProfile: finite table entries required");
    }
    if (i > 0 && times[i] <= times[i - 1]) {
      throw std::invalid_argument("RateProfile: table times must be strictly increasing");
    }
  }
  RateProfile p;
  p.grid_times = std::move(times);
  p.grid_values = std::move(values);
  return p;
}

double decay_rate(double t, const RateProfile& p) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("decay_rate: t >= 0 required");
  }
  if (p.is_tabulated()) {
    if (t < p.grid_times.front() || t > p.grid_times.back()) {
      throw std::out_of_range("decay_rate: t outside the tabulated range");
    }
    const auto it = std::upper_bound(p.grid_times.begin(), p.grid_times.end(), t);
    if (it == p.grid_times.end()) return p.grid_values.back();
    const std::size_t hi = static_cast<std::size_t>(it - p.grid_times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - p.grid_times[lo]) / (p.grid_times[hi] - p.grid_times[lo]);
    return (1.0 - w) * p.grid_values[lo] + w * p.grid_values[hi];
  }
  return p.gamma0 + p.a * std::exp(-t) * std::cos(p.omega * t);
}

double integrated_rate(double t0, double t1, const RateProfile& p, double quad_tol) {
  if (!(t1 >= t0)) {
    throw std::invalid_argument("integrated_rate: t1 >= t0 required");
  }
  if (t1 == t0) return 0.0;
  QuadState st{&p};
  const double m = 0.5 * (t0 + t1);
  const double fa = decay_rate(t0, p);
  const double fm = decay_rate(m, p);
  const double fb = decay_rate(t1, p);
  const double whole = simpson(fa, fm, fb, t0, t1);
  const double value = adaptive_step(st, t0, fa, t1, fb, m, fm, whole, quad_tol, 0);
  if (!st.converged) {
    std::ostringstream msg;
    msg << "integrated_rate: adaptive quadrature did not reach tolerance " << quad_tol
        << " within depth " << kMaxQuadDepth;
    throw QuadratureError(msg.str());
  }
  return value;
}

double survival_probability(double t, const RateProfile& p, double quad_tol) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("survival_probability: t >= 0 required");
  }
  if (t == 0.0) return 1.0;
  return std::exp(-integrated_rate(0.0, t, p, quad_tol));
}

double coherence_factor(double t, const RateProfile& p, double quad_tol) {
  const double eta = survival_probability(t, p, quad_tol);
  return eta * eta;
}

AmplitudeDampingMap amplitude_damping_map(double eta) {
  if (!std::isfinite(eta) || eta < 0.0) {
    throw std::invalid_argument("amplitude_damping_map: eta >= 0 required");
  }
  const double root = std::sqrt(eta);
  ComplexMatrix s = ComplexMatrix::Zero(4, 4);
  s(0, 0) = 1.0;
  s(0, 3) = 1.0 - eta;
  s(1, 1) = root;
  s(2, 2) = root;
  s(3, 3) = eta;
  AmplitudeDampingMap out{eta, eta <= 1.0, Superoperator(2, std::move(s)), std::nullopt};
  if (out.physical) {
    ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = root;
    ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(1.0 - eta);
    out.kraus = KrausChannel(2, {std::move(k0), std::move(k1)});
  }
  return out;
}

Superoperator dephasing_map(double lambda) {
  if (!std::isfinite(lambda)) {
    throw std::invalid_argument("dephasing_map: finite lambda required");
  }
  ComplexMatrix s = ComplexMatrix::Zero(4, 4);
  s(0, 0) = 1.0;
  s(1, 1) = lambda;
  s(2, 2) = lambda;
  s(3, 3) = 1.0;
  return Superoperator(2, std::move(s));
}

double intermediate_ratio(double t, double s, const RateProfile& p, double quad_tol) {
  if (!(t >= s) || !(s >= 0.0)) {
    throw std::invalid_argument("intermediate_ratio: t >= s >= 0 required");
  }
  const double eta_s = survival_probability(s, p, quad_tol);
  if (eta_s < kSurvivalFloor) {
    std::ostringstream msg;
    msg << "intermediate_ratio: eta(s) = " << eta_s << " is below the floor "
        << kSurvivalFloor;
    throw SingularMapError(msg.str(), 1.0 / eta_s);
  }
  return survival_probability(t, p, quad_tol) / eta_s;
}

IntermediateMapPair intermediate_map_paths(double t, double s, ModelKind model,
                                           const RateProfile& p, double cond_limit,
                                           double quad_tol) {
  if (!(t >= s) || !(s >= 0.0)) {
    throw std::invalid_argument("intermediate_map: t >= s >= 0 required");
  }
  const double eta_t = survival_probability(t, p, quad_tol);
  const double eta_s = survival_probability(s, p, quad_tol);
  return paths_from_etas(model, eta_t, eta_s, cond_limit);
}

Superoperator intermediate_map(double t, double s, ModelKind model, const RateProfile& p,
                               double cond_limit, double quad_tol) {
  IntermediateMapPair pair = intermediate_map_paths(t, s, model, p, cond_limit, quad_tol);
  if (pair.max_deviation > kIntermediatePathTol) {
    std::ostringstream msg;
    msg << "intermediate_map: inversion path and closed-form path disagree by "
        << pair.max_deviation << " (limit " << kIntermediatePathTol << ")";
    throw ConsistencyError(msg.str());
  }
  return std::move(pair.general);
}

Superoperator model_generator(ModelKind model) {
  ComplexMatrix jump;
  if (model == ModelKind::amplitude_damping) {
    jump = matrix_unit(2, 0, 1);  // lowering operator
  } else {
    jump = pauli_z();
  }
  const ComplexMatrix ll = jump.adjoint() * jump;
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  ComplexMatrix g = kron(jump.conjugate(), jump) -
                    0.5 * (kron(id, ll) + kron(ll.transpose(), id));
  return Superoperator(2, std::move(g));
}

Trajectory integrate_master_equation(ModelKind model, const RateProfile& p,
                                     const ComplexMatrix& rho0,
                                     const std::vector<double>& sample_times,
                                     double step) {
  validate_density_matrix(rho0, "integrate_master_equation");
  validate_sample_times(sample_times);
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("integrate_master_equation: step > 0 required");
  }

  const ComplexMatrix generator = model_generator(model).matrix;
  ComplexVector state = vec(HermitianMatrix(rho0, 1e-8).matrix());

  Trajectory traj;
  traj.step = step;
  traj.max_trace_defect = 0.0;
  traj.min_state_eigenvalue = std::numeric_limits<double>::infinity();
  traj.quality_warning = false;
  traj.times.reserve(sample_times.size());
  traj.states.reserve(sample_times.size());

  const auto rhs = [&](double t, const ComplexVector& v) -> ComplexVector {
    return decay_rate(t, p) * (generator * v);
  };

  double t_now = 0.0;
  for (double target : sample_times) {
    if (target > t_now) {
      const long substeps =
          std::max<long>(1, std::lround((target - t_now) / step));
      const double h = (target - t_now) / static_cast<double>(substeps);
      for (long m = 0; m < substeps; ++m) {
        const double t0 = t_now + h * static_cast<double>(m);
        const ComplexVector k1 = rhs(t0, state);
        const ComplexVector k2 = rhs(t0 + 0.5 * h, state + (0.5 * h) * k1);
        const ComplexVector k3 = rhs(t0 + 0.5 * h, state + (0.5 * h) * k2);
        const ComplexVector k4 = rhs(t0 + h, state + h * k3);
        state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double tr = (state(0) + state(3)).real();
        traj.max_trace_defect = std::max(traj.max_trace_defect, std::abs(tr - 1.0));
      }
      t_now = target;
    }
    ComplexMatrix rho = unvec(state, 2, 2);
    // Symmetrize for reporting; the anti-Hermitian residue is integrator
    // noise and lands in max_trace_defect territory anyway.
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double min_ev = hermitian_eigenvalues(HermitianMatrix(rho)).front();
    traj.min_state_eigenvalue = std::min(traj.min_state_eigenvalue, min_ev);
    traj.times.push_back(target);
    traj.states.push_back(std::move(rho));
  }
  traj.quality_warning = traj.min_state_eigenvalue < -1e-6;
  return traj;
}

std::vector<double> trace_distance_trajectory(ModelKind model, const RateProfile& p,
                                              const ComplexMatrix& rho1,
                                              const ComplexMatrix& rho2,
                                              const std::vector<double>& sample_times,
                                              double step) {
  const Trajectory a = integrate_master_equation(model, p, rho1, sample_times, step);
  const Trajectory b = integrate_master_equation(model, p, rho2, sample_times, step);
  std::vector<double> out;
  out.reserve(sample_times.size());
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    out.push_back(0.5 * trace_norm(a.states[i] - b.states[i]));
  }
  return out;
}

std::vector<double> ScanGrid::times() const {
  if (n_points < 2 || !(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("ScanGrid: t_max > 0 and n_points >= 2 required");
  }
  const double spacing = t_max / static_cast<double>(n_points - 1);
  std::vector<double> out(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) out[static_cast<std::size_t>(i)] = spacing * i;
  return out;
}

std::size_t ScanGrid::pair_count() const {
  const std::size_t n = static_cast<std::size_t>(n_points);
  return n * (n + 1) / 2;
}

std::size_t DivisibilityReport::violating_count() const {
  std::size_t count = 0;
  for (const auto& rec : records) {
    if (is_violating(rec)) ++count;
  }
  return count;
}

DivisibilityReport cp_divisibility_scan(ModelKind model, const RateProfile& p,
                                        const ScanGrid& grid, const UnitaryBasis& basis,
                                        double tol, int threads, double cond_limit,
                                        double quad_tol) {
  if (basis.space_dim != 4) {
    throw std::invalid_argument("cp_divisibility_scan: qubit models need a basis on d^2 = 4");
  }
  const std::vector<double> times = grid.times();
  const std::size_t n = times.size();

  // Survival at the grid points once, sequentially; every pair reuses
  // these so the report cannot depend on scheduling.
  std::vector<double> etas(n);
  for (std::size_t i = 0; i < n; ++i) {
    etas[i] = survival_probability(times[i], p, quad_tol);
  }

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(grid.pair_count());
  for (int i = 0; i < grid.n_points; ++i) {
    for (int j = 0; j <= i; ++j) pairs.emplace_back(i, j);
  }

  std::vector<PairRecord> records(pairs.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  const auto evaluate_pair = [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const double eta_t = etas[static_cast<std::size_t>(i)];
    const double eta_s = etas[static_cast<std::size_t>(j)];
    const double param_t = model_parameter(model, eta_t);
    const double param_s = model_parameter(model, eta_s);
    PairRecord rec{i, j, times[static_cast<std::size_t>(i)],
                   times[static_cast<std::size_t>(j)], param_t / param_s,
                   nan, nan, false};
    try {
      IntermediateMapPair pair = paths_from_etas(model, eta_t, eta_s, cond_limit);
      if (pair.max_deviation > kIntermediatePathTol) {
        std::ostringstream msg;
        msg << "cp_divisibility_scan: dual-path deviation " << pair.max_deviation
            << " at (t, s) = (" << rec.t << ", " << rec.s << ")";
        throw ConsistencyError(msg.str());
      }
      const ChoiOperator j_op = choi_from_superop(pair.general, kIntermediateChoiRelTol);
      const ChoiOperator omega = normalize_choi(j_op);
      rec.choi_min = hermitian_eigenvalues(omega.matrix).front();
      rec.gram_min = gram_matrix(omega, basis).min_eigenvalue;
    } catch (const SingularMapError&) {
      rec.singular = true;
    }
    records[k] = std::move(rec);
  };

  const int worker_count = std::max(1, threads);
  if (worker_count == 1) {
    for (std::size_t k = 0; k < pairs.size(); ++k) evaluate_pair(k);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(worker_count));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < worker_count; ++w) {
      workers.emplace_back([&, w]() {
        try {
          for (std::size_t k = static_cast<std::size_t>(w); k < pairs.size();
               k += static_cast<std::size_t>(worker_count)) {
            evaluate_pair(k);
          }
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& worker : workers) worker.join();
    if (failure) std::rethrow_exception(failure);
  }

  return DivisibilityReport{std::move(records), tol};
}

BackflowSummary backflow_intervals(const std::vector<double>& d_values,
                                   const std::vector<double>& times, double slope_tol) {
  if (d_values.size() != times.size() || times.size() < 2) {
    throw std::invalid_argument("backflow_intervals: >= 2 aligned samples required");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("backflow_intervals: times must be strictly increasing");
    }
  }
  BackflowSummary out{{}, 0.0};
  std::size_t run_start = 0;
  bool in_run = false;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double slope = (d_values[k + 1] - d_values[k]) / (times[k + 1] - times[k]);
    const bool rising = slope > slope_tol;
    if (rising && !in_run) {
      in_run = true;
      run_start = k;
    }
    if (!rising && in_run) {
      in_run = false;
      out.intervals.push_back(
          BackflowInterval{times[run_start], times[k], d_values[k] - d_values[run_start]});
    }
  }
  if (in_run) {
    out.intervals.push_back(BackflowInterval{times[run_start], times.back(),
                                             d_values.back() - d_values[run_start]});
  }
  for (const auto& interval : out.intervals) out.measure += interval.gain;
  return out;
}

}  // namespace choigram
