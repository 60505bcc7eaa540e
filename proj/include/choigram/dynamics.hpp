#pragma once

// Time-dependent qubit models: decay-rate profiles, survival
// probability, master-equation integration, intermediate maps, the
// CP-divisibility scan, and trace-distance backflow detection.

#include "choigram/channels.hpp"
#include "choigram/charfunc.hpp"

#include <optional>
#include <vector>

namespace choigram {

inline constexpr double kQuadTol = 1e-10;
inline constexpr double kSurvivalFloor = 1e-12;
inline constexpr double kDefaultStep = 1e-3;

// Intermediate maps are built by numerical inversion; these budgets keep
// the inversion error well below the dual-path agreement contract (1e-8).
inline constexpr double kIntermediateCondLimit = 1e6;
inline constexpr double kIntermediatePathTol = 1e-8;
inline constexpr double kIntermediateChoiRelTol = 1e-8;

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { amplitude_damping, pure_dephasing };

/// Decay-rate profile gamma(t) = gamma0 + a exp(-t) cos(omega t), or a
/// tabulated curve with linear interpolation.
struct RateProfile {
  double gamma0 = 0.2;
  double a = 1.5;
  double omega = 4.0;
  std::vector<double> grid_times;   // empty => parametric form
  std::vector<double> grid_values;

  bool is_tabulated() const { return !grid_times.empty(); }

  static RateProfile parametric(double gamma0, double a, double omega);
  static RateProfile from_table(std::vector<double> times, std::vector<double> values);
};

double decay_rate(double t, const RateProfile& p);

/// Adaptive-Simpson integral of the rate over [t0, t1] to absolute
/// tolerance quad_tol.
double integrated_rate(double t0, double t1, const RateProfile& p,
                       double quad_tol = kQuadTol);

/// eta(t) = exp(-integral_0^t gamma).
double survival_probability(double t, const RateProfile& p, double quad_tol = kQuadTol);

/// Off-diagonal decay factor of the dephasing solution,
/// q(t) = exp(-2 integral_0^t gamma) = eta(t)^2.
double coherence_factor(double t, const RateProfile& p, double quad_tol = kQuadTol);

/// Amplitude-damping map with excited-state survival eta. For eta <= 1
/// the Kraus pair {diag(1, sqrt(eta)), sqrt(1-eta) |0><1|} is attached;
/// eta > 1 has no Kraus form and only the superoperator (population
/// transfer 1-eta, coherence scale sqrt(eta)) is provided.
struct AmplitudeDampingMap {
  double eta;
  bool physical;  // eta <= 1
  Superoperator superop;
  std::optional<KrausChannel> kraus;
};
AmplitudeDampingMap amplitude_damping_map(double eta);

/// Populations fixed, off-diagonals scaled by lambda. lambda > 1 is
/// admitted: intermediate maps need it.
Superoperator dephasing_map(double lambda);

/// r(t, s) = eta(t) / eta(s). Throws SingularMapError when eta(s) falls
/// below the survival floor.
double intermediate_ratio(double t, double s, const RateProfile& p,
                          double quad_tol = kQuadTol);

/// Both construction routes for the intermediate map Phi(t,s):
/// `general` composes Phi(t,0) with a numerically inverted Phi(s,0),
/// `closed_form` rebuilds the map from the parameter ratio directly.
struct IntermediateMapPair {
  Superoperator general;
  Superoperator closed_form;
  double max_deviation;  // entrywise
};
IntermediateMapPair intermediate_map_paths(double t, double s, ModelKind model,
                                           const RateProfile& p,
                                           double cond_limit = kIntermediateCondLimit,
                                           double quad_tol = kQuadTol);

/// The general-path map, after checking the two routes agree within
/// kIntermediatePathTol.
Superoperator intermediate_map(double t, double s, ModelKind model, const RateProfile& p,
                               double cond_limit = kIntermediateCondLimit,
                               double quad_tol = kQuadTol);

/// Rate-independent dissipator structure; the full generator is
/// gamma(t) times this.
Superoperator model_generator(ModelKind model);

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  double step;
  double max_trace_defect;
  double min_state_eigenvalue;
  bool quality_warning;  // positivity violated beyond 1e-6 somewhere
};

/// Classic fixed-step RK4 on the vectorized state, sampled at the
/// requested times (nondecreasing, starting at or after 0).
Trajectory integrate_master_equation(ModelKind model, const RateProfile& p,
                                     const ComplexMatrix& rho0,
                                     const std::vector<double>& sample_times,
                                     double step = kDefaultStep);

/// D(t) = (1/2) ||rho1(t) - rho2(t)||_1 along the sampled evolution.
std::vector<double> trace_distance_trajectory(ModelKind model, const RateProfile& p,
                                              const ComplexMatrix& rho1,
                                              const ComplexMatrix& rho2,
                                              const std::vector<double>& sample_times,
                                              double step = kDefaultStep);

/// Uniform grid on [0, t_max]; scan pairs are all (t_i, s_j) with i >= j.
struct ScanGrid {
  double t_max = 6.0;
  int n_points = 121;

  std::vector<double> times() const;
  std::size_t pair_count() const;
};

struct PairRecord {
  int t_index;
  int s_index;
  double t;
  double s;
  double r;         // intermediate parameter ratio for the scanned model
  double choi_min;  // min eigenvalue of the normalized intermediate Choi
  double gram_min;
  bool singular;    // flagged instead of computed; choi/gram are NaN
};

struct DivisibilityReport {
  std::vector<PairRecord> records;  // ordered by (t_index, s_index)
  double tol;

  bool is_violating(const PairRecord& rec) const {
    return !rec.singular && rec.gram_min < -tol;
  }
  std::size_t violating_count() const;
};

/// Evaluates the Gram and Choi minimum eigenvalues of every intermediate
/// map on the grid. Singular pairs (survival parameter below the floor,
/// or inversion over the condition limit) are flagged, not fatal.
/// threads <= 1 runs sequentially; results are identical for any thread
/// count.
DivisibilityReport cp_divisibility_scan(ModelKind model, const RateProfile& p,
                                        const ScanGrid& grid, const UnitaryBasis& basis,
                                        double tol = kDefaultTol, int threads = 0,
                                        double cond_limit = kIntermediateCondLimit,
                                        double quad_tol = kQuadTol);

struct BackflowInterval {
  double start_time;
  double end_time;
  double gain;  // D(end) - D(start)
};

struct BackflowSummary {
  std::vector<BackflowInterval> intervals;
  double measure;  // sum of gains
};

/// Maximal intervals where the finite-difference slope of D exceeds
/// slope_tol, with the accumulated distinguishability gain.
BackflowSummary backflow_intervals(const std::vector<double>& d_values,
                                   const std::vector<double>& times,
                                   double slope_tol = 0.0);

}  // namespace choigram
