#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclefill/chains.hpp"
#include "cyclefill/rng.hpp"
#include "cyclefill/transport.hpp"
#include "cyclefill/witness.hpp"

namespace cyclefill {

// Rejected experiment configuration (bad field, bad model/dimension pairing,
// bad worker-count environment value).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { Jump, Planes, Spheres, Iid0Cycle };

// Names used in configs and CSV rows: jump, planes, spheres, iid0cycle.
ModelKind model_from_name(const std::string& name);
std::string model_name(ModelKind kind);

struct ExperimentConfig {
  ModelKind model = ModelKind::Jump;
  int n = 2;
  int k = 1;
  std::vector<int> N_grid;
  int trials = 1;
  std::uint64_t master_seed = 0;
  int quadrature_m = 32;        // Monte Carlo slice count per integral estimate
  double winding_h = 1.0 / 64;  // raster step for the planar winding oracle
  int perturbation_trials = 0;  // 0 reuses trials
  SolveOptions solve;
  KnotWitnessParams witness;
};

// n > k >= 0, every N >= 1, trials >= 1, plus per-model dimension rules
// (polygons are 1-cycles, iid 0-cycles take k = 0, sliced models need k >= 1).
void validate(const ExperimentConfig& config);

struct ResultRow {
  std::string model;
  int n = 0;
  int k = 0;
  int N = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string observable;
  double value = 0.0;
};

struct PowerLawFit {
  double exponent = 0.0;
  double std_error = 0.0;
  double r_squared = 0.0;
  int excluded = 0;  // nonpositive pairs dropped before taking logs
};

struct SqrtLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int excluded = 0;
};

// Least squares of ln(value) on ln(N) over (N, value) pairs; needs at least 3
// distinct N with positive values.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pairs);

// Least squares of value^2/N on ln(N): a positive slope certifies a log
// factor riding on sqrt(N), where a pure power law would be flat.
SqrtLogFit fit_sqrtlog(const std::vector<std::pair<double, double>>& pairs);

struct MeanEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo average over m uniform slice values of the exact filling volume
// of each slice. Unbiased for the slice integral, which lower-bounds the
// filling volume of Z itself.
MeanEstimate integrate_slice_fv(const PolyCycle& Z, const std::vector<int>& axes, int m,
                                RngStream& rng, const SolveOptions& solve = {});

struct DirectionalEstimate {
  std::vector<int> axes;
  MeanEstimate estimate;
};

// The slice integral for every k-subset of coordinate axes, in lexicographic
// order. Their sum tracks the filling volume from above only up to an
// unspecified constant, so it is reported as a proxy, never as a bound.
std::vector<DirectionalEstimate> directional_slice_sums(const PolyCycle& Z, int m,
                                                        RngStream& rng,
                                                        const SolveOptions& solve = {});

struct ObservableFits {
  std::string observable;
  PowerLawFit power;
  SqrtLogFit sqrtlog;
};

struct ScalingResult {
  std::vector<ResultRow> rows;
  std::vector<ObservableFits> fits;  // from per-N means, when >= 3 distinct N
  std::vector<std::string> notes;
};

// One task per (N index, trial): generate, slice, solve, and emit observable
// rows. Trials run on CYCLEFILL_WORKERS threads (default: hardware count) but
// every trial owns the stream keyed by its task, so rows are byte-identical
// regardless of worker count.
ScalingResult run_scaling_experiment(const ExperimentConfig& config);

// Fits of the per-N means for every observable present in rows, skipping
// companion *_stderr and *_failed series, in first-appearance order.
// Unfittable observables land in notes. Empty when rows span fewer than
// three distinct N.
std::vector<ObservableFits> fit_observables(const std::vector<ResultRow>& rows,
                                            std::vector<std::string>& notes);

struct ConcentrationSummary {
  int N = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double exceed_1 = 0.0;  // frequency of |value - mean| >= 1 std dev
  double exceed_2 = 0.0;
  double exceed_3 = 0.0;
  double std_over_sqrt_n = 0.0;
};

struct PerturbationCheck {
  int N = 0;
  int instances = 0;
  int violations = 0;      // |fv - fv'| > moved distance + 1e-9
  double max_excess = 0.0;  // worst |fv - fv'| - distance seen
};

struct ConcentrationReport {
  std::vector<ConcentrationSummary> per_n;
  PerturbationCheck perturbation;
};

// Spread of the model's primary observable: mean, standard deviation, tail
// frequencies at 1/2/3 standard deviations, std/sqrt(N) per grid point, and a
// one-point-move Lipschitz check on iid signed points. Needs trials >= 200.
ConcentrationReport run_concentration_experiment(const ExperimentConfig& config);

struct CorrelationPoint {
  double ell = 0.0;
  long long conditioning_events = 0;
  long long joint_events = 0;
  double conditional = 0.0;
  double ci_half_width = 0.0;  // 99% half width; widened when events are scarce
  bool low_events = false;
};

struct CorrelationReport {
  std::vector<CorrelationPoint> points;
  double fitted_exponent = 0.0;  // of the conditional probability in ell
  double exponent_std_error = 0.0;
  bool flagged = false;  // some window had too few conditioning events
};

// For adjacent polygon edges sharing a vertex: probability that the second
// edge's slice point lands in the same window Q given the first one did,
// across window sides {1/4, 1/8, 1/16, 1/32}. Slice values and windows stay
// inside [1/4, 3/4]; config.trials counts samples per window side.
CorrelationReport run_correlation_test(const ExperimentConfig& config);

// Header `model,n,k,N,trial,seed,observable,value`; values at 17 significant
// digits so parsing the text reproduces the doubles exactly.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);
void write_rows_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_rows_csv(const std::string& path);

// (N, mean value) per grid point for one observable, sorted by N; the input
// format expected by the fit functions.
std::vector<std::pair<double, double>> mean_by_n(const std::vector<ResultRow>& rows,
                                                 const std::string& observable);

}  // namespace cyclefill
