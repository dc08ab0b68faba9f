#include "cyclefill/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "cyclefill/models.hpp"
#include "cyclefill/slicing.hpp"
#include "cyclefill/winding.hpp"

namespace cyclefill {

namespace {

// Stream key layout: purpose byte | grid index | trial index. Every task owns
// exactly one stream, so results cannot depend on scheduling.
constexpr int kScalingStream = 1;
constexpr int kSpreadStream = 2;
constexpr int kPerturbStream = 3;
constexpr int kCorrelationStream = 4;

std::uint64_t stream_key(int purpose, int grid_index, int trial) {
  return (std::uint64_t(purpose) << 56) |
         (std::uint64_t(std::uint32_t(grid_index)) << 32) |
         std::uint64_t(std::uint32_t(trial));
}

int worker_count() {
  if (const char* env = std::getenv("CYCLEFILL_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw config_error("CYCLEFILL_WORKERS must be a positive integer");
    return int(std::min(v, 256L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

// Runs task(0..count-1), possibly on several threads. Tasks write only to
// their own output slot, so the merged result is order-independent.
template <class Task>
void run_tasks(std::size_t count, const Task& task) {
  const int workers = int(std::min<std::size_t>(std::size_t(worker_count()), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::exception_ptr failure;
  auto body = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double exact_cost(const ZeroCycle& z, const SolveOptions& solve) {
  if (z.ambient.kind == AmbientKind::Sphere) return fv_sphere(z, solve).first;
  if (z.ambient.d == 1) return fv_interval(z);
  return fv_cube(z, solve).first;
}

double witness_bound_by_dimension(const ZeroCycle& z, const KnotWitnessParams& p) {
  WitnessFunction w = z.ambient.d == 1
                          ? build_interval_witness(z, p.interval_R, p.interval_C)
                      : z.ambient.d == 2 ? build_multiscale_witness(z, p.max_scale, p.cap)
                                         : build_grid_witness(z, p.grid_r);
  return witness_lower_bound(w, z);
}

SliceSpec central_slice(int k) {
  SliceSpec spec;
  spec.fixed_axes.resize(std::size_t(k));
  std::iota(spec.fixed_axes.begin(), spec.fixed_axes.end(), 0);
  spec.values.assign(std::size_t(k), 0.5);
  return spec;
}

ZeroCycle slice_planes(const std::vector<AffineKPlane>& planes, const SliceSpec& spec, int d) {
  ZeroCycle z;
  z.ambient = Ambient::cube(d);
  for (std::size_t i = 0; i < planes.size(); ++i) {
    SliceAtom atom = slice_plane(planes[i], spec);
    if (!atom.point) continue;
    z.points.push_back(*atom.point);
    z.source.push_back(int(i));
  }
  return z;
}

ZeroCycle sphere_slice_cycle(const std::vector<OrientedSubspace>& spheres,
                             const OrientedSubspace& slice, int n) {
  ZeroCycle z;
  z.ambient = Ambient::sphere(n);
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    auto pair = slice_great_sphere(spheres[i], slice);
    z.points.push_back(std::move(pair.first));
    z.source.push_back(int(i));
    z.points.push_back(std::move(pair.second));
    z.source.push_back(int(i));
  }
  return z;
}

ZeroCycle iid_cycle(int N, int d, RngStream& rng) {
  ZeroCycle z;
  z.ambient = Ambient::cube(d);
  z.points.reserve(std::size_t(N));
  z.source.reserve(std::size_t(N));
  for (int i = 0; i < N; ++i) {
    SignedPoint p;
    p.position = rng.point(d);
    p.sign = rng.sign();
    z.points.push_back(std::move(p));
    z.source.push_back(i);
  }
  return z;
}

MeanEstimate summarize(const std::vector<double>& samples) {
  MeanEstimate e;
  if (samples.empty()) return e;
  double sum = 0.0;
  for (double v : samples) sum += v;
  e.value = sum / double(samples.size());
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - e.value) * (v - e.value);
    e.std_error = std::sqrt(ss / double(samples.size() - 1) / double(samples.size()));
  }
  return e;
}

MeanEstimate integrate_plane_slices(const std::vector<AffineKPlane>& planes, int k, int d,
                                    int m, RngStream& rng, const SolveOptions& solve) {
  SliceSpec spec;
  spec.fixed_axes.resize(std::size_t(k));
  std::iota(spec.fixed_axes.begin(), spec.fixed_axes.end(), 0);
  std::vector<double> samples;
  samples.reserve(std::size_t(m));
  for (int s = 0; s < m; ++s) {
    spec.values = rng.point(k);
    samples.push_back(exact_cost(slice_planes(planes, spec, d), solve));
  }
  return summarize(samples);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double slope_se = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  LineFit fit;
  const std::size_t m = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(m);
  my /= double(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - fit.slope * xs[i] - fit.intercept;
    ss_res += r * r;
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  fit.r_squared = ss_tot > 1e-30 ? 1.0 - ss_res / ss_tot : (ss_res <= 1e-18 ? 1.0 : 0.0);
  if (m > 2) fit.slope_se = std::sqrt(std::max(ss_res, 0.0) / double(m - 2) / sxx);
  return fit;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct TrialSink {
  const ExperimentConfig& config;
  int N;
  int trial;
  std::uint64_t seed;
  std::vector<ResultRow>& rows;

  void push(const std::string& name, double value) const {
    rows.push_back({model_name(config.model), config.n, config.k, N, trial, seed, name, value});
  }

  // Solver and slicing failures become a *_failed marker row instead of
  // killing the whole experiment.
  template <class F>
  void guarded(const std::string& name, F&& compute) const {
    try {
      push(name, compute());
    } catch (const solver_error&) {
      push(name + "_failed", 1.0);
    } catch (const degenerate_slice_error&) {
      push(name + "_failed", 1.0);
    }
  }
};

std::vector<ResultRow> scaling_trial(const ExperimentConfig& config, int grid_index, int trial) {
  const int N = config.N_grid[std::size_t(grid_index)];
  const std::uint64_t key = stream_key(kScalingStream, grid_index, trial);
  RngStream rng(config.master_seed, key);
  std::vector<ResultRow> rows;
  TrialSink sink{config, N, trial, key, rows};
  const int d = config.n - config.k;

  switch (config.model) {
    case ModelKind::Iid0Cycle: {
      const ZeroCycle z = iid_cycle(N, d, rng);
      sink.guarded("fv", [&] { return exact_cost(z, config.solve); });
      sink.guarded("witness_bound", [&] { return witness_bound_by_dimension(z, config.witness); });
      break;
    }
    case ModelKind::Jump: {
      const PolyCycle Z = sample_random_jump(N, config.n, rng);
      const SliceSpec center = central_slice(config.k);
      try {
        // one shared slice, so the witness row bounds the same cycle the
        // exact cost row reports
        const ZeroCycle zc = slice_polycycle_generic(Z, center, rng).first;
        sink.guarded("slice_fv", [&] { return exact_cost(zc, config.solve); });
        sink.guarded("witness_bound",
                     [&] { return witness_bound_by_dimension(zc, config.witness); });
      } catch (const degenerate_slice_error&) {
        sink.push("slice_fv_failed", 1.0);
      }
      try {
        const MeanEstimate integral =
            integrate_slice_fv(Z, center.fixed_axes, config.quadrature_m, rng, config.solve);
        sink.push("integrated_bound", integral.value);
        sink.push("integrated_stderr", integral.std_error);
      } catch (const solver_error&) {
        sink.push("integrated_bound_failed", 1.0);
      } catch (const degenerate_slice_error&) {
        sink.push("integrated_bound_failed", 1.0);
      }
      if (config.n == 2 && config.k == 1) {
        try {
          const WindingEstimate w = fv_winding(Z, config.winding_h);
          sink.push("winding_fv", w.value);
          sink.push("winding_error", w.error_bound);
        } catch (const degenerate_slice_error&) {
          sink.push("winding_fv_failed", 1.0);
        }
      }
      break;
    }
    case ModelKind::Planes: {
      const auto planes = sample_cube_planes(N, config.n, config.k, rng);
      const SliceSpec center = central_slice(config.k);
      try {
        const ZeroCycle zc = slice_planes(planes, center, d);
        sink.guarded("slice_fv", [&] { return exact_cost(zc, config.solve); });
        sink.guarded("witness_bound",
                     [&] { return witness_bound_by_dimension(zc, config.witness); });
      } catch (const degenerate_slice_error&) {
        sink.push("slice_fv_failed", 1.0);
      }
      try {
        const MeanEstimate integral =
            integrate_plane_slices(planes, config.k, d, config.quadrature_m, rng, config.solve);
        sink.push("integrated_bound", integral.value);
        sink.push("integrated_stderr", integral.std_error);
      } catch (const solver_error&) {
        sink.push("integrated_bound_failed", 1.0);
      } catch (const degenerate_slice_error&) {
        sink.push("integrated_bound_failed", 1.0);
      }
      break;
    }
    case ModelKind::Spheres: {
      const auto spheres = sample_great_spheres(N, config.n, config.k, rng);
      const auto slice = sample_great_spheres(1, config.n, config.n - config.k, rng).front();
      sink.guarded("slice_fv", [&] {
        return exact_cost(sphere_slice_cycle(spheres, slice, config.n), config.solve);
      });
      break;
    }
  }
  return rows;
}

double primary_value(const ExperimentConfig& config, int N, RngStream& rng) {
  const int d = config.n - config.k;
  switch (config.model) {
    case ModelKind::Iid0Cycle:
      return exact_cost(iid_cycle(N, d, rng), config.solve);
    case ModelKind::Jump: {
      const PolyCycle Z = sample_random_jump(N, config.n, rng);
      return exact_cost(slice_polycycle_generic(Z, central_slice(config.k), rng).first,
                        config.solve);
    }
    case ModelKind::Planes:
      return exact_cost(slice_planes(sample_cube_planes(N, config.n, config.k, rng),
                                     central_slice(config.k), d),
                        config.solve);
    case ModelKind::Spheres: {
      const auto spheres = sample_great_spheres(N, config.n, config.k, rng);
      const auto slice = sample_great_spheres(1, config.n, config.n - config.k, rng).front();
      return exact_cost(sphere_slice_cycle(spheres, slice, config.n), config.solve);
    }
  }
  throw std::logic_error("unreachable model kind");
}

}  // namespace

ModelKind model_from_name(const std::string& name) {
  if (name == "jump") return ModelKind::Jump;
  if (name == "planes") return ModelKind::Planes;
  if (name == "spheres") return ModelKind::Spheres;
  if (name == "iid0cycle") return ModelKind::Iid0Cycle;
  throw config_error("unknown model: " + name);
}

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Jump:
      return "jump";
    case ModelKind::Planes:
      return "planes";
    case ModelKind::Spheres:
      return "spheres";
    case ModelKind::Iid0Cycle:
      return "iid0cycle";
  }
  throw std::logic_error("unreachable model kind");
}

void validate(const ExperimentConfig& config) {
  if (config.k < 0 || config.n <= config.k) throw config_error("need n > k >= 0");
  if (config.N_grid.empty()) throw config_error("need at least one N");
  for (int N : config.N_grid)
    if (N < 1) throw config_error("every N must be at least 1");
  if (config.trials < 1) throw config_error("need at least one trial");
  if (config.quadrature_m < 1) throw config_error("need at least one quadrature sample");
  if (config.perturbation_trials < 0) throw config_error("perturbation trials cannot be negative");
  switch (config.model) {
    case ModelKind::Jump: {
      if (config.k != 1) throw config_error("the polygon model is a 1-cycle; set k = 1");
      for (int N : config.N_grid)
        if (N < 3) throw config_error("polygons need at least 3 vertices");
      if (config.n == 2) {
        const long long m = std::llround(1.0 / config.winding_h);
        if (m < 16 || std::abs(double(m) * config.winding_h - 1.0) > 1e-9)
          throw config_error("1/winding_h must be an integer of at least 16");
      }
      break;
    }
    case ModelKind::Planes:
    case ModelKind::Spheres:
      if (config.k < 1) throw config_error("sliced ensembles need k >= 1");
      break;
    case ModelKind::Iid0Cycle:
      if (config.k != 0) throw config_error("iid 0-cycles take k = 0");
      break;
  }
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> xs, ys;
  std::set<double> distinct;
  int excluded = 0;
  for (const auto& [N, v] : pairs) {
    if (!(N > 0.0) || !(v > 0.0) || !std::isfinite(N) || !std::isfinite(v)) {
      ++excluded;
      continue;
    }
    xs.push_back(std::log(N));
    ys.push_back(std::log(v));
    distinct.insert(N);
  }
  if (distinct.size() < 3)
    throw std::invalid_argument("power law fit needs at least 3 distinct N with positive values");
  const LineFit fit = least_squares(xs, ys);
  return {fit.slope, fit.slope_se, fit.r_squared, excluded};
}

SqrtLogFit fit_sqrtlog(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> xs, ys;
  std::set<double> distinct;
  int excluded = 0;
  for (const auto& [N, v] : pairs) {
    if (!(N > 0.0) || !(v > 0.0) || !std::isfinite(N) || !std::isfinite(v)) {
      ++excluded;
      continue;
    }
    xs.push_back(std::log(N));
    ys.push_back(v * v / N);
    distinct.insert(N);
  }
  if (distinct.size() < 3)
    throw std::invalid_argument("sqrt-log fit needs at least 3 distinct N with positive values");
  const LineFit fit = least_squares(xs, ys);
  return {fit.slope, fit.intercept, fit.r_squared, excluded};
}

MeanEstimate integrate_slice_fv(const PolyCycle& Z, const std::vector<int>& axes, int m,
                                RngStream& rng, const SolveOptions& solve) {
  if (int(axes.size()) != Z.k)
    throw std::invalid_argument("need exactly one fixed axis per cycle dimension");
  if (m < 1) throw std::invalid_argument("need at least one slice sample");
  SliceSpec spec;
  spec.fixed_axes = axes;
  std::vector<double> samples;
  samples.reserve(std::size_t(m));
  for (int s = 0; s < m; ++s) {
    spec.values = rng.point(Z.k);
    samples.push_back(exact_cost(slice_polycycle_generic(Z, spec, rng).first, solve));
  }
  return summarize(samples);
}

std::vector<DirectionalEstimate> directional_slice_sums(const PolyCycle& Z, int m,
                                                        RngStream& rng,
                                                        const SolveOptions& solve) {
  if (Z.k < 1 || Z.k > Z.n) throw std::invalid_argument("need 1 <= k <= n to enumerate axis sets");
  std::vector<DirectionalEstimate> out;
  std::vector<int> axes(std::size_t(Z.k));
  std::iota(axes.begin(), axes.end(), 0);
  while (true) {
    out.push_back({axes, integrate_slice_fv(Z, axes, m, rng, solve)});
    int i = Z.k - 1;
    while (i >= 0 && axes[std::size_t(i)] == Z.n - Z.k + i) --i;
    if (i < 0) break;
    ++axes[std::size_t(i)];
    for (int j = i + 1; j < Z.k; ++j) axes[std::size_t(j)] = axes[std::size_t(j - 1)] + 1;
  }
  return out;
}

ScalingResult run_scaling_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::size_t trials = std::size_t(config.trials);
  const std::size_t tasks = config.N_grid.size() * trials;
  std::vector<std::vector<ResultRow>> slots(tasks);
  run_tasks(tasks, [&](std::size_t i) {
    slots[i] = scaling_trial(config, int(i / trials), int(i % trials));
  });

  ScalingResult out;
  for (auto& slot : slots)
    for (auto& row : slot) out.rows.push_back(std::move(row));

  if (config.model == ModelKind::Spheres)
    out.notes.push_back(
        "sphere trials cut the whole ensemble with one random great sphere per trial");

  std::size_t failed = 0;
  for (const auto& row : out.rows)
    if (has_suffix(row.observable, "_failed")) ++failed;
  if (failed > 0)
    out.notes.push_back(std::to_string(failed) + " solver failures recorded as *_failed rows");

  out.fits = fit_observables(out.rows, out.notes);
  return out;
}

std::vector<ObservableFits> fit_observables(const std::vector<ResultRow>& rows,
                                            std::vector<std::string>& notes) {
  std::set<int> distinct;
  for (const auto& row : rows) distinct.insert(row.N);
  std::vector<ObservableFits> fits;
  if (distinct.size() < 3) return fits;
  std::vector<std::string> names;
  for (const auto& row : rows) {
    if (has_suffix(row.observable, "_failed") || has_suffix(row.observable, "_stderr")) continue;
    if (std::find(names.begin(), names.end(), row.observable) == names.end())
      names.push_back(row.observable);
  }
  for (const auto& name : names) {
    const auto pairs = mean_by_n(rows, name);
    try {
      ObservableFits f;
      f.observable = name;
      f.power = fit_power_law(pairs);
      f.sqrtlog = fit_sqrtlog(pairs);
      if (f.power.excluded > 0)
        notes.push_back("fit of " + name + " dropped " + std::to_string(f.power.excluded) +
                        " nonpositive means");
      fits.push_back(std::move(f));
    } catch (const std::invalid_argument&) {
      notes.push_back("fit of " + name + " skipped: too few positive means");
    }
  }
  return fits;
}

ConcentrationReport run_concentration_experiment(const ExperimentConfig& config) {
  validate(config);
  if (config.trials < 200) throw config_error("concentration needs at least 200 trials");
  ConcentrationReport report;
  const std::size_t trials = std::size_t(config.trials);
  for (std::size_t i = 0; i < config.N_grid.size(); ++i) {
    const int N = config.N_grid[i];
    std::vector<double> values(trials);
    run_tasks(trials, [&](std::size_t t) {
      RngStream rng(config.master_seed, stream_key(kSpreadStream, int(i), int(t)));
      values[t] = primary_value(config, N, rng);
    });
    ConcentrationSummary s;
    s.N = N;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / double(trials);
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = trials > 1 ? std::sqrt(ss / double(trials - 1)) : 0.0;
    if (s.std_dev > 0.0) {
      long long e1 = 0, e2 = 0, e3 = 0;
      for (double v : values) {
        const double dev = std::abs(v - s.mean);
        e1 += dev >= s.std_dev;
        e2 += dev >= 2.0 * s.std_dev;
        e3 += dev >= 3.0 * s.std_dev;
      }
      s.exceed_1 = double(e1) / double(trials);
      s.exceed_2 = double(e2) / double(trials);
      s.exceed_3 = double(e3) / double(trials);
    }
    s.std_over_sqrt_n = s.std_dev / std::sqrt(double(N));
    report.per_n.push_back(s);
  }

  // One-point move on iid signed points: adding the segment between the old
  // and new location turns any filling of one cycle into a filling of the
  // other, so |fv - fv'| can never exceed the moved distance.
  const int d = config.n - config.k;
  PerturbationCheck check;
  check.N = config.N_grid.front();
  check.instances = config.perturbation_trials > 0 ? config.perturbation_trials : config.trials;
  std::vector<double> excess(std::size_t(check.instances));
  run_tasks(std::size_t(check.instances), [&](std::size_t t) {
    RngStream rng(config.master_seed, stream_key(kPerturbStream, 0, int(t)));
    ZeroCycle z = iid_cycle(check.N, d, rng);
    const auto j = std::size_t(rng.uniform_int(0, check.N - 1));
    const Vec moved = rng.point(d);
    const double before = exact_cost(z, config.solve);
    const double dist = euclidean(z.points[j].position, moved);
    z.points[j].position = moved;
    const double after = exact_cost(z, config.solve);
    excess[t] = std::abs(after - before) - dist;
  });
  for (double e : excess) {
    if (e > 1e-9) ++check.violations;
    check.max_excess = std::max(check.max_excess, e);
  }
  report.perturbation = check;
  return report;
}

CorrelationReport run_correlation_test(const ExperimentConfig& config) {
  validate(config);
  if (config.model != ModelKind::Jump)
    throw config_error("the correlation test runs on the polygon model");
  const int n = config.n;
  const double ells[] = {0.25, 0.125, 0.0625, 0.03125};
  CorrelationReport report;
  for (std::size_t li = 0; li < 4; ++li) {
    const double ell = ells[li];
    RngStream rng(config.master_seed, stream_key(kCorrelationStream, int(li), 0));
    long long cond = 0, joint = 0;
    for (int s = 0; s < config.trials; ++s) {
      const double x = rng.uniform(0.25, 0.75);
      Vec center(std::size_t(n - 1));
      for (auto& c : center) c = rng.uniform(0.25 + ell / 2, 0.75 - ell / 2);
      const Vec v0 = rng.point(n);
      const Vec v1 = rng.point(n);
      const Vec v2 = rng.point(n);
      SliceAtom first, second;
      try {
        first = slice_segment(v0, v1, 0, x);
        second = slice_segment(v1, v2, 0, x);
      } catch (const degenerate_slice_error&) {
        continue;
      }
      const auto inside = [&](const SignedPoint& p) {
        for (std::size_t j = 0; j < center.size(); ++j)
          if (std::abs(p.position[j] - center[j]) > ell / 2) return false;
        return true;
      };
      if (!first.point || !inside(*first.point)) continue;
      ++cond;
      if (second.point && inside(*second.point)) ++joint;
    }
    CorrelationPoint point;
    point.ell = ell;
    point.conditioning_events = cond;
    point.joint_events = joint;
    point.conditional = cond > 0 ? double(joint) / double(cond) : 0.0;
    if (cond > 0) {
      const double p = point.conditional;
      point.ci_half_width = 2.576 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / double(cond));
    }
    point.low_events = cond < 100;
    if (point.low_events) {
      point.ci_half_width = std::max(
          point.ci_half_width, 2.576 * std::sqrt(0.25 / double(std::max<long long>(cond, 1))));
      report.flagged = true;
    }
    report.points.push_back(point);
  }
  std::vector<double> xs, ys;
  for (const auto& p : report.points)
    if (p.joint_events > 0) {
      xs.push_back(std::log(p.ell));
      ys.push_back(std::log(p.conditional));
    }
  if (xs.size() >= 2) {
    const LineFit fit = least_squares(xs, ys);
    report.fitted_exponent = fit.slope;
    report.exponent_std_error = fit.slope_se;
  } else {
    report.flagged = true;
  }
  return report;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = "model,n,k,N,trial,seed,observable,value\n";
  char buf[40];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.value);
    out += row.model;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.k);
    out += ',';
    out += std::to_string(row.N);
    out += ',';
    out += std::to_string(row.trial);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += row.observable;
    out += ',';
    out += buf;
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "model,n,k,N,trial,seed,observable,value")
    throw std::invalid_argument("unrecognized CSV header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 8) throw std::invalid_argument("expected 8 CSV fields per row");
    ResultRow row;
    row.model = fields[0];
    row.n = std::stoi(fields[1]);
    row.k = std::stoi(fields[2]);
    row.N = std::stoi(fields[3]);
    row.trial = std::stoi(fields[4]);
    row.seed = std::stoull(fields[5]);
    row.observable = fields[6];
    row.value = std::stod(fields[7]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_rows_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::string text = rows_to_csv(rows);
  out.write(text.data(), std::streamsize(text.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<ResultRow> read_rows_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return rows_from_csv(buf.str());
}

std::vector<std::pair<double, double>> mean_by_n(const std::vector<ResultRow>& rows,
                                                 const std::string& observable) {
  std::map<int, std::pair<double, long long>> acc;
  for (const auto& row : rows) {
    if (row.observable != observable) continue;
    auto& slot = acc[row.N];
    slot.first += row.value;
    slot.second += 1;
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(acc.size());
  for (const auto& [N, slot] : acc)
    out.push_back({double(N), slot.first / double(slot.second)});
  return out;
}

}  // namespace cyclefill
