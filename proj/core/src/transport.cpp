#include "cyclefill/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace cyclefill {

double euclidean(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double boundary_distance(const Vec& p) {
  double m = std::numeric_limits<double>::infinity();
  for (double c : p) m = std::min({m, c, 1.0 - c});
  return m;
}

double geodesic(const Vec& a, const Vec& b) {
  double dot = std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

namespace {

void require_interval(const ZeroCycle& z) {
  validate(z);
  if (z.ambient.kind != AmbientKind::Cube || z.ambient.d != 1)
    throw std::invalid_argument("interval form needs the cube ambient with d = 1");
}

// Constant segments of G(x) = sum_i sign_i * 1{pos_i <= x} as (value, length)
// pairs covering [0, 1].
std::vector<std::pair<long long, double>> step_segments(const ZeroCycle& z) {
  std::vector<std::pair<double, int>> events;
  events.reserve(z.points.size());
  for (const auto& p : z.points) events.push_back({p.position[0], p.sign});
  std::sort(events.begin(), events.end());
  std::vector<std::pair<long long, double>> segs;
  long long g = 0;
  double prev = 0.0;
  for (const auto& [x, s] : events) {
    if (x > prev) segs.push_back({g, x - prev});
    g += s;
    prev = x;
  }
  if (prev < 1.0) segs.push_back({g, 1.0 - prev});
  return segs;
}

double shifted_step_mass(const std::vector<std::pair<long long, double>>& segs, long long c) {
  double t = 0;
  for (const auto& [g, len] : segs) t += std::abs(double(g + c)) * len;
  return t;
}

constexpr int kFree = -1;
constexpr int kBoundary = -2;

// Min-cost transport between + points (rows) and - points (cols), with an
// optional reservoir node standing in for the cube boundary: every row may
// discharge to it and it can feed every col. Successive shortest paths with
// node potentials; all reduced costs stay nonnegative, so plain Dijkstra
// works for each augmentation.
class ExactSolver {
 public:
  ExactSolver(const ZeroCycle& z, const SolveOptions& opt, bool sphere_metric)
      : opt_(opt), sphere_(sphere_metric), dim_(z.ambient.coords()) {
    for (int i = 0; i < int(z.points.size()); ++i)
      (z.points[i].sign > 0 ? row_ids_ : col_ids_).push_back(i);
    P_ = int(row_ids_.size());
    M_ = int(col_ids_.size());
    has_reservoir_ = !sphere_metric;
    B_ = P_ + M_;
    V_ = P_ + M_ + (has_reservoir_ ? 1 : 0);

    rpos_.resize(size_t(P_) * dim_);
    cpos_.resize(size_t(M_) * dim_);
    for (int i = 0; i < P_; ++i)
      std::copy_n(z.points[row_ids_[i]].position.data(), dim_, &rpos_[size_t(i) * dim_]);
    for (int j = 0; j < M_; ++j)
      std::copy_n(z.points[col_ids_[j]].position.data(), dim_, &cpos_[size_t(j) * dim_]);
    if (has_reservoir_) {
      rb_.resize(P_);
      cb_.resize(M_);
      for (int i = 0; i < P_; ++i) rb_[i] = boundary_distance(z.points[row_ids_[i]].position);
      for (int j = 0; j < M_; ++j) cb_[j] = boundary_distance(z.points[col_ids_[j]].position);
    }

    pi_.assign(V_, 0.0);
    row_match_.assign(P_, kFree);
    col_match_.assign(M_, kFree);
    dist_.assign(V_, 0.0);
    prev_.assign(V_, -1);
    done_.assign(V_, 0);
    seen_.assign(V_, 0);

    if (has_reservoir_ && opt_.prune) {
      cand_.resize(P_);
      for (int i = 0; i < P_; ++i)
        for (int j = 0; j < M_; ++j) {
          double w = cost(i, j);
          // a pair costing more than two discharges never helps
          if (w <= rb_[i] + cb_[j]) cand_[i].push_back({j, w});
        }
      pruned_ = true;
    }
  }

  void solve() {
    for (int s = 0; s < P_; ++s) augment(dijkstra(s, has_reservoir_));
    if (has_reservoir_) {
      int unfed = int(std::count(col_match_.begin(), col_match_.end(), kFree));
      for (int t = 0; t < unfed; ++t) augment(dijkstra(B_, false));
    }
  }

  // Residual reduced costs of the final potentials must be nonnegative; a
  // pruned pair arc is instead re-justified by the domination inequality.
  void certify() const {
    const double tol = opt_.tolerance;
    auto fail = [](const std::string& what) {
      throw solver_error("optimality certificate violated: " + what);
    };
    for (int i = 0; i < P_; ++i)
      if (row_match_[i] == kFree) fail("unassigned + point");
    for (int j = 0; j < M_; ++j) {
      if (col_match_[j] == kFree) fail("unassigned - point");
      if (col_match_[j] >= 0 && row_match_[col_match_[j]] != j) fail("matching tables disagree");
    }
    for (int i = 0; i < P_; ++i)
      if (row_match_[i] >= 0 && col_match_[row_match_[i]] != i) fail("matching tables disagree");

    for (int i = 0; i < P_; ++i)
      for (int j = 0; j < M_; ++j) {
        double w = cost(i, j);
        if (pruned_ && w > rb_[i] + cb_[j]) {
          if (row_match_[i] == j) fail("pruned arc carries flow");
          continue;
        }
        double rc = w + pi_[i] - pi_[P_ + j];
        if (row_match_[i] == j) rc = -rc;
        if (rc < -tol) fail("pair arc reduced cost");
      }
    if (has_reservoir_) {
      for (int i = 0; i < P_; ++i) {
        double rc = rb_[i] + pi_[i] - pi_[B_];
        if (row_match_[i] == kBoundary) rc = -rc;
        if (rc < -tol) fail("row discharge reduced cost");
      }
      for (int j = 0; j < M_; ++j) {
        double rc = cb_[j] + pi_[B_] - pi_[P_ + j];
        if (col_match_[j] == kBoundary) rc = -rc;
        if (rc < -tol) fail("col feed reduced cost");
      }
    }
  }

  std::pair<double, TransportPlan> extract() const {
    TransportPlan plan;
    double total = 0;
    for (int i = 0; i < P_; ++i) {
      if (row_match_[i] >= 0) {
        double w = cost(i, row_match_[i]);
        plan.pairings.push_back({row_ids_[i], col_ids_[row_match_[i]], w});
        total += w;
      } else {
        plan.boundary_assignments.push_back({row_ids_[i], rb_[i]});
        total += rb_[i];
      }
    }
    for (int j = 0; j < M_; ++j)
      if (col_match_[j] == kBoundary) {
        plan.boundary_assignments.push_back({col_ids_[j], cb_[j]});
        total += cb_[j];
      }
    plan.total_cost = total;
    return {total, plan};
  }

 private:
  double cost(int i, int j) const {
    const double* a = &rpos_[size_t(i) * dim_];
    const double* b = &cpos_[size_t(j) * dim_];
    if (sphere_) {
      double dot = 0;
      for (int t = 0; t < dim_; ++t) dot += a[t] * b[t];
      return std::acos(std::clamp(dot, -1.0, 1.0));
    }
    double s = 0;
    for (int t = 0; t < dim_; ++t) {
      double d = a[t] - b[t];
      s += d * d;
    }
    return std::sqrt(s);
  }

  bool is_sink(int u, bool reservoir_is_sink) const {
    if (u < P_) return false;
    if (u < P_ + M_) return col_match_[u - P_] == kFree;
    return reservoir_is_sink;
  }

  void push(int v, double d, int from) {
    if (done_[v]) return;
    if (seen_[v] && dist_[v] <= d) return;
    seen_[v] = 1;
    dist_[v] = d;
    prev_[v] = from;
    heap_.push_back({d, v});
    std::push_heap(heap_.begin(), heap_.end(), heap_after);
  }

  void relax_from(int u, double du) {
    double base = du + pi_[u];
    if (u < P_) {
      int i = u;
      if (pruned_) {
        for (const auto& [j, w] : cand_[i]) {
          if (row_match_[i] == j) continue;
          push(P_ + j, std::max(du, base + w - pi_[P_ + j]), u);
        }
      } else {
        for (int j = 0; j < M_; ++j) {
          if (row_match_[i] == j) continue;
          push(P_ + j, std::max(du, base + cost(i, j) - pi_[P_ + j]), u);
        }
      }
      if (has_reservoir_ && row_match_[i] != kBoundary)
        push(B_, std::max(du, base + rb_[i] - pi_[B_]), u);
    } else if (u < P_ + M_) {
      int j = u - P_;
      int r = col_match_[j];
      if (r >= 0)
        push(r, std::max(du, base - cost(r, j) - pi_[r]), u);
      else if (r == kBoundary)
        push(B_, std::max(du, base - cb_[j] - pi_[B_]), u);
    } else {
      for (int i = 0; i < P_; ++i)
        if (row_match_[i] == kBoundary)
          push(i, std::max(du, base - rb_[i] - pi_[i]), u);
      for (int j = 0; j < M_; ++j)
        if (col_match_[j] != kBoundary)
          push(P_ + j, std::max(du, base + cb_[j] - pi_[P_ + j]), u);
    }
  }

  // Runs until a sink (free col, or the reservoir when it may absorb) is
  // finalized, then rebases potentials so finalized nodes keep reduced costs
  // nonnegative. Returns the sink.
  int dijkstra(int source, bool reservoir_is_sink) {
    std::fill(done_.begin(), done_.end(), char(0));
    std::fill(seen_.begin(), seen_.end(), char(0));
    heap_.clear();
    push(source, 0.0, -1);
    int sink = -1;
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), heap_after);
      auto [d, u] = heap_.back();
      heap_.pop_back();
      if (done_[u]) continue;
      done_[u] = 1;
      if (is_sink(u, reservoir_is_sink)) {
        sink = u;
        break;
      }
      relax_from(u, d);
    }
    if (sink == -1) throw solver_error("no augmenting path");
    double d_sink = dist_[sink];
    for (int v = 0; v < V_; ++v)
      if (done_[v]) pi_[v] += dist_[v] - d_sink;
    return sink;
  }

  void augment(int sink) {
    for (int v = sink; prev_[v] != -1; v = prev_[v]) {
      int u = prev_[v];
      bool u_row = u < P_;
      bool v_col = v >= P_ && v < P_ + M_;
      if (u_row && v_col) {
        row_match_[u] = v - P_;
        col_match_[v - P_] = u;
      } else if (u_row && v == B_) {
        row_match_[u] = kBoundary;
      } else if (u == B_ && v_col) {
        col_match_[v - P_] = kBoundary;
      }
      // arcs out of a col (and reservoir-to-row arcs) carry no bookkeeping:
      // the node they lead to is rewritten by the next hop
    }
  }

  static bool heap_after(const std::pair<double, int>& a, const std::pair<double, int>& b) {
    return a.first > b.first;
  }

  SolveOptions opt_;
  bool sphere_;
  int dim_;
  int P_ = 0, M_ = 0, B_ = 0, V_ = 0;
  bool has_reservoir_ = false;
  bool pruned_ = false;
  std::vector<int> row_ids_, col_ids_;
  std::vector<double> rpos_, cpos_, rb_, cb_;
  std::vector<std::vector<std::pair<int, double>>> cand_;
  std::vector<double> pi_, dist_;
  std::vector<int> row_match_, col_match_, prev_;
  std::vector<char> done_, seen_;
  std::vector<std::pair<double, int>> heap_;
};

}  // namespace

double mass_F0(const ZeroCycle& z) {
  require_interval(z);
  return shifted_step_mass(step_segments(z), 0);
}

double fv_interval(const ZeroCycle& z) {
  require_interval(z);
  auto segs = step_segments(z);
  // the cost of shift c is convex piecewise linear with integer breakpoints,
  // minimized at a weighted median of -G over segment lengths
  std::vector<std::pair<long long, double>> by_value(segs);
  std::sort(by_value.begin(), by_value.end());
  double half = 0;
  for (const auto& [g, len] : by_value) half += len;
  half /= 2;
  long long med = by_value.back().first;
  double acc = 0;
  for (const auto& [g, len] : by_value) {
    acc += len;
    if (acc >= half) {
      med = g;
      break;
    }
  }
  double best = shifted_step_mass(segs, -med);
  best = std::min(best, shifted_step_mass(segs, -med - 1));
  best = std::min(best, shifted_step_mass(segs, -med + 1));
  return best;
}

std::pair<double, TransportPlan> fv_cube(const ZeroCycle& z, const SolveOptions& options) {
  validate(z);
  if (z.ambient.kind != AmbientKind::Cube)
    throw std::invalid_argument("fv_cube needs a cube ambient");
  ExactSolver solver(z, options, false);
  solver.solve();
  if (options.certify) solver.certify();
  return solver.extract();
}

std::pair<double, TransportPlan> fv_sphere(const ZeroCycle& z, const SolveOptions& options) {
  validate(z);
  if (z.ambient.kind != AmbientKind::Sphere)
    throw std::invalid_argument("fv_sphere needs a sphere ambient");
  ExactSolver solver(z, options, true);
  solver.solve();
  if (options.certify) solver.certify();
  return solver.extract();
}

double fv_bruteforce(const ZeroCycle& z) {
  validate(z);
  std::vector<int> pos, neg;
  for (int i = 0; i < int(z.points.size()); ++i)
    (z.points[i].sign > 0 ? pos : neg).push_back(i);

  if (z.ambient.kind == AmbientKind::Sphere) {
    if (pos.size() > 8) throw std::invalid_argument("exhaustive matching limited to 8 pairs");
    std::vector<int> perm(neg.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double t = 0;
      for (size_t i = 0; i < pos.size(); ++i)
        t += geodesic(z.points[pos[i]].position, z.points[neg[perm[i]]].position);
      best = std::min(best, t);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }

  if (pos.size() > 10 || neg.size() > 10)
    throw std::invalid_argument("exhaustive search limited to 10 points per sign");
  std::vector<char> used(neg.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(size_t, double)> rec = [&](size_t i, double cost) {
    if (cost >= best) return;
    if (i == pos.size()) {
      double t = cost;
      for (size_t j = 0; j < neg.size(); ++j)
        if (!used[j]) t += boundary_distance(z.points[neg[j]].position);
      best = std::min(best, t);
      return;
    }
    rec(i + 1, cost + boundary_distance(z.points[pos[i]].position));
    for (size_t j = 0; j < neg.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      rec(i + 1, cost + euclidean(z.points[pos[i]].position, z.points[neg[j]].position));
      used[j] = 0;
    }
  };
  rec(0, 0.0);
  return best;
}

double fv_auto(const ZeroCycle& z) {
  validate(z);
  if (z.ambient.kind == AmbientKind::Sphere) return fv_sphere(z).first;
  if (z.ambient.d == 1) return fv_interval(z);
  return fv_cube(z).first;
}

}  // namespace cyclefill
