#include "cyclefill/witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cyclefill {

namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

void require_cube(const ZeroCycle& z, int d, const char* what) {
  validate(z);
  if (z.ambient.kind != AmbientKind::Cube)
    throw std::invalid_argument(std::string(what) + " needs a cube-ambient cycle");
  if (d > 0 && z.ambient.d != d)
    throw std::invalid_argument(std::string(what) + " needs ambient dimension " +
                                std::to_string(d));
}

long long cell_of(double x, long long cells) {
  auto i = (long long)std::floor(x * double(cells));
  return std::clamp(i, 0LL, cells - 1);
}

void push_atom(WitnessFunction& w, std::vector<double> corner, double side, double coef,
               int tag) {
  PyramidAtom atom;
  atom.corner = std::move(corner);
  atom.side = side;
  atom.coefficient = coef;
  w.atoms.push_back(std::move(atom));
  w.scale_tags.push_back(tag);
}

// Scales whose supports tile a grid contribute their largest per-atom slope;
// anything not visibly disjoint falls back to the sum of per-atom slopes.
double analytic_lip(const WitnessFunction& w) {
  std::map<int, std::vector<int>> groups;
  for (size_t i = 0; i < w.atoms.size(); ++i) groups[w.scale_tags[i]].push_back(int(i));
  double total = 0.0;
  for (const auto& [tag, members] : groups) {
    double side = w.atoms[members[0]].side;
    bool disjoint = true;
    std::set<std::vector<long long>> cells;
    for (int i : members) {
      const auto& a = w.atoms[i];
      if (a.side <= 0.0 || std::abs(a.side - side) > 1e-12) {
        disjoint = false;
        break;
      }
      std::vector<long long> idx(a.corner.size());
      for (size_t j = 0; j < a.corner.size(); ++j) {
        idx[j] = llround(a.corner[j] / side);
        if (std::abs(a.corner[j] - double(idx[j]) * side) > 1e-9) {
          disjoint = false;
          break;
        }
      }
      if (!disjoint || !cells.insert(idx).second) {
        disjoint = false;
        break;
      }
    }
    double part = 0.0;
    for (int i : members) {
      const auto& a = w.atoms[i];
      if (a.side <= 0.0) throw std::invalid_argument("pyramid needs a positive side");
      double slope = 2.0 * std::abs(a.coefficient) / a.side;
      part = disjoint ? std::max(part, slope) : part + slope;
    }
    total += part;
  }
  return total;
}

double exact_lip_1d(const WitnessFunction& w) {
  std::vector<double> bps{0.0, 1.0};
  for (const auto& a : w.atoms) {
    bps.push_back(a.corner[0]);
    bps.push_back(a.corner[0] + 0.5 * a.side);
    bps.push_back(a.corner[0] + a.side);
  }
  std::sort(bps.begin(), bps.end());
  double best = 0.0;
  double prev = bps.front();
  double fprev = witness_eval(w, {prev});
  for (double b : bps) {
    if (b - prev < 1e-12) continue;
    double f = witness_eval(w, {b});
    best = std::max(best, std::abs(f - fprev) / (b - prev));
    prev = b;
    fprev = f;
  }
  return best;
}

// The witness is piecewise linear on the half-cell grid of the finest scale
// cut along both subcell diagonals: atom edges and apexes land on grid
// lines/corners, and atom diagonals (slope +-1 through grid corners) land on
// subcell diagonals. The true Lipschitz constant is the largest gradient
// norm over those triangles. Only applies when every atom sits on a dyadic
// grid; returns nothing otherwise.
std::optional<double> exact_lip_2d(const WitnessFunction& w) {
  int rmax = 0;
  std::map<int, std::unordered_map<long long, double>> scales;
  for (const auto& a : w.atoms) {
    if (a.side <= 0.0 || a.side > 1.0) return std::nullopt;
    int r = int(llround(-std::log2(a.side)));
    if (r < 0 || r > 10) return std::nullopt;
    double side = std::ldexp(1.0, -r);
    if (std::abs(a.side - side) > 1e-9 * side) return std::nullopt;
    long long cells = 1LL << r;
    long long ix = llround(a.corner[0] / side);
    long long iy = llround(a.corner[1] / side);
    if (std::abs(a.corner[0] - double(ix) * side) > 1e-9 ||
        std::abs(a.corner[1] - double(iy) * side) > 1e-9)
      return std::nullopt;
    if (ix < 0 || ix >= cells || iy < 0 || iy >= cells) return std::nullopt;
    scales[r][ix * cells + iy] += a.coefficient;
    rmax = std::max(rmax, r);
  }

  const long long grid = 1LL << (rmax + 1);
  if ((grid + 1) * (grid + 1) > 20'000'000) return std::nullopt;
  auto eval = [&](double x, double y) {
    double s = 0.0;
    for (const auto& [r, cells] : scales) {
      long long c = 1LL << r;
      double side = std::ldexp(1.0, -r);
      long long ix = cell_of(x, c), iy = cell_of(y, c);
      auto it = cells.find(ix * c + iy);
      if (it == cells.end()) continue;
      double dist = std::max(std::abs(x - (double(ix) + 0.5) * side),
                             std::abs(y - (double(iy) + 0.5) * side));
      s += it->second * std::max(0.0, 1.0 - 2.0 * dist / side);
    }
    return s;
  };

  const double h = 1.0 / double(grid);
  std::vector<double> corner((grid + 1) * (grid + 1)), center(grid * grid);
  for (long long i = 0; i <= grid; ++i)
    for (long long j = 0; j <= grid; ++j)
      corner[i * (grid + 1) + j] = eval(double(i) * h, double(j) * h);
  for (long long i = 0; i < grid; ++i)
    for (long long j = 0; j < grid; ++j)
      center[i * grid + j] = eval((double(i) + 0.5) * h, (double(j) + 0.5) * h);

  double best = 0.0;
  for (long long i = 0; i < grid; ++i)
    for (long long j = 0; j < grid; ++j) {
      double v00 = corner[i * (grid + 1) + j];
      double v10 = corner[(i + 1) * (grid + 1) + j];
      double v01 = corner[i * (grid + 1) + j + 1];
      double v11 = corner[(i + 1) * (grid + 1) + j + 1];
      double vm = center[i * grid + j];
      double gx, gy;
      gx = (v10 - v00) / h, gy = 2.0 * (vm - v00) / h - gx;  // bottom
      best = std::max(best, std::hypot(gx, gy));
      gy = (v11 - v10) / h, gx = gy - 2.0 * (vm - v10) / h;  // right
      best = std::max(best, std::hypot(gx, gy));
      gx = (v11 - v01) / h, gy = gx - 2.0 * (vm - v01) / h;  // top
      best = std::max(best, std::hypot(gx, gy));
      gy = (v01 - v00) / h, gx = 2.0 * (vm - v00) / h - gy;  // left
      best = std::max(best, std::hypot(gx, gy));
    }
  return best;
}

}  // namespace

double pyramid_eval(const PyramidAtom& atom, const Vec& x) {
  if (x.size() != atom.corner.size())
    throw std::invalid_argument("point and pyramid dimensions differ");
  if (atom.side <= 0.0) throw std::invalid_argument("pyramid needs a positive side");
  double dist = 0.0;
  for (size_t j = 0; j < x.size(); ++j)
    dist = std::max(dist, std::abs(x[j] - (atom.corner[j] + 0.5 * atom.side)));
  return atom.coefficient * std::max(0.0, 1.0 - 2.0 * dist / atom.side);
}

double witness_eval(const WitnessFunction& w, const Vec& x) {
  double s = 0.0;
  for (const auto& a : w.atoms) s += pyramid_eval(a, x);
  return s;
}

WitnessFunction build_grid_witness(const ZeroCycle& z, double r) {
  require_cube(z, 0, "grid witness");
  const int d = z.ambient.d;
  const auto n = double(z.points.size());
  long long m;
  if (r <= 0.0) {
    m = z.points.empty() ? 1 : std::max(1LL, llround(std::pow(n, 1.0 / d)));
  } else {
    m = llround(1.0 / r);
    if (m < 1 || std::abs(double(m) * r - 1.0) > 1e-9)
      throw std::invalid_argument("grid side must be the reciprocal of a positive integer");
  }
  const double side = 1.0 / double(m);

  std::map<std::vector<long long>, long long> net;
  for (const auto& p : z.points) {
    std::vector<long long> idx(d);
    for (int j = 0; j < d; ++j) idx[j] = cell_of(p.position[j], m);
    net[idx] += p.sign;
  }

  WitnessFunction w;
  w.d = d;
  for (const auto& [idx, count] : net) {
    if (count == 0) continue;
    std::vector<double> corner(d);
    for (int j = 0; j < d; ++j) corner[j] = double(idx[j]) * side;
    push_atom(w, std::move(corner), side, side * double(sgn(double(count))), 0);
  }
  return w;
}

WitnessFunction build_multiscale_witness(const ZeroCycle& z, int max_scale, double cap) {
  require_cube(z, 2, "multiscale witness");
  if (cap < 0.0) throw std::invalid_argument("cap must be nonnegative");
  const auto n = double(z.points.size());
  if (max_scale <= 0)
    max_scale = z.points.empty() ? 1 : std::max(1, int(std::floor(0.1 * std::log2(n))));

  WitnessFunction w;
  w.d = 2;
  for (int r = 1; r <= max_scale; ++r) {
    const long long cells = 1LL << r;
    const double side = std::ldexp(1.0, -r);
    std::map<long long, double> raw;
    for (const auto& p : z.points) {
      long long ix = cell_of(p.position[0], cells), iy = cell_of(p.position[1], cells);
      double dist = std::max(std::abs(p.position[0] - (double(ix) + 0.5) * side),
                             std::abs(p.position[1] - (double(iy) + 0.5) * side));
      raw[ix * cells + iy] += p.sign * std::max(0.0, 1.0 - 2.0 * dist / side);
    }
    const double truncation = cap * std::sqrt(n) * side;
    for (const auto& [key, c] : raw) {
      double stored = double(sgn(c)) * std::min(std::abs(c), truncation);
      if (stored == 0.0) continue;
      push_atom(w, {double(key / cells) * side, double(key % cells) * side}, side, stored, r);
    }
  }
  return w;
}

WitnessFunction build_interval_witness(const ZeroCycle& z, int R, double C) {
  require_cube(z, 1, "interval witness");
  if (R < 1) throw std::invalid_argument("need at least one interval");
  if (C < 0.0) throw std::invalid_argument("truncation constant must be nonnegative");
  std::vector<long long> counts(R, 0);
  for (const auto& p : z.points) counts[cell_of(p.position[0], R)] += p.sign;

  const double truncation = C * std::sqrt(double(z.points.size()) / double(R));
  WitnessFunction w;
  w.d = 1;
  for (int s = 0; s < R; ++s) {
    if (counts[s] == 0) continue;
    double coef =
        double(sgn(double(counts[s]))) * std::min(double(std::abs(counts[s])), truncation);
    if (coef == 0.0) continue;
    push_atom(w, {double(s) / R}, 1.0 / R, coef, 0);
  }
  return w;
}

double integrate_witness(const WitnessFunction& w, const ZeroCycle& z) {
  require_cube(z, w.d, "witness integration");
  double s = 0.0;
  for (const auto& p : z.points) s += double(p.sign) * witness_eval(w, p.position);
  return s;
}

double lip_bound(const WitnessFunction& w) {
  if (w.atoms.empty()) return 0.0;
  if (w.atoms.size() != w.scale_tags.size())
    throw std::invalid_argument("scale tags must parallel atoms");
  double lip = analytic_lip(w);
  if (w.d == 1) lip = std::min(lip, exact_lip_1d(w));
  if (w.d == 2) {
    auto exact = exact_lip_2d(w);
    if (exact) lip = std::min(lip, *exact);
  }
  return lip;
}

double witness_lower_bound(const WitnessFunction& w, const ZeroCycle& z) {
  double integral = integrate_witness(w, z);
  double lip = lip_bound(w);
  if (lip <= 0.0) {
    if (std::abs(integral) > 1e-12)
      throw std::logic_error("zero Lipschitz bound against a nonzero integral");
    return 0.0;
  }
  return std::max(0.0, integral / lip);
}

double knot_slice_lower_bound(const std::vector<SliceAtom>& atoms, const Pseudomanifold& m,
                              int d, const KnotWitnessParams& params) {
  if (d < 1) throw std::invalid_argument("need d >= 1");
  if (atoms.size() != m.simplices.size())
    throw std::invalid_argument("need one slice atom per simplex");
  auto classes = greedy_coloring(dependency_graph(m));
  if (classes.empty()) return 0.0;

  auto collect = [&](const std::vector<int>* subset) {
    ZeroCycle z;
    z.ambient = {AmbientKind::Cube, d};
    auto add = [&](int i) {
      if (!atoms[i].point) return;
      if (int(atoms[i].point->position.size()) != d)
        throw std::invalid_argument("slice atom dimension does not match d");
      z.points.push_back(*atoms[i].point);
      z.source.push_back(atoms[i].source_index >= 0 ? atoms[i].source_index : i);
    };
    if (subset)
      for (int i : *subset) add(i);
    else
      for (size_t i = 0; i < atoms.size(); ++i) add(int(i));
    return z;
  };

  ZeroCycle independent = collect(&classes[0]);
  if (independent.points.empty()) return 0.0;
  ZeroCycle full = collect(nullptr);

  WitnessFunction w;
  if (d == 1)
    w = build_interval_witness(independent, params.interval_R, params.interval_C);
  else if (d == 2)
    w = build_multiscale_witness(independent, params.max_scale, params.cap);
  else
    w = build_grid_witness(independent, params.grid_r);
  return witness_lower_bound(w, full);
}

}  // namespace cyclefill
