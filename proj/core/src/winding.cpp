#include "cyclefill/winding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "cyclefill/slicing.hpp"

namespace cyclefill {

namespace {

std::uint64_t mix(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

// deterministic per-(row, attempt) offset in (-1/4, 1/4) grid cells
double jitter(int row, int attempt) {
  std::uint64_t u = mix((std::uint64_t(std::uint32_t(row)) << 32) | std::uint32_t(attempt));
  return (double(u >> 11) * 0x1.0p-53 - 0.5) * 0.5;
}

void require_planar_cycle(const PolyCycle& z) {
  if (z.n != 2 || z.k != 1)
    throw std::invalid_argument("winding needs a polygonal 1-cycle in the square");
  for (const auto& c : z.cells) {
    if (c.verts.size() != 2)
      throw std::invalid_argument("winding cells must be segments");
    for (const auto& v : c.verts) {
      if (v.size() != 2) throw std::invalid_argument("winding cells must be planar");
      for (double x : v)
        if (!(x >= 0.0 && x <= 1.0))
          throw std::invalid_argument("winding cells must lie in the unit square");
    }
  }
  if (!boundary_is_zero(z, true))
    throw std::invalid_argument("winding needs a cycle closed relative to the square boundary");
}

}  // namespace

WindingGrid winding_function(const PolyCycle& z, double h) {
  require_planar_cycle(z);
  const long long m = h > 0.0 ? llround(1.0 / h) : 0;
  if (m < 16 || std::abs(double(m) * h - 1.0) > 1e-9)
    throw std::invalid_argument("resolution must be the reciprocal of an integer >= 16");

  WindingGrid grid;
  grid.h = 1.0 / double(m);
  grid.cells = int(m);
  grid.values.assign(std::size_t(m) * std::size_t(m), 0);

  std::vector<long long> delta(std::size_t(m) + 1, 0);
  for (int row = 0; row < m; ++row) {
    double y = 0.0;
    bool clean = false;
    for (int attempt = 0; attempt < 100 && !clean; ++attempt) {
      y = (double(row) + 0.5 + jitter(row, attempt)) * grid.h;
      clean = true;
      for (const auto& c : z.cells)
        for (const auto& v : c.verts)
          if (v[1] == y) {
            clean = false;
            break;
          }
    }
    if (!clean) throw degenerate_slice_error("ray through a vertex after 100 jitters");

    std::fill(delta.begin(), delta.end(), 0);
    for (const auto& c : z.cells) {
      const double ay = c.verts[0][1], by = c.verts[1][1];
      if (!(std::min(ay, by) < y && y < std::max(ay, by))) continue;
      const double t = (y - ay) / (by - ay);
      const double x = c.verts[0][0] + t * (c.verts[1][0] - c.verts[0][0]);
      const long long sigma = (by > ay ? -1 : +1) * (long long)c.coef;
      auto first = (long long)std::floor(x / grid.h + 0.5);  // first center right of x
      first = std::clamp(first, 0LL, m);
      delta[std::size_t(first)] += sigma;
    }
    long long running = 0;
    for (long long col = 0; col < m; ++col) {
      running += delta[std::size_t(col)];
      grid.values[std::size_t(row) * std::size_t(m) + std::size_t(col)] = running;
    }
  }
  return grid;
}

WindingEstimate fv_winding(const PolyCycle& z, double h) {
  WindingGrid grid = winding_function(z, h);
  long long lo = 0, hi = 0;
  for (long long v : grid.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double best = std::numeric_limits<double>::infinity();
  for (long long c = -hi; c <= -lo; ++c) {
    double s = 0.0;
    for (long long v : grid.values) s += double(std::llabs(v + c));
    best = std::min(best, s);
  }

  WindingEstimate est;
  est.value = best * grid.h * grid.h;
  est.error_bound = 3.0 * grid.h * mass(z) + 4.0 * grid.h * grid.h * double(z.cells.size());
  return est;
}

}  // namespace cyclefill
