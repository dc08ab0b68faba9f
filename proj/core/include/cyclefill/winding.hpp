#pragma once

#include <vector>

#include "cyclefill/chains.hpp"

namespace cyclefill {

// Signed crossing counts of leftward rays, sampled on an h-grid of the unit
// square. Row y-coordinates carry a small deterministic jitter so rays avoid
// polygon vertices.
struct WindingGrid {
  double h = 0.0;
  int cells = 0;  // per axis; values are row-major with cells*cells entries
  std::vector<long long> values;

  long long at(int row, int col) const {
    return values[std::size_t(row) * std::size_t(cells) + std::size_t(col)];
  }
};

// Crossing-count filling density of a polygonal 1-cycle closed relative to
// the square boundary. 1/h must be an integer >= 16.
WindingGrid winding_function(const PolyCycle& z, double h);

struct WindingEstimate {
  double value = 0.0;        // min over integer shifts c of h^2 * sum |w + c|
  double error_bound = 0.0;  // certified discretization cushion, linear in h
};

// Minimal filling mass of the cycle: relative 2-cycles in the square are
// constants, so every filling is w + c and the minimum over integer c is
// exact up to rasterization.
WindingEstimate fv_winding(const PolyCycle& z, double h);

}  // namespace cyclefill
