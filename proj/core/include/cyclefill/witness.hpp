#pragma once

#include <vector>

#include "cyclefill/chains.hpp"
#include "cyclefill/slicing.hpp"

namespace cyclefill {

// One sup-norm pyramid: coefficient * max(0, 1 - (2/side)*dist_inf(x, center))
// supported on the axis-aligned cube [corner, corner + side]^d.
struct PyramidAtom {
  std::vector<double> corner;
  double side = 0.0;
  double coefficient = 0.0;
};

// A sum of pyramids over cells of one or more grids. Every constructed
// witness vanishes on the boundary of the unit cube, so dividing its
// integral against a 0-cycle by a Lipschitz bound gives a filling volume
// lower bound that remains valid under boundary discharge.
struct WitnessFunction {
  int d = 0;
  std::vector<PyramidAtom> atoms;
  std::vector<int> scale_tags;  // parallel to atoms; 0 for single-scale builds
};

double pyramid_eval(const PyramidAtom& atom, const Vec& x);
double witness_eval(const WitnessFunction& w, const Vec& x);

// One pyramid per grid cell of side r (1/r integral), weighted by
// r * sign(net signed count of the cycle in the cell). r <= 0 picks the
// grid whose cell count is near the cycle size.
WitnessFunction build_grid_witness(const ZeroCycle& z, double r = 0.0);

// Dyadic squares at scales 1..max_scale; the raw coefficient of a square is
// the signed pyramid mass of the cycle in it, truncated at cap*sqrt(N)*2^-r.
// max_scale <= 0 picks a scale count logarithmic in the cycle size.
WitnessFunction build_multiscale_witness(const ZeroCycle& z, int max_scale = 0,
                                         double cap = 1.0);

// R equal intervals; the coefficient of an interval is its net signed count
// truncated at C*sqrt(N/R).
WitnessFunction build_interval_witness(const ZeroCycle& z, int R, double C = 1.0);

double integrate_witness(const WitnessFunction& w, const ZeroCycle& z);

// Certified Lipschitz upper bound: per-scale disjoint-support analysis,
// sharpened by an exact piecewise-linear computation in dimensions 1 and 2
// when the atom layout permits one.
double lip_bound(const WitnessFunction& w);

// max(0, integral / lip); the duality lower bound for the filling volume.
double witness_lower_bound(const WitnessFunction& w, const ZeroCycle& z);

struct KnotWitnessParams {
  int interval_R = 8;
  double interval_C = 1.0;
  int max_scale = 0;    // 0 picks the scale count from the cycle size
  double cap = 1.0;
  double grid_r = 0.0;  // 0 picks the grid from the cycle size
};

// Lower bound for the filling volume of a full slice of an embedded
// pseudomanifold: build the witness from the largest color class of the
// dependency graph (whose cells are nearly independent), then integrate it
// against the whole slice.
double knot_slice_lower_bound(const std::vector<SliceAtom>& atoms, const Pseudomanifold& m,
                              int d, const KnotWitnessParams& params = {});

}  // namespace cyclefill
