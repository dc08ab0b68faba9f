#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cyclefill/chains.hpp"
#include "cyclefill/models.hpp"
#include "cyclefill/rng.hpp"

namespace cyclefill {

// A slice parameter landed on a measure-zero configuration (endpoint hit,
// flat cell, parallel plane). Callers redraw or perturb and retry.
class degenerate_slice_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coordinate slice {x : x[fixed_axes[t]] = values[t]} for cube models, or a
// fixed great sphere for the round model.
struct SliceSpec {
  std::vector<int> fixed_axes;
  Vec values;
  std::optional<OrientedSubspace> fixed_subspace;
};

// Per-source outcome of a slice; the point is absent when the source misses
// the slice plane.
struct SliceAtom {
  int source_index = -1;
  std::optional<SignedPoint> point;
};

// Cross a segment with {x[axis] = c}: the interpolated point with the axis
// coordinate dropped, signed by the crossing direction. Hitting an endpoint
// exactly raises degenerate_slice_error.
SliceAtom slice_segment(const Vec& a, const Vec& b, int axis, double c);

// Cross a k-simplex cell (coefficient +-1, first k coordinates already the
// fixed axes) with the plane {first k coords = x}: barycentric solve, sign =
// coefficient times the orientation of the projected edge matrix.
SliceAtom slice_simplex(const Cell& cell, const Vec& x);

// Slice every cell; present points keep their source cell index. The signed
// point sum is zero for closed cycles and generic slice values.
std::pair<ZeroCycle, std::vector<SliceAtom>> slice_polycycle(const PolyCycle& Z,
                                                             const SliceSpec& spec);

// Retry wrapper: perturbs the slice values inside a 1e-9 window on each
// degenerate hit, at most 100 attempts.
std::pair<ZeroCycle, std::vector<SliceAtom>> slice_polycycle_generic(const PolyCycle& Z,
                                                                     const SliceSpec& spec,
                                                                     RngStream& rng);

// Intersect an affine k-plane with a coordinate (n-k)-plane: generically one
// point; absent when it falls outside [0,1]^n; sign from the determinant of
// the plane basis concatenated with the free coordinate directions.
SliceAtom slice_plane(const AffineKPlane& P, const SliceSpec& spec);

// Intersect oriented subspaces of dimensions (k+1) + (n-k+1) = n+2 in
// R^{n+1}: an antipodal pair of unit vectors with opposite signs. The
// positive point u is fixed by det[u | B_U' | B_V'] > 0 with orientation
// respecting completions of u inside each subspace.
std::pair<SignedPoint, SignedPoint> slice_great_sphere(const OrientedSubspace& U,
                                                       const OrientedSubspace& V);

// Graph on top simplices, edges joining pairs that share a vertex.
std::vector<std::vector<int>> dependency_graph(const Pseudomanifold& M);

// Descending-degree greedy coloring; classes ordered by decreasing size. Uses
// at most (max degree + 1) colors.
std::vector<std::vector<int>> greedy_coloring(const std::vector<std::vector<int>>& adjacency);

}  // namespace cyclefill
