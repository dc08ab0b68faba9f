#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cyclefill {

using Vec = std::vector<double>;

// One signed point of a 0-cycle.
struct SignedPoint {
  Vec position;
  int sign = +1;  // +1 or -1
};

enum class AmbientKind { Cube, Sphere };

// Ambient space of a 0-cycle: the open cube (0,1)^d taken relative to its
// boundary, or the unit sphere S^d embedded in R^{d+1}.
struct Ambient {
  AmbientKind kind = AmbientKind::Cube;
  int d = 1;

  static Ambient cube(int d) { return {AmbientKind::Cube, d}; }
  static Ambient sphere(int d) { return {AmbientKind::Sphere, d}; }
  // Length of a position vector living in this ambient.
  int coords() const { return kind == AmbientKind::Cube ? d : d + 1; }
};

bool operator==(const Ambient& a, const Ambient& b);

// Finite signed point configuration. Cube points have d coordinates in
// [0, 1]; sphere points are unit vectors of length d+1 and must have
// total sign zero. `source` is optional per-point provenance (index of the
// cell a slice point came from); empty when not applicable.
struct ZeroCycle {
  Ambient ambient;
  std::vector<SignedPoint> points;
  std::vector<int> source;

  std::size_t size() const { return points.size(); }
};

int total_sign(const ZeroCycle& z);
// Throws std::invalid_argument when the structural invariants fail
// (coordinate counts, cube range, unit norms within 1e-9, sphere sign balance).
void validate(const ZeroCycle& z);

// Abstract oriented k-simplex: k+1 distinct vertex ids plus a coefficient.
struct OrientedSimplex {
  std::vector<int> vertices;
  int coef = +1;
};

// Abstract simplicial k-chain over vertices {0, .., num_vertices-1}.
struct Pseudomanifold {
  int num_vertices = 0;
  int k = 1;
  std::vector<OrientedSimplex> simplices;
};

struct PseudomanifoldReport {
  bool is_cycle = false;
  // Geometry bound: max over simplices of the number of *other* simplices
  // sharing at least one vertex.
  int L = 0;
};

// Checks the cycle condition (all face incidences cancel; faces are keyed by
// sorted vertex tuple with a sign from the sorting permutation parity) and
// computes the locality bound L. Throws std::invalid_argument on malformed
// input (vertex ids out of range, repeated vertices inside a simplex).
PseudomanifoldReport validate_pseudomanifold(const Pseudomanifold& m);

// Cycle graph C_N: N vertices, edges (i, i+1 mod N), all coefficients +1.
Pseudomanifold make_cycle_graph(int N);

// Geometric cell: k+1 vertex positions in R^n plus a coefficient.
struct Cell {
  std::vector<Vec> verts;
  int coef = +1;
};

// Embedded simplicial k-cycle in [0,1]^n. `provenance` carries the abstract
// complex the cells came from when known (used for dependency colorings).
struct PolyCycle {
  int n = 1;
  int k = 1;
  std::vector<Cell> cells;
  std::optional<Pseudomanifold> provenance;
};

// Euclidean k-volume of a simplex given by k+1 vertex positions
// (Gram determinant / k!).
double simplex_volume(const std::vector<Vec>& verts);

// Total unsigned mass: sum over cells of |coef| * k-volume.
double mass(const PolyCycle& z);

// True when the abstract boundary of the cells vanishes, identifying vertices
// by exact coordinate equality. With `relative_to_cube_boundary`, faces whose
// vertices all lie on a common facet of [0,1]^n are discounted.
bool boundary_is_zero(const PolyCycle& z, bool relative_to_cube_boundary = false);

}  // namespace cyclefill
