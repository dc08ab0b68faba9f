#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "cyclefill/chains.hpp"
#include "cyclefill/rng.hpp"

namespace cyclefill {

// Raised when rejection sampling exhausts its attempt budget.
class sampling_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Oriented affine k-plane meeting [0,1]^n: orthonormal basis columns plus an
// offset lying in the orthogonal complement of the column span.
struct AffineKPlane {
  Eigen::MatrixXd basis;
  Eigen::VectorXd offset;
  int n() const { return int(basis.rows()); }
  int k() const { return int(basis.cols()); }
};

// Oriented (k+1)-dimensional linear subspace of R^{n+1}; its unit sphere is a
// great k-sphere. Orientation is the column order of the basis.
struct OrientedSubspace {
  Eigen::MatrixXd basis;
  int n() const { return int(basis.rows()) - 1; }
  int k() const { return int(basis.cols()) - 1; }
};

void validate(const AffineKPlane& plane);
void validate(const OrientedSubspace& subspace);

// Orthonormalize a standard Gaussian rows x cols matrix by QR with the
// positive-diagonal convention, giving a uniform oriented frame.
Eigen::MatrixXd sample_orthonormal(RngStream& rng, int rows, int cols);

// Linear extension of a vertex embedding: cells inherit the pseudomanifold's
// coefficients and vertex order.
PolyCycle embed_with_positions(const Pseudomanifold& M, const std::vector<Vec>& positions);

// Embed a cycle pseudomanifold by i.i.d. uniform vertices in [0,1]^n.
PolyCycle embed_pseudomanifold(const Pseudomanifold& M, int n, RngStream& rng);

// Closed random polygon: the cycle graph on N vertices embedded uniformly.
PolyCycle sample_random_jump(int N, int n, RngStream& rng);

// Does {offset + basis * s} meet [0,1]^n? Decided by Fourier-Motzkin
// elimination of the k parameters.
bool plane_intersects_cube(const Eigen::MatrixXd& basis, const Eigen::VectorXd& offset);

// Offset uniform on the shadow of [0,1]^n in the orthogonal complement of the
// basis columns, by rejection from the shadow's bounding box.
Eigen::VectorXd sample_plane_offset(const Eigen::MatrixXd& basis, RngStream& rng);

// N independent oriented k-planes, each meeting the cube: Haar direction,
// Lebesgue-uniform offset over the shadow polytope.
std::vector<AffineKPlane> sample_cube_planes(int N, int n, int k, RngStream& rng);

// N independent uniform oriented (k+1)-subspaces of R^{n+1}.
std::vector<OrientedSubspace> sample_great_spheres(int N, int n, int k, RngStream& rng);

}  // namespace cyclefill
