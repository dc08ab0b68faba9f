#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "cyclefill/chains.hpp"

namespace cyclefill {

// Raised when an exact solve cannot be completed or fails its own
// optimality certificate.
class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// How a filling of a 0-cycle moves its points: matched +/- pairs plus, in the
// cube, points discharged to the nearest boundary face. Indices refer to the
// input cycle's point list.
struct TransportPlan {
  struct Pairing {
    int pos_index;
    int neg_index;
    double cost;
  };
  struct BoundaryAssignment {
    int point_index;
    double distance;
  };
  std::vector<Pairing> pairings;
  std::vector<BoundaryAssignment> boundary_assignments;
  double total_cost = 0.0;
};

struct SolveOptions {
  // Drop pair arcs with cost > boundary(i) + boundary(j); such a pair can
  // always be replaced by two boundary discharges at no extra cost, so the
  // optimum is unchanged. Cube only.
  bool prune = true;
  // Verify the complementary-slackness residuals of the final potentials and
  // throw solver_error when any residual is below -tolerance.
  bool certify = true;
  double tolerance = 1e-9;
};

double euclidean(const Vec& a, const Vec& b);
// Distance from p to the boundary of [0,1]^d.
double boundary_distance(const Vec& p);
// Great-circle distance between unit vectors: arccos of the clamped inner product.
double geodesic(const Vec& a, const Vec& b);

// Mass of the c = 0 filling on the interval: integral of |G| where
// G(x) = sum_i sign_i * 1{pos_i <= x}. Ambient must be cube(1).
double mass_F0(const ZeroCycle& z);

// Exact filling volume on [0,1] relative to the endpoints: minimum over
// integer shifts c of the integral of |G + c|.
double fv_interval(const ZeroCycle& z);

// Exact filling volume of a cube 0-cycle relative to the cube boundary:
// min-cost transport where each +/- point is either matched or discharged to
// the boundary. Successive shortest paths with potentials; the returned value
// carries a complementary-slackness certificate when options.certify is set.
std::pair<double, TransportPlan> fv_cube(const ZeroCycle& z, const SolveOptions& options = {});

// Exact filling volume of a balanced sphere 0-cycle: minimum-cost perfect
// geodesic matching between + and - points.
std::pair<double, TransportPlan> fv_sphere(const ZeroCycle& z, const SolveOptions& options = {});

// Exhaustive reference for tiny inputs (at most ~10 points per sign class):
// enumerates every partial matching plus boundary discharge (cube) or every
// perfect matching (sphere).
double fv_bruteforce(const ZeroCycle& z);

// Dispatch: interval closed form for cube d=1, cube transport otherwise,
// geodesic matching on the sphere.
double fv_auto(const ZeroCycle& z);

}  // namespace cyclefill
