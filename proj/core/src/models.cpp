#include "cyclefill/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cyclefill {

namespace {

Eigen::MatrixXd gaussian_matrix(RngStream& rng, int rows, int cols) {
  Eigen::MatrixXd a(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) a(r, c) = rng.normal();
  return a;
}

// Orthonormal basis of the orthogonal complement of Q's column span.
Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& q) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
  Eigen::MatrixXd full = qr.householderQ();
  return full.rightCols(q.rows() - q.cols());
}

}  // namespace

void validate(const AffineKPlane& plane) {
  const auto& q = plane.basis;
  if (q.cols() < 1 || q.cols() >= q.rows())
    throw std::invalid_argument("plane needs 1 <= k < n");
  if (plane.offset.size() != q.rows())
    throw std::invalid_argument("offset dimension must match the ambient");
  if (!q.allFinite() || !plane.offset.allFinite())
    throw std::invalid_argument("plane has non-finite entries");
  Eigen::MatrixXd gram = q.transpose() * q;
  gram.diagonal().array() -= 1.0;
  if (gram.cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("basis columns are not orthonormal");
  if ((q.transpose() * plane.offset).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("offset has a component along the basis");
}

void validate(const OrientedSubspace& subspace) {
  const auto& b = subspace.basis;
  if (b.cols() < 1 || b.cols() > b.rows())
    throw std::invalid_argument("subspace needs 1 <= k+1 <= n+1");
  if (!b.allFinite()) throw std::invalid_argument("subspace has non-finite entries");
  Eigen::MatrixXd gram = b.transpose() * b;
  gram.diagonal().array() -= 1.0;
  if (gram.cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("basis columns are not orthonormal");
}

Eigen::MatrixXd sample_orthonormal(RngStream& rng, int rows, int cols) {
  if (cols < 1 || cols > rows) throw std::invalid_argument("need 1 <= cols <= rows");
  Eigen::MatrixXd a = gaussian_matrix(rng, rows, cols);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  for (int t = 0; t < cols; ++t)
    if (qr.matrixQR()(t, t) < 0) q.col(t) = -q.col(t);
  return q;
}

PolyCycle embed_with_positions(const Pseudomanifold& M, const std::vector<Vec>& positions) {
  if (int(positions.size()) != M.num_vertices)
    throw std::invalid_argument("need exactly one position per vertex");
  size_t n = positions.empty() ? 0 : positions[0].size();
  for (const auto& p : positions)
    if (p.size() != n) throw std::invalid_argument("positions must share one dimension");
  if (M.k >= int(n)) throw std::invalid_argument("need k < n");
  PolyCycle z;
  z.n = int(n);
  z.k = M.k;
  z.cells.reserve(M.simplices.size());
  for (const auto& s : M.simplices) {
    Cell c;
    c.coef = s.coef;
    c.verts.reserve(s.vertices.size());
    for (int v : s.vertices) c.verts.push_back(positions[v]);
    z.cells.push_back(std::move(c));
  }
  z.provenance = M;
  return z;
}

PolyCycle embed_pseudomanifold(const Pseudomanifold& M, int n, RngStream& rng) {
  if (!validate_pseudomanifold(M).is_cycle)
    throw std::invalid_argument("embedding requires a cycle pseudomanifold");
  if (M.k >= n) throw std::invalid_argument("need k < n");
  std::vector<Vec> positions(M.num_vertices);
  for (int v = 0; v < M.num_vertices; ++v) positions[v] = rng.point(n);
  return embed_with_positions(M, positions);
}

PolyCycle sample_random_jump(int N, int n, RngStream& rng) {
  if (N < 3) throw std::invalid_argument("need N >= 3");
  if (n < 2) throw std::invalid_argument("need n >= 2");
  return embed_pseudomanifold(make_cycle_graph(N), n, rng);
}

bool plane_intersects_cube(const Eigen::MatrixXd& basis, const Eigen::VectorXd& offset) {
  const double coef_eps = 1e-12;
  const double tol = 1e-9;
  const int n = int(basis.rows());
  const int k = int(basis.cols());
  // 0 <= offset + basis*s <= 1 as rows a.s <= b
  std::vector<std::pair<Eigen::RowVectorXd, double>> rows;
  rows.reserve(2 * n);
  for (int j = 0; j < n; ++j) {
    rows.push_back({basis.row(j), 1.0 - offset[j]});
    rows.push_back({-basis.row(j), offset[j]});
  }
  // eliminate parameters back to front
  for (int nv = k; nv >= 2; --nv) {
    std::vector<std::pair<Eigen::RowVectorXd, double>> keep;
    std::vector<std::pair<Eigen::RowVectorXd, double>> upper, lower;
    for (auto& [a, b] : rows) {
      double av = a[nv - 1];
      Eigen::RowVectorXd head = a.head(nv - 1);
      if (std::abs(av) <= coef_eps)
        keep.push_back({head, b});
      else if (av > 0)
        upper.push_back({head / av, b / av});
      else
        lower.push_back({head / av, b / av});
    }
    for (const auto& [au, bu] : upper)
      for (const auto& [al, bl] : lower) keep.push_back({au - al, bu - bl});
    rows = std::move(keep);
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : rows) {
    double av = a[0];
    if (std::abs(av) <= coef_eps) {
      if (b < -tol) return false;
    } else if (av > 0) {
      hi = std::min(hi, b / av);
    } else {
      lo = std::max(lo, b / av);
    }
  }
  return lo <= hi + tol;
}

Eigen::VectorXd sample_plane_offset(const Eigen::MatrixXd& basis, RngStream& rng) {
  const int n = int(basis.rows());
  const int k = int(basis.cols());
  if (k < 1 || k >= n) throw std::invalid_argument("need 1 <= k < n");
  Eigen::MatrixXd w = complement_basis(basis);
  const int m = n - k;
  // bounding box of the cube's shadow in complement coordinates
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(m), hi = Eigen::VectorXd::Zero(m);
  for (int t = 0; t < m; ++t)
    for (int j = 0; j < n; ++j) {
      lo[t] += std::min(0.0, w(j, t));
      hi[t] += std::max(0.0, w(j, t));
    }
  const int max_attempts = 1000000;
  Eigen::VectorXd y(m);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (int t = 0; t < m; ++t) y[t] = rng.uniform(lo[t], hi[t]);
    Eigen::VectorXd c = w * y;
    if (plane_intersects_cube(basis, c)) return c;
  }
  throw sampling_error("plane offset rejection: 0 of 1000000 proposals accepted");
}

std::vector<AffineKPlane> sample_cube_planes(int N, int n, int k, RngStream& rng) {
  if (k < 1 || k >= n) throw std::invalid_argument("need 1 <= k < n");
  if (N < 0) throw std::invalid_argument("need N >= 0");
  std::vector<AffineKPlane> planes;
  planes.reserve(N);
  for (int i = 0; i < N; ++i) {
    AffineKPlane p;
    p.basis = sample_orthonormal(rng, n, k);
    p.offset = sample_plane_offset(p.basis, rng);
    planes.push_back(std::move(p));
  }
  return planes;
}

std::vector<OrientedSubspace> sample_great_spheres(int N, int n, int k, RngStream& rng) {
  if (k < 0 || k >= n) throw std::invalid_argument("need 0 <= k < n");
  if (N < 0) throw std::invalid_argument("need N >= 0");
  std::vector<OrientedSubspace> out;
  out.reserve(N);
  for (int i = 0; i < N; ++i)
    out.push_back({sample_orthonormal(rng, n + 1, k + 1)});
  return out;
}

}  // namespace cyclefill
