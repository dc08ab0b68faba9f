#include "cyclefill/slicing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace cyclefill {

namespace {

void check_axes(const SliceSpec& spec, int n, int k) {
  if (spec.fixed_subspace)
    throw std::invalid_argument("coordinate slicing takes axes, not a subspace");
  if (int(spec.fixed_axes.size()) != k)
    throw std::invalid_argument("need exactly k fixed axes");
  if (spec.values.size() != spec.fixed_axes.size())
    throw std::invalid_argument("need one value per fixed axis");
  std::vector<char> seen(n, 0);
  for (int a : spec.fixed_axes) {
    if (a < 0 || a >= n) throw std::invalid_argument("fixed axis out of range");
    if (seen[a]) throw std::invalid_argument("fixed axes must be distinct");
    seen[a] = 1;
  }
  for (double v : spec.values)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("slice values must lie in [0,1]");
}

// Orthonormal complement of a unit vector together with the sign of
// det[a | complement]; the complement is empty in dimension one.
std::pair<Eigen::MatrixXd, double> completion_with_parity(const Eigen::VectorXd& a) {
  int d = int(a.size());
  if (d == 1) return {Eigen::MatrixXd(1, 0), a(0) > 0 ? 1.0 : -1.0};
  Eigen::MatrixXd col = a;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(col);
  Eigen::MatrixXd comp = Eigen::MatrixXd(qr.householderQ()).rightCols(d - 1);
  Eigen::MatrixXd square(d, d);
  square.col(0) = a;
  square.rightCols(d - 1) = comp;
  return {comp, square.determinant() > 0 ? 1.0 : -1.0};
}

}  // namespace

SliceAtom slice_segment(const Vec& a, const Vec& b, int axis, double c) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("segment endpoints must share a dimension of at least 2");
  if (axis < 0 || axis >= int(a.size())) throw std::invalid_argument("axis out of range");
  double fa = a[axis] - c;
  double fb = b[axis] - c;
  if (fa == 0.0 || fb == 0.0)
    throw degenerate_slice_error("slice value hits a segment endpoint");
  SliceAtom atom;
  if ((fa < 0) == (fb < 0)) return atom;
  double t = fa / (fa - fb);
  SignedPoint p;
  p.sign = fb > fa ? +1 : -1;
  p.position.reserve(a.size() - 1);
  for (size_t j = 0; j < a.size(); ++j) {
    if (int(j) == axis) continue;
    p.position.push_back(std::clamp(a[j] + t * (b[j] - a[j]), 0.0, 1.0));
  }
  atom.point = std::move(p);
  return atom;
}

SliceAtom slice_simplex(const Cell& cell, const Vec& x) {
  const int k = int(x.size());
  if (k < 1) throw std::invalid_argument("need at least one fixed coordinate");
  if (int(cell.verts.size()) != k + 1)
    throw std::invalid_argument("cell arity must match the slice codimension");
  const int n = int(cell.verts[0].size());
  if (k >= n) throw std::invalid_argument("need k < n");
  if (cell.coef != 1 && cell.coef != -1)
    throw std::invalid_argument("slicing needs unit cell coefficients");

  Eigen::MatrixXd edges(k, k);
  for (int col = 1; col <= k; ++col)
    for (int row = 0; row < k; ++row)
      edges(row, col - 1) = cell.verts[col][row] - cell.verts[0][row];
  double det = edges.determinant();
  if (std::abs(det) < 1e-12) {
    // flat projection: trouble only if x sits on the squashed image
    Eigen::VectorXd rhs(k);
    for (int row = 0; row < k; ++row) rhs[row] = x[row] - cell.verts[0][row];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(edges, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    double resid = (edges * svd.solve(rhs) - rhs).norm();
    // keep this far below the retry perturbation window so redraws can escape
    if (resid <= 1e-12) throw degenerate_slice_error("slice plane meets a flat cell");
    return {};
  }

  Eigen::MatrixXd A(k + 1, k + 1);
  Eigen::VectorXd b(k + 1);
  for (int col = 0; col <= k; ++col) {
    for (int row = 0; row < k; ++row) A(row, col) = cell.verts[col][row];
    A(k, col) = 1.0;
  }
  for (int row = 0; row < k; ++row) b[row] = x[row];
  b[k] = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd lambda = lu.solve(b);
  lambda += lu.solve(b - A * lambda);

  const double tol = 1e-12;
  for (int i = 0; i <= k; ++i)
    if (lambda[i] < -tol) return {};
  for (int i = 0; i <= k; ++i)
    if (lambda[i] <= tol) throw degenerate_slice_error("slice grazes a cell facet");

  SignedPoint p;
  p.sign = cell.coef * (det > 0 ? 1 : -1);
  p.position.reserve(n - k);
  for (int row = k; row < n; ++row) {
    double coord = 0;
    for (int col = 0; col <= k; ++col) coord += lambda[col] * cell.verts[col][row];
    p.position.push_back(std::clamp(coord, 0.0, 1.0));
  }
  SliceAtom atom;
  atom.point = std::move(p);
  return atom;
}

std::pair<ZeroCycle, std::vector<SliceAtom>> slice_polycycle(const PolyCycle& Z,
                                                             const SliceSpec& spec) {
  const int n = Z.n;
  const int k = Z.k;
  if (k < 1 || k >= n) throw std::invalid_argument("need 1 <= k < n");
  check_axes(spec, n, k);

  // fixed axes first (in spec order), remaining axes ascending
  std::vector<int> order(spec.fixed_axes);
  std::vector<char> is_fixed(n, 0);
  for (int a : spec.fixed_axes) is_fixed[a] = 1;
  for (int j = 0; j < n; ++j)
    if (!is_fixed[j]) order.push_back(j);

  ZeroCycle out;
  out.ambient = Ambient::cube(n - k);
  std::vector<SliceAtom> atoms;
  atoms.reserve(Z.cells.size());
  Cell perm;
  for (int i = 0; i < int(Z.cells.size()); ++i) {
    const Cell& cell = Z.cells[i];
    perm.coef = cell.coef;
    perm.verts.assign(cell.verts.size(), Vec(n));
    for (size_t v = 0; v < cell.verts.size(); ++v)
      for (int j = 0; j < n; ++j) perm.verts[v][j] = cell.verts[v][order[j]];
    SliceAtom atom = slice_simplex(perm, spec.values);
    atom.source_index = i;
    if (atom.point) {
      out.points.push_back(*atom.point);
      out.source.push_back(i);
    }
    atoms.push_back(std::move(atom));
  }
  return {out, atoms};
}

std::pair<ZeroCycle, std::vector<SliceAtom>> slice_polycycle_generic(const PolyCycle& Z,
                                                                     const SliceSpec& spec,
                                                                     RngStream& rng) {
  SliceSpec cur = spec;
  for (int attempt = 0; attempt < 100; ++attempt) {
    try {
      return slice_polycycle(Z, cur);
    } catch (const degenerate_slice_error&) {
      cur.values = spec.values;
      for (double& v : cur.values) v = std::clamp(v + rng.uniform(-1e-9, 1e-9), 0.0, 1.0);
    }
  }
  throw degenerate_slice_error("slice stayed degenerate after 100 perturbed retries");
}

SliceAtom slice_plane(const AffineKPlane& P, const SliceSpec& spec) {
  validate(P);
  const int n = P.n();
  const int k = P.k();
  check_axes(spec, n, k);

  Eigen::MatrixXd A(k, k);
  Eigen::VectorXd rhs(k);
  for (int t = 0; t < k; ++t) {
    A.row(t) = P.basis.row(spec.fixed_axes[t]);
    rhs[t] = spec.values[t] - P.offset[spec.fixed_axes[t]];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(k - 1);
  if (!(smin > 0) || smax / smin > 1e12)
    throw degenerate_slice_error("plane is nearly parallel to the slice");
  Eigen::VectorXd s = svd.solve(rhs);
  Eigen::VectorXd point = P.offset + P.basis * s;

  SliceAtom atom;
  for (int j = 0; j < n; ++j)
    if (point[j] < -1e-12 || point[j] > 1 + 1e-12) return atom;

  std::vector<char> is_fixed(n, 0);
  for (int a : spec.fixed_axes) is_fixed[a] = 1;
  Eigen::MatrixXd D(n, n);
  D.leftCols(k) = P.basis;
  int col = k;
  for (int j = 0; j < n; ++j)
    if (!is_fixed[j]) {
      D.col(col).setZero();
      D(j, col) = 1.0;
      ++col;
    }
  double det = D.determinant();
  if (std::abs(det) < 1e-12)
    throw degenerate_slice_error("orientation determinant vanished");

  SignedPoint p;
  p.sign = det > 0 ? +1 : -1;
  p.position.reserve(n - k);
  for (int j = 0; j < n; ++j)
    if (!is_fixed[j]) p.position.push_back(std::clamp(point[j], 0.0, 1.0));
  atom.point = std::move(p);
  return atom;
}

std::pair<SignedPoint, SignedPoint> slice_great_sphere(const OrientedSubspace& U,
                                                       const OrientedSubspace& V) {
  validate(U);
  validate(V);
  const int rows = int(U.basis.rows());
  if (int(V.basis.rows()) != rows)
    throw std::invalid_argument("subspaces live in different ambients");
  const int du = int(U.basis.cols());
  const int dv = int(V.basis.cols());
  if (du + dv != rows + 1)
    throw std::invalid_argument("dimensions must force a line intersection");

  Eigen::MatrixXd C(rows, du + dv);
  C.leftCols(du) = U.basis;
  C.rightCols(dv) = -V.basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // rows+1 columns: exactly one vanishing singular value in the generic case
  if (sv(rows - 1) < 1e-9)
    throw degenerate_slice_error("subspaces meet in more than a line");
  Eigen::VectorXd null_vec = svd.matrixV().col(du + dv - 1);
  Eigen::VectorXd a = null_vec.head(du);
  Eigen::VectorXd b = null_vec.tail(dv);
  if (a.norm() < 1e-9 || b.norm() < 1e-9)
    throw degenerate_slice_error("intersection line collapsed");
  a /= a.norm();
  b /= b.norm();
  Eigen::VectorXd u = U.basis * a;
  u /= u.norm();

  auto [comp_u, par_u] = completion_with_parity(a);
  auto [comp_v, par_v] = completion_with_parity(b);
  Eigen::MatrixXd D(rows, rows);
  D.col(0) = u;
  if (du > 1) D.middleCols(1, du - 1) = U.basis * comp_u;
  if (dv > 1) D.rightCols(dv - 1) = V.basis * comp_v;
  double det = D.determinant() * par_u * par_v;
  if (std::abs(det) < 1e-12)
    throw degenerate_slice_error("orientation determinant vanished");

  Vec plus_pos(rows), minus_pos(rows);
  for (int j = 0; j < rows; ++j) {
    double c = det > 0 ? u[j] : -u[j];
    plus_pos[j] = c;
    minus_pos[j] = -c;
  }
  return {SignedPoint{plus_pos, +1}, SignedPoint{minus_pos, -1}};
}

std::vector<std::vector<int>> dependency_graph(const Pseudomanifold& M) {
  validate_pseudomanifold(M);
  std::vector<std::vector<int>> incident(M.num_vertices);
  for (int i = 0; i < int(M.simplices.size()); ++i)
    for (int v : M.simplices[i].vertices) incident[v].push_back(i);
  std::vector<std::vector<int>> adj(M.simplices.size());
  for (const auto& list : incident)
    for (size_t x = 0; x < list.size(); ++x)
      for (size_t y = x + 1; y < list.size(); ++y) {
        adj[list[x]].push_back(list[y]);
        adj[list[y]].push_back(list[x]);
      }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

std::vector<std::vector<int>> greedy_coloring(const std::vector<std::vector<int>>& adjacency) {
  const int n = int(adjacency.size());
  for (const auto& nb : adjacency)
    for (int w : nb)
      if (w < 0 || w >= n) throw std::invalid_argument("neighbor index out of range");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return adjacency[x].size() > adjacency[y].size();
  });
  std::vector<int> color(n, -1);
  int used = 0;
  for (int v : order) {
    std::vector<char> taken(used + 1, 0);
    for (int w : adjacency[v])
      if (color[w] >= 0) taken[color[w]] = 1;
    int c = 0;
    while (taken[c]) ++c;
    color[v] = c;
    used = std::max(used, c + 1);
  }
  std::vector<std::vector<int>> classes(used);
  for (int v = 0; v < n; ++v) classes[color[v]].push_back(v);
  std::stable_sort(classes.begin(), classes.end(),
                   [](const auto& x, const auto& y) { return x.size() > y.size(); });
  return classes;
}

}  // namespace cyclefill
