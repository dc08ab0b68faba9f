#include "cyclefill/chains.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace cyclefill {

bool operator==(const Ambient& a, const Ambient& b) {
  return a.kind == b.kind && a.d == b.d;
}

int total_sign(const ZeroCycle& z) {
  int s = 0;
  for (const auto& p : z.points) s += p.sign;
  return s;
}

void validate(const ZeroCycle& z) {
  if (z.ambient.d < 1) throw std::invalid_argument("zero cycle: ambient dimension < 1");
  const std::size_t want = static_cast<std::size_t>(z.ambient.coords());
  for (const auto& p : z.points) {
    if (p.sign != 1 && p.sign != -1)
      throw std::invalid_argument("zero cycle: sign must be +1 or -1");
    if (p.position.size() != want)
      throw std::invalid_argument("zero cycle: wrong coordinate count");
    if (z.ambient.kind == AmbientKind::Cube) {
      for (double c : p.position)
        if (!(c >= 0.0 && c <= 1.0))
          throw std::invalid_argument("zero cycle: cube coordinate outside [0,1]");
    } else {
      double n2 = 0;
      for (double c : p.position) n2 += c * c;
      if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
        throw std::invalid_argument("zero cycle: sphere point is not unit length");
    }
  }
  if (z.ambient.kind == AmbientKind::Sphere && total_sign(z) != 0)
    throw std::invalid_argument("zero cycle: sphere cycle must have zero total sign");
  if (!z.source.empty() && z.source.size() != z.points.size())
    throw std::invalid_argument("zero cycle: source list length mismatch");
}

namespace {

// Parity of the permutation sorting `v`, via insertion inversion count.
int sort_parity(std::vector<int>& v) {
  int inversions = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (v[j] > v[i]) ++inversions;
  std::sort(v.begin(), v.end());
  return inversions % 2 == 0 ? +1 : -1;
}

}  // namespace

PseudomanifoldReport validate_pseudomanifold(const Pseudomanifold& m) {
  if (m.k < 0) throw std::invalid_argument("pseudomanifold: negative dimension");
  const std::size_t arity = static_cast<std::size_t>(m.k) + 1;
  for (const auto& s : m.simplices) {
    if (s.vertices.size() != arity)
      throw std::invalid_argument("pseudomanifold: simplex arity mismatch");
    if (s.coef == 0) throw std::invalid_argument("pseudomanifold: zero coefficient");
    std::vector<int> sorted = s.vertices;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] < 0 || sorted[i] >= m.num_vertices)
        throw std::invalid_argument("pseudomanifold: vertex id out of range");
      if (i > 0 && sorted[i] == sorted[i - 1])
        throw std::invalid_argument("pseudomanifold: repeated vertex in simplex");
    }
  }

  PseudomanifoldReport rep;

  // Cycle condition: signed face incidences, keyed by sorted vertex tuple.
  std::map<std::vector<int>, long long> face_sum;
  for (const auto& s : m.simplices) {
    for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
      std::vector<int> face;
      face.reserve(s.vertices.size() - 1);
      for (std::size_t i = 0; i < s.vertices.size(); ++i)
        if (i != drop) face.push_back(s.vertices[i]);
      int sgn = drop % 2 == 0 ? +1 : -1;
      sgn *= sort_parity(face);
      face_sum[face] += static_cast<long long>(s.coef) * sgn;
    }
  }
  rep.is_cycle = true;
  for (const auto& [face, sum] : face_sum)
    if (sum != 0) rep.is_cycle = false;

  // L: max number of other simplices sharing at least one vertex.
  std::vector<std::vector<int>> at_vertex(static_cast<std::size_t>(m.num_vertices));
  for (std::size_t i = 0; i < m.simplices.size(); ++i)
    for (int v : m.simplices[i].vertices) at_vertex[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));
  int L = 0;
  std::vector<int> touching;
  for (std::size_t i = 0; i < m.simplices.size(); ++i) {
    touching.clear();
    for (int v : m.simplices[i].vertices)
      touching.insert(touching.end(), at_vertex[static_cast<std::size_t>(v)].begin(),
                      at_vertex[static_cast<std::size_t>(v)].end());
    std::sort(touching.begin(), touching.end());
    touching.erase(std::unique(touching.begin(), touching.end()), touching.end());
    int cnt = static_cast<int>(touching.size());
    for (int t : touching)
      if (t == static_cast<int>(i)) --cnt;
    L = std::max(L, cnt);
  }
  rep.L = L;
  return rep;
}

Pseudomanifold make_cycle_graph(int N) {
  if (N < 3) throw std::invalid_argument("cycle graph needs at least 3 vertices");
  Pseudomanifold m;
  m.num_vertices = N;
  m.k = 1;
  m.simplices.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) m.simplices.push_back({{i, (i + 1) % N}, +1});
  return m;
}

double simplex_volume(const std::vector<Vec>& verts) {
  if (verts.empty()) throw std::invalid_argument("simplex_volume: no vertices");
  const std::size_t k = verts.size() - 1;
  if (k == 0) return 1.0;
  const std::size_t n = verts[0].size();
  Eigen::MatrixXd e(n, k);
  for (std::size_t j = 1; j <= k; ++j) {
    if (verts[j].size() != n) throw std::invalid_argument("simplex_volume: mixed dimensions");
    for (std::size_t i = 0; i < n; ++i) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) = verts[j][i] - verts[0][i];
  }
  Eigen::MatrixXd gram = e.transpose() * e;
  double det = gram.determinant();
  if (det < 0) det = 0;  // numerical noise on degenerate simplices
  double factorial = 1.0;
  for (std::size_t i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
  return std::sqrt(det) / factorial;
}

double mass(const PolyCycle& z) {
  double total = 0;
  for (const auto& cell : z.cells)
    total += std::abs(static_cast<double>(cell.coef)) * simplex_volume(cell.verts);
  return total;
}

namespace {

std::string position_key(const Vec& v) {
  std::string key(v.size() * sizeof(double), '\0');
  std::memcpy(key.data(), v.data(), key.size());
  return key;
}

}  // namespace

bool boundary_is_zero(const PolyCycle& z, bool relative_to_cube_boundary) {
  // Identify vertices by exact coordinate equality, then run the abstract
  // boundary cancellation over the induced ids.
  std::unordered_map<std::string, int> ids;
  std::vector<const Vec*> positions;
  auto id_of = [&](const Vec& v) {
    auto [it, inserted] = ids.try_emplace(position_key(v), static_cast<int>(positions.size()));
    if (inserted) positions.push_back(&v);
    return it->second;
  };

  std::map<std::vector<int>, long long> face_sum;
  for (const auto& cell : z.cells) {
    std::vector<int> verts;
    verts.reserve(cell.verts.size());
    for (const auto& v : cell.verts) verts.push_back(id_of(v));
    for (std::size_t drop = 0; drop < verts.size(); ++drop) {
      std::vector<int> face;
      for (std::size_t i = 0; i < verts.size(); ++i)
        if (i != drop) face.push_back(verts[i]);
      int sgn = drop % 2 == 0 ? +1 : -1;
      sgn *= sort_parity(face);
      face_sum[face] += static_cast<long long>(cell.coef) * sgn;
    }
  }

  auto on_common_facet = [&](const std::vector<int>& face) {
    if (face.empty()) return false;
    const std::size_t n = positions[static_cast<std::size_t>(face[0])]->size();
    for (std::size_t coord = 0; coord < n; ++coord) {
      for (double b : {0.0, 1.0}) {
        bool all = true;
        for (int id : face)
          all &= (*positions[static_cast<std::size_t>(id)])[coord] == b;
        if (all) return true;
      }
    }
    return false;
  };

  for (const auto& [face, sum] : face_sum) {
    if (sum == 0) continue;
    if (relative_to_cube_boundary && on_common_facet(face)) continue;
    return false;
  }
  return true;
}

}  // namespace cyclefill
