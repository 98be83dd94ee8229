#include "driftlap/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#include "driftlap/rng.hpp"

namespace driftlap {

namespace {

int sign_with_band(double v, double tol) {
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

}  // namespace

NodalDecomposition nodal_domains(const TriangleMesh& mesh,
                                 const Eigen::VectorXd& values,
                                 double zero_tol) {
  const int n = mesh.vertex_count();
  if (values.size() != n)
    throw std::invalid_argument("field length does not match mesh");
  if (zero_tol < 0.0) throw std::invalid_argument("zero_tol must be >= 0");

  const double fmax = values.cwiseAbs().maxCoeff();
  if (fmax == 0.0) throw std::invalid_argument("zero function has no domains");
  const double tol = zero_tol * fmax;

  NodalDecomposition out;
  out.vertex_labels.assign(n, -1);
  std::vector<int> sign(n, 0);
  for (int i = 0; i < n; ++i) {
    sign[i] = sign_with_band(values[i], tol);
    if (sign[i] == 0) ++out.banded_vertices;
  }
  if (out.banded_vertices == n)
    throw std::invalid_argument("zero function has no domains");

  std::deque<int> queue;
  for (int start = 0; start < n; ++start) {
    if (sign[start] == 0 || out.vertex_labels[start] >= 0) continue;
    const int id = out.total_count++;
    out.domain_signs.push_back(sign[start]);
    if (sign[start] > 0)
      ++out.positive_count;
    else
      ++out.negative_count;
    out.vertex_labels[start] = id;
    queue.push_back(start);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : mesh.neighbors[v]) {
        if (sign[w] != sign[start] || out.vertex_labels[w] >= 0) continue;
        out.vertex_labels[w] = id;
        queue.push_back(w);
      }
    }
  }
  return out;
}

std::vector<CourantRow> courant_check(const TriangleMesh& mesh,
                                      const Eigen::MatrixXd& eigenvectors,
                                      const std::vector<double>& eigenvalues,
                                      double zero_tol) {
  if (eigenvectors.cols() != static_cast<Eigen::Index>(eigenvalues.size()))
    throw std::invalid_argument("eigenvector/eigenvalue count mismatch");
  std::vector<CourantRow> rows;
  rows.reserve(eigenvalues.size());
  for (Eigen::Index k = 0; k < eigenvectors.cols(); ++k) {
    CourantRow row;
    row.index = static_cast<int>(k);
    row.eigenvalue = eigenvalues[static_cast<std::size_t>(k)];
    row.domain_count =
        nodal_domains(mesh, eigenvectors.col(k), zero_tol).total_count;
    row.bound = static_cast<int>(k) + 1;
    row.pass = row.domain_count <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

TwoPieceReport two_piece_check(const TriangleMesh& mesh, int n_planes,
                               std::uint64_t seed, double band_scale) {
  if (n_planes < 1) throw std::invalid_argument("n_planes must be >= 1");
  TwoPieceReport report;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < n_planes; ++t) {
    const PlaneThroughOrigin plane{random_unit_vector(rng)};
    const PlanePartition part = plane_sign_partition(mesh, plane, band_scale);
    ++report.planes_tested;
    if (part.degenerate) {
      ++report.degenerate_skipped;
      continue;
    }
    report.piece_counts.push_back(
        {part.positive_components, part.negative_components});
    if (part.positive_components != 1 || part.negative_components != 1)
      ++report.failures;
  }
  return report;
}

std::vector<int> combination_domain_counts(const TriangleMesh& mesh,
                                           const Eigen::MatrixXd& basis,
                                           int n_combos, std::uint64_t seed,
                                           double zero_tol) {
  if (basis.cols() < 1) throw std::invalid_argument("empty combination basis");
  if (basis.rows() != mesh.vertex_count())
    throw std::invalid_argument("basis rows do not match mesh");
  if (n_combos < 1) throw std::invalid_argument("n_combos must be >= 1");

  std::mt19937_64 rng(seed);
  std::vector<int> counts;
  counts.reserve(static_cast<std::size_t>(n_combos));
  for (int t = 0; t < n_combos; ++t) {
    Eigen::VectorXd coeff(basis.cols());
    double norm2 = 0.0;
    do {
      for (Eigen::Index j = 0; j < coeff.size(); ++j)
        coeff[j] = standard_normal(rng);
      norm2 = coeff.squaredNorm();
    } while (norm2 < 1e-24);
    coeff /= std::sqrt(norm2);
    const Eigen::VectorXd f = basis * coeff;
    counts.push_back(nodal_domains(mesh, f, zero_tol).total_count);
  }
  return counts;
}

namespace {

// A node of the traced zero set: either a mesh vertex whose value is exactly
// zero after snapping (key a == b == vertex id) or a transversal crossing on
// the undirected edge (a, b) with a < b.
using CurveKey = std::pair<int, int>;

struct CurveGraph {
  std::map<CurveKey, int> node_of_key;
  std::vector<Eigen::Vector3d> positions;
  std::vector<std::pair<int, int>> segments;
  std::set<std::pair<int, int>> segment_keys;

  int node(const CurveKey& key, const Eigen::Vector3d& pos) {
    auto [it, inserted] = node_of_key.try_emplace(
        key, static_cast<int>(positions.size()));
    if (inserted) positions.push_back(pos);
    return it->second;
  }

  void add_segment(int u, int v) {
    if (u == v) return;
    const auto key = std::minmax(u, v);
    if (!segment_keys.insert(key).second) return;  // shared zero edge
    segments.emplace_back(u, v);
  }
};

}  // namespace

NodalCurveSet extract_nodal_curves(const TriangleMesh& mesh,
                                   const Eigen::VectorXd& values) {
  const int n = mesh.vertex_count();
  if (values.size() != n)
    throw std::invalid_argument("field length does not match mesh");
  const double fmax = values.cwiseAbs().maxCoeff();
  if (fmax == 0.0)
    throw std::invalid_argument("zero function has no zero curve");

  // Snap near-zero values so the curve can pass exactly through vertices.
  Eigen::VectorXd f = values;
  const double snap = 1e-12 * fmax;
  std::vector<int> sign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (std::abs(f[i]) <= snap) f[i] = 0.0;
    sign[i] = (f[i] > 0.0) ? 1 : (f[i] < 0.0 ? -1 : 0);
  }

  CurveGraph graph;
  auto vertex_node = [&](int v) {
    return graph.node({v, v}, mesh.vertices[static_cast<std::size_t>(v)]);
  };
  auto crossing_node = [&](int i, int j) {
    const auto [a, b] = std::minmax(i, j);
    const double t = f[a] / (f[a] - f[b]);
    const Eigen::Vector3d p = (1.0 - t) * mesh.vertices[a] + t * mesh.vertices[b];
    return graph.node({a, b}, p);
  };

  for (const auto& face : mesh.faces) {
    const int i = face[0], j = face[1], k = face[2];
    const int s[3] = {sign[i], sign[j], sign[k]};
    const int v[3] = {i, j, k};
    const int zeros = (s[0] == 0) + (s[1] == 0) + (s[2] == 0);

    if (zeros == 3) continue;  // fully degenerate triangle
    if (zeros == 2) {
      // The edge joining the two zero vertices lies on the curve.
      int za = -1, zb = -1;
      for (int c = 0; c < 3; ++c) {
        if (s[c] != 0) continue;
        if (za < 0)
          za = v[c];
        else
          zb = v[c];
      }
      graph.add_segment(vertex_node(za), vertex_node(zb));
      continue;
    }
    if (zeros == 1) {
      int zv = -1, p = -1, q = -1;
      for (int c = 0; c < 3; ++c) {
        if (s[c] == 0)
          zv = v[c];
        else if (p < 0)
          p = v[c];
        else
          q = v[c];
      }
      if (sign[p] != sign[q])  // curve runs from the vertex into the face
        graph.add_segment(vertex_node(zv), crossing_node(p, q));
      continue;
    }
    // No zero vertices: a segment appears iff the signs are mixed, in which
    // case exactly one vertex is separated from the other two.
    if (s[0] == s[1] && s[1] == s[2]) continue;
    int lone = 0;  // the vertex whose sign differs from the other two
    if (s[1] != s[0] && s[1] != s[2])
      lone = 1;
    else if (s[2] != s[0] && s[2] != s[1])
      lone = 2;
    const int a = v[lone], b = v[(lone + 1) % 3], c = v[(lone + 2) % 3];
    graph.add_segment(crossing_node(a, b), crossing_node(a, c));
  }

  // Chain segments into polylines.  Nodes of degree other than two terminate
  // open chains; everything left over forms closed loops.
  const int n_nodes = static_cast<int>(graph.positions.size());
  std::vector<std::vector<std::pair<int, int>>> incident(n_nodes);
  for (int sid = 0; sid < static_cast<int>(graph.segments.size()); ++sid) {
    const auto [u, w] = graph.segments[static_cast<std::size_t>(sid)];
    incident[u].emplace_back(sid, w);
    incident[w].emplace_back(sid, u);
  }

  NodalCurveSet out;
  std::vector<std::uint8_t> used(graph.segments.size(), 0);

  auto walk = [&](int start_node, int first_sid, int first_next) {
    std::vector<int> chain{start_node};
    int sid = first_sid;
    int cur = first_next;
    used[static_cast<std::size_t>(sid)] = 1;
    chain.push_back(cur);
    while (cur != start_node && incident[cur].size() == 2) {
      int next_sid = -1, next_node = -1;
      for (const auto& [cand_sid, cand_node] : incident[cur]) {
        if (used[static_cast<std::size_t>(cand_sid)]) continue;
        next_sid = cand_sid;
        next_node = cand_node;
        break;
      }
      if (next_sid < 0) break;
      used[static_cast<std::size_t>(next_sid)] = 1;
      cur = next_node;
      chain.push_back(cur);
    }
    return chain;
  };

  auto emit = [&](const std::vector<int>& chain) {
    const bool is_closed = chain.size() > 2 && chain.front() == chain.back();
    std::vector<Eigen::Vector3d> line;
    line.reserve(chain.size());
    const std::size_t stop =
        is_closed ? chain.size() - 1 : chain.size();  // drop repeated head
    for (std::size_t t = 0; t < stop; ++t)
      line.push_back(graph.positions[static_cast<std::size_t>(chain[t])]);
    out.polylines.push_back(std::move(line));
    out.closed.push_back(is_closed ? 1 : 0);
    if (is_closed)
      ++out.loop_count;
    else
      ++out.open_chain_count;
  };

  for (int node = 0; node < n_nodes; ++node) {
    if (incident[node].size() == 2) continue;
    for (const auto& [sid, other] : incident[node]) {
      if (used[static_cast<std::size_t>(sid)]) continue;
      emit(walk(node, sid, other));
    }
  }
  for (int sid = 0; sid < static_cast<int>(graph.segments.size()); ++sid) {
    if (used[static_cast<std::size_t>(sid)]) continue;
    const auto [u, w] = graph.segments[static_cast<std::size_t>(sid)];
    emit(walk(u, sid, w));
  }
  return out;
}

}  // namespace driftlap
