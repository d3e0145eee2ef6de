#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sph2/errors.hpp"
#include "sph2/types.hpp"

namespace sph2 {

/// Undirected communication graph with an arbitrary but fixed orientation
/// assigned to every edge. Nodes are indexed 0..n_nodes-1; an edge (i, j)
/// has source i and sink j.
struct OrientedGraph {
  Index n_nodes = 0;
  std::vector<std::pair<Index, Index>> edges;

  Index n_edges() const { return static_cast<Index>(edges.size()); }

  static OrientedGraph line(Index n);
  static OrientedGraph ring(Index n);
  static OrientedGraph complete(Index n);
  static OrientedGraph star(Index n);
  static OrientedGraph from_edges(Index n, std::vector<std::pair<Index, Index>> edges);
};

inline void validate_graph(const OrientedGraph& g) {
  if (g.n_nodes <= 0) throw ValidationError("graph: n_nodes must be positive");
  std::set<std::pair<Index, Index>> seen;
  for (const auto& [i, j] : g.edges) {
    if (i < 0 || i >= g.n_nodes || j < 0 || j >= g.n_nodes)
      throw ValidationError("graph: edge (" + std::to_string(i) + "," + std::to_string(j) +
                            ") has node index out of range");
    if (i == j)
      throw ValidationError("graph: self-loop at node " + std::to_string(i));
    auto key = std::minmax(i, j);
    if (!seen.insert({key.first, key.second}).second)
      throw ValidationError("graph: duplicate undirected edge (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
  }
}

inline OrientedGraph OrientedGraph::from_edges(Index n, std::vector<std::pair<Index, Index>> edges) {
  OrientedGraph g{n, std::move(edges)};
  validate_graph(g);
  return g;
}

inline OrientedGraph OrientedGraph::line(Index n) {
  OrientedGraph g{n, {}};
  for (Index i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  validate_graph(g);
  return g;
}

inline OrientedGraph OrientedGraph::ring(Index n) {
  if (n < 3) throw ValidationError("graph: ring requires n >= 3");
  OrientedGraph g = line(n);
  g.edges.emplace_back(n - 1, Index{0});
  return g;
}

inline OrientedGraph OrientedGraph::complete(Index n) {
  OrientedGraph g{n, {}};
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  validate_graph(g);
  return g;
}

inline OrientedGraph OrientedGraph::star(Index n) {
  OrientedGraph g{n, {}};
  for (Index i = 1; i < n; ++i) g.edges.emplace_back(Index{0}, i);
  validate_graph(g);
  return g;
}

/// Node-edge incidence matrix E: column e holds +1 at the source node of
/// edge e and -1 at its sink, zeros elsewhere.
template <typename Scalar = double>
MatrixX<Scalar> incidence_matrix(const OrientedGraph& g) {
  validate_graph(g);
  MatrixX<Scalar> E = MatrixX<Scalar>::Zero(g.n_nodes, g.n_edges());
  for (Index e = 0; e < g.n_edges(); ++e) {
    E(g.edges[e].first, e) = Scalar(1);
    E(g.edges[e].second, e) = Scalar(-1);
  }
  return E;
}

/// Graph Laplacian L = E E^T (orientation-independent).
template <typename Scalar = double>
MatrixX<Scalar> laplacian(const OrientedGraph& g) {
  const MatrixX<Scalar> E = incidence_matrix<Scalar>(g);
  return E * E.transpose();
}

/// Edge Laplacian E^T E; positive definite exactly when the graph is acyclic.
template <typename Scalar = double>
MatrixX<Scalar> edge_laplacian(const OrientedGraph& g) {
  const MatrixX<Scalar> E = incidence_matrix<Scalar>(g);
  return E.transpose() * E;
}

inline Index n_components(const OrientedGraph& g) {
  validate_graph(g);
  std::vector<Index> parent(static_cast<std::size_t>(g.n_nodes));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  Index components = g.n_nodes;
  for (const auto& [i, j] : g.edges) {
    const Index ri = find(i), rj = find(j);
    if (ri != rj) {
      parent[static_cast<std::size_t>(ri)] = rj;
      --components;
    }
  }
  return components;
}

inline bool is_connected(const OrientedGraph& g) { return n_components(g) == 1; }

/// Acyclic on the undirected skeleton: |E| = n - (number of components).
inline bool is_acyclic(const OrientedGraph& g) {
  return g.n_edges() == g.n_nodes - n_components(g);
}

/// Eigenvalues of the Laplacian, ascending. The smallest is always ~0;
/// the second is positive exactly when the graph is connected.
template <typename Scalar = double>
VectorX<Scalar> laplacian_spectrum(const OrientedGraph& g) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(laplacian<Scalar>(g));
  if (es.info() != Eigen::Success)
    throw NumericalError("laplacian_spectrum: eigensolver failed");
  return es.eigenvalues();
}

/// Orthonormal basis of the row space of E, as columns. Used to strip the
/// cycle space of a graph before stability analysis.
template <typename Scalar = double>
MatrixX<Scalar> row_space_basis(const MatrixX<Scalar>& E, Index rank) {
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(E.transpose(), Eigen::ComputeThinU);
  return svd.matrixU().leftCols(rank);
}

}  // namespace sph2
