#include "dga/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace dga {

namespace {

// Union-find over nodes; returns the list of components if more than one.
std::vector<std::vector<int>> components(int n, const std::vector<Edge>& edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (const auto& e : edges) parent[find(e.i)] = find(e.j);
  std::vector<std::vector<int>> comp(n);
  for (int v = 0; v < n; ++v) comp[find(v)].push_back(v);
  std::vector<std::vector<int>> out;
  for (auto& c : comp)
    if (!c.empty()) out.push_back(std::move(c));
  return out;
}

}  // namespace

NetworkGraph::NetworkGraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n <= 0) throw std::invalid_argument("NetworkGraph: agent count must be positive");
  std::set<std::pair<int, int>> seen;
  edges_.reserve(edges.size());
  for (auto e : edges) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
      throw std::invalid_argument("NetworkGraph: edge endpoint out of range");
    if (e.i == e.j) throw std::invalid_argument("NetworkGraph: self-loop rejected");
    if (e.weight <= 0.0)
      throw std::invalid_argument("NetworkGraph: edge weight must be strictly positive");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.insert({e.i, e.j}).second)
      throw std::invalid_argument("NetworkGraph: duplicate edge rejected");
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });

  auto comp = components(n_, edges_);
  if (comp.size() > 1) {
    std::ostringstream msg;
    msg << "NetworkGraph: graph is disconnected; components:";
    for (const auto& c : comp) {
      msg << " {";
      for (std::size_t k = 0; k < c.size(); ++k) msg << (k ? "," : "") << c[k];
      msg << "}";
    }
    throw std::invalid_argument(msg.str());
  }

  adjacency_.assign(static_cast<std::size_t>(n_), {});
  for (const auto& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.i)].push_back({e.j, e.weight});
    adjacency_[static_cast<std::size_t>(e.j)].push_back({e.i, e.weight});
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

NetworkGraph NetworkGraph::with_metropolis_weights(
    int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : edges) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::invalid_argument("NetworkGraph: edge endpoint out of range");
    ++deg[static_cast<std::size_t>(i)];
    ++deg[static_cast<std::size_t>(j)];
  }
  std::vector<Edge> weighted;
  weighted.reserve(edges.size());
  for (const auto& [i, j] : edges) {
    double w = 1.0 / (1.0 + static_cast<double>(std::max(
                                deg[static_cast<std::size_t>(i)],
                                deg[static_cast<std::size_t>(j)])));
    weighted.push_back({i, j, w});
  }
  return NetworkGraph(n, std::move(weighted));
}

bool NetworkGraph::adjacent(int i, int j) const {
  const auto& adj = neighbors(i);
  return std::any_of(adj.begin(), adj.end(),
                     [j](const auto& p) { return p.first == j; });
}

double NetworkGraph::weighted_degree(int i) const {
  double d = 0.0;
  for (const auto& [j, w] : neighbors(i)) d += w;
  return d;
}

Mat NetworkGraph::laplacian() const {
  Mat L = Mat::Zero(n_, n_);
  for (const auto& e : edges_) {
    L(e.i, e.j) -= e.weight;
    L(e.j, e.i) -= e.weight;
    L(e.i, e.i) += e.weight;
    L(e.j, e.j) += e.weight;
  }
  return L;
}

LaplacianSpectrum laplacian_spectrum(const Mat& L) {
  if (L.rows() != L.cols() || !L.isApprox(L.transpose(), 1e-12))
    throw std::invalid_argument("laplacian_spectrum: matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(L);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("laplacian_spectrum: eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

std::pair<double, double> spectral_extremes(const Mat& L) {
  auto spec = laplacian_spectrum(L);
  const Eigen::Index n = spec.eigenvalues.size();
  if (n < 2) throw std::invalid_argument("spectral_extremes: need at least 2 nodes");
  double lmax = spec.eigenvalues(n - 1);
  double l2 = spec.eigenvalues(1);
  if (l2 <= 1e-10 * std::max(1.0, lmax))
    throw std::invalid_argument("spectral_extremes: lambda_2 is numerically zero (disconnected graph?)");
  return {l2, lmax};
}

Mat laplacian_pseudoinverse(const Mat& L) {
  auto spec = laplacian_spectrum(L);
  const Eigen::Index n = spec.eigenvalues.size();
  double lmax = spec.eigenvalues(n - 1);
  double cutoff = 1e-12 * std::max(1.0, lmax);
  Vec inv = Vec::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k)
    if (spec.eigenvalues(k) > cutoff) inv(k) = 1.0 / spec.eigenvalues(k);
  return spec.eigenvectors * inv.asDiagonal() * spec.eigenvectors.transpose();
}

Vec apply_mixing(const NetworkGraph& g, const Vec& y, int m) {
  const int n = g.size();
  if (y.size() != static_cast<Eigen::Index>(n) * m)
    throw std::invalid_argument("apply_mixing: y must hold n blocks of size m");
  Vec t = Vec::Zero(y.size());
  for (int i = 0; i < n; ++i) {
    auto ti = t.segment(static_cast<Eigen::Index>(i) * m, m);
    auto yi = y.segment(static_cast<Eigen::Index>(i) * m, m);
    for (const auto& [j, w] : g.neighbors(i))
      ti += w * (yi - y.segment(static_cast<Eigen::Index>(j) * m, m));
  }
  return t;
}

Vec apply_block_operator(const Mat& L, const Vec& v, int m) {
  const Eigen::Index n = L.rows();
  if (v.size() != n * m)
    throw std::invalid_argument("apply_block_operator: dimension mismatch");
  Eigen::Map<const Mat> V(v.data(), m, n);
  Mat R = V * L;  // L symmetric
  return Eigen::Map<const Vec>(R.data(), v.size());
}

}  // namespace dga
