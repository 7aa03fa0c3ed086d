#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dga {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

/// Weighted undirected communication graph. Edges are canonicalized to
/// i < j and stored once; weights are strictly positive and symmetric.
/// Construction rejects self-loops, duplicate edges, nonpositive weights
/// and disconnected graphs (the error message lists the components).
class NetworkGraph {
public:
  NetworkGraph(int n, std::vector<Edge> edges);

  /// Same edge set with Metropolis weights 1/(1 + max(deg_i, deg_j)).
  static NetworkGraph with_metropolis_weights(
      int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Sorted (neighbor, weight) list of node i.
  const std::vector<std::pair<int, double>>& neighbors(int i) const {
    return adjacency_.at(static_cast<std::size_t>(i));
  }
  bool adjacent(int i, int j) const;
  double weighted_degree(int i) const;

  /// L = D - P, symmetric PSD with zero row sums.
  Mat laplacian() const;

private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

struct LaplacianSpectrum {
  Vec eigenvalues;   // nondecreasing, eigenvalues(0) ~ 0
  Mat eigenvectors;  // orthonormal columns
};

LaplacianSpectrum laplacian_spectrum(const Mat& L);

/// (lambda_2, lambda_max) of a connected-graph Laplacian. Throws on
/// non-symmetric input.
std::pair<double, double> spectral_extremes(const Mat& L);

/// Pseudoinverse via eigendecomposition, zeroing the null eigenvalue.
Mat laplacian_pseudoinverse(const Mat& L);

/// t_i = sum_{j in N_i} p_ij (y_i - y_j). y holds n blocks of size m;
/// block i is computed reading only blocks of N_i and i itself.
Vec apply_mixing(const NetworkGraph& g, const Vec& y, int m);

/// (L (x) I_m) v for stacked n blocks of size m, using the dense L.
Vec apply_block_operator(const Mat& L, const Vec& v, int m);

}  // namespace dga
