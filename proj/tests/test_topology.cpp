#include <doctest.h>

#include <random>

#include "dga/graph.hpp"

using namespace dga;

TEST_CASE("two-node laplacian") {
  NetworkGraph g(2, {{0, 1, 1.0}});
  Mat L = g.laplacian();
  CHECK(L(0, 0) == 1.0);
  CHECK(L(0, 1) == -1.0);
  CHECK(L(1, 0) == -1.0);
  CHECK(L(1, 1) == 1.0);

  Mat pinv = laplacian_pseudoinverse(L);
  CHECK(pinv(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(pinv(0, 1) == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("three-node path spectrum") {
  NetworkGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  auto [lambda2, lambda_max] = spectral_extremes(g.laplacian());
  CHECK(lambda2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lambda_max == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("triangle pseudoinverse is L/9") {
  NetworkGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  Mat L = g.laplacian();
  Mat pinv = laplacian_pseudoinverse(L);
  CHECK((pinv - L / 9.0).cwiseAbs().maxCoeff() < 1e-12);
  // Moore-Penrose sanity: L pinv L = L
  CHECK((L * pinv * L - L).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("metropolis weights on a path") {
  auto g = NetworkGraph::with_metropolis_weights(3, {{0, 1}, {1, 2}});
  // degrees 1, 2, 1 -> every edge gets 1/(1 + 2)
  for (const auto& e : g.edges()) CHECK(e.weight == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("construction rejects malformed graphs") {
  CHECK_THROWS_AS(NetworkGraph(2, {{0, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NetworkGraph(2, {{0, 1, 1.0}, {1, 0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NetworkGraph(2, {{0, 1, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NetworkGraph(2, {{0, 1, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NetworkGraph(3, {{0, 1, 1.0}, {1, 5, 1.0}}), std::invalid_argument);

  try {
    NetworkGraph g(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    FAIL("disconnected graph accepted");
  } catch (const std::invalid_argument& e) {
    // the error enumerates the components so the caller can see the split
    CHECK(std::string(e.what()).find("component") != std::string::npos);
  }
}

TEST_CASE("mixing agrees with the dense block operator") {
  auto g = NetworkGraph::with_metropolis_weights(
      6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 2}, {1, 4}});
  Mat L = g.laplacian();
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m : {1, 3}) {
    Vec y(6 * m);
    for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = u(eng);
    Vec t = apply_mixing(g, y, m);
    Vec dense = apply_block_operator(L, y, m);
    CHECK((t - dense).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("consensus vector is in the mixing null space") {
  auto g = NetworkGraph::with_metropolis_weights(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  Vec y(8);
  y << 2, -1, 2, -1, 2, -1, 2, -1;  // same (2,-1) block everywhere
  CHECK(apply_mixing(g, y, 2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral_extremes rejects non-symmetric input") {
  Mat L(2, 2);
  L << 1, -1, 0, 1;
  CHECK_THROWS_AS(spectral_extremes(L), std::invalid_argument);
}
