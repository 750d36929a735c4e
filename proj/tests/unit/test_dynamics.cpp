#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "perron/dynamics.hpp"
#include "test_helpers.hpp"

using namespace perron;
using namespace testutil;

namespace {

MonotoneMap all_ones_p3() {
  return build_tensor_map(all_ones_222(), NormWeights({3, 3, 3}));
}

// Random monotone tensor map with every slot row covered.
MonotoneMap random_tensor_map(perron::detail::Rng& rng) {
  oracle::RandomTensorOptions opt;
  opt.ensure_rows = true;
  NonnegTensor T = oracle::random_tensor(rng, opt);
  std::vector<double> p;
  for (int j = 0; j < T.order(); ++j)
    p.push_back(T.order() + 2.0 * rng.uniform());
  return build_tensor_map(T, NormWeights(p));
}

}  // namespace

TEST_CASE("build_tensor_map evaluates the pinned examples") {
  Vector ones6 = Vector::Ones(6);
  Vector F = all_ones_p3().apply(ones6);
  for (int i = 0; i < 6; ++i) CHECK(F[i] == doctest::Approx(2.0));

  MonotoneMap F1 =
      build_tensor_map(symmetric_222(1.2, 0.2), NormWeights({3, 3, 3}));
  Vector G = F1.apply(ones6);
  for (int i = 0; i < 6; ++i)
    CHECK(G[i] == doctest::Approx(std::sqrt(1.8)).epsilon(1e-12));
  CHECK(F1.monotone());
  CHECK(F1.eigen_exponent() == doctest::Approx(2.0));

  // an all-zero slice violates the non-vanishing condition
  NonnegTensor gap({2, 2}, {{{0, 0}, 1.0}, {{0, 1}, 1.0}});
  CHECK_THROWS_AS(build_tensor_map(gap, NormWeights({2, 2})), ValidationError);

  // sub-critical norms build with monotone() false
  MonotoneMap sub =
      build_tensor_map(symmetric_222(1.2, 0.2), NormWeights({2, 2, 2}));
  CHECK_FALSE(sub.monotone());
}

TEST_CASE("build_poly_map evaluates the pinned examples") {
  // P = (x2^2, x1^2), homogeneous with delta = d: F is the square root swap
  PolynomialMap sq(2, {{{{0, 2}, 1.0}}, {{{2, 0}, 1.0}}});
  MonotoneMap F = build_poly_map(sq, {2, 2}, 2.0, 1.0);
  Vector x(2);
  x << 4.0, 1.0;
  Vector y = F.apply(x);
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(4.0));

  // P = (x2, x1) with deltas (2,2), p=2, a=1 at (3,4): (sqrt(20), sqrt(15))
  PolynomialMap lin(2, {{{{0, 1}, 1.0}}, {{{1, 0}, 1.0}}});
  MonotoneMap Fl = build_poly_map(lin, {2, 2}, 2.0, 1.0);
  Vector z(2);
  z << 3.0, 4.0;
  Vector w = Fl.apply(z);
  CHECK(w[0] == doctest::Approx(std::sqrt(20.0)).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(std::sqrt(15.0)).epsilon(1e-12));

  CHECK_THROWS_AS(build_poly_map(sq, {1, 2}, 2.0, 1.0), ValidationError);
  CHECK_THROWS_AS(build_poly_map(sq, {2, 2}, -1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(build_poly_map(sq, {2, 2}, 2.0, 0.0), ValidationError);
}

TEST_CASE("apply rejects boundary and mismatched input") {
  MonotoneMap F = all_ones_p3();
  Vector bad = Vector::Ones(6);
  bad[3] = 0.0;
  CHECK_THROWS_AS(F.apply(bad), ValidationError);
  CHECK_THROWS_AS(F.apply(Vector::Ones(5)), DimensionError);
}

TEST_CASE("homogeneity of degree one on random maps") {
  perron::detail::Rng rng(21, 0);
  for (int t = 0; t < 60; ++t) {
    MonotoneMap F = random_tensor_map(rng);
    Vector x = oracle::random_positive(rng, F.dimension());
    Vector Fx = F.apply(x);
    for (double scale : {0.5, 2.0, 7.0}) {
      Vector Fs = F.apply(Vector(scale * x));
      for (int i = 0; i < Fx.size(); ++i)
        CHECK(Fs[i] == doctest::Approx(scale * Fx[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("monotonicity when every p_j >= d") {
  perron::detail::Rng rng(22, 0);
  for (int t = 0; t < 60; ++t) {
    MonotoneMap F = random_tensor_map(rng);
    REQUIRE(F.monotone());
    Vector x = oracle::random_positive(rng, F.dimension());
    Vector y = x;
    for (int i = 0; i < y.size(); ++i) y[i] += rng.uniform();
    Vector Fx = F.apply(x);
    Vector Fy = F.apply(y);
    for (int i = 0; i < Fx.size(); ++i) CHECK(Fx[i] <= Fy[i] * (1 + 1e-12));
  }
}

TEST_CASE("hilbert distance: examples, symmetry, triangle inequality") {
  Vector x(2), y(2);
  x << 1.0, 1.0;
  y << 2.0, 1.0;
  CHECK(hilbert_distance(x, x) == 0.0);
  CHECK(hilbert_distance(x, y) == doctest::Approx(std::log(2.0)));
  CHECK(hilbert_distance(x, Vector(3.7 * y)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Vector z(2);
  z << 0.0, 1.0;
  CHECK_THROWS_AS(hilbert_distance(x, z), ValidationError);
  CHECK_THROWS_AS(hilbert_distance(x, Vector::Ones(3)), DimensionError);

  perron::detail::Rng rng(23, 0);
  for (int t = 0; t < 1000; ++t) {
    int n = 2 + static_cast<int>(rng.below(6));
    Vector a = oracle::random_positive(rng, n, 0.05, 3.0);
    Vector b = oracle::random_positive(rng, n, 0.05, 3.0);
    Vector c = oracle::random_positive(rng, n, 0.05, 3.0);
    double ab = hilbert_distance(a, b);
    CHECK(ab == doctest::Approx(hilbert_distance(b, a)).epsilon(1e-12));
    CHECK(ab <= hilbert_distance(a, c) + hilbert_distance(c, b) + 1e-12);
    // scale invariance
    CHECK(hilbert_distance(a, Vector(4.2 * b)) ==
          doctest::Approx(ab).epsilon(1e-10));
  }
}

TEST_CASE("nonexpansiveness of monotone maps in the Hilbert metric") {
  perron::detail::Rng rng(24, 0);
  for (int t = 0; t < 200; ++t) {
    MonotoneMap F = random_tensor_map(rng);
    Vector x = oracle::random_positive(rng, F.dimension());
    Vector y = oracle::random_positive(rng, F.dimension());
    CHECK(hilbert_distance(F.apply(x), F.apply(y)) <=
          hilbert_distance(x, y) + 1e-12);
  }
}

TEST_CASE("normalize produces psi-calibrated fixed points") {
  MonotoneMap F = all_ones_p3();
  Vector psi = Vector::Ones(6);
  Vector x = Vector::Ones(6);
  Vector g = normalize(F, psi, x);
  for (int i = 0; i < 6; ++i)
    CHECK(g[i] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  // eigenvector with psi^T u = 1 is a fixed point
  Vector u = Vector::Ones(6) / 6.0;
  Vector gu = normalize(F, psi, u);
  for (int i = 0; i < 6; ++i)
    CHECK(gu[i] == doctest::Approx(u[i]).epsilon(1e-13));

  // scale invariance of G
  Vector g2 = normalize(F, psi, Vector(3.0 * x));
  for (int i = 0; i < 6; ++i)
    CHECK(g2[i] == doctest::Approx(g[i]).epsilon(1e-13));

  Vector bad_psi = Vector::Zero(6);
  CHECK_THROWS_AS(normalize(F, bad_psi, x), ValidationError);
}

TEST_CASE("homogeneous reduction: F_i^d = P_i when deltas equal the degree") {
  perron::detail::Rng rng(25, 0);
  for (int t = 0; t < 40; ++t) {
    oracle::RandomTensorOptions opt;
    opt.ensure_rows = true;
    NonnegTensor T = oracle::random_tensor(rng, opt);
    PolynomialMap P = tensor_system(T);
    const double d = P.max_degree();
    MonotoneMap F =
        build_poly_map(P, std::vector<double>(P.dimension(), d), 2.0, 1.0);
    Vector x = oracle::random_positive(rng, P.dimension());
    Vector Fx = F.apply(x);
    Vector Px = evaluate_poly(P, x);
    for (int i = 0; i < Fx.size(); ++i)
      CHECK(std::pow(Fx[i], d) == doctest::Approx(Px[i]).epsilon(1e-12));
  }
}

TEST_CASE("tensor map and its polynomial system agree when p_j = d") {
  perron::detail::Rng rng(26, 0);
  for (int t = 0; t < 40; ++t) {
    oracle::RandomTensorOptions opt;
    opt.ensure_rows = true;
    NonnegTensor T = oracle::random_tensor(rng, opt);
    const double d = T.order();
    MonotoneMap Ft =
        build_tensor_map(T, NormWeights(std::vector<double>(T.order(), d)));
    // the system map has degree d-1 components; deltas d-1 give F = P^(1/(d-1))
    PolynomialMap P = tensor_system(T);
    MonotoneMap Fp = build_poly_map(
        P, std::vector<double>(P.dimension(), double(P.max_degree())), 2.0,
        1.0);
    Vector x = oracle::random_positive(rng, P.dimension());
    Vector a = Ft.apply(x);
    Vector b = Fp.apply(x);
    for (int i = 0; i < a.size(); ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }
}

TEST_CASE("f_digraph matches the combinatorial rules for poly maps") {
  // inhomogeneous component pulls in the norm factor: edges to every vertex
  PolynomialMap mix(2, {{{{1, 0}, 1.0}, {{0, 1}, 0.5}}, {{{0, 2}, 1.0}}});
  // degrees: d_1 = 1, d_2 = 2; deltas (2, 2): component 1 has monomials of
  // degree < delta_1 = 2 -> norm factor -> edges everywhere; delta_max =
  // delta_1 means no dmax-gap loop needed
  MonotoneMap F = build_poly_map(mix, {2, 2}, 2.0, 1.0);
  DiGraph G = f_digraph(F);
  CHECK(G.has_edge(0, 0));
  CHECK(G.has_edge(0, 1));
  CHECK(G.has_edge(1, 1));
  CHECK_FALSE(G.has_edge(1, 0));

  // delta gap adds a loop through x_i^(dmax - delta_i): with P_2 = x1^2 and
  // deltas (3, 2), component 2 gains the loop but no other new edge
  PolynomialMap gap(2, {{{{1, 0}, 1.0}, {{0, 1}, 0.5}}, {{{2, 0}, 1.0}}});
  MonotoneMap F2 = build_poly_map(gap, {3, 2}, 2.0, 1.0);
  DiGraph G2 = f_digraph(F2);
  CHECK(G2.has_edge(1, 0));
  CHECK(G2.has_edge(1, 1));
  MonotoneMap F3 = build_poly_map(gap, {2, 2}, 2.0, 1.0);
  CHECK_FALSE(f_digraph(F3).has_edge(1, 1));
}
