#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "perron/solver.hpp"
#include "test_helpers.hpp"

using namespace perron;
using namespace testutil;

namespace {

MonotoneMap all_ones_p3() {
  return build_tensor_map(all_ones_222(), NormWeights({3, 3, 3}));
}

MonotoneMap f1_map(double p) {
  return build_tensor_map(symmetric_222(1.2, 0.2),
                          NormWeights({p, p, p}));
}

// Random monotone, weakly primitive tensor map (rejection sampled).
MonotoneMap random_primitive_map(perron::detail::Rng& rng) {
  while (true) {
    oracle::RandomTensorOptions opt;
    opt.ensure_rows = true;
    opt.density = 0.5;
    NonnegTensor T = oracle::random_tensor(rng, opt);
    std::vector<double> p;
    for (int j = 0; j < T.order(); ++j)
      p.push_back(T.order() + 1.5 * rng.uniform());
    MonotoneMap F = build_tensor_map(T, NormWeights(p));
    if (is_weakly_primitive(F.system_poly()).weakly_primitive) return F;
  }
}

}  // namespace

TEST_CASE("power_solve on the all-ones tensor") {
  SolverConfig cfg;
  EigenSolution sol = power_solve(all_ones_p3(), cfg);
  REQUIRE(sol.converged());
  CHECK(sol.mu == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.lambda == doctest::Approx(4.0).epsilon(1e-12));
  for (int i = 0; i < 6; ++i)
    CHECK(sol.u[i] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(sol.residual <= cfg.tol);
  // blocks at unit 3-norm: 2^(-1/3) per coordinate
  for (const auto& b : sol.blocks)
    for (int i = 0; i < b.size(); ++i)
      CHECK(b[i] == doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("power_solve on F1 with p = 3 reaches the symmetric solution") {
  SolverConfig cfg;
  cfg.tol = 1e-12;
  EigenSolution sol = power_solve(f1_map(3.0), cfg);
  REQUIRE(sol.converged());
  CHECK(sol.lambda == doctest::Approx(1.8).epsilon(1e-10));
  const double c = std::pow(0.5, 1.0 / 3.0);
  for (const auto& b : sol.blocks)
    for (int i = 0; i < b.size(); ++i)
      CHECK(b[i] == doctest::Approx(c).epsilon(1e-10));
}

TEST_CASE("power_solve rejects imprimitive and non-monotone maps") {
  // pure 2-cycle: P = (x2, x1) with deltas (1,1)
  PolynomialMap swap(2, {{{{0, 1}, 1.0}}, {{{1, 0}, 1.0}}});
  MonotoneMap F = build_poly_map(swap, {1, 1}, 2.0, 1.0);
  SolverConfig cfg;
  CHECK_THROWS_AS(power_solve(F, cfg), NotPrimitiveError);
  try {
    power_solve(F, cfg);
  } catch (const NotPrimitiveError& e) {
    CHECK(e.strongly_connected);
    CHECK(e.cyclicity == 2);
  }
  // the override proceeds on strongly connected imprimitive systems
  EigenSolution sol = power_solve(F, cfg, std::nullopt, true);
  CHECK(sol.nonprimitive_override);

  CHECK_THROWS_AS(power_solve(f1_map(2.0), cfg), NonMonotoneError);
}

TEST_CASE("collatz_wielandt_bounds on the pinned examples") {
  MonotoneMap F = all_ones_p3();
  Vector u = Vector::Ones(6) / 6.0;
  auto [lo, hi] = collatz_wielandt_bounds(F, u);
  CHECK(lo == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-12));

  // F = (sqrt(x1 x2), x1) at x = (1, 4): F(x) = (2, 1), bounds (1/4, 2)
  PolynomialMap P(2, {{{{1, 1}, 1.0}}, {{{2, 0}, 1.0}}});
  MonotoneMap Fp = build_poly_map(P, {2, 2}, 2.0, 1.0);
  Vector x(2);
  x << 1.0, 4.0;
  auto [lo2, hi2] = collatz_wielandt_bounds(Fp, x);
  CHECK(lo2 == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(hi2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("block_normalize rescales to unit block norms and is idempotent") {
  SolverConfig cfg;
  NonnegTensor T = all_ones_222();
  NormWeights w({3, 3, 3});
  EigenSolution sol = power_solve(all_ones_p3(), cfg);
  EigenSolution bn = block_normalize(sol, T, w);
  CHECK(bn.lambda == doctest::Approx(4.0).epsilon(1e-12));
  // f(xi) = lambda at unit norms
  std::vector<Vector> blocks = bn.blocks;
  CHECK(evaluate_form(T, BlockVector(blocks)) ==
        doctest::Approx(4.0).epsilon(1e-11));

  EigenSolution bn2 = block_normalize(bn, T, w);
  for (std::size_t j = 0; j < bn.blocks.size(); ++j)
    for (int i = 0; i < bn.blocks[j].size(); ++i)
      CHECK(bn2.blocks[j][i] == doctest::Approx(bn.blocks[j][i]).epsilon(1e-14));

  // F1: lambda = a + 3b = 1.8
  NonnegTensor F1 = symmetric_222(1.2, 0.2);
  EigenSolution s1 = power_solve(f1_map(3.0), cfg);
  CHECK(block_normalize(s1, F1, w).lambda == doctest::Approx(1.8).epsilon(1e-10));
}

TEST_CASE("bracket containment and final gap on random primitive instances") {
  perron::detail::Rng rng(31, 0);
  for (int t = 0; t < 25; ++t) {
    MonotoneMap F = random_primitive_map(rng);
    SolverConfig cfg;
    cfg.seed = 500 + t;
    Vector start(F.dimension());
    for (int i = 0; i < start.size(); ++i) start[i] = 0.2 + rng.uniform();
    EigenSolution sol = power_solve(F, cfg, start);
    REQUIRE(sol.converged());
    for (const auto& [lo, hi] : sol.cw_trace) {
      CHECK(lo <= sol.mu * (1 + 1e-12));
      CHECK(hi >= sol.mu * (1 - 1e-12));
    }
    auto [lo_f, hi_f] = sol.cw_trace.back();
    CHECK((hi_f - lo_f) / hi_f <= cfg.tol);
    // the brackets nest monotonically for the undamped monotone iteration
    for (std::size_t k = 1; k < sol.cw_trace.size(); ++k) {
      CHECK(sol.cw_trace[k].first >= sol.cw_trace[k - 1].first * (1 - 1e-12));
      CHECK(sol.cw_trace[k].second <= sol.cw_trace[k - 1].second * (1 + 1e-12));
    }
  }
}

TEST_CASE("limit ray does not depend on psi, start independence holds") {
  MonotoneMap F = f1_map(3.0);
  SolverConfig cfg1;
  EigenSolution a = power_solve(F, cfg1);

  SolverConfig cfg2;
  Vector psi2(6);
  psi2 << 1.0, 2.0, 0.5, 1.5, 3.0, 0.25;
  cfg2.psi = psi2;
  EigenSolution b = power_solve(F, cfg2);
  CHECK(hilbert_distance(a.u, b.u) <= 1e-8);
  CHECK(a.mu == doctest::Approx(b.mu).epsilon(1e-10));

  // 100 random interior starts all land on the same ray
  perron::detail::Rng rng(33, 0);
  for (int s = 0; s < 100; ++s) {
    Vector start(6);
    for (int i = 0; i < 6; ++i) start[i] = rng.exponential();
    EigenSolution c = power_solve(F, cfg1, start);
    REQUIRE(c.converged());
    CHECK(hilbert_distance(a.u, c.u) <= 1e-8);
  }
}

TEST_CASE("multi_start_solve finds the attracting F1 solutions at p = 2") {
  MonotoneMap F = f1_map(2.0);
  SolverConfig cfg;
  cfg.starts = 60;
  cfg.seed = 7;
  cfg.damping = 0.5;
  MultiStartResult res = multi_start_solve(F, cfg);
  // the two asymmetric rays attract; the symmetric ray is linearly
  // repelling for every damping and is not reachable by forward iteration
  REQUIRE(res.solutions.size() == 2);
  const double u_hi = 0.9342, u_lo = 0.3568;
  CHECK(res.solutions[0].blocks[0][0] == doctest::Approx(u_lo).epsilon(5e-4));
  CHECK(res.solutions[0].blocks[0][1] == doctest::Approx(u_hi).epsilon(5e-4));
  CHECK(res.solutions[1].blocks[0][0] == doctest::Approx(u_hi).epsilon(5e-4));
  CHECK(res.solutions[1].blocks[0][1] == doctest::Approx(u_lo).epsilon(5e-4));
  CHECK(res.converged_starts == 60);

  // every returned solution verifies on the raw system at 1e-8
  NonnegTensor T = symmetric_222(1.2, 0.2);
  NormWeights w({2, 2, 2});
  for (const auto& sol : res.solutions) {
    VerifyReport vr =
        verify_solution(T, w, BlockVector(sol.blocks), std::nullopt, 1e-8);
    CHECK(vr.pass);
  }
}

TEST_CASE("multi_start_solve on the unique regime returns one solution") {
  MonotoneMap F = f1_map(3.0);
  SolverConfig cfg;
  cfg.starts = 40;
  cfg.seed = 11;
  MultiStartResult res = multi_start_solve(F, cfg);
  REQUIRE(res.solutions.size() == 1);
  CHECK(res.solutions[0].blocks[0][0] ==
        doctest::Approx(std::pow(0.5, 1.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("multi-start solutions of irreducible tensors stay positive") {
  perron::detail::Rng rng(35, 0);
  int tested = 0;
  while (tested < 10) {
    oracle::RandomTensorOptions opt;
    opt.ensure_rows = true;
    opt.density = 0.5;
    NonnegTensor T = oracle::random_tensor(rng, opt);
    if (!is_irreducible_tensor(T).value()) continue;
    ++tested;
    const double d = T.order();
    MonotoneMap F =
        build_tensor_map(T, NormWeights(std::vector<double>(T.order(), d)));
    SolverConfig cfg;
    cfg.starts = 10;
    cfg.seed = 1000 + tested;
    MultiStartResult res = multi_start_solve(F, cfg);
    for (const auto& sol : res.solutions)
      CHECK(sol.u.minCoeff() > 0.0);
  }
}

TEST_CASE("verify_solution on the printed bilinear example data") {
  NonnegTensor A = wide_matrix();
  NormWeights w({1.5, 1.5});
  Vector x(3), y(4);
  x << 0.0893, 0.9641, 0.0893;
  y << 0.0863, 0.9583, 0.0863, 0.0501;
  VerifyReport rep =
      verify_solution(A, w, BlockVector({x, y}), std::nullopt, 5e-4);
  CHECK(rep.lambda_fitted);
  CHECK(rep.equation_residual <= 5e-4);
  CHECK(rep.norm_residuals[0] <= 5e-4);
  CHECK(rep.norm_residuals[1] <= 5e-4);
  CHECK(rep.pass);

  // exact uniform solution of the all-ones tensor at lambda = 4
  NonnegTensor T = all_ones_222();
  const double c = std::pow(2.0, -1.0 / 3.0);
  BlockVector u({Vector::Constant(2, c), Vector::Constant(2, c),
                 Vector::Constant(2, c)});
  VerifyReport exact =
      verify_solution(T, NormWeights({3, 3, 3}), u, 4.0, 1e-12);
  CHECK(exact.pass);
  CHECK(exact.equation_residual <= 1e-12);

  // perturbing one coordinate breaks it
  BlockVector bad = u;
  bad.block(1)[0] += 0.05;
  VerifyReport broken =
      verify_solution(T, NormWeights({3, 3, 3}), bad, 4.0, 1e-3);
  CHECK_FALSE(broken.pass);
  CHECK(broken.equation_residual > 1e-3);
}

TEST_CASE("verify_solution allows boundary candidates") {
  // the swap matrix boundary pair x = (1,0), y = (0,1), lambda = 1
  NonnegTensor S = swap_matrix();
  Vector x(2), y(2);
  x << 1.0, 0.0;
  y << 0.0, 1.0;
  VerifyReport rep =
      verify_solution(S, NormWeights({2, 2}), BlockVector({x, y}), 1.0, 1e-14);
  CHECK(rep.pass);
}

TEST_CASE("verify_complex_eigenpair checks the modulus bound") {
  // P = (x2^2, x1^2), homogeneous degree 2, lambda = 1
  PolynomialMap P(2, {{{{0, 2}, 1.0}}, {{{2, 0}, 1.0}}});

  // real Perron pair: u = (1,1)/norm, nu = lambda
  ComplexVector u(2);
  u << 1.0, 1.0;
  auto real_pair = verify_complex_eigenpair(P, u, 1.0, 1.0, 1e-12);
  CHECK(real_pair.residual <= 1e-14);
  CHECK(real_pair.bound_ok);

  ComplexVector v(2);
  v << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 1.0);
  auto pair1 = verify_complex_eigenpair(P, v, -1.0, 1.0, 1e-12);
  CHECK(pair1.residual <= 1e-14);
  CHECK(pair1.nu_modulus == doctest::Approx(1.0));
  CHECK(pair1.bound_ok);

  ComplexVector w(2);
  w << 1.0, -1.0;
  auto pair2 = verify_complex_eigenpair(P, w, 1.0, 1.0, 1e-12);
  CHECK(pair2.residual <= 1e-14);
  CHECK(pair2.bound_ok);

  // non-homogeneous maps are rejected
  PolynomialMap inhom(2, {{{{0, 1}, 1.0}}, {{{2, 0}, 1.0}}});
  CHECK_THROWS_AS(verify_complex_eigenpair(inhom, v, 1.0, 1.0, 1e-12),
                  ValidationError);
}

TEST_CASE("solutions converged by multi-start verify at their own residual") {
  perron::detail::Rng rng(37, 0);
  for (int t = 0; t < 8; ++t) {
    MonotoneMap F = random_primitive_map(rng);
    SolverConfig cfg;
    cfg.starts = 6;
    cfg.seed = 42 + t;
    MultiStartResult res = multi_start_solve(F, cfg);
    REQUIRE(res.solutions.size() >= 1);
    for (const auto& sol : res.solutions) {
      VerifyReport vr = verify_solution(F.tensor(), F.weights(),
                                        BlockVector(sol.blocks), std::nullopt,
                                        1e-8);
      CHECK(vr.pass);
    }
  }
}
