#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cpx/minimax.hpp"

using namespace cpx;

namespace {

const TriangleBody kUnit{1, 1};
const TriangleBody kTwoThree{2, 3};

CPolynomial mono(const TriangleBody& body, std::int64_t j, std::int64_t k) { return CPolynomial::monomial(body, {j, k}); }

// Brute force over a grid of complex constants c: max_K |f + c g|.
double constant_shift_oracle(const CPolynomial& f, const CPolynomial& g, const DiscreteCompact& k) {
  double best = INFINITY;
  for (int x = -40; x <= 40; ++x)
    for (int y = -40; y <= 40; ++y) {
      const cplx c{x * 0.025, y * 0.025};
      double worst = 0.0;
      for (const auto& z : k.points()) worst = std::max(worst, std::abs(evaluate(f, z) + c * evaluate(g, z)));
      best = std::min(best, worst);
    }
  return best;
}

}  // namespace

TEST(SolveMinimax, BestConstantShiftOnCircle) {
  std::vector<CPoint> circle;
  for (std::size_t s = 0; s < 64; ++s) circle.push_back({unit_phase(s, 64), 1.0});
  const DiscreteCompact k(circle, false, "circle");
  MinimaxProblem prob{mono(kUnit, 1, 0), {mono(kUnit, 0, 0)}, k, std::nullopt};
  const auto sol = solve_minimax(prob);
  EXPECT_NEAR(std::abs(sol.coefficients[0]), 0.0, 1e-9);
  EXPECT_NEAR(sol.value, 1.0, 1e-9);
  EXPECT_TRUE(sol.converged);
  EXPECT_NEAR(sol.value, constant_shift_oracle(prob.fixed_part, prob.free_basis[0], k), 1e-9);
}

TEST(SolveMinimax, RealChebyshevPolynomial) {
  // monic degree-2 minimax on [-1,1] is T_2 / 2 = x^2 - 1/2
  std::vector<CPoint> seg;
  for (int i = 0; i <= 200; ++i) seg.push_back({std::cos(std::numbers::pi * i / 200.0), 0.0});
  const DiscreteCompact k(seg, false, "segment");
  MinimaxProblem prob{mono(kUnit, 2, 0), {mono(kUnit, 0, 0), mono(kUnit, 1, 0)}, k, std::nullopt};
  // dense grids make Lawson sublinear (near-extremal neighbours keep weight), hence the loose check
  const auto sol = solve_minimax(prob, {1e-12, 2000});
  EXPECT_NEAR(sol.value, 0.5, 1e-4);
  EXPECT_NEAR(sol.coefficients[0].real(), -0.5, 1e-3);
  EXPECT_NEAR(std::abs(sol.coefficients[1]), 0.0, 1e-3);
}

TEST(SolveMinimax, EmptyFreeBasis) {
  const auto k = build_torus(1.0, 1.0, 8);
  CPolynomial f = mono(kUnit, 1, 1);
  f.add_term({0, 0}, 1.0);
  const auto sol = solve_minimax({f, {}, k, std::nullopt});
  EXPECT_EQ(sol.iterations, 0);
  EXPECT_NEAR(sol.value, 2.0, 1e-14);
}

TEST(SolveMinimax, Errors) {
  const auto k = build_torus(1.0, 1.0, 8);
  // z1 and 2 z1 are dependent
  EXPECT_THROW(solve_minimax({mono(kUnit, 0, 0), {mono(kUnit, 1, 0), 2.0 * mono(kUnit, 1, 0)}, k, std::nullopt}),
               StructuralError);
  // zero constraint functional
  MinimaxProblem prob{CPolynomial(kUnit), {mono(kUnit, 1, 0)}, k, LinearConstraint{{cplx{}}, 1.0}};
  EXPECT_THROW(solve_minimax(prob), PivotError);
  // too few points
  const DiscreteCompact tiny({{1.0, 1.0}}, false, "pt");
  EXPECT_THROW(solve_minimax({mono(kUnit, 1, 0), {mono(kUnit, 0, 0)}, tiny, std::nullopt}), StructuralError);
}

TEST(SolveMinimax, ConstraintHolds) {
  const auto k = build_torus(0.7, 1.3, 16);
  LinearConstraint con{{0.0, {1.0, 2.0}, {-0.5, 0.0}}, {0.3, -0.2}};
  MinimaxProblem prob{mono(kUnit, 0, 0), {mono(kUnit, 1, 0), mono(kUnit, 0, 1), mono(kUnit, 1, 1)}, k, con};
  const auto sol = solve_minimax(prob);
  cplx lhs{};
  for (std::size_t i = 0; i < 3; ++i) lhs += con.functional[i] * sol.coefficients[i];
  EXPECT_NEAR(std::abs(lhs - con.target), 0.0, 1e-12);
  EXPECT_NEAR(sol.value, sup_norm(sol.polynomial, k), 1e-12);
}

TEST(SolveMinimax, MatchesGridSearchForOneCoefficient) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<CPoint> pts;
    for (int i = 0; i < 24; ++i) pts.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
    const DiscreteCompact k(pts, false, "cloud");
    CPolynomial f = mono(kUnit, 2, 0);
    f.add_term({0, 1}, {u(rng), u(rng)});
    const auto g = mono(kUnit, 1, 0);
    const auto sol = solve_minimax({f, {g}, k, std::nullopt}, {1e-12, 2000});
    const double oracle = constant_shift_oracle(f, g, k);
    EXPECT_LE(sol.value, oracle + 1e-9);       // never worse than the grid optimum
    EXPECT_GE(sol.value, oracle - 0.025 * 2);  // the grid is within one step of the optimum
  }
}

TEST(ChebyshevMonic, Examples) {
  const auto torus = build_torus(1.0, 1.0, 16);
  const auto c0 = chebyshev_monic(kUnit, 0, {0, 0}, torus);
  EXPECT_NEAR(c0.norm, 1.0, 1e-15);
  EXPECT_EQ(c0.polynomial.terms().size(), 1u);

  for (MultiIndex a : {MultiIndex{1, 0}, MultiIndex{1, 1}}) {
    const auto c = chebyshev_monic(kUnit, 2, a, torus);
    EXPECT_NEAR(c.norm, 1.0, 1e-10);
    EXPECT_EQ(c.polynomial.coefficient(a), cplx(1.0));
    for (const auto& [m, coef] : c.polynomial.terms())
      if (m != a) EXPECT_LE(std::abs(coef), 1e-10);
  }
  EXPECT_THROW(chebyshev_monic(kUnit, 1, {1, 1}, torus), StructuralError);
}

TEST(TchProjection, TorusMonomialIsMinimal) {
  const auto torus = build_torus(1.0, 1.0, 16);
  const auto r = tch_projection(kUnit, mono(kUnit, 1, 1), torus);
  EXPECT_NEAR(r.norm, 1.0, 1e-10);
  EXPECT_THROW(tch_projection(kUnit, mono(kUnit, 1, 1) + mono(kUnit, 1, 0), torus), StructuralError);
}

TEST(KappaN, UnitTorus) {
  const auto torus = build_torus(1.0, 1.0, 32);
  for (const auto& body : {kUnit, kTwoThree})
    for (std::int64_t n : {1, 2, 4}) {
      const auto r = kappa_n(body, torus, {1.0, 1.0}, n);
      ASSERT_TRUE(r.has_value());
      EXPECT_NEAR(r->value, 1.0, 1e-6) << "n=" << n;
      EXPECT_NEAR(std::abs(evaluate(hat(r->solution.polynomial), {1.0, 1.0})), 1.0, 1e-10);
    }
}

TEST(KappaN, ScalingAndFeasibility) {
  const auto base = kappa_n(kUnit, build_torus(1.0, 1.0, 32), {1.0, 1.0}, 3);
  for (double r : {0.5, 2.0}) {
    const auto scaled = kappa_n(kUnit, build_torus(r, r, 32), {1.0, 1.0}, 3);
    EXPECT_NEAR(scaled->value / base->value, std::pow(r, 3), 0.02 * std::pow(r, 3));
  }
  // top line of the (2,3) body at n = 1 is {z1^3, z2^2}; zeta = (0,1) keeps z2^2
  const auto k = build_torus(1.0, 1.0, 16);
  const auto f = kappa_n(kTwoThree, k, {0.0, 1.0}, 1);
  ASSERT_TRUE(f.has_value());
  EXPECT_LE(f->value, sup_norm(mono(kTwoThree, 0, 2), k) + 1e-9);
  // zeta = (0,0) kills every top-line monomial
  EXPECT_FALSE(kappa_n(kTwoThree, k, {0.0, 0.0}, 1).has_value());
}

TEST(TauDirection, Torus) {
  const auto torus = build_torus(1.0, 1.0, 32);
  const auto est = tau_direction(kUnit, torus, HypotenuseDirection(0.3), {2, 4, 6, 8});
  for (double v : est.roots) EXPECT_NEAR(v, 1.0, 1e-8);
  for (double r : {0.5, 2.0}) {
    const auto e = tau_direction(kUnit, build_torus(r, r, 32), HypotenuseDirection(0.5), {2, 4, 6});
    EXPECT_NEAR(e.estimate, r, 1e-8 * r);
  }
  EXPECT_THROW(tau_direction(kUnit, torus, HypotenuseDirection(0.5), {}), StructuralError);
  EXPECT_THROW(tau_direction(kUnit, torus, HypotenuseDirection(0.5), {4, 2}), StructuralError);
}

TEST(TauDirection, FreeBasisEnlargementNeverIncreasesNorm) {
  // same alpha, larger ambient degree only adds monomials that precede alpha
  // if they have lower C-degree; the monic class is fixed by alpha, so the norm is unchanged
  const auto k = build_reinhardt({{1.0, 0.6}, {0.5, 1.0}}, 12);
  for (const auto& body : {kUnit, kTwoThree}) {
    const auto basis = enumerate_basis(body, 3);
    for (std::size_t s = 1; s + 1 < basis.size(); ++s) {
      const auto lo = chebyshev_monic(body, basis.degrees[s], basis.indices[s], k);
      const auto hi = chebyshev_monic(body, basis.degrees[s] + 1, basis.indices[s], k);
      EXPECT_LE(hi.norm, lo.norm + 1e-9);
    }
  }
}

TEST(SolveMinimax, LocalOptimalityCertificate) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  const auto k = build_reinhardt({{1.0, 0.6}, {0.5, 1.0}}, 12);
  for (const auto& body : {kUnit, kTwoThree}) {
    const auto basis = enumerate_basis(body, 2);
    for (std::size_t s = 2; s < basis.size(); s += 2) {
      const auto res = chebyshev_monic(body, basis.degrees[s], basis.indices[s], k, {1e-12, 2000});
      const auto below = monomials_below(body, basis.indices[s]);
      for (int d = 0; d < 20; ++d) {
        CPolynomial p = res.polynomial;
        std::vector<cplx> dir(below.size());
        double nrm = 0.0;
        for (auto& x : dir) {
          x = {g(rng), g(rng)};
          nrm += std::norm(x);
        }
        for (std::size_t i = 0; i < below.size(); ++i) p.add_term(below[i], 1e-3 * dir[i] / std::sqrt(nrm));
        EXPECT_GE(sup_norm(p, k), res.norm - 1e-6);
      }
    }
  }
}

TEST(KappaN, Submultiplicative) {
  const auto k = build_reinhardt({{1.0, 0.6}, {0.5, 1.0}}, 12);
  const CPoint zeta{1.0, std::polar(0.5, 0.3)};
  std::vector<double> kap;
  for (std::int64_t n = 1; n <= 4; ++n) kap.push_back(kappa_n(kUnit, k, zeta, n, {1e-12, 2000})->value);
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t m = 1; n + m <= 4; ++m) EXPECT_LE(kap[n + m - 1], kap[n - 1] * kap[m - 1] + 1e-9) << n << "," << m;
}

// On a product torus the normalized mean of |p|^2 is the sum of squared
// coefficient moduli times radii powers, so every monic member has norm at
// least r^alpha. This is the lower half of the torus oracle.
TEST(TorusOracle, MeanSquareLowerBound) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  const double r1 = 0.8, r2 = 1.2;
  const auto k = build_torus(r1, r2, 16);
  const auto basis = enumerate_basis(kTwoThree, 2);
  for (std::size_t s = 1; s < basis.size(); ++s) {
    const auto& alpha = basis.indices[s];
    const double floor = std::pow(r1, static_cast<double>(alpha.j)) * std::pow(r2, static_cast<double>(alpha.k));
    for (int trial = 0; trial < 5; ++trial) {
      CPolynomial p = CPolynomial::monomial(kTwoThree, alpha);
      for (const auto& b : monomials_below(kTwoThree, alpha)) p.add_term(b, {0.3 * g(rng), 0.3 * g(rng)});
      EXPECT_GE(sup_norm(p, k), floor * (1 - 1e-12));
    }
    const auto res = chebyshev_monic(kTwoThree, basis.degrees[s], alpha, k);
    EXPECT_NEAR(res.norm, floor, 1e-9 * floor);
  }
}

TEST(TchProjection, PositiveHomogeneity) {
  const auto k = build_reinhardt({{1.0, 0.6}, {0.5, 1.0}}, 12);
  CPolynomial h = mono(kUnit, 2, 0);
  h.add_term({1, 1}, {0.5, 0.5});
  const auto one = tch_projection(kUnit, h, k, {1e-12, 2000});
  const auto two = tch_projection(kUnit, 2.0 * h, k, {1e-12, 2000});
  EXPECT_NEAR(two.norm, 2.0 * one.norm, 1e-6 * one.norm);
}
