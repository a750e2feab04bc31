#pragma once

// Discrete complex Chebyshev problems solved by Lawson's iteratively
// reweighted least squares, and the Chebyshev-type constants built on them.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "cpx/cpoly.hpp"
#include "cpx/domain.hpp"
#include "cpx/error.hpp"
#include "cpx/lattice.hpp"
#include "cpx/linalg.hpp"

namespace cpx {

/// sum_i functional[i] * c_i = target on the free coefficients.
struct LinearConstraint {
  std::vector<cplx> functional;
  cplx target{1.0, 0.0};
};

/// minimize || fixed_part + sum_i c_i free_basis[i] ||_K.
struct MinimaxProblem {
  CPolynomial fixed_part;
  std::vector<CPolynomial> free_basis;
  DiscreteCompact k;
  std::optional<LinearConstraint> constraint;
};

struct MinimaxOptions {
  double tol = 1e-10;
  int max_iter = 500;
};

struct MinimaxSolution {
  std::vector<cplx> coefficients;
  double value = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  CPolynomial polynomial;
};

namespace detail {

inline constexpr double kWeightFloor = 1e-300;

struct LawsonOutcome {
  VectorXc coef;
  double value = 0.0;
  int iterations = 0;
  std::vector<double> history;
  bool converged = false;
};

/// Lawson iteration for min_c max_i |f_i + (A c)_i|. `warm`, when given, must
/// be the uniform-weight least-squares solution (the first Lawson iterate).
inline LawsonOutcome lawson(const VectorXc& f, const MatrixXc& a, double tol, int max_iter,
                            const VectorXc* warm = nullptr) {
  LawsonOutcome out;
  const Eigen::Index n = f.size();
  const Eigen::Index m = a.cols();
  if (m == 0) {
    out.coef = VectorXc(0);
    out.value = n > 0 ? f.cwiseAbs().maxCoeff() : 0.0;
    out.converged = true;
    return out;
  }
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double best = INFINITY;
  for (int it = 0; it < std::max(1, max_iter); ++it) {
    VectorXc c;
    if (it == 0 && warm != nullptr) {
      c = *warm;
    } else {
      const Eigen::VectorXd sw = w.cwiseSqrt();
      const MatrixXc wa = sw.asDiagonal() * a;
      const VectorXc wf = sw.asDiagonal() * f;
      c = -wa.householderQr().solve(wf);
    }
    const VectorXc r = f + a * c;
    const Eigen::VectorXd absr = r.cwiseAbs();
    const double obj = absr.maxCoeff();
    out.history.push_back(obj);
    out.iterations = it + 1;
    if (obj < best) {
      best = obj;
      out.coef = c;
    }
    if (obj == 0.0) {
      out.converged = true;
      break;
    }

    Eigen::VectorXd wn = w.cwiseProduct(absr).cwiseMax(kWeightFloor);
    wn /= wn.sum();
    // an unchanged weight vector reproduces the same iterate forever
    const bool fixed_point = (wn - w).cwiseAbs().maxCoeff() <= 1e-13 * w.maxCoeff();
    w = std::move(wn);
    if (fixed_point) {
      out.converged = true;
      break;
    }
    const auto& h = out.history;
    if (h.size() >= 6) {
      bool stable = true;
      for (std::size_t s = h.size() - 5; s < h.size(); ++s)
        stable = stable && std::abs(h[s] - h[s - 1]) <= tol * h[s];
      if (stable) {
        out.converged = true;
        break;
      }
    }
  }
  out.value = (f + a * out.coef).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace detail

inline MinimaxSolution solve_minimax(const MinimaxProblem& problem, const MinimaxOptions& opt = {}) {
  const auto& pts = problem.k.points();
  const std::size_t m = problem.free_basis.size();
  const VectorXc f0 = polynomial_values(pts, problem.fixed_part);

  MinimaxSolution sol{{}, 0.0, 0, {}, true, problem.fixed_part};
  if (m == 0) {
    if (problem.constraint) throw StructuralError("constraint given without free coefficients");
    sol.value = sup_norm(problem.fixed_part, problem.k);
    return sol;
  }
  if (pts.size() < m + 1)
    throw StructuralError("minimax needs |K| >= number of free coefficients + 1");

  const MatrixXc a = polynomial_matrix(pts, problem.free_basis);
  if (scaled_column_rank(a) < static_cast<Eigen::Index>(m))
    throw StructuralError("free basis is rank deficient on K");

  VectorXc coef(static_cast<Eigen::Index>(m));
  detail::LawsonOutcome run;
  if (!problem.constraint) {
    run = detail::lawson(f0, a, opt.tol, opt.max_iter);
    coef = run.coef;
  } else {
    const auto& g = problem.constraint->functional;
    if (g.size() != m) throw StructuralError("constraint functional has wrong length");
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return std::abs(g[x]) > std::abs(g[y]); });
    std::optional<std::size_t> pivot;
    for (std::size_t q : order)
      if (g[q] != cplx{}) {
        pivot = q;
        break;
      }
    if (!pivot) throw PivotError("constraint functional vanishes on every free coordinate");
    const std::size_t q = *pivot;
    const auto qi = static_cast<Eigen::Index>(q);
    const cplx gq = g[q];
    const cplx target = problem.constraint->target;

    // c_q = (target - sum_{i != q} g_i c_i) / g_q
    const VectorXc f = f0 + (target / gq) * a.col(qi);
    MatrixXc reduced(a.rows(), static_cast<Eigen::Index>(m - 1));
    for (std::size_t i = 0, col = 0; i < m; ++i) {
      if (i == q) continue;
      reduced.col(static_cast<Eigen::Index>(col++)) = a.col(static_cast<Eigen::Index>(i)) - (g[i] / gq) * a.col(qi);
    }
    run = detail::lawson(f, reduced, opt.tol, opt.max_iter);
    cplx acc = target;
    for (std::size_t i = 0, col = 0; i < m; ++i) {
      if (i == q) continue;
      coef(static_cast<Eigen::Index>(i)) = run.coef(static_cast<Eigen::Index>(col++));
      acc -= g[i] * coef(static_cast<Eigen::Index>(i));
    }
    coef(qi) = acc / gq;
  }

  sol.coefficients.assign(coef.data(), coef.data() + coef.size());
  sol.iterations = run.iterations;
  sol.residual_history = std::move(run.history);
  sol.converged = run.converged;
  for (std::size_t i = 0; i < m; ++i) sol.polynomial += sol.coefficients[i] * problem.free_basis[i];
  sol.value = (f0 + a * coef).cwiseAbs().maxCoeff();
  return sol;
}

/// Monomials of nC preceding alpha in the monic-class order.
inline std::vector<MultiIndex> monomials_below(const TriangleBody& body, const MultiIndex& alpha) {
  std::vector<MultiIndex> out;
  for (const auto& m : enumerate_basis(body, deg_c(body, alpha)).indices)
    if (precedes(body, m, alpha)) out.push_back(m);
  return out;
}

inline std::vector<CPolynomial> monomial_polys(const TriangleBody& body, const std::vector<MultiIndex>& idx) {
  std::vector<CPolynomial> out;
  out.reserve(idx.size());
  for (const auto& m : idx) out.push_back(CPolynomial::monomial(body, m));
  return out;
}

struct ChebyshevResult {
  CPolynomial polynomial;
  double norm = 0.0;
  MinimaxSolution solution;
};

/// Minimal sup-norm member of the monic class z^alpha + (terms preceding alpha)
/// in Poly(kC). Returns the raw norm; T_k = norm^(1/k) is left to callers.
inline ChebyshevResult chebyshev_monic(const TriangleBody& body, std::int64_t k, const MultiIndex& alpha,
                                       const DiscreteCompact& compact, const MinimaxOptions& opt = {}) {
  if (!body.contains(alpha, k)) throw StructuralError("chebyshev_monic: alpha must lie in kC");
  // every beta preceding alpha has deg_C(beta) <= deg_C(alpha) <= k
  MinimaxProblem prob{CPolynomial::monomial(body, alpha), monomial_polys(body, monomials_below(body, alpha)),
                      compact, std::nullopt};
  auto sol = solve_minimax(prob, opt);
  auto poly = sol.polynomial;
  const double norm = sol.value;
  return {std::move(poly), norm, std::move(sol)};
}

/// Minimal-norm completion h + p_{n-1} of a top-line homogeneous h. The
/// minimizer need not be unique; only the value is canonical.
inline ChebyshevResult tch_projection(const TriangleBody& body, const CPolynomial& h,
                                      const DiscreteCompact& compact, const MinimaxOptions& opt = {}) {
  if (h.is_zero()) throw StructuralError("tch_projection: h must be nonzero");
  const std::int64_t n = h.cdeg();
  for (const auto& [m, c] : h.terms())
    if (body.level(m) != n * body.ab())
      throw StructuralError("tch_projection: h must be C-homogeneous of its degree");
  std::vector<MultiIndex> lower;
  if (n >= 1) lower = enumerate_basis(body, n - 1).indices;
  MinimaxProblem prob{h, monomial_polys(body, lower), compact, std::nullopt};
  auto sol = solve_minimax(prob, opt);
  auto poly = sol.polynomial;
  const double norm = sol.value;
  return {std::move(poly), norm, std::move(sol)};
}

struct KappaResult {
  double value = 0.0;
  MinimaxSolution solution;
};

/// inf ||p||_K over p in Poly(nC) with hat(p)(zeta) = 1. nullopt when every
/// top-line monomial vanishes at zeta.
inline std::optional<KappaResult> kappa_n(const TriangleBody& body, const DiscreteCompact& compact,
                                          const CPoint& zeta, std::int64_t n, const MinimaxOptions& opt = {}) {
  if (n < 1) throw StructuralError("kappa_n: degree must be >= 1");
  const auto basis = enumerate_basis(body, n);
  LinearConstraint con;
  con.functional.reserve(basis.size());
  bool feasible = false;
  for (const auto& m : basis.indices) {
    cplx g{};
    if (body.level(m) == n * body.ab()) g = ipow(zeta.z1, m.j) * ipow(zeta.z2, m.k);
    feasible = feasible || g != cplx{};
    con.functional.push_back(g);
  }
  if (!feasible) return std::nullopt;
  MinimaxProblem prob{CPolynomial(body), monomial_polys(body, basis.indices), compact, con};
  auto sol = solve_minimax(prob, opt);
  const double v = sol.value;
  return KappaResult{v, std::move(sol)};
}

struct TauEstimate {
  std::vector<std::int64_t> degrees;
  std::vector<MultiIndex> alphas;
  std::vector<double> raw_norms;
  std::vector<double> roots;  // raw^(1/k)
  double estimate = 0.0;      // value at the largest k
};

inline TauEstimate tau_direction(const TriangleBody& body, const DiscreteCompact& compact,
                                 const HypotenuseDirection& dir, const std::vector<std::int64_t>& k_list,
                                 const MinimaxOptions& opt = {}) {
  if (k_list.empty()) throw StructuralError("tau_direction: degree list must be nonempty");
  if (!std::is_sorted(k_list.begin(), k_list.end()) || k_list.front() < 1)
    throw StructuralError("tau_direction: degrees must be ascending and >= 1");
  TauEstimate out;
  for (std::int64_t k : k_list) {
    const MultiIndex alpha = direction_index(body, dir, k);
    const auto res = chebyshev_monic(body, k, alpha, compact, opt);
    out.degrees.push_back(k);
    out.alphas.push_back(alpha);
    out.raw_norms.push_back(res.norm);
    out.roots.push_back(std::pow(res.norm, 1.0 / static_cast<double>(k)));
  }
  out.estimate = out.roots.back();
  return out;
}

}  // namespace cpx
