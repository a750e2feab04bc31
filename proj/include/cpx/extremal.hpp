#pragma once

// Extremal- and Robin-function estimators built from finite polynomial
// families, the Gram-Schmidt families of a discrete measure, and the
// directional-Chebyshev estimate of the transfinite diameter.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpx/cpoly.hpp"
#include "cpx/domain.hpp"
#include "cpx/error.hpp"
#include "cpx/lattice.hpp"
#include "cpx/linalg.hpp"
#include "cpx/minimax.hpp"
#include "cpx/parallel.hpp"

namespace cpx {

/// max(b log+|z1|, a log+|z2|).
inline double h_c(const TriangleBody& body, const CPoint& z) {
  const double x = std::max(0.0, std::log(std::abs(z.z1)));
  const double y = std::max(0.0, std::log(std::abs(z.z2)));
  return std::max(static_cast<double>(body.b()) * x, static_cast<double>(body.a()) * y);
}

struct ScalarField {
  std::vector<CPoint> grid;
  std::vector<double> values;
  std::string label;
  std::vector<std::string> notes;
};

enum class Provenance { chebyshev, l2_orthonormal, l2_monic, lagrange_difference, monomial, custom };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::chebyshev: return "chebyshev";
    case Provenance::l2_orthonormal: return "l2-orthonormal";
    case Provenance::l2_monic: return "l2-monic";
    case Provenance::lagrange_difference: return "lagrange-difference";
    case Provenance::monomial: return "monomial";
    case Provenance::custom: return "custom";
  }
  return "custom";
}

struct FamilyMember {
  CPolynomial poly;
  std::int64_t degree_used = 1;
  double norm_on_k = 1.0;
};

struct PolynomialFamily {
  std::vector<FamilyMember> members;
  Provenance provenance = Provenance::custom;
};

/// Member with degree_used = max(1, deg_C) and its sup norm on K. Zero
/// polynomials are rejected.
inline FamilyMember make_member(const CPolynomial& p, const DiscreteCompact& k) {
  if (p.is_zero()) throw StructuralError("family members must be nonzero");
  return {p, std::max<std::int64_t>(1, p.cdeg()), sup_norm(p, k)};
}

/// Finite-family surrogate for the extremal function:
/// max over members of (log|p(z)| - log||p||_K) / degree_used.
inline ScalarField upper_envelope(const PolynomialFamily& family, const std::vector<CPoint>& grid) {
  if (family.members.empty()) throw StructuralError("upper_envelope: family is empty");
  ScalarField out{grid, std::vector<double>(grid.size(), kNegInf), "upper envelope", {}};
  parallel_for(grid.size(), [&](std::size_t i) {
    double best = kNegInf;
    for (const auto& m : family.members) {
      const double v = (evaluate_logabs(m.poly, grid[i]) - std::log(m.norm_on_k)) / static_cast<double>(m.degree_used);
      best = std::max(best, v);
    }
    out.values[i] = best;
  }, 16);
  return out;
}

/// Robin surrogate on the boundary of the bidisk from the hats of the members.
/// Members whose hat vanishes identically are skipped.
inline ScalarField robin_envelope(const PolynomialFamily& family, const std::vector<CPoint>& boundary) {
  if (family.members.empty()) throw StructuralError("robin_envelope: family is empty");
  struct Hat {
    CPolynomial h;
    double shift;
    double scale;
  };
  std::vector<Hat> hats;
  std::size_t skipped = 0, constants = 0;
  for (const auto& m : family.members) {
    // a constant's direct limit is -inf, not the 0 its degree_used of 1 would give
    if (m.poly.cdeg() == 0) {
      ++constants;
      continue;
    }
    auto h = hat(m.poly);
    if (h.is_zero()) {
      ++skipped;
      continue;
    }
    hats.push_back({std::move(h), std::log(m.norm_on_k), 1.0 / static_cast<double>(m.degree_used)});
  }
  ScalarField out{boundary, std::vector<double>(boundary.size(), kNegInf), "robin envelope", {}};
  if (skipped > 0) out.notes.push_back("skipped " + std::to_string(skipped) + " member(s) with vanishing hat");
  if (constants > 0) out.notes.push_back("skipped " + std::to_string(constants) + " constant member(s)");
  parallel_for(boundary.size(), [&](std::size_t i) {
    double best = kNegInf;
    for (const auto& h : hats) best = std::max(best, (evaluate_logabs(h.h, boundary[i]) - h.shift) * h.scale);
    out.values[i] = best;
  }, 16);
  return out;
}

inline ScalarField robin_envelope(const PolynomialFamily& family, const BoundaryGrid& boundary) {
  return robin_envelope(family, boundary.points);
}

/// V(lambda o zeta) - ab log|lambda| for each lambda = |lambda| (phase 1).
inline std::vector<double> robin_direct(const TriangleBody& body, const std::function<double(const CPoint&)>& v,
                                        const CPoint& zeta, const std::vector<double>& lambda_abs) {
  if (!std::is_sorted(lambda_abs.begin(), lambda_abs.end()) || lambda_abs.empty() || lambda_abs.front() < 10.0)
    throw StructuralError("robin_direct: magnitudes must be ascending and >= 10");
  std::vector<double> out;
  out.reserve(lambda_abs.size());
  for (double lam : lambda_abs)
    out.push_back(v(circle_act(body, cplx{lam, 0.0}, zeta)) - static_cast<double>(body.ab()) * std::log(lam));
  return out;
}

namespace detail {

struct GramSchmidtResult {
  std::vector<MultiIndex> monomials;
  MatrixXc orthonormal;  // column s: coefficients of the s-th orthonormal polynomial
  MatrixXc monic;        // column s: coefficients of z^alpha_s minus its projection
  MatrixXc gram;         // Gram matrix of the orthonormal family in L2(mu)
};

/// Modified Gram-Schmidt (two passes) of the monomials of n_max C in the
/// L2(mu) inner product, tracking coefficients.
inline GramSchmidtResult gram_schmidt(const TriangleBody& body, const DiscreteMeasure& mu, std::int64_t n_max) {
  const auto basis = enumerate_basis(body, n_max);
  const auto& pts = mu.support().points();
  const auto nb = static_cast<Eigen::Index>(basis.size());
  if (static_cast<Eigen::Index>(pts.size()) < nb)
    throw StructuralError("orthonormal family: support has fewer points than the basis dimension");

  Eigen::VectorXd sw(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) sw(static_cast<Eigen::Index>(i)) = std::sqrt(mu.weights()[i]);
  const MatrixXc e = sw.asDiagonal() * monomial_matrix(pts, basis.indices);

  MatrixXc q(e.rows(), nb);  // weighted values of the orthonormal polynomials
  GramSchmidtResult out{basis.indices, MatrixXc::Zero(nb, nb), MatrixXc::Zero(nb, nb), {}};
  for (Eigen::Index s = 0; s < nb; ++s) {
    VectorXc v = e.col(s);
    VectorXc coef = VectorXc::Zero(nb);
    coef(s) = 1.0;
    const double original = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index t = 0; t < s; ++t) {
        const cplx h = q.col(t).dot(v);  // <v, q_t> (dot conjugates the first argument)
        v -= h * q.col(t);
        coef -= h * out.orthonormal.col(t);
      }
    const double nrm = v.norm();
    if (!(nrm > 1e-10 * original)) {
      const auto& m = basis.indices[static_cast<std::size_t>(s)];
      throw StructuralError("Gram matrix is rank deficient: monomial z1^" + std::to_string(m.j) + " z2^" +
                            std::to_string(m.k) + " depends on its predecessors");
    }
    out.monic.col(s) = coef;
    q.col(s) = v / nrm;
    out.orthonormal.col(s) = coef / nrm;
  }
  out.gram = q.adjoint() * q;
  return out;
}

inline PolynomialFamily family_from_columns(const TriangleBody& body, const std::vector<MultiIndex>& monomials,
                                            const MatrixXc& columns, const DiscreteCompact& k, Provenance prov,
                                            bool monic_leading) {
  PolynomialFamily fam;
  fam.provenance = prov;
  const MatrixXc values = monomial_matrix(k.points(), monomials) * columns;
  for (std::size_t s = 0; s < monomials.size(); ++s) {
    const std::vector<MultiIndex> used(monomials.begin(), monomials.begin() + static_cast<std::ptrdiff_t>(s + 1));
    VectorXc c = columns.col(static_cast<Eigen::Index>(s)).head(static_cast<Eigen::Index>(s + 1));
    if (monic_leading) c(static_cast<Eigen::Index>(s)) = 1.0;
    FamilyMember m{from_coefficients(body, used, c), std::max<std::int64_t>(1, deg_c(body, monomials[s])),
                   values.col(static_cast<Eigen::Index>(s)).cwiseAbs().maxCoeff()};
    fam.members.push_back(std::move(m));
  }
  return fam;
}

}  // namespace detail

/// Orthonormal polynomials in L2(mu), Gram-Schmidt over the monomials in the
/// monic-class order.
inline PolynomialFamily orthonormal_family(const TriangleBody& body, const DiscreteMeasure& mu, std::int64_t n_max) {
  const auto gs = detail::gram_schmidt(body, mu, n_max);
  return detail::family_from_columns(body, gs.monomials, gs.orthonormal, mu.support(), Provenance::l2_orthonormal, false);
}

/// Max off-diagonal modulus of the Gram matrix of the orthonormal family.
inline double orthonormal_residual(const TriangleBody& body, const DiscreteMeasure& mu, std::int64_t n_max) {
  const auto gs = detail::gram_schmidt(body, mu, n_max);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < gs.gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gs.gram.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(gs.gram(i, j)));
  return worst;
}

/// Monic polynomials of minimal L2(mu) norm: z^alpha minus its projection on
/// the preceding monomials.
inline PolynomialFamily l2_monic_family(const TriangleBody& body, const DiscreteMeasure& mu, std::int64_t n_max) {
  const auto gs = detail::gram_schmidt(body, mu, n_max);
  return detail::family_from_columns(body, gs.monomials, gs.monic, mu.support(), Provenance::l2_monic, true);
}

inline PolynomialFamily monomial_family(const TriangleBody& body, const DiscreteCompact& k, std::int64_t n_max) {
  const auto basis = enumerate_basis(body, n_max);
  PolynomialFamily fam;
  fam.provenance = Provenance::monomial;
  const MatrixXc values = monomial_matrix(k.points(), basis.indices);
  for (std::size_t s = 0; s < basis.size(); ++s)
    fam.members.push_back({CPolynomial::monomial(body, basis.indices[s]), std::max<std::int64_t>(1, basis.degrees[s]),
                           values.col(static_cast<Eigen::Index>(s)).cwiseAbs().maxCoeff()});
  return fam;
}

struct ChebyshevFamily {
  PolynomialFamily family;
  std::vector<MinimaxSolution> solutions;
};

/// Chebyshev polynomials t_{k,alpha} for every alpha in n_max C with
/// k = deg_C(alpha). All problems share one evaluation matrix; the
/// uniform-weight least-squares start of every problem is read off a single
/// QR factorization (the free bases are nested prefixes).
inline ChebyshevFamily chebyshev_family(const TriangleBody& body, const DiscreteCompact& k, std::int64_t n_max,
                                        const MinimaxOptions& opt = {}) {
  const auto basis = enumerate_basis(body, n_max);
  const auto nb = static_cast<Eigen::Index>(basis.size());
  const auto& pts = k.points();
  if (static_cast<Eigen::Index>(pts.size()) < nb + 1)
    throw StructuralError("chebyshev_family: K needs more points than the basis dimension");
  const MatrixXc e = monomial_matrix(pts, basis.indices);
  if (scaled_column_rank(e) < nb) throw StructuralError("chebyshev_family: monomials are dependent on K");
  Eigen::HouseholderQR<MatrixXc> qr(e);
  const MatrixXc r = qr.matrixQR().topRows(nb).triangularView<Eigen::Upper>();

  ChebyshevFamily out;
  out.family.provenance = Provenance::chebyshev;
  for (Eigen::Index s = 0; s < nb; ++s) {
    const VectorXc f = e.col(s);
    const MatrixXc a = e.leftCols(s);
    VectorXc warm(s);
    if (s > 0) warm = -r.topLeftCorner(s, s).triangularView<Eigen::Upper>().solve(r.col(s).head(s));
    const auto run = detail::lawson(f, a, opt.tol, opt.max_iter, &warm);

    const std::vector<MultiIndex> used(basis.indices.begin(), basis.indices.begin() + s);
    CPolynomial p = from_coefficients(body, used, run.coef);
    p.add_term(basis.indices[static_cast<std::size_t>(s)], 1.0);
    MinimaxSolution sol{std::vector<cplx>(run.coef.data(), run.coef.data() + run.coef.size()),
                        run.value, run.iterations, run.history, run.converged, p};
    out.family.members.push_back({p, std::max<std::int64_t>(1, basis.degrees[static_cast<std::size_t>(s)]), run.value});
    out.solutions.push_back(std::move(sol));
  }
  return out;
}

/// Composite midpoint nodes on (0, 1).
inline std::vector<HypotenuseDirection> midpoint_nodes(std::size_t count) {
  if (count == 0) throw StructuralError("midpoint_nodes: count must be >= 1");
  std::vector<HypotenuseDirection> out;
  for (std::size_t i = 0; i < count; ++i)
    out.emplace_back((static_cast<double>(i) + 0.5) / static_cast<double>(count));
  return out;
}

struct ZaharjutaEstimate {
  std::vector<double> t;
  std::vector<double> tau;
  double log_delta = 0.0;
  double delta = 0.0;
};

/// exp of the arclength average of log tau over the hypotenuse. With
/// theta(t) the arclength element is sqrt(a^2+b^2) dt, which cancels the
/// normalization, leaving the plain mean over equal-weight nodes.
inline ZaharjutaEstimate delta_zaharjuta(const TriangleBody& body, const DiscreteCompact& k,
                                         const std::vector<HypotenuseDirection>& t_nodes,
                                         const std::vector<std::int64_t>& k_list, const MinimaxOptions& opt = {}) {
  if (t_nodes.empty()) throw StructuralError("delta_zaharjuta: no quadrature nodes");
  ZaharjutaEstimate out;
  const double w = 1.0 / static_cast<double>(t_nodes.size());
  for (const auto& dir : t_nodes) {
    const auto tau = tau_direction(body, k, dir, k_list, opt);
    if (!(tau.estimate > 0.0)) throw StructuralError("delta_zaharjuta: degenerate set (tau = 0)");
    out.t.push_back(dir.t());
    out.tau.push_back(tau.estimate);
    out.log_delta += w * std::log(tau.estimate);
  }
  out.delta = std::exp(out.log_delta);
  return out;
}

/// Splits z = lambda o zeta with zeta on the bidisk boundary and lambda > 0.
/// Returns nullopt for z = 0.
inline std::optional<std::pair<CPoint, double>> boundary_projection(const TriangleBody& body, const CPoint& z) {
  const double t = std::max(std::pow(std::abs(z.z1), 1.0 / static_cast<double>(body.a())),
                            std::pow(std::abs(z.z2), 1.0 / static_cast<double>(body.b())));
  if (!(t > 0.0)) return std::nullopt;
  const CPoint zeta{z.z1 / std::pow(t, static_cast<double>(body.a())), z.z2 / std::pow(t, static_cast<double>(body.b()))};
  return std::make_pair(zeta, std::log(t));
}

/// Robin envelope off the boundary via rho(lambda o zeta) = rho(zeta) + ab log|lambda|.
inline ScalarField robin_extended(const TriangleBody& body, const PolynomialFamily& family,
                                  const std::vector<CPoint>& grid) {
  std::vector<CPoint> zetas;
  std::vector<double> shifts;
  for (const auto& z : grid) {
    const auto proj = boundary_projection(body, z);
    zetas.push_back(proj ? proj->first : CPoint{});
    shifts.push_back(proj ? static_cast<double>(body.ab()) * proj->second : kNegInf);
  }
  auto field = robin_envelope(family, zetas);
  field.grid = grid;
  for (std::size_t i = 0; i < grid.size(); ++i) field.values[i] = shifts[i] == kNegInf ? kNegInf : field.values[i] + shifts[i];
  field.label = "robin envelope (homogeneous extension)";
  return field;
}

struct CircledReport {
  double closure_defect = 0.0;
  double max_discrepancy = 0.0;        // sup |V - max(rho, 0)| over the grid
  std::optional<double> max_reference_error;  // sup |V - reference| when a reference is given
  ScalarField envelope;
  ScalarField robin_plus;
  ScalarField boundary_robin;
};

inline CircledReport circled_identity_check(const TriangleBody& body, const DiscreteCompact& k,
                                            const PolynomialFamily& family, const std::vector<CPoint>& grid,
                                            const BoundaryGrid& boundary,
                                            const std::function<double(const CPoint&)>& reference = {}) {
  if (!k.circled()) throw StructuralError("circled_identity_check: K is not flagged as circled");
  const auto closure = circled_closure_test(body, k, 8);
  if (!closure.passed) throw StructuralError("circled_identity_check: K fails the circled-closure test");
  CircledReport rep;
  rep.closure_defect = closure.max_defect;
  rep.envelope = upper_envelope(family, grid);
  rep.robin_plus = robin_extended(body, family, grid);
  for (auto& v : rep.robin_plus.values) v = std::max(v, 0.0);
  rep.robin_plus.label = "max(robin, 0)";
  rep.boundary_robin = robin_envelope(family, boundary);
  for (std::size_t i = 0; i < grid.size(); ++i)
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(rep.envelope.values[i] - rep.robin_plus.values[i]));
  if (reference) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::abs(rep.envelope.values[i] - reference(grid[i])));
    rep.max_reference_error = worst;
  }
  return rep;
}

/// Extremal function of the Reinhardt set whose outer torus has radii (r1, r2):
/// max(b log+(|z1|/r1), a log+(|z2|/r2)).
inline double bidisk_extremal(const TriangleBody& body, double r1, double r2, const CPoint& z) {
  return h_c(body, {z.z1 / r1, z.z2 / r2});
}

struct FamilyValidation {
  double norm_growth = 0.0;     // max (1/deg) log ||p||_K
  double robin_error = 0.0;     // max |robin envelope - reference rho| off axis points
  double envelope_error = 0.0;  // max |upper envelope - reference V| on the grid
  bool hypotheses_hold = false;
  bool conclusion_holds = false;
};

/// Finite-stage check of the recovery criterion: bounded normalized norms and
/// a Robin envelope matching the reference should give an upper envelope
/// matching the reference extremal function within 2 * eps.
inline FamilyValidation validate_family(const PolynomialFamily& family, const BoundaryGrid& boundary,
                                        const std::vector<CPoint>& grid,
                                        const std::function<double(const CPoint&)>& reference_rho,
                                        const std::function<double(const CPoint&)>& reference_v, double eps) {
  FamilyValidation out;
  out.norm_growth = kNegInf;
  for (const auto& m : family.members)
    out.norm_growth = std::max(out.norm_growth, std::log(m.norm_on_k) / static_cast<double>(m.degree_used));
  const auto rho = robin_envelope(family, boundary);
  for (std::size_t i = 0; i < rho.grid.size(); ++i) {
    if (BoundaryGrid::on_axis(rho.grid[i])) continue;
    out.robin_error = std::max(out.robin_error, std::abs(rho.values[i] - reference_rho(rho.grid[i])));
  }
  const auto env = upper_envelope(family, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.envelope_error = std::max(out.envelope_error, std::abs(env.values[i] - reference_v(grid[i])));
  out.hypotheses_hold = out.norm_growth <= eps && out.robin_error <= eps;
  out.conclusion_holds = out.envelope_error <= 2.0 * eps;
  return out;
}

}  // namespace cpx
