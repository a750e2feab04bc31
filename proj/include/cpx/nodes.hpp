#pragma once

// Vandermonde machinery: log|VDM|, greedy Fekete and Leja selection,
// transfinite-diameter estimates, Lagrange bases and Lebesgue constants.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "cpx/cpoly.hpp"
#include "cpx/domain.hpp"
#include "cpx/error.hpp"
#include "cpx/lattice.hpp"
#include "cpx/linalg.hpp"

namespace cpx {

/// Selected points, in selection order, together with the basis prefix they
/// were selected against. `log_pivots[s]` is log|pivot| at step s;
/// `log_vdm` is the running sum plus any basis-change offset.
struct NodeSet {
  std::vector<CPoint> points;
  std::vector<std::size_t> source_indices;
  MultiIndexBasis basis;
  std::vector<double> log_pivots;
  double log_vdm = 0.0;

  /// Monomials matched with the selected points (first |points| of the basis).
  std::vector<MultiIndex> active_monomials() const {
    return {basis.indices.begin(), basis.indices.begin() + static_cast<std::ptrdiff_t>(points.size())};
  }
};

/// log|det[e_i(z_j)]| via fully pivoted LU; -inf for singular configurations.
inline double vdm_logabs(std::span<const CPoint> points, std::span<const MultiIndex> monomials) {
  if (points.size() != monomials.size())
    throw StructuralError("vdm_logabs: need as many points as basis monomials");
  return logabs_det(monomial_matrix(points, monomials));
}

inline double vdm_logabs(std::span<const CPoint> points, const MultiIndexBasis& basis) {
  return vdm_logabs(points, std::span<const MultiIndex>(basis.indices));
}

namespace detail {

/// Index of the largest value; values within a relative 1e-12 of the maximum
/// count as ties and resolve to the lowest index.
inline std::size_t argmax_with_ties(const std::vector<double>& v, const std::vector<bool>& taken) {
  double top = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!taken[i]) top = std::max(top, v[i]);
  const double cut = top * (1.0 - 1e-12);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!taken[i] && v[i] >= cut) return i;
  return v.size();
}

}  // namespace detail

/// Approximate Fekete points: the evaluation matrix is first orthonormalized
/// over K (so the selection depends only on the span, not on the scaling of
/// the monomials), then points are chosen by greedy column pivoting.
inline NodeSet greedy_fekete(const TriangleBody& body, const DiscreteCompact& compact, std::int64_t n) {
  auto basis = enumerate_basis(body, n);
  const auto& pts = compact.points();
  const std::size_t nb = basis.size();
  if (pts.size() < nb)
    throw StructuralError("greedy_fekete: K has fewer points than the basis dimension");

  const MatrixXc v = monomial_matrix(pts, basis.indices);  // |K| x N
  Eigen::HouseholderQR<MatrixXc> qr(v);
  const MatrixXc r = qr.matrixQR().topRows(static_cast<Eigen::Index>(nb)).triangularView<Eigen::Upper>();
  double offset = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    const double d = std::abs(r(i, i));
    if (d == 0.0) throw StructuralError("greedy_fekete: basis is degenerate on K");
    offset += std::log(d);
  }
  // rows of q are the points in orthonormal coordinates
  MatrixXc q = qr.householderQ() * MatrixXc::Identity(v.rows(), static_cast<Eigen::Index>(nb));

  NodeSet out{{}, {}, basis, {}, 0.0};
  std::vector<bool> taken(pts.size(), false);
  std::vector<double> norms(pts.size());
  double acc = offset;
  for (std::size_t s = 0; s < nb; ++s) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      norms[i] = taken[i] ? 0.0 : q.row(static_cast<Eigen::Index>(i)).norm();
    const std::size_t pick = detail::argmax_with_ties(norms, taken);
    const double piv = norms[pick];
    if (!(piv > 0.0)) throw StructuralError("greedy_fekete: K is not unisolvent for the basis");
    taken[pick] = true;
    const Eigen::RowVectorXcd dir = q.row(static_cast<Eigen::Index>(pick)) / piv;
    // remove the chosen direction from every remaining row
    const VectorXc proj = q * dir.adjoint();
    q.noalias() -= proj * dir;
    out.points.push_back(pts[pick]);
    out.source_indices.push_back(pick);
    out.log_pivots.push_back(std::log(piv));
    acc += std::log(piv);
  }
  out.log_vdm = acc;
  return out;
}

/// Estimates V_n^{1/l_n} from greedy Fekete selections, one entry per degree.
inline std::vector<std::pair<std::int64_t, double>> delta_estimate_vdm(const TriangleBody& body,
                                                                       const DiscreteCompact& compact,
                                                                       const std::vector<std::int64_t>& n_list) {
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw StructuralError("delta_estimate_vdm: degrees must be ascending");
  std::vector<std::pair<std::int64_t, double>> out;
  for (std::int64_t n : n_list) {
    if (n < 1) throw StructuralError("delta_estimate_vdm: degrees must be >= 1 (l_0 = 0)");
    const auto nodes = greedy_fekete(body, compact, n);
    out.emplace_back(n, std::exp(nodes.log_vdm / static_cast<double>(nodes.basis.l_n)));
  }
  return out;
}

/// Leja sequence by LU with partial pivoting on the evaluation matrix: point
/// s+1 maximizes the remainder of the next basis monomial after
/// interpolation at the first s points.
inline NodeSet leja_sequence(const TriangleBody& body, const DiscreteCompact& compact, std::size_t count) {
  if (count == 0) throw StructuralError("leja_sequence: count must be >= 1");
  std::int64_t n = 0;
  while (enumerate_basis(body, n).size() < count) ++n;
  auto basis = enumerate_basis(body, n);
  const auto& pts = compact.points();
  if (pts.size() < count) throw StructuralError("leja_sequence: K has fewer points than requested");

  std::vector<MultiIndex> cols(basis.indices.begin(), basis.indices.begin() + static_cast<std::ptrdiff_t>(count));
  MatrixXc a = monomial_matrix(pts, cols);
  NodeSet out{{}, {}, basis, {}, 0.0};
  std::vector<bool> taken(pts.size(), false);
  std::vector<double> mags(pts.size());
  for (std::size_t s = 0; s < count; ++s) {
    const auto cs = static_cast<Eigen::Index>(s);
    for (std::size_t i = 0; i < pts.size(); ++i) mags[i] = taken[i] ? 0.0 : std::abs(a(static_cast<Eigen::Index>(i), cs));
    const std::size_t pick = detail::argmax_with_ties(mags, taken);
    const cplx piv = a(static_cast<Eigen::Index>(pick), cs);
    if (piv == cplx{}) throw StructuralError("leja_sequence: K is not unisolvent for the basis prefix");
    taken[pick] = true;
    if (s + 1 < count) {
      const Eigen::Index rest = static_cast<Eigen::Index>(count - s - 1);
      const Eigen::RowVectorXcd prow = a.row(static_cast<Eigen::Index>(pick)).tail(rest) / piv;
      const VectorXc colv = a.col(cs);
      a.rightCols(rest).noalias() -= colv * prow;
    }
    out.points.push_back(pts[pick]);
    out.source_indices.push_back(pick);
    out.log_pivots.push_back(std::log(std::abs(piv)));
    out.log_vdm += out.log_pivots.back();
  }
  return out;
}

/// Cardinal polynomials l_j with l_j(node_k) = delta_jk over the active basis.
struct LagrangeBasis {
  NodeSet nodes;
  std::vector<CPolynomial> cardinals;
  MatrixXc coefficients;  // column j holds the coefficients of l_j
};

inline LagrangeBasis lagrange_basis(const NodeSet& nodes) {
  const auto mons = nodes.active_monomials();
  const MatrixXc v = monomial_matrix(nodes.points, mons);  // v(j, s) = e_s(node_j)
  Eigen::FullPivLU<MatrixXc> lu(v);
  if (lu.rank() < v.rows()) throw UnisolvenceError("lagrange_basis: nodes are not unisolvent");
  LagrangeBasis out{nodes, {}, lu.inverse()};
  for (Eigen::Index j = 0; j < v.rows(); ++j)
    out.cardinals.push_back(from_coefficients(nodes.basis.body, mons, out.coefficients.col(j)));
  return out;
}

/// max over K of sum_j |l_j(z)|.
inline double lebesgue_constant(const LagrangeBasis& lb, const DiscreteCompact& compact) {
  const MatrixXc vals = monomial_matrix(compact.points(), lb.nodes.active_monomials()) * lb.coefficients;
  return vals.cwiseAbs().rowwise().sum().maxCoeff();
}

/// p_s = z^{alpha(s)} - L_{s-1}(z^{alpha(s)}) for s = 2..s_max, interpolating
/// at the first s-1 Leja points over the first s-1 basis monomials.
inline std::vector<CPolynomial> lagrange_difference_family(const TriangleBody& body, const NodeSet& leja,
                                                           std::size_t s_max) {
  if (leja.points.size() < s_max) throw StructuralError("lagrange_difference_family: not enough Leja points");
  std::int64_t n = 0;
  while (enumerate_basis(body, n).size() < s_max) ++n;
  const auto basis = enumerate_basis(body, n);
  std::vector<CPolynomial> out;
  for (std::size_t s = 2; s <= s_max; ++s) {
    const MultiIndex alpha = basis.indices[s - 1];
    std::vector<MultiIndex> prev(basis.indices.begin(), basis.indices.begin() + static_cast<std::ptrdiff_t>(s - 1));
    std::vector<CPoint> nodes(leja.points.begin(), leja.points.begin() + static_cast<std::ptrdiff_t>(s - 1));
    const MatrixXc v = monomial_matrix(nodes, prev);
    const VectorXc rhs = monomial_matrix(nodes, std::vector<MultiIndex>{alpha}).col(0);
    Eigen::FullPivLU<MatrixXc> lu(v);
    if (lu.rank() < v.rows()) throw UnisolvenceError("lagrange_difference_family: Leja prefix is not unisolvent");
    const VectorXc c = lu.solve(rhs);
    CPolynomial p = CPolynomial::monomial(body, alpha);
    p -= from_coefficients(body, prev, c);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace cpx
