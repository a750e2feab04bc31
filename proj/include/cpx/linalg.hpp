#pragma once

// Evaluation matrices and log-scale determinant helpers on top of Eigen.

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <vector>

#include "cpx/cpoly.hpp"
#include "cpx/lattice.hpp"

namespace cpx {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// M(i, s) = z_i^{m_s}: rows are points, columns are monomials.
inline MatrixXc monomial_matrix(std::span<const CPoint> points, std::span<const MultiIndex> monomials) {
  std::int64_t max_j = 0, max_k = 0;
  for (const auto& m : monomials) {
    max_j = std::max(max_j, m.j);
    max_k = std::max(max_k, m.k);
  }
  MatrixXc out(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(monomials.size()));
  std::vector<cplx> p1(static_cast<std::size_t>(max_j + 1)), p2(static_cast<std::size_t>(max_k + 1));
  for (std::size_t i = 0; i < points.size(); ++i) {
    p1[0] = p2[0] = 1.0;
    for (std::int64_t e = 1; e <= max_j; ++e) p1[e] = p1[e - 1] * points[i].z1;
    for (std::int64_t e = 1; e <= max_k; ++e) p2[e] = p2[e - 1] * points[i].z2;
    for (std::size_t s = 0; s < monomials.size(); ++s)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = p1[monomials[s].j] * p2[monomials[s].k];
  }
  return out;
}

/// Columns are evaluations of arbitrary polynomials.
inline MatrixXc polynomial_matrix(std::span<const CPoint> points, std::span<const CPolynomial> polys) {
  MatrixXc out(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(polys.size()));
  for (std::size_t s = 0; s < polys.size(); ++s) {
    std::vector<MultiIndex> idx;
    std::vector<cplx> coef;
    for (const auto& [m, c] : polys[s].terms()) {
      idx.push_back(m);
      coef.push_back(c);
    }
    if (idx.empty()) {
      out.col(static_cast<Eigen::Index>(s)).setZero();
      continue;
    }
    const MatrixXc mono = monomial_matrix(points, idx);
    out.col(static_cast<Eigen::Index>(s)) =
        mono * Eigen::Map<const VectorXc>(coef.data(), static_cast<Eigen::Index>(coef.size()));
  }
  return out;
}

inline VectorXc polynomial_values(std::span<const CPoint> points, const CPolynomial& p) {
  return polynomial_matrix(points, std::span<const CPolynomial>(&p, 1)).col(0);
}

/// Builds a polynomial from coefficients over a list of monomials.
inline CPolynomial from_coefficients(const TriangleBody& body, std::span<const MultiIndex> monomials,
                                     const VectorXc& coef) {
  CPolynomial p(body);
  for (std::size_t s = 0; s < monomials.size(); ++s) p.add_term(monomials[s], coef(static_cast<Eigen::Index>(s)));
  return p;
}

/// log|det M| from a fully pivoted LU; -inf when numerically singular.
inline double logabs_det(const MatrixXc& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::FullPivLU<MatrixXc> lu(m);
  if (lu.rank() < m.rows()) return kNegInf;
  double acc = 0.0;
  const auto& u = lu.matrixLU();
  for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::log(std::abs(u(i, i)));
  return acc;
}

/// Numerical column rank after scaling columns to unit norm.
inline Eigen::Index scaled_column_rank(MatrixXc a, double threshold = 1e-10) {
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const double nrm = a.col(c).norm();
    if (nrm > 0.0) a.col(c) /= nrm;
  }
  Eigen::ColPivHouseholderQR<MatrixXc> qr(a);
  qr.setThreshold(threshold);
  return qr.rank();
}

}  // namespace cpx
