#pragma once

// Sparse complex polynomials in (z1, z2) over the lattice of a triangle body.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "cpx/error.hpp"
#include "cpx/lattice.hpp"

namespace cpx {

using cplx = std::complex<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct CPoint {
  cplx z1;
  cplx z2;

  friend bool operator==(const CPoint&, const CPoint&) = default;
};

/// Integer power by repeated squaring (exact for unimodular roots of unity
/// only up to rounding, like std::pow).
inline cplx ipow(cplx z, std::int64_t e) {
  cplx result{1.0, 0.0};
  while (e > 0) {
    if (e & 1) result *= z;
    z *= z;
    e >>= 1;
  }
  return result;
}

/// lambda o (z1, z2) = (lambda^a z1, lambda^b z2).
inline CPoint circle_act(const TriangleBody& body, cplx lambda, const CPoint& z) {
  return {ipow(lambda, body.a()) * z.z1, ipow(lambda, body.b()) * z.z2};
}

class CPolynomial {
 public:
  using Terms = std::map<MultiIndex, cplx>;

  explicit CPolynomial(TriangleBody body) : body_(body) {}

  CPolynomial(TriangleBody body, const std::vector<std::pair<MultiIndex, cplx>>& terms) : body_(body) {
    for (const auto& [m, c] : terms) add_term(m, c);
  }

  static CPolynomial monomial(TriangleBody body, MultiIndex m, cplx c = 1.0) {
    CPolynomial p(body);
    p.add_term(m, c);
    return p;
  }

  static CPolynomial constant(TriangleBody body, cplx c) { return monomial(body, {0, 0}, c); }

  /// Accumulates c into the coefficient of z^m; exact zeros are dropped.
  void add_term(const MultiIndex& m, cplx c) {
    if (m.j < 0 || m.k < 0) throw StructuralError("negative exponent in polynomial term");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != cplx{0.0, 0.0}) {
        terms_.emplace(m, c);
        cdeg_ = std::max(cdeg_, deg_c(body_, m));
      }
    } else {
      it->second += c;
      if (it->second == cplx{0.0, 0.0}) {
        terms_.erase(it);
        refresh_degree();
      }
    }
  }

  const TriangleBody& body() const { return body_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::int64_t cdeg() const { return cdeg_; }

  cplx coefficient(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cplx{} : it->second;
  }

  CPolynomial& operator+=(const CPolynomial& q) {
    for (const auto& [m, c] : q.terms_) add_term(m, c);
    return *this;
  }
  CPolynomial& operator-=(const CPolynomial& q) {
    for (const auto& [m, c] : q.terms_) add_term(m, -c);
    return *this;
  }
  CPolynomial& operator*=(cplx s) {
    if (s == cplx{}) {
      terms_.clear();
    } else {
      for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= s;
        it = it->second == cplx{} ? terms_.erase(it) : std::next(it);
      }
    }
    refresh_degree();
    return *this;
  }

  friend CPolynomial operator+(CPolynomial p, const CPolynomial& q) { return p += q; }
  friend CPolynomial operator-(CPolynomial p, const CPolynomial& q) { return p -= q; }
  friend CPolynomial operator*(cplx s, CPolynomial p) { return p *= s; }

 private:
  void refresh_degree() {
    cdeg_ = 0;
    for (const auto& [m, c] : terms_) cdeg_ = std::max(cdeg_, deg_c(body_, m));
  }

  TriangleBody body_;
  Terms terms_;
  std::int64_t cdeg_ = 0;
};

/// Plain evaluation: Horner in z1 along each row of equal k, then Horner in z2
/// across rows.
inline cplx evaluate(const CPolynomial& p, const CPoint& z) {
  if (p.is_zero()) return {};
  // group by k; map order is (j, k) lexicographic so collect rows first
  std::map<std::int64_t, std::vector<std::pair<std::int64_t, cplx>>> rows;
  for (const auto& [m, c] : p.terms()) rows[m.k].emplace_back(m.j, c);

  auto horner_row = [&](std::vector<std::pair<std::int64_t, cplx>>& row) {
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    cplx acc{};
    std::int64_t prev = row.front().first;
    for (const auto& [j, c] : row) {
      acc = acc * ipow(z.z1, prev - j) + c;
      prev = j;
    }
    return acc * ipow(z.z1, prev);
  };

  cplx acc{};
  std::int64_t prev_k = rows.rbegin()->first;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    acc = acc * ipow(z.z2, prev_k - it->first) + horner_row(it->second);
    prev_k = it->first;
  }
  acc *= ipow(z.z2, prev_k);

  const bool finite_in = std::isfinite(std::abs(z.z1)) && std::isfinite(std::abs(z.z2));
  if (finite_in && !(std::isfinite(acc.real()) && std::isfinite(acc.imag())))
    throw RangeError("polynomial value overflows; use evaluate_logabs");
  return acc;
}

/// log|p(z)| with per-term rebasing on the largest term modulus; -inf iff
/// p(z) = 0.
inline double evaluate_logabs(const CPolynomial& p, const CPoint& z) {
  if (p.is_zero()) return kNegInf;
  const double l1 = std::log(std::abs(z.z1));
  const double l2 = std::log(std::abs(z.z2));
  const double a1 = std::arg(z.z1);
  const double a2 = std::arg(z.z2);

  struct Term {
    double logmod;
    double phase;
  };
  thread_local std::vector<Term> terms;
  terms.clear();
  double top = kNegInf;
  for (const auto& [m, c] : p.terms()) {
    double lm = std::log(std::abs(c));
    if (m.j > 0) lm += static_cast<double>(m.j) * l1;
    if (m.k > 0) lm += static_cast<double>(m.k) * l2;
    const double ph = std::arg(c) + static_cast<double>(m.j) * a1 + static_cast<double>(m.k) * a2;
    terms.push_back({lm, ph});
    top = std::max(top, lm);
  }
  if (top == kNegInf) return kNegInf;
  cplx sum{};
  for (const auto& t : terms)
    if (t.logmod != kNegInf) sum += std::polar(std::exp(t.logmod - top), t.phase);
  const double s = std::abs(sum);
  return s == 0.0 ? kNegInf : std::log(s) + top;
}

inline CPolynomial multiply(const CPolynomial& p, const CPolynomial& q) {
  if (!(p.body() == q.body())) throw StructuralError("multiply: polynomials over different bodies");
  CPolynomial out(p.body());
  for (const auto& [mp, cp] : p.terms())
    for (const auto& [mq, cq] : q.terms()) out.add_term({mp.j + mq.j, mp.k + mq.k}, cp * cq);
  return out;
}

/// Terms with a*j + b*k = level.
inline CPolynomial homogeneous_part(const CPolynomial& p, std::int64_t level) {
  CPolynomial out(p.body());
  for (const auto& [m, c] : p.terms())
    if (p.body().level(m) == level) out.add_term(m, c);
  return out;
}

/// Top C-homogeneous part: terms on a*j + b*k = cdeg(p)*a*b. Can be zero for
/// a nonzero p when the top line is unpopulated.
inline CPolynomial hat(const CPolynomial& p) {
  if (p.is_zero()) return p;
  return homogeneous_part(p, p.cdeg() * p.body().ab());
}

/// q(z) = p(lambda o z): coefficient of z^m is scaled by lambda^(a*j + b*k).
inline CPolynomial circle_pullback(const CPolynomial& p, cplx lambda) {
  CPolynomial out(p.body());
  for (const auto& [m, c] : p.terms()) out.add_term(m, c * ipow(lambda, p.body().level(m)));
  return out;
}

}  // namespace cpx
