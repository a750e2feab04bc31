#pragma once

// Integer-lattice combinatorics of the triangle body co{(0,0),(b,0),(0,a)}.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cpx/error.hpp"

namespace cpx {

/// Exponent pair (j, k) of the monomial z1^j z2^k.
struct MultiIndex {
  std::int64_t j = 0;
  std::int64_t k = 0;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  /// Plain lexicographic order, used only for associative containers.
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// The lattice triangle C with vertices (0,0), (b,0), (0,a); gcd(a,b) = 1.
class TriangleBody {
 public:
  TriangleBody(std::int64_t a, std::int64_t b) : a_(a), b_(b) {
    if (a < 1 || b < 1)
      throw StructuralError("triangle body needs a >= 1 and b >= 1");
    if (std::gcd(a, b) != 1)
      throw StructuralError("triangle body needs gcd(a, b) = 1, got a=" + std::to_string(a) +
                            " b=" + std::to_string(b));
  }

  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  std::int64_t ab() const { return a_ * b_; }

  /// Weighted exponent a*j + b*k; a multi-index lies in nC iff this is <= n*a*b.
  std::int64_t level(const MultiIndex& m) const { return a_ * m.j + b_ * m.k; }

  bool contains(const MultiIndex& m, std::int64_t n) const {
    return m.j >= 0 && m.k >= 0 && level(m) <= n * ab();
  }

  friend bool operator==(const TriangleBody&, const TriangleBody&) = default;

 private:
  std::int64_t a_;
  std::int64_t b_;
};

/// Least n with m in nC.
inline std::int64_t deg_c(const TriangleBody& body, const MultiIndex& m) {
  const std::int64_t l = body.level(m);
  return (l + body.ab() - 1) / body.ab();
}

/// The total order used for monic classes: C-degree, then the second
/// exponent, then the first exponent (tie-break for a*b > 1).
inline std::strong_ordering cmp_order(const TriangleBody& body, const MultiIndex& x,
                                      const MultiIndex& y) {
  if (auto c = deg_c(body, x) <=> deg_c(body, y); c != 0) return c;
  if (auto c = x.k <=> y.k; c != 0) return c;
  return x.j <=> y.j;
}

inline bool precedes(const TriangleBody& body, const MultiIndex& x, const MultiIndex& y) {
  return cmp_order(body, x, y) < 0;
}

/// Lattice points of nC in increasing order.
struct MultiIndexBasis {
  TriangleBody body;
  std::int64_t n = 0;
  std::vector<MultiIndex> indices;
  std::vector<std::int64_t> degrees;
  std::int64_t l_n = 0;

  std::size_t size() const { return indices.size(); }
};

inline MultiIndexBasis enumerate_basis(const TriangleBody& body, std::int64_t n) {
  if (n < 0) throw StructuralError("enumerate_basis: degree must be >= 0");
  MultiIndexBasis out{body, n, {}, {}, 0};
  for (std::int64_t k = 0; k <= n * body.a(); ++k)
    for (std::int64_t j = 0; j <= n * body.b(); ++j)
      if (body.contains({j, k}, n)) out.indices.push_back({j, k});
  std::sort(out.indices.begin(), out.indices.end(),
            [&](const MultiIndex& x, const MultiIndex& y) { return precedes(body, x, y); });
  out.degrees.reserve(out.indices.size());
  for (const auto& m : out.indices) {
    out.degrees.push_back(deg_c(body, m));
    out.l_n += out.degrees.back();
  }
  return out;
}

/// The n+1 multi-indices with a*j + b*k = n*a*b: (b*t, a*(n-t)), t = n..0.
inline std::vector<MultiIndex> homogeneous_line(const TriangleBody& body, std::int64_t n) {
  if (n < 1) throw StructuralError("homogeneous_line: degree must be >= 1");
  std::vector<MultiIndex> line;
  line.reserve(static_cast<std::size_t>(n + 1));
  for (std::int64_t t = n; t >= 0; --t) line.push_back({body.b() * t, body.a() * (n - t)});
  return line;
}

/// Direction on the open hypotenuse, theta = (b(1-t), a t) with 0 < t < 1.
class HypotenuseDirection {
 public:
  explicit HypotenuseDirection(double t) : t_(t) {
    if (!(t > 0.0 && t < 1.0))
      throw StructuralError("hypotenuse parameter must lie in (0, 1)");
  }

  double t() const { return t_; }
  double theta1(const TriangleBody& body) const { return static_cast<double>(body.b()) * (1.0 - t_); }
  double theta2(const TriangleBody& body) const { return static_cast<double>(body.a()) * t_; }

 private:
  double t_;
};

/// Multi-index on the degree-k top line closest to k*theta; ties go to the
/// smaller second exponent.
inline MultiIndex direction_index(const TriangleBody& body, const HypotenuseDirection& dir,
                                  std::int64_t k) {
  const double th1 = dir.theta1(body);
  const double th2 = dir.theta2(body);
  const double kk = static_cast<double>(k);
  MultiIndex best{};
  double best_d = INFINITY;
  for (const auto& m : homogeneous_line(body, k)) {
    const double d = std::hypot(static_cast<double>(m.j) / kk - th1, static_cast<double>(m.k) / kk - th2);
    // line is sorted by increasing k, so strict < keeps the smaller k on ties
    if (d < best_d - 1e-14) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

}  // namespace cpx
