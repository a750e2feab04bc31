#pragma once

// Point-cloud discretizations of compact sets in C^2 and measures on them.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cpx/cpoly.hpp"
#include "cpx/error.hpp"
#include "cpx/lattice.hpp"
#include "cpx/parallel.hpp"

namespace cpx {

/// Finite sample of a compact K. `circled` asserts invariance under the
/// circle action; `regular_by_construction` is set only by the built-in
/// constructors (tori and Reinhardt unions), never for imported clouds.
class DiscreteCompact {
 public:
  DiscreteCompact(std::vector<CPoint> points, bool circled, std::string label,
                  bool regular_by_construction = false)
      : circled_(circled), regular_(regular_by_construction), label_(std::move(label)) {
    if (points.empty()) throw StructuralError("discrete compact set needs at least one point");
    // drop exact duplicates, keep first occurrence order
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto key = [&](std::size_t i) {
      const auto& p = points[i];
      return std::array<double, 4>{p.z1.real(), p.z1.imag(), p.z2.real(), p.z2.imag()};
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return key(x) < key(y); });
    std::vector<bool> keep(points.size(), true);
    for (std::size_t s = 1; s < order.size(); ++s)
      if (key(order[s]) == key(order[s - 1])) keep[order[s]] = false;
    points_.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      if (keep[i]) points_.push_back(points[i]);
  }

  const std::vector<CPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool circled() const { return circled_; }
  bool regular_by_construction() const { return regular_; }
  const std::string& label() const { return label_; }

 private:
  std::vector<CPoint> points_;
  bool circled_;
  bool regular_;
  std::string label_;
};

/// Positive weights aligned with the points of a DiscreteCompact.
class DiscreteMeasure {
 public:
  DiscreteMeasure(DiscreteCompact support, std::vector<double> weights)
      : support_(std::move(support)), weights_(std::move(weights)) {
    if (weights_.size() != support_.size())
      throw StructuralError("measure weights must align with support points");
    for (double w : weights_)
      if (!(w > 0.0) || !std::isfinite(w)) throw StructuralError("measure weights must be positive and finite");
  }

  /// Uniform probability measure on the support.
  static DiscreteMeasure uniform(DiscreteCompact support) {
    const double w = 1.0 / static_cast<double>(support.size());
    std::vector<double> weights(support.size(), w);
    return DiscreteMeasure(std::move(support), std::move(weights));
  }

  const DiscreteCompact& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  DiscreteCompact support_;
  std::vector<double> weights_;
};

/// Points on the boundary of the unit bidisk, max(|z1|, |z2|) = 1.
struct BoundaryGrid {
  std::vector<CPoint> points;

  /// True when at least one coordinate vanishes (excluded from Robin metrics).
  static bool on_axis(const CPoint& z) { return z.z1 == cplx{} || z.z2 == cplx{}; }
};

inline cplx unit_phase(std::size_t s, std::size_t m) {
  if (s == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(m));
}

inline DiscreteCompact build_reinhardt(const std::vector<std::pair<double, double>>& radii_profile,
                                       std::size_t m_phase, std::string label = {}) {
  if (radii_profile.empty()) throw StructuralError("Reinhardt profile must be nonempty");
  if (m_phase < 4) throw StructuralError("phase count must be >= 4");
  std::vector<CPoint> pts;
  pts.reserve(radii_profile.size() * m_phase * m_phase);
  for (const auto& [r1, r2] : radii_profile) {
    if (!(r1 >= 0.0 && r2 >= 0.0)) throw StructuralError("Reinhardt radii must be nonnegative");
    for (std::size_t s = 0; s < m_phase; ++s)
      for (std::size_t t = 0; t < m_phase; ++t) pts.push_back({r1 * unit_phase(s, m_phase), r2 * unit_phase(t, m_phase)});
  }
  if (label.empty()) label = "reinhardt(" + std::to_string(radii_profile.size()) + " tori, m=" + std::to_string(m_phase) + ")";
  return DiscreteCompact(std::move(pts), true, std::move(label), true);
}

/// m x m grid on the torus |z1| = r1, |z2| = r2.
inline DiscreteCompact build_torus(double r1, double r2, std::size_t m) {
  if (!(r1 > 0.0 && r2 > 0.0)) throw StructuralError("torus radii must be positive");
  if (m < 4) throw StructuralError("torus grid count must be >= 4");
  auto out = build_reinhardt({{r1, r2}}, m, "torus(" + std::to_string(r1) + "," + std::to_string(r2) + ",m=" + std::to_string(m) + ")");
  return out;
}

struct ClosureReport {
  bool passed = false;
  double max_defect = 0.0;
};

/// Maps K by e^{i theta} o for theta = 2 pi s / n_theta and measures the
/// largest nearest-neighbour distance back to K.
inline ClosureReport circled_closure_test(const TriangleBody& body, const DiscreteCompact& k,
                                          std::size_t n_theta, double tol = 1e-9) {
  if (n_theta < 8) throw StructuralError("circled_closure_test needs n_theta >= 8");
  const auto& pts = k.points();
  std::vector<double> defects(pts.size(), 0.0);
  parallel_for(pts.size(), [&](std::size_t i) {
    double worst = 0.0;
    for (std::size_t s = 1; s < n_theta; ++s) {
      const CPoint moved = circle_act(body, unit_phase(s, n_theta), pts[i]);
      double best = INFINITY;
      for (const auto& q : pts) {
        const double d2 = std::norm(moved.z1 - q.z1) + std::norm(moved.z2 - q.z2);
        if (d2 < best) {
          best = d2;
          if (best <= 1e-30) break;
        }
      }
      worst = std::max(worst, std::sqrt(best));
    }
    defects[i] = worst;
  }, 16);
  ClosureReport r;
  r.max_defect = *std::max_element(defects.begin(), defects.end());
  r.passed = r.max_defect <= tol;
  return r;
}

/// Radial samples in [0, 1]: uniform steps i/m together with 2^-i for
/// i = 1..m, including both endpoints.
inline std::vector<double> hybrid_unit_grid(std::size_t m) {
  std::vector<double> s{0.0, 1.0};
  for (std::size_t i = 1; i < m; ++i) s.push_back(static_cast<double>(i) / static_cast<double>(m));
  for (std::size_t i = 1; i <= m; ++i) s.push_back(std::ldexp(1.0, -static_cast<int>(i)));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

/// Samples of the two facets {|z1| = 1, |z2| <= 1} and {|z1| <= 1, |z2| = 1}
/// with m uniform phases per coordinate.
inline BoundaryGrid build_boundary_grid(std::size_t m) {
  if (m < 4) throw StructuralError("boundary grid count must be >= 4");
  BoundaryGrid g;
  const auto radii = hybrid_unit_grid(m);
  for (double s : radii)
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = 0; q < m; ++q) {
        if (s == 0.0 && q > 0) break;
        g.points.push_back({unit_phase(p, m), s * unit_phase(q, m)});
      }
  for (double s : radii) {
    if (s == 1.0) continue;  // the torus is already on the first facet
    for (std::size_t p = 0; p < m; ++p) {
      if (s == 0.0 && p > 0) break;
      for (std::size_t q = 0; q < m; ++q) g.points.push_back({s * unit_phase(p, m), unit_phase(q, m)});
    }
  }
  return g;
}

/// Radical-inverse sequence in base `base` (deterministic low-discrepancy).
inline double radical_inverse(std::size_t i, std::size_t base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

/// Deterministic evaluation grid with r_min <= |z_i| <= r_max (log-uniform
/// moduli, uniform phases from a Halton sequence).
inline std::vector<CPoint> build_standoff_grid(std::size_t count, double r_min, double r_max) {
  if (!(r_min > 0.0 && r_max >= r_min)) throw StructuralError("standoff grid needs 0 < r_min <= r_max");
  std::vector<CPoint> g;
  g.reserve(count);
  const double span = std::log(r_max / r_min);
  for (std::size_t i = 1; i <= count; ++i) {
    const double u1 = radical_inverse(i, 2), u2 = radical_inverse(i, 3);
    const double v1 = radical_inverse(i, 5), v2 = radical_inverse(i, 7);
    g.push_back({std::polar(r_min * std::exp(span * u1), 2.0 * std::numbers::pi * v1),
                 std::polar(r_min * std::exp(span * u2), 2.0 * std::numbers::pi * v2)});
  }
  return g;
}

inline double sup_norm(const CPolynomial& p, const DiscreteCompact& k) {
  if (p.is_zero()) return 0.0;
  const auto& pts = k.points();
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { vals[i] = evaluate_logabs(p, pts[i]); });
  const double top = *std::max_element(vals.begin(), vals.end());
  return std::exp(top);
}

}  // namespace cpx
