#pragma once

// JSON and CSV encodings of polynomials, point clouds, node sets, scalar
// fields and solver diagnostics.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpx/cpoly.hpp"
#include "cpx/domain.hpp"
#include "cpx/error.hpp"
#include "cpx/extremal.hpp"
#include "cpx/minimax.hpp"
#include "cpx/nodes.hpp"

namespace cpx::io {

using nlohmann::json;

/// Doubles as JSON: non-finite values become the strings "inf", "-inf", "nan".
inline json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double parse_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("expected a number, got " + j.dump());
}

/// Shortest round-trip text for CSV cells.
inline std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// {"a":int,"b":int,"terms":[{"j":int,"k":int,"re":float,"im":float}]}
inline json to_json(const CPolynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back({{"j", m.j}, {"k", m.k}, {"re", c.real()}, {"im", c.imag()}});
  return {{"a", p.body().a()}, {"b", p.body().b()}, {"terms", std::move(terms)}};
}

inline CPolynomial polynomial_from_json(const json& j) {
  try {
    TriangleBody body(j.at("a").get<std::int64_t>(), j.at("b").get<std::int64_t>());
    CPolynomial p(body);
    for (const auto& t : j.at("terms"))
      p.add_term({t.at("j").get<std::int64_t>(), t.at("k").get<std::int64_t>()},
                 {t.at("re").get<double>(), t.at("im").get<double>()});
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed polynomial JSON: ") + e.what());
  }
}

inline json to_json(const CPoint& z) { return json::array({z.z1.real(), z.z1.imag(), z.z2.real(), z.z2.imag()}); }

inline json to_json(const MinimaxSolution& s) {
  json coef = json::array();
  for (const auto& c : s.coefficients) coef.push_back(json::array({c.real(), c.imag()}));
  json hist = json::array();
  for (double h : s.residual_history) hist.push_back(number(h));
  return {{"value", number(s.value)},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"history", std::move(hist)},
          {"coefficients", std::move(coef)},
          {"polynomial", to_json(s.polynomial)}};
}

// Point clouds: CSV columns re1,im1,re2,im2[,weight] with a header row.
struct PointCloud {
  std::vector<CPoint> points;
  std::vector<double> weights;  // empty when the file has no weight column
};

inline PointCloud read_point_cloud_csv(std::istream& in) {
  PointCloud pc;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!header_seen) {
      header_seen = true;
      if (cells.size() < 4 || cells[0] != "re1" || cells[1] != "im1" || cells[2] != "re2" || cells[3] != "im2" ||
          (cells.size() == 5 && cells[4] != "weight") || cells.size() > 5)
        throw ConfigError("point cloud line 1: header must be re1,im1,re2,im2[,weight]");
      columns = cells.size();
      continue;
    }
    if (cells.size() != columns)
      throw ConfigError("point cloud line " + std::to_string(lineno) + ": expected " + std::to_string(columns) + " columns");
    double v[5];
    for (std::size_t i = 0; i < columns; ++i) {
      try {
        std::size_t used = 0;
        v[i] = std::stod(cells[i], &used);
        if (used != cells[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("point cloud line " + std::to_string(lineno) + ": bad number '" + cells[i] + "'");
      }
    }
    pc.points.push_back({{v[0], v[1]}, {v[2], v[3]}});
    if (columns == 5) pc.weights.push_back(v[4]);
  }
  if (pc.points.empty()) throw ConfigError("point cloud has no points");
  return pc;
}

inline PointCloud read_point_cloud_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open point cloud file: " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("point cloud " + path + ": " + e.what());
    }
    PointCloud pc;
    for (const auto& p : j.at("points")) {
      pc.points.push_back({{p.at(0).get<double>(), p.at(1).get<double>()}, {p.at(2).get<double>(), p.at(3).get<double>()}});
      if (p.size() == 5) pc.weights.push_back(p.at(4).get<double>());
    }
    if (!pc.weights.empty() && pc.weights.size() != pc.points.size())
      throw ConfigError("point cloud " + path + ": weights must be given for all points or none");
    return pc;
  }
  return read_point_cloud_csv(in);
}

inline void write_point_cloud_csv(std::ostream& os, const std::vector<CPoint>& pts, const std::vector<double>& weights = {}) {
  os << "re1,im1,re2,im2" << (weights.empty() ? "" : ",weight") << '\n';
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << cell(pts[i].z1.real()) << ',' << cell(pts[i].z1.imag()) << ',' << cell(pts[i].z2.real()) << ','
       << cell(pts[i].z2.imag());
    if (!weights.empty()) os << ',' << cell(weights[i]);
    os << '\n';
  }
}

// NodeSet: order,index,re1,im1,re2,im2,log_pivot
inline void write_nodes_csv(std::ostream& os, const NodeSet& nodes) {
  os << "order,index,re1,im1,re2,im2,log_pivot\n";
  for (std::size_t s = 0; s < nodes.points.size(); ++s) {
    const auto& z = nodes.points[s];
    os << s << ',' << nodes.source_indices[s] << ',' << cell(z.z1.real()) << ',' << cell(z.z1.imag()) << ','
       << cell(z.z2.real()) << ',' << cell(z.z2.imag()) << ',' << cell(nodes.log_pivots[s]) << '\n';
  }
}

inline json to_json(const NodeSet& nodes) {
  json pts = json::array();
  for (std::size_t s = 0; s < nodes.points.size(); ++s)
    pts.push_back({{"order", s},
                   {"index", nodes.source_indices[s]},
                   {"point", to_json(nodes.points[s])},
                   {"log_pivot", number(nodes.log_pivots[s])}});
  return {{"a", nodes.basis.body.a()},
          {"b", nodes.basis.body.b()},
          {"n", nodes.basis.n},
          {"N", nodes.basis.size()},
          {"l_n", nodes.basis.l_n},
          {"log_vdm", number(nodes.log_vdm)},
          {"points", std::move(pts)}};
}

// ScalarField: re1,im1,re2,im2,value
inline void write_field_csv(std::ostream& os, const ScalarField& f) {
  os << "re1,im1,re2,im2,value\n";
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const auto& z = f.grid[i];
    os << cell(z.z1.real()) << ',' << cell(z.z1.imag()) << ',' << cell(z.z2.real()) << ',' << cell(z.z2.imag()) << ','
       << cell(f.values[i]) << '\n';
  }
}

inline json to_json(const ScalarField& f) {
  json rows = json::array();
  for (std::size_t i = 0; i < f.grid.size(); ++i) rows.push_back({{"point", to_json(f.grid[i])}, {"value", number(f.values[i])}});
  return {{"label", f.label}, {"notes", f.notes}, {"values", std::move(rows)}};
}

}  // namespace cpx::io
