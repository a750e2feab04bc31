#pragma once

// Run configuration for the command-line front end: JSON schema, validation
// with located messages, and a lossless round trip.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cpx/domain.hpp"
#include "cpx/error.hpp"
#include "cpx/io.hpp"
#include "cpx/lattice.hpp"
#include "cpx/minimax.hpp"

namespace cpx {

struct TorusSpec {
  double r1 = 1.0;
  double r2 = 1.0;
  std::size_t m = 32;
  friend bool operator==(const TorusSpec&, const TorusSpec&) = default;
};

struct ReinhardtSpec {
  std::vector<std::pair<double, double>> profile;
  std::size_t m = 32;
  friend bool operator==(const ReinhardtSpec&, const ReinhardtSpec&) = default;
};

struct PointCloudSpec {
  std::string path;
  bool circled = false;
  friend bool operator==(const PointCloudSpec&, const PointCloudSpec&) = default;
};

using SetSpec = std::variant<TorusSpec, ReinhardtSpec, PointCloudSpec>;

struct GridSpec {
  std::size_t count = 200;
  double r_min = 1.1;
  double r_max = 4.0;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct AcceptanceSpec {
  std::string suite = "all";
  bool rider = true;
  std::map<std::string, double> tolerances;  // overrides keyed by check name
  friend bool operator==(const AcceptanceSpec&, const AcceptanceSpec&) = default;
};

struct RunConfig {
  std::int64_t a = 1;
  std::int64_t b = 1;
  SetSpec set = TorusSpec{};
  std::int64_t degree = 4;
  std::vector<std::int64_t> degrees{2, 4, 6};
  std::size_t count = 10;
  double direction = 0.5;
  std::size_t quadrature_nodes = 16;
  std::vector<double> lambda_ladder{1e3, 1e6};
  std::string family = "chebyshev";
  GridSpec grid;
  std::size_t boundary_m = 16;
  std::optional<CPoint> zeta;  // defaults to (1, 1) where a point on the boundary is needed
  double tol = 1e-10;
  int max_iter = 500;
  bool write_json = true;
  bool write_csv = true;
  AcceptanceSpec acceptance;

  TriangleBody body() const { return TriangleBody(a, b); }
  MinimaxOptions solver() const { return {tol, max_iter}; }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"chebyshev", "l2-orthonormal", "l2-monic", "lagrange-difference",
                                              "monomial"};
  return names;
}

namespace detail {

/// Line and column of the last key of a JSON path in the raw text, found by
/// searching the keys in sequence. Empty when the text is not available.
inline std::string locate(const std::string& text, const std::vector<std::string>& path) {
  if (text.empty() || path.empty()) return {};
  std::size_t pos = 0;
  for (const auto& key : path) {
    if (!key.empty() && key.front() == '[') continue;
    const auto hit = text.find("\"" + key + "\"", pos);
    if (hit == std::string::npos) return {};
    pos = hit;
  }
  const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
  const auto nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
  const auto col = nl == std::string::npos ? pos + 1 : pos - nl;
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

class ConfigReader {
 public:
  explicit ConfigReader(std::string text) : text_(std::move(text)) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& msg) const {
    std::string p = "$";
    for (const auto& k : path) p += (!k.empty() && k.front() == '[') ? k : "." + k;
    const auto where = locate(text_, path);
    throw ConfigError("config " + p + (where.empty() ? "" : " (" + where + ")") + ": " + msg);
  }

  template <class T>
  T get(const nlohmann::json& j, const std::vector<std::string>& path) const {
    try {
      return j.get<T>();
    } catch (const nlohmann::json::exception&) {
      fail(path, "wrong type (" + std::string(j.type_name()) + ")");
    }
  }

  double number(const nlohmann::json& j, const std::vector<std::string>& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }

  std::int64_t integer(const nlohmann::json& j, const std::vector<std::string>& path) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<std::int64_t>();
  }

  std::size_t count(const nlohmann::json& j, const std::vector<std::string>& path, std::int64_t min) const {
    const auto v = integer(j, path);
    if (v < min) fail(path, "must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }

  void only_keys(const nlohmann::json& j, const std::vector<std::string>& path,
                 const std::vector<std::string>& allowed) const {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : j.items())
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        auto p = path;
        p.push_back(k);
        fail(p, "unknown key");
      }
  }

 private:
  std::string text_;
};

}  // namespace detail

/// Checks the invariants that do not depend on the JSON text.
inline void validate(const RunConfig& c, const detail::ConfigReader& r = detail::ConfigReader("")) {
  if (c.a < 1 || c.b < 1) r.fail({"body"}, "a and b must be >= 1");
  if (std::gcd(c.a, c.b) != 1) r.fail({"body"}, "gcd(a, b) must be 1");
  if (c.degree < 0) r.fail({"degree"}, "must be >= 0");
  for (std::size_t i = 0; i < c.degrees.size(); ++i)
    if (c.degrees[i] < 0) r.fail({"degrees", "[" + std::to_string(i) + "]"}, "must be >= 0");
  if (!std::is_sorted(c.degrees.begin(), c.degrees.end())) r.fail({"degrees"}, "must be ascending");
  if (c.count < 1) r.fail({"count"}, "must be >= 1");
  if (!(c.direction > 0.0 && c.direction < 1.0)) r.fail({"direction"}, "must lie in (0, 1)");
  if (c.quadrature_nodes < 1) r.fail({"quadrature_nodes"}, "must be >= 1");
  if (c.lambda_ladder.empty()) r.fail({"lambda_ladder"}, "must be nonempty");
  for (std::size_t i = 0; i < c.lambda_ladder.size(); ++i)
    if (!(c.lambda_ladder[i] >= 10.0)) r.fail({"lambda_ladder", "[" + std::to_string(i) + "]"}, "must be >= 10");
  if (!std::is_sorted(c.lambda_ladder.begin(), c.lambda_ladder.end())) r.fail({"lambda_ladder"}, "must be ascending");
  const auto& names = family_names();
  if (std::find(names.begin(), names.end(), c.family) == names.end())
    r.fail({"family"}, "must be one of chebyshev, l2-orthonormal, l2-monic, lagrange-difference, monomial");
  if (c.grid.count < 4) r.fail({"grid", "count"}, "must be >= 4");
  if (!(c.grid.r_min > 0.0 && c.grid.r_max >= c.grid.r_min)) r.fail({"grid"}, "need 0 < r_min <= r_max");
  if (c.boundary_m < 4) r.fail({"boundary_m"}, "must be >= 4");
  if (!(c.tol > 0.0)) r.fail({"solver", "tol"}, "must be > 0");
  if (c.max_iter < 1) r.fail({"solver", "max_iter"}, "must be >= 1");
  if (const auto* t = std::get_if<TorusSpec>(&c.set)) {
    if (!(t->r1 > 0.0 && t->r2 > 0.0)) r.fail({"set"}, "torus radii must be > 0");
    if (t->m < 4) r.fail({"set", "m"}, "must be >= 4");
  } else if (const auto* h = std::get_if<ReinhardtSpec>(&c.set)) {
    if (h->profile.empty()) r.fail({"set", "profile"}, "must be nonempty");
    for (std::size_t i = 0; i < h->profile.size(); ++i)
      if (!(h->profile[i].first >= 0.0 && h->profile[i].second >= 0.0))
        r.fail({"set", "profile", "[" + std::to_string(i) + "]"}, "radii must be >= 0");
    if (h->m < 4) r.fail({"set", "m"}, "must be >= 4");
  } else if (std::get<PointCloudSpec>(c.set).path.empty()) {
    r.fail({"set", "path"}, "must be nonempty");
  }
  for (const auto& [k, v] : c.acceptance.tolerances)
    if (!(v > 0.0)) r.fail({"acceptance", "tolerances", k}, "must be > 0");
}

inline nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  json set;
  if (const auto* t = std::get_if<TorusSpec>(&c.set)) {
    set = {{"type", "torus"}, {"r1", t->r1}, {"r2", t->r2}, {"m", t->m}};
  } else if (const auto* h = std::get_if<ReinhardtSpec>(&c.set)) {
    json prof = json::array();
    for (const auto& [r1, r2] : h->profile) prof.push_back({r1, r2});
    set = {{"type", "reinhardt"}, {"profile", prof}, {"m", h->m}};
  } else {
    const auto& p = std::get<PointCloudSpec>(c.set);
    set = {{"type", "point_cloud"}, {"path", p.path}, {"circled", p.circled}};
  }
  json out{{"body", {{"a", c.a}, {"b", c.b}}},
           {"set", set},
           {"degree", c.degree},
           {"degrees", c.degrees},
           {"count", c.count},
           {"direction", c.direction},
           {"quadrature_nodes", c.quadrature_nodes},
           {"lambda_ladder", c.lambda_ladder},
           {"family", c.family},
           {"grid", {{"count", c.grid.count}, {"r_min", c.grid.r_min}, {"r_max", c.grid.r_max}}},
           {"boundary_m", c.boundary_m},
           {"solver", {{"tol", c.tol}, {"max_iter", c.max_iter}}},
           {"output", {{"json", c.write_json}, {"csv", c.write_csv}}},
           {"acceptance", {{"suite", c.acceptance.suite}, {"rider", c.acceptance.rider}, {"tolerances", c.acceptance.tolerances}}}};
  if (c.zeta) out["zeta"] = io::to_json(*c.zeta);
  return out;
}

/// Parses and validates a configuration. Missing keys keep their defaults.
inline RunConfig parse_config(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto byte = std::min<std::size_t>(e.byte, text.size());
    const auto upto = text.substr(0, byte == 0 ? 0 : byte - 1);
    const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
    const auto nl = upto.rfind('\n');
    const auto col = nl == std::string::npos ? upto.size() + 1 : upto.size() - nl;
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      e.what());
  }
  const detail::ConfigReader r(text);
  r.only_keys(j, {}, {"body", "set", "degree", "degrees", "count", "direction", "quadrature_nodes", "lambda_ladder",
                      "family", "grid", "boundary_m", "zeta", "solver", "output", "acceptance"});
  RunConfig c;
  if (j.contains("body")) {
    const auto& bj = j["body"];
    r.only_keys(bj, {"body"}, {"a", "b"});
    if (bj.contains("a")) c.a = r.integer(bj["a"], {"body", "a"});
    if (bj.contains("b")) c.b = r.integer(bj["b"], {"body", "b"});
  }
  if (j.contains("set")) {
    const auto& s = j["set"];
    if (!s.is_object() || !s.contains("type")) r.fail({"set"}, "needs a \"type\" of torus, reinhardt or point_cloud");
    const auto type = r.get<std::string>(s["type"], {"set", "type"});
    if (type == "torus") {
      r.only_keys(s, {"set"}, {"type", "r1", "r2", "m"});
      TorusSpec t;
      if (s.contains("r1")) t.r1 = r.number(s["r1"], {"set", "r1"});
      if (s.contains("r2")) t.r2 = r.number(s["r2"], {"set", "r2"});
      if (s.contains("m")) t.m = r.count(s["m"], {"set", "m"}, 0);
      c.set = t;
    } else if (type == "reinhardt") {
      r.only_keys(s, {"set"}, {"type", "profile", "m"});
      ReinhardtSpec h;
      if (!s.contains("profile") || !s["profile"].is_array()) r.fail({"set", "profile"}, "expected a list of [r1, r2] pairs");
      for (std::size_t i = 0; i < s["profile"].size(); ++i) {
        const auto& e = s["profile"][i];
        const std::vector<std::string> p{"set", "profile", "[" + std::to_string(i) + "]"};
        if (!e.is_array() || e.size() != 2) r.fail(p, "expected [r1, r2]");
        h.profile.emplace_back(r.number(e[0], p), r.number(e[1], p));
      }
      if (s.contains("m")) h.m = r.count(s["m"], {"set", "m"}, 0);
      c.set = h;
    } else if (type == "point_cloud") {
      r.only_keys(s, {"set"}, {"type", "path", "circled"});
      PointCloudSpec p;
      if (s.contains("path")) p.path = r.get<std::string>(s["path"], {"set", "path"});
      if (s.contains("circled")) p.circled = r.get<bool>(s["circled"], {"set", "circled"});
      c.set = p;
    } else {
      r.fail({"set", "type"}, "must be torus, reinhardt or point_cloud");
    }
  }
  if (j.contains("degree")) c.degree = r.integer(j["degree"], {"degree"});
  if (j.contains("degrees")) {
    if (!j["degrees"].is_array()) r.fail({"degrees"}, "expected a list of integers");
    c.degrees.clear();
    for (std::size_t i = 0; i < j["degrees"].size(); ++i)
      c.degrees.push_back(r.integer(j["degrees"][i], {"degrees", "[" + std::to_string(i) + "]"}));
  }
  if (j.contains("count")) c.count = r.count(j["count"], {"count"}, 0);
  if (j.contains("direction")) c.direction = r.number(j["direction"], {"direction"});
  if (j.contains("quadrature_nodes")) c.quadrature_nodes = r.count(j["quadrature_nodes"], {"quadrature_nodes"}, 0);
  if (j.contains("lambda_ladder")) {
    if (!j["lambda_ladder"].is_array()) r.fail({"lambda_ladder"}, "expected a list of numbers");
    c.lambda_ladder.clear();
    for (std::size_t i = 0; i < j["lambda_ladder"].size(); ++i)
      c.lambda_ladder.push_back(r.number(j["lambda_ladder"][i], {"lambda_ladder", "[" + std::to_string(i) + "]"}));
  }
  if (j.contains("family")) c.family = r.get<std::string>(j["family"], {"family"});
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    r.only_keys(g, {"grid"}, {"count", "r_min", "r_max"});
    if (g.contains("count")) c.grid.count = r.count(g["count"], {"grid", "count"}, 0);
    if (g.contains("r_min")) c.grid.r_min = r.number(g["r_min"], {"grid", "r_min"});
    if (g.contains("r_max")) c.grid.r_max = r.number(g["r_max"], {"grid", "r_max"});
  }
  if (j.contains("boundary_m")) c.boundary_m = r.count(j["boundary_m"], {"boundary_m"}, 0);
  if (j.contains("zeta")) {
    const auto& z = j["zeta"];
    if (!z.is_array() || z.size() != 4) r.fail({"zeta"}, "expected [re1, im1, re2, im2]");
    c.zeta = CPoint{{r.number(z[0], {"zeta"}), r.number(z[1], {"zeta"})}, {r.number(z[2], {"zeta"}), r.number(z[3], {"zeta"})}};
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    r.only_keys(s, {"solver"}, {"tol", "max_iter"});
    if (s.contains("tol")) c.tol = r.number(s["tol"], {"solver", "tol"});
    if (s.contains("max_iter")) c.max_iter = static_cast<int>(r.integer(s["max_iter"], {"solver", "max_iter"}));
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    r.only_keys(o, {"output"}, {"json", "csv"});
    if (o.contains("json")) c.write_json = r.get<bool>(o["json"], {"output", "json"});
    if (o.contains("csv")) c.write_csv = r.get<bool>(o["csv"], {"output", "csv"});
  }
  if (j.contains("acceptance")) {
    const auto& a = j["acceptance"];
    r.only_keys(a, {"acceptance"}, {"suite", "rider", "tolerances"});
    if (a.contains("suite")) c.acceptance.suite = r.get<std::string>(a["suite"], {"acceptance", "suite"});
    if (a.contains("rider")) c.acceptance.rider = r.get<bool>(a["rider"], {"acceptance", "rider"});
    if (a.contains("tolerances")) {
      const auto& t = a["tolerances"];
      if (!t.is_object()) r.fail({"acceptance", "tolerances"}, "expected an object of check name -> tolerance");
      for (const auto& [k, v] : t.items()) c.acceptance.tolerances[k] = r.number(v, {"acceptance", "tolerances", k});
    }
  }
  validate(c, r);
  return c;
}

/// Reads a config file. A relative point-cloud path is taken relative to the
/// directory holding the config.
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto c = parse_config(ss.str());
  if (auto* p = std::get_if<PointCloudSpec>(&c.set); p && std::filesystem::path(p->path).is_relative())
    p->path = (std::filesystem::path(path).parent_path() / p->path).lexically_normal().string();
  return c;
}

/// Materializes the configured compact set. Point clouds are never flagged
/// regular; they are circled only when the config says so.
inline DiscreteCompact build_set(const RunConfig& c) {
  if (const auto* t = std::get_if<TorusSpec>(&c.set)) return build_torus(t->r1, t->r2, t->m);
  if (const auto* h = std::get_if<ReinhardtSpec>(&c.set)) return build_reinhardt(h->profile, h->m);
  const auto& p = std::get<PointCloudSpec>(c.set);
  auto cloud = io::read_point_cloud_file(p.path);
  return DiscreteCompact(std::move(cloud.points), p.circled, "point_cloud(" + p.path + ")");
}

/// Measure for the L2 families: the cloud's weights when present, otherwise uniform.
inline DiscreteMeasure build_measure(const RunConfig& c) {
  if (const auto* p = std::get_if<PointCloudSpec>(&c.set)) {
    auto cloud = io::read_point_cloud_file(p->path);
    if (!cloud.weights.empty()) {
      DiscreteCompact k(cloud.points, p->circled, "point_cloud(" + p->path + ")");
      if (k.size() != cloud.points.size()) throw ConfigError("weighted point cloud contains duplicate points");
      return DiscreteMeasure(std::move(k), std::move(cloud.weights));
    }
  }
  return DiscreteMeasure::uniform(build_set(c));
}

}  // namespace cpx
