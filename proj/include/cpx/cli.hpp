#pragma once

// The cpx command-line front end. Kept in a header so tests can drive it
// in-process through run_cli.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpx/acceptance.hpp"
#include "cpx/config.hpp"
#include "cpx/extremal.hpp"
#include "cpx/io.hpp"
#include "cpx/nodes.hpp"

namespace cpx::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2, kNotConverged = 3, kValidationFailed = 4 };

struct Context {
  RunConfig config;
  std::filesystem::path out_dir;
  bool strict = false;
  std::string suite;  // validate only; empty means the config's suite
  std::ostream& out;
};

struct Outcome {
  bool converged = true;
  bool failed = false;  // validate: some criterion failed
};

inline void write_json(const Context& ctx, const std::string& name, const json& j) {
  if (!ctx.config.write_json) return;
  std::ofstream f(ctx.out_dir / name);
  if (!f) throw ConfigError("cannot write " + (ctx.out_dir / name).string());
  f << j.dump(2) << '\n';
}

template <class Writer>
void write_csv(const Context& ctx, const std::string& name, Writer&& w) {
  if (!ctx.config.write_csv) return;
  std::ofstream f(ctx.out_dir / name);
  if (!f) throw ConfigError("cannot write " + (ctx.out_dir / name).string());
  w(f);
}

inline json header(const Context& ctx, const std::string& command) {
  return {{"command", command}, {"config", to_json(ctx.config)}};
}

inline CPoint zeta_or_default(const RunConfig& c) { return c.zeta.value_or(CPoint{1.0, 1.0}); }

struct BuiltFamily {
  PolynomialFamily family;
  std::vector<MinimaxSolution> solutions;  // Chebyshev only
};

inline BuiltFamily build_family(const RunConfig& c, const DiscreteCompact& k) {
  const auto body = c.body();
  if (c.family == "chebyshev") {
    auto fam = chebyshev_family(body, k, c.degree, c.solver());
    return {std::move(fam.family), std::move(fam.solutions)};
  }
  if (c.family == "l2-orthonormal") return {orthonormal_family(body, build_measure(c), c.degree), {}};
  if (c.family == "l2-monic") return {l2_monic_family(body, build_measure(c), c.degree), {}};
  if (c.family == "monomial") return {monomial_family(body, k, c.degree), {}};
  if (c.family == "lagrange-difference") {
    const auto nb = enumerate_basis(body, c.degree).size();
    if (nb < 2) throw ConfigError("config $.family: lagrange-difference needs degree >= 1");
    const auto leja = leja_sequence(body, k, nb);
    PolynomialFamily fam;
    fam.provenance = Provenance::lagrange_difference;
    for (const auto& p : lagrange_difference_family(body, leja, nb)) fam.members.push_back(make_member(p, k));
    return {std::move(fam), {}};
  }
  throw ConfigError("config $.family: unknown family '" + c.family + "'");
}

inline json family_json(const BuiltFamily& f) {
  json members = json::array();
  for (std::size_t s = 0; s < f.family.members.size(); ++s) {
    const auto& m = f.family.members[s];
    json j{{"degree_used", m.degree_used}, {"norm_on_k", io::number(m.norm_on_k)}, {"polynomial", io::to_json(m.poly)}};
    if (s < f.solutions.size()) {
      j["converged"] = f.solutions[s].converged;
      j["iterations"] = f.solutions[s].iterations;
    }
    members.push_back(std::move(j));
  }
  return {{"provenance", to_string(f.family.provenance)}, {"members", std::move(members)}};
}

inline bool all_converged(const std::vector<MinimaxSolution>& sols) {
  for (const auto& s : sols)
    if (!s.converged) return false;
  return true;
}

inline Outcome cmd_basis(const Context& ctx) {
  const auto& c = ctx.config;
  const auto basis = enumerate_basis(c.body(), c.degree);
  write_csv(ctx, "basis.csv", [&](std::ostream& os) {
    os << "index,j,k,deg_c\n";
    for (std::size_t s = 0; s < basis.size(); ++s)
      os << s + 1 << ',' << basis.indices[s].j << ',' << basis.indices[s].k << ',' << basis.degrees[s] << '\n';
  });
  auto j = header(ctx, "basis");
  j["n"] = c.degree;
  j["N"] = basis.size();
  j["l_n"] = basis.l_n;
  write_json(ctx, "basis.json", j);
  ctx.out << "basis: n=" << c.degree << " N=" << basis.size() << " l_n=" << basis.l_n << '\n';
  return {};
}

inline Outcome cmd_fekete(const Context& ctx) {
  const auto& c = ctx.config;
  const auto k = build_set(c);
  const auto nodes = greedy_fekete(c.body(), k, c.degree);
  write_csv(ctx, "nodes.csv", [&](std::ostream& os) { io::write_nodes_csv(os, nodes); });
  auto j = header(ctx, "fekete");
  j["nodes"] = io::to_json(nodes);
  j["delta_vdm"] = nodes.basis.l_n > 0 ? io::number(std::exp(nodes.log_vdm / static_cast<double>(nodes.basis.l_n)))
                                       : json(nullptr);
  write_json(ctx, "fekete.json", j);
  ctx.out << "fekete: N=" << nodes.basis.size() << " log|VDM|=" << nodes.log_vdm << '\n';
  return {};
}

inline Outcome cmd_leja(const Context& ctx) {
  const auto& c = ctx.config;
  const auto k = build_set(c);
  const auto nodes = leja_sequence(c.body(), k, c.count);
  write_csv(ctx, "leja.csv", [&](std::ostream& os) { io::write_nodes_csv(os, nodes); });
  auto j = header(ctx, "leja");
  j["nodes"] = io::to_json(nodes);
  const double lebesgue = lebesgue_constant(lagrange_basis(nodes), k);
  j["lebesgue_constant"] = io::number(lebesgue);
  write_json(ctx, "leja.json", j);
  ctx.out << "leja: count=" << c.count << " lebesgue=" << lebesgue << '\n';
  return {};
}

inline Outcome cmd_cheb(const Context& ctx) {
  const auto& c = ctx.config;
  const auto k = build_set(c);
  const auto body = c.body();
  const auto fam = chebyshev_family(body, k, c.degree, c.solver());
  const auto basis = enumerate_basis(body, c.degree);
  json rows = json::array();
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto& sol = fam.solutions[s];
    const auto deg = std::max<std::int64_t>(1, basis.degrees[s]);
    rows.push_back({{"j", basis.indices[s].j},
                    {"k", basis.indices[s].k},
                    {"deg_c", basis.degrees[s]},
                    {"norm", io::number(sol.value)},
                    {"root", io::number(std::pow(sol.value, 1.0 / static_cast<double>(deg)))},
                    {"solution", io::to_json(sol)}});
  }
  const bool conv = all_converged(fam.solutions);
  auto j = header(ctx, "cheb");
  j["converged"] = conv;
  j["polynomials"] = std::move(rows);
  write_json(ctx, "cheb.json", j);
  ctx.out << "cheb: " << basis.size() << " polynomials, converged=" << (conv ? "true" : "false") << '\n';
  return {conv, false};
}

inline Outcome cmd_tau(const Context& ctx) {
  const auto& c = ctx.config;
  const auto k = build_set(c);
  const auto tau = tau_direction(c.body(), k, HypotenuseDirection(c.direction), c.degrees, c.solver());
  json rows = json::array();
  for (std::size_t i = 0; i < tau.degrees.size(); ++i)
    rows.push_back({{"k", tau.degrees[i]},
                    {"alpha", {tau.alphas[i].j, tau.alphas[i].k}},
                    {"norm", io::number(tau.raw_norms[i])},
                    {"root", io::number(tau.roots[i])}});
  auto j = header(ctx, "tau");
  j["t"] = c.direction;
  j["sequence"] = std::move(rows);
  j["estimate"] = io::number(tau.estimate);
  write_json(ctx, "tau.json", j);
  ctx.out << "tau: t=" << c.direction << " estimate=" << tau.estimate << '\n';
  return {};
}

inline Outcome cmd_delta(const Context& ctx) {
  const auto& c = ctx.config;
  const auto k = build_set(c);
  const auto body = c.body();
  std::vector<std::int64_t> positive;
  for (auto n : c.degrees)
    if (n >= 1) positive.push_back(n);
  if (positive.empty()) throw ConfigError("config $.degrees: delta needs at least one degree >= 1");
  const auto vdm = delta_estimate_vdm(body, k, positive);
  const auto zah = delta_zaharjuta(body, k, midpoint_nodes(c.quadrature_nodes), positive, c.solver());
  json vrows = json::array();
  for (const auto& [n, v] : vdm) vrows.push_back({{"n", n}, {"delta", io::number(v)}});
  json nodes = json::array();
  for (std::size_t i = 0; i < zah.t.size(); ++i) nodes.push_back({{"t", zah.t[i]}, {"tau", io::number(zah.tau[i])}});
  auto j = header(ctx, "delta");
  j["vandermonde"] = {{"per_degree", std::move(vrows)}, {"estimate", io::number(vdm.back().second)}};
  j["quadrature"] = {{"nodes", std::move(nodes)}, {"log_delta", io::number(zah.log_delta)}, {"estimate", io::number(zah.delta)}};
  j["log_gap"] = io::number(std::abs(std::log(vdm.back().second) - zah.log_delta));
  write_json(ctx, "delta.json", j);
  ctx.out << "delta: vandermonde=" << vdm.back().second << " quadrature=" << zah.delta << '\n';
  return {};
}

inline Outcome cmd_extremal(const Context& ctx) {
  const auto& c = ctx.config;
  const auto k = build_set(c);
  const auto fam = build_family(c, k);
  const auto grid = build_standoff_grid(c.grid.count, c.grid.r_min, c.grid.r_max);
  const auto env = upper_envelope(fam.family, grid);
  write_csv(ctx, "extremal_field.csv", [&](std::ostream& os) { io::write_field_csv(os, env); });
  const bool conv = all_converged(fam.solutions);
  auto j = header(ctx, "extremal");
  j["converged"] = conv;
  j["family"] = family_json(fam);
  j["field"] = io::to_json(env);
  write_json(ctx, "extremal.json", j);
  ctx.out << "extremal: " << fam.family.members.size() << " members, " << grid.size() << " grid points\n";
  return {conv, false};
}

inline Outcome cmd_robin(const Context& ctx) {
  const auto& c = ctx.config;
  const auto k = build_set(c);
  const auto body = c.body();
  const auto fam = build_family(c, k);
  const auto boundary = build_boundary_grid(c.boundary_m);
  const auto rho = robin_envelope(fam.family, boundary);
  write_csv(ctx, "robin_field.csv", [&](std::ostream& os) { io::write_field_csv(os, rho); });
  double off_axis = 0.0;
  for (std::size_t i = 0; i < rho.grid.size(); ++i)
    if (!BoundaryGrid::on_axis(rho.grid[i])) off_axis = std::max(off_axis, std::abs(rho.values[i]));
  const CPoint zeta = zeta_or_default(c);
  const auto direct = robin_direct(
      body, [&](const CPoint& z) { return upper_envelope(fam.family, std::vector<CPoint>{z}).values[0]; }, zeta,
      c.lambda_ladder);
  json ladder = json::array();
  for (std::size_t i = 0; i < direct.size(); ++i)
    ladder.push_back({{"lambda", c.lambda_ladder[i]}, {"estimate", io::number(direct[i])}});
  const bool conv = all_converged(fam.solutions);
  auto j = header(ctx, "robin");
  j["converged"] = conv;
  j["max_abs_off_axis"] = io::number(off_axis);
  j["field"] = io::to_json(rho);
  j["direct"] = {{"zeta", io::to_json(zeta)},
                 {"hat_envelope", io::number(robin_envelope(fam.family, std::vector<CPoint>{zeta}).values[0])},
                 {"ladder", std::move(ladder)}};
  write_json(ctx, "robin.json", j);
  ctx.out << "robin: max |rho| off axis = " << off_axis << '\n';
  return {conv, false};
}

inline Outcome cmd_validate(const Context& ctx) {
  const auto& c = ctx.config;
  acceptance::Options opt;
  opt.criteria = acceptance::suite_criteria(ctx.suite.empty() ? c.acceptance.suite : ctx.suite);
  opt.rider = c.acceptance.rider;
  opt.tolerances = c.acceptance.tolerances;
  bool ok = true;
  json results = json::array();
  acceptance::run_suite(opt, [&](const acceptance::CriterionResult& r) {
    ctx.out << acceptance::format_line(r) << '\n' << std::flush;
    ok = ok && acceptance::overall(r);
    results.push_back(acceptance::to_json(r));
  });
  auto j = header(ctx, "validate");
  j["passed"] = ok;
  j["criteria"] = std::move(results);
  write_json(ctx, "validate.json", j);
  ctx.out << (ok ? "all selected criteria passed" : "some criteria failed") << '\n';
  return {true, !ok};
}

inline json error_report(const std::string& type, const std::string& message) {
  return {{"error", {{"type", type}, {"message", message}}}};
}

/// Entry point. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"cpx: extremal functions, Robin functions and transfinite diameters for triangle bodies"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "cpx-out", suite;
  bool strict = false;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"basis", "ordered monomial basis of Poly(nC)"},
      {"fekete", "greedy approximate Fekete points"},
      {"leja", "discrete Leja sequence and its Lebesgue constant"},
      {"cheb", "Chebyshev polynomials for every monomial class up to the degree"},
      {"tau", "directional Chebyshev constant along the hypotenuse"},
      {"delta", "transfinite diameter by Vandermonde and by directional quadrature"},
      {"extremal", "upper envelope of a polynomial family on a stand-off grid"},
      {"robin", "Robin envelope on the bidisk boundary and a direct estimate"},
      {"validate", "run the acceptance suites"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto* opt = sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    if (name != "validate") opt->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_flag("--strict", strict, "exit nonzero when a minimax run did not converge");
    if (name == "validate") sub->add_option("--suite", suite, "all, torus-only, properties, oracles, c1..c10");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << error_report("UsageError", e.what()).dump() << '\n';
    return kUsageError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    std::filesystem::create_directories(out_dir);
    const Context ctx{std::move(cfg), out_dir, strict, suite, out};
    Outcome res;
    if (command == "basis") res = cmd_basis(ctx);
    else if (command == "fekete") res = cmd_fekete(ctx);
    else if (command == "leja") res = cmd_leja(ctx);
    else if (command == "cheb") res = cmd_cheb(ctx);
    else if (command == "tau") res = cmd_tau(ctx);
    else if (command == "delta") res = cmd_delta(ctx);
    else if (command == "extremal") res = cmd_extremal(ctx);
    else if (command == "robin") res = cmd_robin(ctx);
    else res = cmd_validate(ctx);
    if (res.failed) return kValidationFailed;
    if (!res.converged) {
      err << "warning: some minimax runs did not converge (converged=false in the output)\n";
      if (strict) return kNotConverged;
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << error_report("ConfigError", e.what()).dump() << '\n';
    return kUsageError;
  } catch (const UnisolvenceError& e) {
    err << error_report("UnisolvenceError", e.what()).dump() << '\n';
  } catch (const PivotError& e) {
    err << error_report("PivotError", e.what()).dump() << '\n';
  } catch (const RangeError& e) {
    err << error_report("RangeError", e.what()).dump() << '\n';
  } catch (const StructuralError& e) {
    err << error_report("StructuralError", e.what()).dump() << '\n';
  } catch (const std::exception& e) {
    err << error_report("Error", e.what()).dump() << '\n';
  }
  return kRuntimeError;
}

}  // namespace cpx::cli
