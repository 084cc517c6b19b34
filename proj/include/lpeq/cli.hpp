#ifndef LPEQ_CLI_HPP
#define LPEQ_CLI_HPP

// Command dispatch behind the lpeq executable. Every command produces a
// report envelope (or CSV for curves) and an exit code from a fixed table:
//   0 success, 2 malformed input, 3 model-assumption violation,
//   4 l0 non-uniqueness where uniqueness is required, 5 size guard exceeded.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpeq/io.hpp"
#include "lpeq/lpeq.hpp"

namespace lpeq {

inline constexpr const char* kToolVersion = "0.1.0";

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> commands = {"pstar", "solve-l0", "solve-lp", "nsc",
                                                    "curve", "verify", "diagnose"};
  return commands;
}

struct CommandConfig {
  std::string command;
  std::optional<std::string> input;
  std::optional<int> example;
  std::optional<double> p;
  std::optional<int> t;
  std::optional<std::string> grid;  // "min:max:count[,min:max:count]"
  std::optional<double> tol_zero;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::string> output;
  std::string format = "json";
};

struct RunResult {
  int exit_code = 0;
  std::string body;  // JSON envelope or curve CSV, newline-terminated
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parameter:
    case ErrorKind::Input:
      return 2;
    case ErrorKind::ModelAssumption:
    case ErrorKind::Numerical:
    case ErrorKind::Infeasible:
      return 3;
    case ErrorKind::NonUnique:
      return 4;
    case ErrorKind::SizeGuard:
    case ErrorKind::NotExact:
      return 5;
  }
  return 2;
}

/// Parses "min:max:count[,min:max:count]".
inline std::vector<CurveAxis> parse_grid(const std::string& spec) {
  std::vector<CurveAxis> axes;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string part;
    while (std::getline(is, part, ':')) parts.push_back(part);
    if (parts.size() != 3) fail(ErrorKind::Input, "--grid axis '" + item + "' is not min:max:count");
    CurveAxis ax;
    auto number = [&](const std::string& s, double& out) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
      if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail(ErrorKind::Input, "--grid: not a number: '" + s + "'");
      }
    };
    double count = 0.0;
    number(parts[0], ax.min);
    number(parts[1], ax.max);
    number(parts[2], count);
    if (count < 1 || count != std::floor(count)) fail(ErrorKind::Input, "--grid: count must be a positive integer");
    ax.count = static_cast<int>(count);
    axes.push_back(ax);
  }
  if (axes.empty() || axes.size() > 2) fail(ErrorKind::Input, "--grid needs one or two axes");
  return axes;
}

// ---------------------------------------------------------------------------
// JSON conversion. Index sets are 0-based; numbers carry 12 significant digits.
// ---------------------------------------------------------------------------

namespace report {

using nlohmann::json;

inline json num(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return round12(v);
}

inline json vec(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

inline json mat(const Matrix& a) {
  json out = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) out.push_back(vec(a.row(i).transpose()));
  return out;
}

inline json opt_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

inline json tolerances(const Tolerances& t) {
  return {{"zero_thresh_rel", t.zero_thresh_rel}, {"eig_tol", t.eig_tol},
          {"rank_rel_tol", t.rank_rel_tol},       {"solver_eq_tol", t.solver_eq_tol},
          {"residual_tol", t.residual_tol}};
}

inline json solution(const SparseSolution& s) {
  json competitors = json::array();
  for (const Vector& c : s.competitors) competitors.push_back(vec(c));
  return {{"x", vec(s.x)},
          {"support", s.support},
          {"p", num(s.p)},
          {"objective", num(s.objective)},
          {"unique", opt_bool(s.unique)},
          {"competitors", competitors}};
}

inline json grid_solution(const GridSolution& g) {
  return {{"solution", solution(g.solution)},
          {"params", vec(g.params)},
          {"range", num(g.range)},
          {"doublings", g.doublings},
          {"points_per_dim", g.points_per_dim}};
}

inline json nsc(const NscEstimate& e) {
  return {{"p", num(e.p)},
          {"t", e.t},
          {"value", num(e.value)},
          {"exact", e.exact},
          {"kernel_dim", e.kernel_dim},
          {"witness_kernel_vector", vec(e.witness_kernel_vector)},
          {"witness_support", e.witness_support}};
}

inline json frame_bounds(const FrameBounds& f) {
  return {{"s", f.s},
          {"u_sq", num(f.u_sq)},
          {"w_sq", num(f.w_sq)},
          {"u_support", f.u_support},
          {"w_support", f.w_support}};
}

inline json spectral(const SpectralSummary& s) {
  return {{"lambda_max", num(s.lambda_max)},
          {"lambda_min_plus", num(s.lambda_min_plus)},
          {"lambda_ratio", num(s.lambda_ratio)},
          {"rank", s.rank},
          {"spark", s.spark ? json(*s.spark) : json(nullptr)},
          {"gram_eigenvalues", vec(s.gram_eigenvalues)}};
}

inline json equivalence(const EquivalenceReport& r) {
  json out = {{"lambda", num(r.lambda)},
              {"m", r.m},
              {"s_star", r.s_star},
              {"t_bound", r.t_bound},
              {"h_s_star", num(r.h_s_star)},
              {"h_t_bound", num(r.h_t_bound)},
              {"p_star", num(r.p_star)},
              {"p_star_unclamped", num(r.p_star_unclamped)},
              {"clamped", r.clamped},
              {"t_actual", r.t_actual ? json(*r.t_actual) : json(nullptr)},
              {"l0_unique", opt_bool(r.l0_unique)},
              {"x_star", r.x_star ? vec(*r.x_star) : json(nullptr)}};
  out["diagnostics"] = {{"corollary3a_holds", opt_bool(r.corollary3a_holds)},
                        {"corollary3b_holds", opt_bool(r.corollary3b_holds)},
                        {"nsp_order_t_holds_at_p0", opt_bool(r.nsp_order_t_holds_at_p0)},
                        {"lemma1_u_positive", opt_bool(r.lemma1_u_positive)}};
  return out;
}

struct Diagnostic {
  std::string code;
  std::string severity;  // info | warning | error
  std::string message;
  json witness;
};

inline json diagnostics(const std::vector<Diagnostic>& list) {
  json out = json::array();
  for (const Diagnostic& d : list) {
    out.push_back({{"code", d.code}, {"severity", d.severity}, {"message", d.message},
                   {"witness", d.witness}});
  }
  return out;
}

// Named checks derived from an equivalence report.
inline std::vector<Diagnostic> equivalence_diagnostics(const EquivalenceReport& r) {
  std::vector<Diagnostic> out;
  auto verdict = [](const std::optional<bool>& b) {
    return b ? (*b ? std::string("info") : std::string("warning")) : std::string("info");
  };
  auto text = [](const std::optional<bool>& b) {
    return b ? (*b ? std::string("holds") : std::string("fails")) : std::string("unknown");
  };
  if (r.corollary3) {
    const auto& c = *r.corollary3;
    out.push_back({"corollary3a_holds", verdict(c.c3a),
                   "every kernel vector has >= 2t+1 nonzeros: " + text(c.c3a),
                   {{"holds", opt_bool(c.c3a)},
                    {"spark", c.min_kernel_l0 ? json(*c.min_kernel_l0) : json(nullptr)},
                    {"two_t_plus_one", 2 * c.t + 1}}});
    out.push_back({"corollary3b_holds", verdict(c.c3b),
                   "t <= t_bound(m): " + text(c.c3b),
                   {{"holds", c.c3b}, {"t", c.t}, {"t_bound", c.t_bound}}});
  }
  if (r.nsp_at_p0) {
    const auto& n = *r.nsp_at_p0;
    out.push_back({"nsp_order_t_holds_at_p0", verdict(n.holds),
                   std::string("null space property of order t at p = 0: ") + text(n.holds) +
                       (n.exact ? "" : " (sampled lower bound)"),
                   {{"holds", n.holds}, {"exact", n.exact}, {"estimate", nsc(n.estimate)}}});
  }
  if (r.lemma1) {
    const auto& l = *r.lemma1;
    out.push_back({"lemma1_u_positive", verdict(l.u_positive),
                   "restricted lower frame bound at level min(2t, m) is positive: " +
                       text(l.u_positive),
                   {{"holds", l.u_positive},
                    {"level", l.level},
                    {"bounds", frame_bounds(l.bounds)},
                    {"lambda_min_plus", num(l.lambda_min_plus)},
                    {"u_sq_at_least_lambda_min_plus", l.u_sq_at_least_lambda_min_plus}}});
  }
  if (r.l0_unique) {
    out.push_back({"l0_unique", *r.l0_unique ? "info" : "error",
                   std::string("l0 solution uniqueness: ") + (*r.l0_unique ? "unique" : "not unique"),
                   {{"holds", *r.l0_unique}}});
  }
  if (r.clamped) out.push_back({"p_star_clamped", "warning", "p* exceeded 1 and was clamped", json::object()});
  for (const std::string& note : r.notes) out.push_back({"note", "info", note, json::object()});
  return out;
}

}  // namespace report

// ---------------------------------------------------------------------------
// run()
// ---------------------------------------------------------------------------

namespace detail {

inline void validate_config(const CommandConfig& cfg) {
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end()) {
    fail(ErrorKind::Input, "unknown command '" + cfg.command + "'");
  }
  if (cfg.input.has_value() == cfg.example.has_value()) {
    fail(ErrorKind::Input, "exactly one of --input or --example is required");
  }
  if ((cfg.command == "solve-lp" || cfg.command == "nsc" || cfg.command == "curve") && !cfg.p) {
    fail(ErrorKind::Input, "--p is required for " + cfg.command);
  }
  if (cfg.format != "json" && cfg.format != "csv") fail(ErrorKind::Input, "--format must be json or csv");
  if (cfg.format == "csv" && cfg.command != "curve") {
    fail(ErrorKind::Input, "--format csv is only available for curve");
  }
}

inline nlohmann::json config_echo(const CommandConfig& cfg, const Tolerances& tol) {
  using nlohmann::json;
  return {{"command", cfg.command},
          {"input", cfg.input ? json(*cfg.input) : json(nullptr)},
          {"example", cfg.example ? json(*cfg.example) : json(nullptr)},
          {"p", cfg.p ? json(*cfg.p) : json(nullptr)},
          {"t", cfg.t ? json(*cfg.t) : json(nullptr)},
          {"grid", cfg.grid ? json(*cfg.grid) : json(nullptr)},
          {"seed", cfg.seed},
          {"format", cfg.format},
          {"tolerances", report::tolerances(tol)}};
}

inline std::vector<CurveAxis> default_axes(int d) {
  if (d == 1) return {CurveAxis{-2.0, 2.0, 401}};
  return {CurveAxis{-1.0, 1.0, 41}, CurveAxis{-1.0, 1.0, 41}};
}

}  // namespace detail

inline RunResult run(const CommandConfig& cfg) {
  using nlohmann::json;
  Tolerances tol;
  if (cfg.tol_zero) tol.zero_thresh_rel = *cfg.tol_zero;

  json envelope = {{"tool_version", kToolVersion},
                   {"problem_name", ""},
                   {"command", cfg.command},
                   {"config_echo", detail::config_echo(cfg, tol)},
                   {"result", nullptr},
                   {"diagnostics", json::array()}};
  std::vector<report::Diagnostic> diags;
  RunResult out;

  auto finish = [&]() {
    envelope["diagnostics"] = report::diagnostics(diags);
    out.body = envelope.dump(2) + "\n";
    return out;
  };

  try {
    detail::validate_config(cfg);
    tol.validate();
    const SensingProblem problem =
        cfg.example ? builtin_problem(*cfg.example, tol) : load_problem(*cfg.input, tol);
    envelope["problem_name"] = problem.name();
    PStarOptions popts;
    popts.nsc.seed = cfg.seed;

    if (cfg.command == "pstar") {
      const EquivalenceReport r = p_star(problem, tol, popts);
      envelope["result"] = report::equivalence(r);
      diags = report::equivalence_diagnostics(r);
      if (r.l0_unique && !*r.l0_unique) out.exit_code = 4;
    } else if (cfg.command == "solve-l0") {
      const SparseSolution s = solve_l0(problem, tol);
      envelope["result"] = report::solution(s);
      if (!s.unique.value_or(false)) {
        diags.push_back({"l0_unique", "warning", "the l0 solution is not unique",
                         {{"competitors", s.competitors.size()}}});
      }
    } else if (cfg.command == "solve-lp") {
      const SparseSolution exact = solve_lp_exact(problem, *cfg.p, tol);
      json result = {{"exact", report::solution(exact)}, {"grid", nullptr}, {"grid_agrees", nullptr}};
      try {
        const GridSolution g = solve_lp_grid(problem, *cfg.p, {}, tol);
        const double gap = (g.solution.x - exact.x).cwiseAbs().maxCoeff();
        result["grid"] = report::grid_solution(g);
        result["grid_distance"] = report::num(gap);
        result["grid_agrees"] = gap <= tol.solver_eq_tol;
        if (gap > tol.solver_eq_tol) {
          diags.push_back({"grid_disagrees", "warning",
                           "grid oracle argmin differs from the exact argmin",
                           {{"distance", report::num(gap)}}});
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SizeGuard) throw;
        diags.push_back({"grid_skipped", "info", e.what(), json::object()});
      }
      envelope["result"] = result;
    } else if (cfg.command == "nsc") {
      int t = 0;
      if (cfg.t) {
        t = *cfg.t;
      } else {
        t = static_cast<int>(solve_l0(problem, tol).support.size());
      }
      NscBudget budget;
      budget.seed = cfg.seed;
      const NscEstimate e = nsc_estimate(problem, *cfg.p, t, budget, tol);
      envelope["result"] = report::nsc(e);
      if (!e.exact) {
        diags.push_back({"nsc_sampled", "info",
                         "kernel dimension >= 2: the value is a sampled lower bound",
                         {{"kernel_dim", e.kernel_dim}}});
      }
    } else if (cfg.command == "curve") {
      const Parametrization param = curve_parametrization(problem, tol);
      const int d = static_cast<int>(param.directions.cols());
      const std::vector<CurveAxis> axes = cfg.grid ? parse_grid(*cfg.grid) : detail::default_axes(d);
      const std::vector<CurvePoint> points = lp_curve(problem, *cfg.p, axes, tol);
      if (cfg.format == "csv") {
        out.body = emit_csv(points, d);
        return out;
      }
      json pts = json::array();
      for (const CurvePoint& pt : points) {
        pts.push_back({{"params", report::vec(pt.params)}, {"objective", report::num(pt.objective)}});
      }
      const size_t best = curve_argmin(points);
      envelope["result"] = {{"d", d},
                            {"origin", report::vec(param.origin)},
                            {"directions", report::mat(param.directions.transpose())},
                            {"argmin", report::vec(points[best].params)},
                            {"min_objective", report::num(points[best].objective)},
                            {"points", pts}};
    } else if (cfg.command == "verify") {
      std::vector<double> grid;
      if (cfg.example) grid = builtin_figure_p_values(*cfg.example);
      const EquivalenceReport pre = p_star(problem, tol, [] { PStarOptions o; o.diagnostics = false; return o; }());
      for (double p : default_p_grid(pre.p_star)) grid.push_back(p);
      if (cfg.p) grid.push_back(*cfg.p);
      const VerifyReport v = equivalence_verify(problem, grid, tol, popts);
      json entries = json::array();
      for (const VerifyEntry& e : v.entries) {
        entries.push_back({{"p", report::num(e.p)},
                           {"guaranteed", e.guaranteed},
                           {"pass", e.matches_l0},
                           {"x", report::vec(e.exact.x)},
                           {"unique", report::opt_bool(e.exact.unique)},
                           {"grid_distance", e.grid_distance ? report::num(*e.grid_distance) : json(nullptr)},
                           {"grid_agrees", e.grid_distance ? json(e.grid_agrees) : json(nullptr)}});
      }
      envelope["result"] = {{"x_star", report::vec(v.l0.x)},
                            {"p_star", report::num(v.equivalence.p_star)},
                            {"all_guaranteed_pass", v.all_guaranteed_pass},
                            {"entries", entries}};
      diags = report::equivalence_diagnostics(v.equivalence);
      for (const VerifyEntry& e : v.entries) {
        if (!e.matches_l0) {
          diags.push_back({e.guaranteed ? "equivalence_failed" : "outside_guarantee",
                           e.guaranteed ? "error" : "info",
                           "lp argmin differs from the l0 solution at p = " + format_number(e.p),
                           {{"p", report::num(e.p)}}});
        }
      }
    } else if (cfg.command == "diagnose") {
      const SpectralSummary spec = spectral_summary(problem, tol, problem.cols() <= 20);
      const EquivalenceReport r = p_star(problem, tol, popts);
      json frames = json::array();
      for (int s = 1; s <= problem.cols(); ++s) {
        try {
          frames.push_back(report::frame_bounds(restricted_frame_bounds(problem, s, tol)));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::SizeGuard) throw;
          diags.push_back({"frame_bounds_skipped", "info", e.what(), {{"s", s}}});
        }
      }
      json result = {{"spectral", report::spectral(spec)},
                     {"equivalence", report::equivalence(r)},
                     {"frame_bounds", frames},
                     {"kernel_dim", kernel_basis(problem, tol).dim()}};
      diags = [&] {
        auto d = report::equivalence_diagnostics(r);
        d.insert(d.end(), diags.begin(), diags.end());
        return d;
      }();
      if (r.t_actual) {
        const int t = *r.t_actual;
        try {
          const Lemma3Report l3 = lemma3_check(problem, t, 500, cfg.seed, tol);
          result["lemma3"] = {{"s", l3.s},
                              {"trials", l3.trials},
                              {"max_slack", report::num(l3.max_slack)},
                              {"holds", l3.holds},
                              {"bounds", report::frame_bounds(l3.bounds)}};
          diags.push_back({"lemma3_holds", l3.holds ? "info" : "warning",
                           std::string("disjoint-support inner-product bound: ") +
                               (l3.holds ? "holds" : "fails"),
                           {{"max_slack", report::num(l3.max_slack)}}});
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::SizeGuard) throw;
          diags.push_back({"lemma3_skipped", "info", e.what(), json::object()});
        }
        try {
          std::vector<double> grid;
          for (int k = 1; k <= 10; ++k) grid.push_back(0.1 * k);
          const bool mono = corollary2_monotonicity_probe(problem, t, grid, tol);
          result["corollary2_monotone"] = mono;
          diags.push_back({"corollary2_monotone", mono ? "info" : "warning",
                           std::string("NSC success set is downward closed in p: ") +
                               (mono ? "yes" : "no"),
                           {{"t", t}}});
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NotExact) throw;
          result["corollary2_monotone"] = nullptr;
          diags.push_back({"corollary2_skipped", "info", e.what(), json::object()});
        }
      }
      envelope["result"] = result;
    }
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e.kind());
    diags.push_back({std::string("error.") + to_string(e.kind()), "error", e.what(), json::object()});
  } catch (const std::exception& e) {
    out.exit_code = 2;
    diags.push_back({"error.input", "error", e.what(), json::object()});
  }
  return finish();
}

}  // namespace lpeq

#endif  // LPEQ_CLI_HPP
