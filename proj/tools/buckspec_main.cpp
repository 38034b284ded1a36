#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "buckspec/buckspec.hpp"

namespace {

using namespace buckspec;
namespace fs = std::filesystem;

struct RunConfig {
  // problem
  int l = 2;
  std::string kind = "buckling";
  std::string domain;
  // solver
  int degree = 20;
  int quadrature = 0;
  int modes = 8;
  int k = 6;
  bool refine = false;
  double rel_tol = 1e-8;
  int max_degree = max_basis_count;
  // spectrum sources
  std::string spectrum_path;
  std::string values_csv;
  // rule selection
  std::string rules_csv;
  int n = 2;
  double delta = 1.0;
  std::string delta_seq_csv;
  std::string delta_policy = "optimize";
  int k_max = 0;  // 0: derive from the available values
  // sweep
  std::string axis;
  std::string range;
  std::string quantity = "eigenvalue";
  // outputs
  std::string out_path;
  std::string report_path = "verify.csv";
  std::string summary_path = "verify_summary.json";
  std::string csv_path = "sweep.csv";
  std::string plot_path = "sweep.dat";
  // cache
  std::string cache_dir;
  bool no_cache = false;
};

std::vector<std::string> split_list(const std::string& text, std::string_view separators) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (separators.find(c) != std::string_view::npos) {
      if (!current.empty()) parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

double parse_double(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    fail(errc::invalid_argument, "not a number: '" + token + "'");
  }
  if (used != token.size()) fail(errc::invalid_argument, "not a number: '" + token + "'");
  return v;
}

int parse_int(const std::string& token) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(token, &used);
  } catch (const std::exception&) {
    fail(errc::invalid_argument, "not an integer: '" + token + "'");
  }
  if (used != token.size()) fail(errc::invalid_argument, "not an integer: '" + token + "'");
  return v;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const std::string& token : split_list(text, ",")) values.push_back(parse_double(token));
  return values;
}

DomainSpec parse_domain(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    fail(errc::invalid_argument, "domain must look like interval:1 or rectangle:2,1");
  DomainSpec domain;
  domain.kind = parse_domain_kind(text.substr(0, colon));
  domain.lengths = parse_double_list(text.substr(colon + 1));
  domain.validate();
  return domain;
}

ProblemSpec make_problem(const RunConfig& rc) {
  if (rc.domain.empty()) fail(errc::invalid_argument, "missing --domain");
  ProblemSpec problem{rc.l, parse_problem_kind(rc.kind), parse_domain(rc.domain)};
  problem.validate();
  return problem;
}

SolveConfig make_solve_config(const RunConfig& rc) {
  SolveConfig config;
  config.degrees = {rc.degree};
  config.quadrature = rc.quadrature;
  config.mode_cutoff = rc.modes;
  config.k = rc.k;
  config.refine.rel_tol = rc.rel_tol;
  config.refine.max_degree = rc.max_degree;
  return config;
}

std::optional<fs::path> cache_directory(const RunConfig& rc) {
  if (rc.no_cache) return std::nullopt;
  if (!rc.cache_dir.empty()) return fs::path(rc.cache_dir);
  if (const char* env = std::getenv("BUCKSPEC_CACHE")) return fs::path(env);
  return fs::path(".buckspec-cache");
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::file_not_found, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Cache-aware solve; returns exactly the bytes the spectrum file gets.
std::string solve_bytes(const ProblemSpec& problem, const SolveConfig& config, bool refine,
                        const std::optional<fs::path>& cache) {
  std::optional<fs::path> cached_path;
  if (cache) {
    cached_path = *cache / (cache_key(problem, config, refine) + ".json");
    if (fs::exists(*cached_path)) return read_all(*cached_path);
  }
  const Spectrum spectrum =
      refine ? refine_until(problem, config.k, config.refine.rel_tol, config.refine.max_degree)
             : compute_spectrum(problem, config);
  std::string bytes = spectrum_to_string(spectrum);
  if (cached_path) {
    fs::create_directories(*cache);
    write_file_atomic(*cached_path, bytes);
  }
  return bytes;
}

struct SpectrumSource {
  std::vector<double> values;
  std::optional<ProblemSpec> problem;
  Tolerance tol = exact_tolerance;
};

SpectrumSource acquire_spectrum(const RunConfig& rc) {
  if (!rc.spectrum_path.empty()) {
    const StoredSpectrum stored = read_spectrum_file(rc.spectrum_path);
    return {stored.spectrum.values, stored.spectrum.problem, stored.tolerance()};
  }
  if (!rc.values_csv.empty())
    return {validate_spectrum(parse_double_list(rc.values_csv)), std::nullopt, exact_tolerance};
  if (!rc.domain.empty()) {
    const ProblemSpec problem = make_problem(rc);
    const SolveConfig config = make_solve_config(rc);
    const std::string bytes = solve_bytes(problem, config, rc.refine, cache_directory(rc));
    const StoredSpectrum stored = spectrum_from_json(ordered_json::parse(bytes));
    return {stored.spectrum.values, problem, discrete_tolerance};
  }
  fail(errc::invalid_argument, "need a spectrum source: --spectrum, --values, or problem flags");
}

std::vector<RuleId> parse_rules(const RunConfig& rc) {
  std::vector<RuleId> rules;
  for (const std::string& token : split_list(rc.rules_csv, ",+")) rules.push_back(parse_rule_id(token));
  if (rules.empty()) fail(errc::invalid_argument, "no rules selected");
  return rules;
}

RuleParams make_rule_params(const RunConfig& rc, const SpectrumSource& source) {
  RuleParams params;
  params.n = rc.n;
  params.order = source.problem ? source.problem->order : rc.l;
  params.delta = rc.delta;
  if (!rc.delta_seq_csv.empty()) params.delta_seq = parse_double_list(rc.delta_seq_csv);
  return params;
}

int resolve_k_max(const RunConfig& rc, const SpectrumSource& source) {
  const int k_max = rc.k_max > 0 ? rc.k_max : static_cast<int>(source.values.size()) - 1;
  if (static_cast<std::size_t>(k_max) + 1 > source.values.size())
    fail(errc::insufficient_values, "k_max " + std::to_string(k_max) + " needs " +
                                        std::to_string(k_max + 1) + " values, have " +
                                        std::to_string(source.values.size()));
  return k_max;
}

int cmd_solve(const RunConfig& rc) {
  const ProblemSpec problem = make_problem(rc);
  const SolveConfig config = make_solve_config(rc);
  const std::string bytes = solve_bytes(problem, config, rc.refine, cache_directory(rc));
  const fs::path out = rc.out_path.empty() ? fs::path("spectrum.json") : fs::path(rc.out_path);
  write_file_atomic(out, bytes);
  std::cout << out.string() << "\n";
  return 0;
}

int cmd_verify(const RunConfig& rc) {
  const SpectrumSource source = acquire_spectrum(rc);
  const std::vector<RuleId> rules = parse_rules(rc);
  const RuleParams params = make_rule_params(rc, source);
  const int k_max = resolve_k_max(rc, source);

  std::vector<InequalityReport> reports;
  if (source.problem) {
    Spectrum spectrum;
    spectrum.problem = *source.problem;
    spectrum.values = source.values;
    spectrum.convergence.assign(source.values.size(), 0.0);
    std::vector<RuleSelection> selections;
    for (RuleId rule : rules) selections.push_back({rule, params});
    reports = verify_spectrum(spectrum, selections, k_max, source.tol);
  } else {
    for (RuleId rule : rules)
      for (int k = 1; k <= k_max; ++k) {
        RuleParams at_k = params;
        if (!at_k.delta_seq.empty() && at_k.delta_seq.size() > static_cast<std::size_t>(k))
          at_k.delta_seq.resize(k);
        reports.push_back(eval_rule(
            rule, at_k, std::span<const double>(source.values.data(), k + 1), source.tol));
      }
  }

  std::string csv = "rule,k,lhs,rhs,slack,holds\n";
  for (const InequalityReport& r : reports) {
    csv += std::string(to_string(r.rule)) + "," + std::to_string(r.k) + "," +
           format_double(r.lhs) + "," + format_double(r.rhs) + "," + format_double(r.slack) +
           "," + (r.holds ? "true" : "false") + "\n";
  }
  write_file_atomic(rc.report_path, csv);

  ordered_json summary;
  summary["k_max"] = k_max;
  bool overall = true;
  ordered_json per_rule;
  for (RuleId rule : rules) {
    double min_slack = std::numeric_limits<double>::infinity();
    bool all_hold = true;
    int count = 0;
    bool conjecture = false;
    for (const InequalityReport& r : reports) {
      if (r.rule != rule) continue;
      min_slack = std::min(min_slack, r.slack);
      all_hold = all_hold && r.holds;
      conjecture = conjecture || r.conjecture;
      ++count;
    }
    per_rule[to_string(rule)] = {{"min_slack", min_slack},
                                 {"all_hold", all_hold},
                                 {"conjecture", conjecture},
                                 {"reports", count}};
    if (!conjecture) overall = overall && all_hold;
    std::cout << to_string(rule) << ": min_slack=" << format_double(min_slack) << " "
              << (conjecture ? "conjecture" : (all_hold ? "pass" : "fail")) << "\n";
  }
  summary["rules"] = per_rule;
  summary["overall_pass"] = overall;
  write_file_atomic(rc.summary_path, summary.dump(2) + "\n");
  std::cout << "overall: " << (overall ? "pass" : "fail") << "\n";
  return overall ? 0 : 1;
}

int cmd_bound(const RunConfig& rc) {
  const SpectrumSource source = acquire_spectrum(rc);
  const std::vector<RuleId> rules = parse_rules(rc);
  const RuleParams params = make_rule_params(rc, source);
  const int k_max = resolve_k_max(rc, source);
  const DeltaPolicy policy =
      rc.delta_policy == "fixed" ? DeltaPolicy::fixed : DeltaPolicy::optimize_uniform;

  if (source.problem)
    for (RuleId rule : rules)
      if (!rule_applicable(rule, *source.problem, params))
        fail(errc::rule_not_applicable,
             std::string(to_string(rule)) + " does not apply to this spectrum");

  std::string csv = "rule,k,computed,bound,ratio,method\n";
  for (RuleId rule : rules)
    for (int k = 1; k <= k_max; ++k) {
      RuleParams at_k = params;
      if (!at_k.delta_seq.empty() && at_k.delta_seq.size() > static_cast<std::size_t>(k))
        at_k.delta_seq.resize(k);
      const BoundResult result = bound_from_rule(
          rule, at_k, std::span<const double>(source.values.data(), k), policy);
      const double computed = source.values[k];
      csv += std::string(to_string(rule)) + "," + std::to_string(k) + "," +
             format_double(computed) + "," + format_double(result.bound) + "," +
             format_double(result.bound / computed) + "," + to_string(result.method) + "\n";
    }

  const fs::path out = rc.out_path.empty() ? fs::path("bounds.csv") : fs::path(rc.out_path);
  write_file_atomic(out, csv);
  std::cout << csv;
  return 0;
}

struct SweepPoint {
  std::string axis_label;
  std::vector<std::pair<int, double>> rows;  // (k, value)
};

int cmd_sweep(const RunConfig& rc) {
  if (rc.axis.empty()) fail(errc::no_axis, "missing --axis");
  if (rc.axis != "degree" && rc.axis != "l" && rc.axis != "aspect")
    fail(errc::invalid_argument, "axis must be degree, l, or aspect");
  const std::vector<std::string> range_tokens = split_list(rc.range, ",");
  std::vector<double> axis_values;
  if (rc.axis == "degree" && rc.range.find(':') != std::string::npos) {
    const auto parts = split_list(rc.range, ":");
    if (parts.size() != 3) fail(errc::invalid_argument, "degree range must be start:stop:step");
    const int start = parse_int(parts[0]), stop = parse_int(parts[1]), step = parse_int(parts[2]);
    if (step <= 0) fail(errc::invalid_argument, "range step must be positive");
    for (int d = start; d <= stop; d += step) axis_values.push_back(d);
  } else {
    for (const std::string& token : range_tokens) axis_values.push_back(parse_double(token));
  }
  if (axis_values.empty()) fail(errc::no_axis, "empty sweep axis");

  const std::vector<RuleId> rules =
      rc.rules_csv.empty() ? std::vector<RuleId>{RuleId::cor12} : parse_rules(rc);
  const RuleId rule = rules.front();
  const bool per_prefix = rc.quantity == "slack" || rc.quantity == "bound-ratio";
  if (rc.quantity != "eigenvalue" && !per_prefix)
    fail(errc::invalid_argument, "quantity must be eigenvalue, slack, or bound-ratio");
  if (per_prefix && rc.k < 2)
    fail(errc::insufficient_values, "slack and bound-ratio sweeps need --k >= 2");

  std::vector<SweepPoint> points;
  for (double axis_value : axis_values) {
    RunConfig point_rc = rc;
    if (rc.axis == "degree") {
      point_rc.degree = static_cast<int>(axis_value);
    } else if (rc.axis == "l") {
      point_rc.l = static_cast<int>(axis_value);
    } else {
      ProblemSpec base = make_problem(rc);
      if (base.domain.kind != DomainKind::rectangle)
        fail(errc::invalid_argument, "aspect sweeps need a rectangle domain");
      base.domain.lengths[0] = axis_value * base.domain.lengths[1];
      point_rc.domain = "rectangle:" + format_double(base.domain.lengths[0]) + "," +
                        format_double(base.domain.lengths[1]);
    }
    const ProblemSpec problem = make_problem(point_rc);
    const SolveConfig config = make_solve_config(point_rc);
    const std::string bytes = solve_bytes(problem, config, point_rc.refine, cache_directory(rc));
    const StoredSpectrum stored = spectrum_from_json(ordered_json::parse(bytes));
    const std::vector<double>& values = stored.spectrum.values;

    SweepPoint point;
    point.axis_label = rc.axis == "aspect" ? format_double(axis_value)
                                           : std::to_string(static_cast<int>(axis_value));
    if (rc.quantity == "eigenvalue") {
      for (std::size_t i = 0; i < values.size(); ++i)
        point.rows.emplace_back(static_cast<int>(i + 1), values[i]);
    } else {
      RuleParams params;
      params.n = rc.n;
      params.order = problem.order;
      if (!rule_applicable(rule, problem, params))
        fail(errc::rule_not_applicable,
             std::string(to_string(rule)) + " does not apply to this spectrum");
      for (int k = 1; k + 1 <= static_cast<int>(values.size()); ++k) {
        if (rc.quantity == "slack") {
          const InequalityReport report = eval_rule(
              rule, params, std::span<const double>(values.data(), k + 1), discrete_tolerance);
          point.rows.emplace_back(k, report.slack);
        } else {
          const BoundResult result =
              bound_from_rule(rule, params, std::span<const double>(values.data(), k));
          point.rows.emplace_back(k, result.bound / values[k]);
        }
      }
    }
    points.push_back(std::move(point));
  }

  std::string csv = "axis,k,value\n";
  for (const SweepPoint& point : points)
    for (const auto& [k, value] : point.rows)
      csv += point.axis_label + "," + std::to_string(k) + "," + format_double(value) + "\n";
  write_file_atomic(rc.csv_path, csv);

  // Plot-ready blocks: per-k series along the axis, except bound-ratio runs,
  // which read better as one series per axis value against k.
  std::string plot;
  if (rc.quantity == "bound-ratio") {
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (p) plot += "\n\n";
      plot += "# " + rc.axis + "=" + points[p].axis_label + "\n";
      for (const auto& [k, value] : points[p].rows)
        plot += std::to_string(k) + " " + format_double(value) + "\n";
    }
  } else {
    const std::size_t series = points.empty() ? 0 : points.front().rows.size();
    for (std::size_t s = 0; s < series; ++s) {
      if (s) plot += "\n\n";
      plot += "# k=" + std::to_string(s + 1) + "\n";
      for (const SweepPoint& point : points)
        if (s < point.rows.size())
          plot += point.axis_label + " " + format_double(point.rows[s].second) + "\n";
    }
  }
  write_file_atomic(rc.plot_path, plot);

  std::cout << rc.csv_path << "\n" << rc.plot_path << "\n";
  return 0;
}

std::string error_record(const std::string& code, const std::string& message) {
  ordered_json j;
  j["error"] = {{"code", code}, {"message", message}};
  return j.dump() + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;
  CLI::App app{"polyharmonic buckling and clamped eigenvalue toolkit"};
  app.set_version_flag("--version", std::string(version_string));
  app.require_subcommand(1);

  const auto add_problem_flags = [&rc](CLI::App* cmd) {
    cmd->add_option("--l", rc.l, "operator order (>= 2)");
    cmd->add_option("--kind", rc.kind, "buckling or clamped");
    cmd->add_option("--domain", rc.domain, "interval:h, rectangle:a,b, or cylinder:L,h");
  };
  const auto add_solver_flags = [&rc](CLI::App* cmd) {
    cmd->add_option("--degree", rc.degree, "basis functions per dimension");
    cmd->add_option("--quadrature", rc.quadrature, "quadrature points (0 = exact default)");
    cmd->add_option("--modes", rc.modes, "cylinder Fourier mode cutoff");
    cmd->add_option("--k", rc.k, "eigenvalues to compute");
    cmd->add_flag("--refine", rc.refine, "refine degree until the k-th value settles");
    cmd->add_option("--rel-tol", rc.rel_tol, "refinement relative tolerance");
    cmd->add_option("--max-degree", rc.max_degree, "refinement degree cap");
  };
  const auto add_cache_flags = [&rc](CLI::App* cmd) {
    cmd->add_option("--cache-dir", rc.cache_dir, "cache directory (default $BUCKSPEC_CACHE)");
    cmd->add_flag("--no-cache", rc.no_cache, "bypass the spectrum cache");
  };
  const auto add_source_flags = [&rc](CLI::App* cmd) {
    cmd->add_option("--spectrum", rc.spectrum_path, "spectrum file to load");
    cmd->add_option("--values", rc.values_csv, "comma-separated eigenvalues");
  };
  const auto add_rule_flags = [&rc](CLI::App* cmd) {
    cmd->add_option("--rules", rc.rules_csv, "rule list, e.g. cor12+thm11");
    cmd->add_option("--n", rc.n, "ambient dimension for the dimension-dependent rules");
    cmd->add_option("--delta", rc.delta, "delta parameter of the sphere rule");
    cmd->add_option("--delta-seq", rc.delta_seq_csv, "fixed delta sequence for thm11");
    cmd->add_option("--k-max", rc.k_max, "largest prefix length to test");
  };

  CLI::App* solve = app.add_subcommand("solve", "compute a spectrum and write it as JSON");
  add_problem_flags(solve);
  add_solver_flags(solve);
  add_cache_flags(solve);
  solve->add_option("--out", rc.out_path, "output spectrum path (default spectrum.json)");

  CLI::App* verify = app.add_subcommand("verify", "evaluate rules against a spectrum");
  add_problem_flags(verify);
  add_solver_flags(verify);
  add_cache_flags(verify);
  add_source_flags(verify);
  add_rule_flags(verify);
  verify->add_option("--report", rc.report_path, "report CSV path");
  verify->add_option("--summary", rc.summary_path, "summary JSON path");

  CLI::App* bound = app.add_subcommand("bound", "extract next-eigenvalue bounds from rules");
  add_problem_flags(bound);
  add_solver_flags(bound);
  add_cache_flags(bound);
  add_source_flags(bound);
  add_rule_flags(bound);
  bound->add_option("--delta-policy", rc.delta_policy, "fixed or optimize");
  bound->add_option("--out", rc.out_path, "bound table CSV path (default bounds.csv)");

  CLI::App* sweep = app.add_subcommand("sweep", "solve along an axis and tabulate results");
  add_problem_flags(sweep);
  add_solver_flags(sweep);
  add_cache_flags(sweep);
  add_rule_flags(sweep);
  sweep->add_option("--axis", rc.axis, "degree, l, or aspect");
  sweep->add_option("--range", rc.range, "start:stop:step (degree) or comma list");
  sweep->add_option("--quantity", rc.quantity, "eigenvalue, slack, or bound-ratio");
  sweep->add_option("--csv", rc.csv_path, "long-format CSV path");
  sweep->add_option("--plot", rc.plot_path, "plot-ready data path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_record("USAGE", e.what());
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(rc);
    if (verify->parsed()) return cmd_verify(rc);
    if (bound->parsed()) return cmd_bound(rc);
    return cmd_sweep(rc);
  } catch (const error& e) {
    std::cerr << error_record(to_string(e.code()), e.message());
    return 2;
  } catch (const std::exception& e) {
    std::cerr << error_record("INTERNAL", e.what());
    return 2;
  }
}
