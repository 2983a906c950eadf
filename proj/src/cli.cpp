#include "pspin/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pspin/errors.hpp"
#include "pspin/exactdiag.hpp"
#include "pspin/parallel.hpp"
#include "pspin/phase_diagram.hpp"
#include "pspin/statapprox.hpp"

namespace pspin::cli {

using Json = nlohmann::ordered_json;

namespace {

struct Named {
  Command command;
  const char* name;
  const char* help;
};

constexpr Named kCommands[] = {
    {Command::PhaseDiagram, "phase-diagram", "semi-classical ground state on a (lambda, s) grid"},
    {Command::TransitionLines, "transition-lines", "first- and second-order transition lines"},
    {Command::GapScan, "gap-scan", "spin-wave gap along an s sweep at fixed lambda"},
    {Command::ExactGap, "exact-gap", "lowest two levels of the S = N/2 sector"},
    {Command::Overlap, "overlap", "ground-state overlap of the k-body driver with the target"},
    {Command::StatApprox, "stat-approx", "static-approximation self-consistent solution"},
    {Command::PathEval, "path-eval", "first/second-order crossings and minimum gap along a path"},
};

std::string csv(double x) {
  if (std::isnan(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string line;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) line += ',';
    line += c;
    first = false;
  }
  line += '\n';
  return line;
}

std::string phase_label(Phase phase) { return std::string(to_string(phase)); }

Json meta(const RunConfig& config) {
  Json m;
  m["command"] = to_string(config.command);
  if (config.p == 0) {
    m["p"] = "inf";
  } else {
    m["p"] = config.p;
  }
  m["k"] = config.k;
  m["version"] = kVersion;
  return m;
}

std::string wrap(const RunConfig& config, Json data) {
  Json doc;
  doc["meta"] = meta(config);
  doc["data"] = std::move(data);
  return doc.dump() + "\n";
}

std::string kind_label(TransitionKind kind) {
  return kind == TransitionKind::FirstOrder ? "first" : "second";
}

std::string phase_diagram(const RunConfig& config, Format format) {
  const PhaseDiagram d = scan_diagram(config.params(), config.n_lambda, config.n_s);
  if (format == Format::Csv) {
    std::string text = "lambda,s,theta0,mx,mz,energy,phase\n";
    for (const auto& c : d.cells) {
      text += csv_row({csv(c.point.lambda), csv(c.point.s), csv(c.state.theta0), csv(c.state.mx()),
                       csv(c.state.mz()), csv(c.state.energy), phase_label(c.state.phase)});
    }
    return text;
  }
  Json cells = Json::array();
  for (const auto& c : d.cells) {
    cells.push_back({{"lambda", c.point.lambda},
                     {"s", c.point.s},
                     {"theta0", c.state.theta0},
                     {"mx", c.state.mx()},
                     {"mz", c.state.mz()},
                     {"energy", c.state.energy},
                     {"phase", phase_label(c.state.phase)}});
  }
  return wrap(config, {{"n_lambda", d.n_lambda}, {"n_s", d.n_s}, {"cells", std::move(cells)}});
}

std::string transition_lines(const RunConfig& config, Format format) {
  const auto lines = find_transition_lines(config.params());
  if (format == Format::Csv) {
    std::string text = "line,kind,phase_a,phase_b,lambda,s,energy_split,tolerance\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& l = lines[i];
      for (const auto& pt : l.points) {
        text += csv_row({std::to_string(i), kind_label(l.kind), phase_label(l.pair.first),
                         phase_label(l.pair.second), csv(pt.point.lambda), csv(pt.point.s),
                         csv(pt.energy_split), csv(l.tolerance)});
      }
    }
    return text;
  }
  Json out = Json::array();
  for (const auto& l : lines) {
    Json pts = Json::array();
    for (const auto& pt : l.points) {
      pts.push_back({{"lambda", pt.point.lambda}, {"s", pt.point.s}, {"energy_split", pt.energy_split}});
    }
    out.push_back({{"kind", kind_label(l.kind)},
                   {"pair", {phase_label(l.pair.first), phase_label(l.pair.second)}},
                   {"tolerance", l.tolerance},
                   {"points", std::move(pts)}});
  }
  return wrap(config, {{"lines", std::move(out)}});
}

std::string gap_scan(const RunConfig& config, Format format) {
  std::vector<double> grid(static_cast<std::size_t>(config.samples));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    grid[j] = static_cast<double>(j) / static_cast<double>(config.samples - 1);
  }
  const auto profile = gap_profile(config.params(), config.lambda, grid);
  if (format == Format::Csv) {
    std::string text = "lambda,s,theta0,delta,gamma,epsilon,gap,valid\n";
    for (const auto& g : profile) {
      text += csv_row({csv(g.point.lambda), csv(g.point.s), csv(g.theta0), csv(g.delta),
                       csv(g.gamma), csv(g.epsilon), g.gap ? csv(*g.gap) : std::string(),
                       g.valid ? "1" : "0"});
    }
    return text;
  }
  Json rows = Json::array();
  for (const auto& g : profile) {
    Json row = {{"s", g.point.s},         {"theta0", g.theta0},   {"delta", g.delta},
                {"gamma", g.gamma},       {"epsilon", g.epsilon}, {"gap", nullptr},
                {"valid", g.valid}};
    if (g.gap) row["gap"] = *g.gap;
    if (!g.valid) row["breakdown"] = g.breakdown;
    rows.push_back(std::move(row));
  }
  return wrap(config, {{"lambda", config.lambda}, {"profile", std::move(rows)}});
}

std::string exact_gap(const RunConfig& config, Format format) {
  const SectorOperator op(config.n, config.params(), AnnealPoint(config.lambda, config.s));
  EigenOptions options;
  options.max_iterations = config.max_iterations;
  const SectorSpectrum sp = lowest_eigenpairs(op, std::min(2, config.n + 1), options);
  const double e0 = sp.eigenvalues[0];
  const double e1 = sp.eigenvalues.size() > 1 ? sp.eigenvalues[1] : std::nan("");
  if (format == Format::Csv) {
    return "n,lambda,s,e0,e1,gap_n\n" + csv_row({std::to_string(config.n), csv(config.lambda),
                                                 csv(config.s), csv(e0), csv(e1), csv(sp.gap_n)});
  }
  Json data = {{"n", config.n}, {"lambda", config.lambda}, {"s", config.s}, {"e0", e0}};
  data["e1"] = std::isnan(e1) ? Json(nullptr) : Json(e1);
  data["gap_n"] = std::isnan(sp.gap_n) ? Json(nullptr) : Json(sp.gap_n);
  data["degenerate"] = sp.degenerate;
  return wrap(config, std::move(data));
}

std::string overlap(const RunConfig& config, Format format) {
  const double v = overlap_vk(config.n, config.k);
  if (format == Format::Csv) {
    return "n,k,overlap\n" + csv_row({std::to_string(config.n), std::to_string(config.k), csv(v)});
  }
  return wrap(config, {{"n", config.n}, {"k", config.k}, {"overlap", v}});
}

std::string beta_label(double beta) { return std::isinf(beta) ? "inf" : csv(beta); }

std::string stat_approx(const RunConfig& config, Format format) {
  const ModelParams params = config.params();
  if (config.grid) {
    const auto cells = scan_static(params, config.n_lambda, config.n_s);
    if (format == Format::Csv) {
      std::string text = "lambda,s,mx,mz,free_energy,phase,converged\n";
      for (const auto& c : cells) {
        const auto& sol = c.solution;
        text += csv_row({csv(c.point.lambda), csv(c.point.s), csv(sol.mx), csv(sol.mz),
                         csv(sol.free_energy), phase_label(sol.phase), sol.converged ? "1" : "0"});
      }
      return text;
    }
    Json rows = Json::array();
    for (const auto& c : cells) {
      const auto& sol = c.solution;
      rows.push_back({{"lambda", c.point.lambda},
                      {"s", c.point.s},
                      {"mx", sol.mx},
                      {"mz", sol.mz},
                      {"free_energy", sol.free_energy},
                      {"phase", phase_label(sol.phase)},
                      {"converged", sol.converged}});
    }
    return wrap(config, {{"cells", std::move(rows)}});
  }
  const auto sol = solve_static(AnnealPoint(config.lambda, config.s), params, config.beta);
  if (format == Format::Csv) {
    return "lambda,s,beta,mx,mz,free_energy,phase,converged,iterations\n" +
           csv_row({csv(config.lambda), csv(config.s), beta_label(config.beta), csv(sol.mx),
                    csv(sol.mz), csv(sol.free_energy), phase_label(sol.phase),
                    sol.converged ? "1" : "0", std::to_string(sol.iterations)});
  }
  Json data = {{"lambda", config.lambda}, {"s", config.s}};
  data["beta"] = std::isinf(config.beta) ? Json("inf") : Json(config.beta);
  data["mx"] = sol.mx;
  data["mz"] = sol.mz;
  data["free_energy"] = sol.free_energy;
  data["phase"] = phase_label(sol.phase);
  data["converged"] = sol.converged;
  data["iterations"] = sol.iterations;
  return wrap(config, std::move(data));
}

std::string path_eval(const RunConfig& config, Format format) {
  const AnnealPath path = load_path_file(config.path_file, config.strict);
  const PathReport r = evaluate_path(path, config.params(), config.samples);
  if (format == Format::Csv) {
    std::string text = "position,lambda,s,kind,theta_jump,before,after\n";
    for (const auto& c : r.crossings) {
      text += csv_row({csv(c.position), csv(c.point.lambda), csv(c.point.s), kind_label(c.kind),
                       csv(c.theta_jump), phase_label(c.before), phase_label(c.after)});
    }
    return text;
  }
  Json crossings = Json::array();
  for (const auto& c : r.crossings) {
    crossings.push_back({{"position", c.position},
                         {"lambda", c.point.lambda},
                         {"s", c.point.s},
                         {"kind", kind_label(c.kind)},
                         {"theta_jump", c.theta_jump},
                         {"before", phase_label(c.before)},
                         {"after", phase_label(c.after)}});
  }
  Json breakdown = Json::array();
  for (const auto& b : r.breakdown_intervals) breakdown.push_back({b.start, b.end});
  Json data = {{"samples", r.samples},
               {"meaningless", r.meaningless},
               {"first_order", r.count(TransitionKind::FirstOrder)},
               {"second_order", r.count(TransitionKind::SecondOrder)},
               {"crossings", std::move(crossings)}};
  data["min_gap"] = r.min_gap ? Json(*r.min_gap) : Json(nullptr);
  data["min_gap_position"] = r.min_gap ? Json(r.min_gap_position) : Json(nullptr);
  data["breakdown_intervals"] = std::move(breakdown);
  return wrap(config, std::move(data));
}

void report_error(std::ostream& err, const char* category, const std::string& message) {
  Json e = {{"error", category}, {"message", message}};
  err << e.dump() << "\n";
}

int env_threads() {
  const char* text = std::getenv("PSPIN_THREADS");
  if (text == nullptr || *text == '\0') return -1;
  char* end = nullptr;
  const long v = std::strtol(text, &end, 10);
  if (*end != '\0' || v < 0) throw DomainError("PSPIN_THREADS must be a non-negative integer");
  return static_cast<int>(v);
}

}  // namespace

ModelParams RunConfig::params() const {
  return p == 0 ? ModelParams::infinite_p(k) : ModelParams(p, k);
}

Format RunConfig::resolved_format() const {
  if (format != Format::Auto) return format;
  switch (command) {
    case Command::PhaseDiagram:
    case Command::TransitionLines:
    case Command::GapScan:
      return Format::Csv;
    case Command::StatApprox:
      return grid ? Format::Csv : Format::Json;
    default:
      return Format::Json;
  }
}

std::string to_string(Command command) {
  for (const auto& c : kCommands) {
    if (c.command == command) return c.name;
  }
  return "?";
}

void validate(const RunConfig& config) {
  const ModelParams params = config.params();
  const bool finite = !params.is_infinite_p();
  if (config.threads < 0) throw DomainError("threads must be >= 0");
  switch (config.command) {
    case Command::PhaseDiagram:
      if (config.n_lambda < 2 || config.n_s < 2) throw DomainError("res must be at least 2x2");
      break;
    case Command::TransitionLines:
      break;
    case Command::GapScan:
      if (!finite) throw DomainError("gap-scan needs a finite p");
      AnnealPoint(config.lambda, 0.0);
      if (config.samples < 2) throw DomainError("samples must be >= 2");
      break;
    case Command::ExactGap:
      if (!finite) throw DomainError("exact-gap needs a finite p");
      AnnealPoint(config.lambda, config.s);
      if (config.n < 1) throw DomainError("n must be >= 1");
      if (config.max_iterations < 0) throw DomainError("max-iter must be >= 0");
      break;
    case Command::Overlap:
      if (config.n < 1) throw DomainError("n must be >= 1");
      break;
    case Command::StatApprox:
      if (!finite) throw DomainError("stat-approx needs a finite p");
      if (!(config.beta > 0.0)) throw DomainError("beta must be positive");
      if (config.grid) {
        if (config.n_lambda < 2 || config.n_s < 2) throw DomainError("res must be at least 2x2");
      } else {
        AnnealPoint(config.lambda, config.s);
      }
      break;
    case Command::PathEval:
      if (config.path_file.empty()) throw DomainError("path-eval needs --path");
      if (config.samples < kMinPathSamples) throw DomainError("samples must be >= 16");
      break;
  }
}

int run_to(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const int env = env_threads();
    set_num_threads(env >= 0 ? env : config.threads);
    const Format format = config.resolved_format();
    std::string text;
    switch (config.command) {
      case Command::PhaseDiagram: text = phase_diagram(config, format); break;
      case Command::TransitionLines: text = transition_lines(config, format); break;
      case Command::GapScan: text = gap_scan(config, format); break;
      case Command::ExactGap: text = exact_gap(config, format); break;
      case Command::Overlap: text = overlap(config, format); break;
      case Command::StatApprox: text = stat_approx(config, format); break;
      case Command::PathEval: text = path_eval(config, format); break;
    }
    out << text;
    out.flush();
    return 0;
  } catch (const DomainError& e) {
    report_error(err, "validation", e.what());
    return 1;
  } catch (const NumericalError& e) {
    report_error(err, "numerical", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(err, "numerical", e.what());
    return 2;
  }
}

int run(const RunConfig& config, std::ostream& err) {
  if (config.out.empty()) return run_to(config, std::cout, err);
  std::ostringstream buffer;
  const int code = run_to(config, buffer, err);
  if (code != 0) return code;
  std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    report_error(err, "validation", "cannot write " + config.out);
    return 1;
  }
  file << buffer.str();
  return file ? 0 : 1;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, int* exit_code,
                                    std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Phase diagrams, gaps, spectra and path verdicts for the p-spin annealing model",
               "pspin"};
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  std::string p_text = "11";
  std::string res_text;
  std::string beta_text = "inf";
  std::string format_text = "auto";
  app.add_option("--p", p_text, "odd p >= 3, or 'inf' for the analytic limit");
  app.add_option("--k", config.k, "driver exponent, k >= 2");
  app.add_option("--res", res_text, "grid resolution NxM (lambda x s)");
  app.add_option("--lambda", config.lambda, "lambda in [0, 1]");
  app.add_option("--s", config.s, "s in [0, 1]");
  app.add_option("--n", config.n, "number of spins");
  app.add_option("--max-iter", config.max_iterations, "Lanczos iteration cap for exact-gap");
  app.add_option("--beta", beta_text, "inverse temperature or 'inf'");
  app.add_option("--path", config.path_file, "path file: 'lambda s' per line");
  app.add_option("--samples", config.samples, "s points (gap-scan) or path samples (path-eval)");
  app.add_flag("--strict", config.strict, "reject paths whose s decreases");
  app.add_option("--threads", config.threads, "OpenMP threads, 0 = default (PSPIN_THREADS wins)");
  app.add_option("--out", config.out, "output file (default stdout)");
  app.add_option("--format", format_text, "csv, json or auto")
      ->check(CLI::IsMember({"auto", "csv", "json"}));

  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& c : kCommands) subs.emplace_back(app.add_subcommand(c.name, c.help), c.command);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    *exit_code = app.exit(e, out, err);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    report_error(err, "validation", e.what());
    *exit_code = 1;
    return std::nullopt;
  }

  try {
    for (const auto& [sub, command] : subs) {
      if (sub->parsed()) config.command = command;
    }
    if (p_text == "inf") {
      config.p = 0;
    } else {
      std::size_t used = 0;
      config.p = std::stoi(p_text, &used);
      if (used != p_text.size()) throw DomainError("--p must be an integer or 'inf'");
    }
    if (!res_text.empty()) {
      const auto x = res_text.find('x');
      if (x == std::string::npos) throw DomainError("--res must look like 256x256");
      std::size_t a = 0, b = 0;
      config.n_lambda = std::stoi(res_text.substr(0, x), &a);
      config.n_s = std::stoi(res_text.substr(x + 1), &b);
      if (a != x || b != res_text.size() - x - 1) throw DomainError("--res must look like 256x256");
      config.grid = true;
    }
    if (beta_text != "inf") {
      std::size_t used = 0;
      config.beta = std::stod(beta_text, &used);
      if (used != beta_text.size()) throw DomainError("--beta must be a number or 'inf'");
    }
    config.format = format_text == "csv" ? Format::Csv
                    : format_text == "json" ? Format::Json
                                            : Format::Auto;
    if (config.command == Command::PathEval && app.get_option("--samples")->count() == 0) {
      config.samples = 256;
    }
    config.params();
  } catch (const std::exception& e) {
    report_error(err, "validation", e.what());
    *exit_code = 1;
    return std::nullopt;
  }
  *exit_code = 0;
  return config;
}

AnnealPath parse_path(std::istream& in, bool strict) {
  std::vector<AnnealPoint> points;
  std::vector<int> line_of;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    const auto where = "line " + std::to_string(number) + ": ";
    if (tokens.size() != 2) throw DomainError(where + "expected 'lambda s'");
    double v[2];
    for (int i = 0; i < 2; ++i) {
      std::size_t used = 0;
      try {
        v[i] = std::stod(tokens[static_cast<std::size_t>(i)], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != tokens[static_cast<std::size_t>(i)].size()) {
        throw DomainError(where + "not a number: '" + tokens[static_cast<std::size_t>(i)] + "'");
      }
    }
    try {
      points.emplace_back(v[0], v[1]);
    } catch (const DomainError& e) {
      throw DomainError(where + e.what());
    }
    if (strict && points.size() > 1 && points.back().s < points[points.size() - 2].s) {
      throw DomainError(where + "s decreases");
    }
    line_of.push_back(number);
  }
  if (points.size() < 2) throw DomainError("path needs at least two waypoints");
  if (points.front().s != 0.0) {
    throw DomainError("line " + std::to_string(line_of.front()) + ": path must start at s = 0");
  }
  if (points.back().lambda != 1.0 || points.back().s != 1.0) {
    throw DomainError("path must end at (1,1)");
  }
  return AnnealPath(std::move(points), strict);
}

AnnealPath load_path_file(const std::string& file, bool strict) {
  std::ifstream in(file);
  if (!in) throw DomainError("cannot open path file " + file);
  return parse_path(in, strict);
}

std::string format_double(double x) { return csv(x); }

}  // namespace pspin::cli
