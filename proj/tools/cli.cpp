#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gresilience/errors.hpp"
#include "gresilience/game.hpp"
#include "gresilience/metrics.hpp"
#include "gresilience/report_io.hpp"
#include "gresilience/scenario.hpp"
#include "gresilience/simulation.hpp"

namespace gresilience::cli {

namespace fs = std::filesystem;

namespace {

struct SolveArgs {
  double eps = 0.0;
  double t_h = 0.0;
  double t_a = 0.0;
  double h = 0.0;
  double co2 = 0.0;
  std::string scale = "complement";
  std::string format = "table";
};

struct RunArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string policy;
  std::string out;
  std::string format = "text";
};

struct SweepArgs {
  std::string scenario;
  std::string parameter;
  std::string range;
  int replications = 1;
  std::string out;
};

struct CompareArgs {
  std::string scenario;
  std::vector<std::string> policies;
  int replications = 1;
  std::string out;
};

std::string default_out_dir() {
  const char* env = std::getenv("GRESILIENCE_OUT");
  return env && *env ? env : "out";
}

// Maps game-core field names back to solve's flags.
std::string flag_for(const std::string& field) {
  static const std::map<std::string, std::string> kFlags = {
      {"eps", "--eps"}, {"t_h", "--th"}, {"t_a", "--ta"},
      {"h", "--h"},     {"co2", "--co2"}, {"scale_mode", "--scale"}};
  const auto it = kFlags.find(field);
  return it == kFlags.end() ? field : it->second;
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("out", "cannot write '" + path.string() + "'");
  f << bytes;
  if (!f) throw ValidationError("out", "write failed for '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& out) {
  const fs::path dir = out.empty() ? fs::path(default_out_dir()) : fs::path(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("out", "cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

// Runs fn(0..n-1) on worker threads; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          slots[i].emplace(fn(i));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string summary_text(const std::vector<RunReport>& reports) {
  return summary_to_json(reports).dump(2) + "\n";
}

std::string csv_for(const std::vector<RunReport>& reports) {
  std::vector<ReportRow> rows;
  for (const auto& r : reports) rows.push_back(to_row(r));
  return write_report_csv(rows);
}

RunReport simulate(const ScenarioConfig& cfg, SimulationResult* keep = nullptr) {
  SimulationResult res = run_scenario(cfg);
  RunReport report = build_report(res.log, cfg);
  if (keep) *keep = std::move(res);
  return report;
}

// --- solve -----------------------------------------------------------------

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  P2ScaleMode mode;
  try {
    mode = parse_scale_mode(a.scale);
  } catch (const ValidationError& e) {
    throw ValidationError("scale_mode", "expected complement|same|unit, got '" + a.scale + "'");
  }
  const SystemFactors f{a.t_h, a.t_a, a.h, a.co2};
  const EquilibriumSolution sol = solve(f, a.eps, mode);
  const BimatrixPayoffs& m = sol.payoffs;

  if (a.format == "json") {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["eps"] = a.eps;
    j["factors"] = {{"t_h", a.t_h}, {"t_a", a.t_a}, {"h", a.h}, {"co2", a.co2}};
    j["scale"] = to_string(mode);
    j["p1"] = {{"A", m.A()}, {"B", m.B()}, {"C", m.C()}, {"D", m.D()}};
    j["p2"] = {{"a", m.a()}, {"b", m.b()}, {"c", m.c()}, {"d", m.d()}};
    nlohmann::ordered_json psne = nlohmann::ordered_json::array();
    for (const auto& s : sol.psne) psne.push_back({to_string(s.p1), to_string(s.p2)});
    j["psne"] = std::move(psne);
    j["msne"] = {{"sigma_p1_a1", sol.msne.sigma_p1_robot}, {"sigma_p2_a1", sol.msne.sigma_p2_robot}};
    j["msne_payoffs"] = {{"p1", sol.msne_payoff_p1}, {"p2", sol.msne_payoff_p2}};
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  const auto cell = [](double x, double y) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%9.4f, %-9.4f", x, y);
    return std::string(buf);
  };
  out << "Gresilience game  eps=" << format_number(a.eps) << "  scale=" << to_string(mode) << "\n\n";
  out << "                 P2: a1 (robot)        P2: a2 (human)\n";
  out << "P1: a1 (robot)   " << cell(m.A(), m.b()) << "   " << cell(m.C(), m.d()) << "\n";
  out << "P1: a2 (human)   " << cell(m.D(), m.c()) << "   " << cell(m.B(), m.a()) << "\n\n";
  out << "A B C D = " << format_number(m.A()) << " " << format_number(m.B()) << " "
      << format_number(m.C()) << " " << format_number(m.D()) << "\n";
  out << "a b c d = " << format_number(m.a()) << " " << format_number(m.b()) << " "
      << format_number(m.c()) << " " << format_number(m.d()) << "\n";
  out << "PSNE:";
  for (const auto& s : sol.psne) out << " (" << to_string(s.p1) << ", " << to_string(s.p2) << ")";
  out << "\n";
  out << "MSNE: sigma_p1_a1=" << format_number(sol.msne.sigma_p1_robot)
      << " sigma_p2_a1=" << format_number(sol.msne.sigma_p2_robot) << "\n";
  out << "MSNE payoffs: p1=" << format_number(sol.msne_payoff_p1)
      << " p2=" << format_number(sol.msne_payoff_p2) << "\n";
  return kExitOk;
}

// --- run -------------------------------------------------------------------

int cmd_run(const RunArgs& a, std::ostream& out) {
  ScenarioConfig cfg = load_scenario(a.scenario);
  if (a.seed) cfg.seed = *a.seed;
  if (!a.policy.empty()) cfg.policy = parse_policy(a.policy);
  cfg.validate();
  const fs::path dir = prepare_out_dir(a.out);

  SimulationResult res;
  const RunReport report = simulate(cfg, &res);
  write_file(dir / "report.csv", csv_for({report}));
  if (a.format == "text" || a.format == "both") write_file(dir / "events.log", res.log.to_text());
  if (a.format == "json" || a.format == "both") write_file(dir / "events.jsonl", res.log.to_jsonl());
  write_file(dir / "summary.json", summary_text({report}));
  out << "run " << cfg.scenario_id << " seed=" << cfg.seed << " policy=" << report.policy
      << ": " << report.counters.objects_total << " objects, " << res.log.size()
      << " events -> " << dir.string() << "\n";
  return kExitOk;
}

// --- sweep -----------------------------------------------------------------

std::vector<double> parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("--range", "expected start:stop:step, got '" + text + "'");
    }
  }
  if (parts.size() != 3) throw ValidationError("--range", "expected start:stop:step, got '" + text + "'");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0)) throw ValidationError("--range", "step must be > 0");
  if (!(start <= stop)) throw ValidationError("--range", "start must be <= stop");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(i) * step);
    values.push_back(std::strtod(buf, nullptr));
  }
  return values;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const ScenarioConfig base = load_scenario(a.scenario);
  const std::vector<double> values = parse_range(a.range);
  std::vector<ScenarioConfig> configs;
  for (double v : values) {
    ScenarioConfig cfg = with_parameter(base, a.parameter, v);
    cfg.scenario_id = base.scenario_id + "@" + a.parameter + ":" + format_number(v);
    for (int r = 0; r < a.replications; ++r) {
      ScenarioConfig rep = cfg;
      rep.seed = base.seed + static_cast<std::uint64_t>(r);
      configs.push_back(std::move(rep));
    }
  }
  const fs::path dir = prepare_out_dir(a.out);
  const std::vector<RunReport> reports = parallel_map<RunReport>(
      configs.size(), [&](std::size_t i) { return simulate(configs[i]); });
  write_file(dir / "report.csv", csv_for(reports));

  nlohmann::ordered_json summary;
  summary["schema_version"] = kReportSchemaVersion;
  summary["report_csv_columns"] = report_csv_header();
  summary["parameter"] = a.parameter;
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  const auto reps = static_cast<std::size_t>(a.replications);
  for (std::size_t p = 0; p < values.size(); ++p) {
    const std::vector<RunReport> slice(reports.begin() + static_cast<std::ptrdiff_t>(p * reps),
                                       reports.begin() + static_cast<std::ptrdiff_t>((p + 1) * reps));
    nlohmann::ordered_json point;
    point["value"] = values[p];
    point["summary"] = summary_to_json(slice);
    points.push_back(std::move(point));
  }
  summary["points"] = std::move(points);
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  out << "sweep " << a.parameter << ": " << values.size() << " points x " << a.replications
      << " replications -> " << dir.string() << "\n";
  return kExitOk;
}

// --- compare ---------------------------------------------------------------

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const ScenarioConfig base = load_scenario(a.scenario);
  std::vector<ScenarioConfig> configs;
  for (const auto& label : a.policies) {
    const Policy policy = parse_policy(label);
    for (int r = 0; r < a.replications; ++r) {
      ScenarioConfig cfg = base;
      // Bare "gresilience" keeps the scenario's own band settings.
      if (!(label == "gresilience" && std::holds_alternative<GresiliencePolicy>(base.policy))) {
        cfg.policy = policy;
      }
      cfg.seed = base.seed + static_cast<std::uint64_t>(r);
      configs.push_back(std::move(cfg));
    }
  }
  const fs::path dir = prepare_out_dir(a.out);
  const std::vector<RunReport> reports = parallel_map<RunReport>(
      configs.size(), [&](std::size_t i) { return simulate(configs[i]); });
  write_file(dir / "report.csv", csv_for(reports));
  write_file(dir / "summary.json", summary_text(reports));
  out << "compare " << a.policies.size() << " policies x " << a.replications
      << " replications -> " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gresilience game solver and collaborative-cell simulator", "gresilience"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one game for given confidence and factors");
  solve_cmd->set_help_flag("--help", "Print this help message and exit");  // --h is a factor
  solve_cmd->add_option("--eps", solve_args.eps, "Classifier confidence in (0, 1)")->required();
  solve_cmd->add_option("--th", solve_args.t_h, "Human classification time score")->required();
  solve_cmd->add_option("--ta", solve_args.t_a, "Arm classification time score")->required();
  solve_cmd->add_option("--h", solve_args.h, "Human interaction score")->required();
  solve_cmd->add_option("--co2", solve_args.co2, "CO2 score")->required();
  solve_cmd->add_option("--scale", solve_args.scale, "P2 payoff scale: complement|same|unit");
  solve_cmd->add_option("--format", solve_args.format, "table|json")
      ->check(CLI::IsMember({"table", "json"}));

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario");
  run_cmd->add_option("scenario,--scenario", run_args.scenario, "Scenario JSON file")->required();
  run_cmd->add_option("--seed", run_args.seed, "Override the scenario seed");
  run_cmd->add_option("--policy", run_args.policy,
                      "Override the policy: gresilience|always-robot|always-human|threshold[:c]");
  run_cmd->add_option("--out", run_args.out, "Output directory (default $GRESILIENCE_OUT or ./out)");
  run_cmd->add_option("--format", run_args.format, "Event log format: text|json|both")
      ->check(CLI::IsMember({"text", "json", "both"}));

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one numeric scenario parameter");
  sweep_cmd->add_option("scenario,--scenario", sweep_args.scenario, "Scenario JSON file")->required();
  sweep_cmd->add_option("--param", sweep_args.parameter, "Dotted parameter path, e.g. policy.eps_high")
      ->required();
  sweep_cmd->add_option("--range", sweep_args.range, "start:stop:step (inclusive)")->required();
  sweep_cmd->add_option("--replications", sweep_args.replications, "Runs per point")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep_args.out, "Output directory");

  CompareArgs compare_args;
  auto* compare_cmd = app.add_subcommand("compare", "Compare policies on one scenario");
  compare_cmd->add_option("scenario,--scenario", compare_args.scenario, "Scenario JSON file")
      ->required();
  compare_cmd->add_option("--policies", compare_args.policies, "Comma-separated policy list")
      ->delimiter(',')
      ->required();
  compare_cmd->add_option("--replications", compare_args.replications, "Runs per policy")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--out", compare_args.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << e.what() << "\n";
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args, out);
    if (run_cmd->parsed()) return cmd_run(run_args, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, out);
    if (compare_cmd->parsed()) return cmd_compare(compare_args, out);
  } catch (const ValidationError& e) {
    const std::string flag = solve_cmd->parsed() ? flag_for(e.field()) : e.field();
    std::string what = e.what();
    if (!e.field().empty() && what.rfind(e.field() + ": ", 0) == 0) what.erase(0, e.field().size() + 2);
    err << "error: " << (flag.empty() ? "" : flag + ": ") << what << "\n";
    return kExitUsage;
  } catch (const IntegrityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace gresilience::cli
