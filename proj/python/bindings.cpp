#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gresilience/decision.hpp"
#include "gresilience/errors.hpp"
#include "gresilience/game.hpp"
#include "gresilience/green_meter.hpp"
#include "gresilience/metrics.hpp"
#include "gresilience/report_io.hpp"
#include "gresilience/simulation.hpp"

namespace py = pybind11;
using namespace gresilience;

namespace {

py::dict solution_dict(const EquilibriumSolution& s) {
  const auto& m = s.payoffs;
  py::dict d;
  d["A"] = m.A();
  d["B"] = m.B();
  d["C"] = m.C();
  d["D"] = m.D();
  d["a"] = m.a();
  d["b"] = m.b();
  d["c"] = m.c();
  d["d"] = m.d();
  py::list psne;
  for (const auto& p : s.psne) {
    psne.append(py::make_tuple(std::string(to_string(p.p1)), std::string(to_string(p.p2))));
  }
  d["psne"] = psne;
  d["sigma_p1_a1"] = s.msne.sigma_p1_robot;
  d["sigma_p2_a1"] = s.msne.sigma_p2_robot;
  d["payoff_p1"] = s.msne_payoff_p1;
  d["payoff_p2"] = s.msne_payoff_p2;
  return d;
}

py::dict row_dict(const ReportRow& r) {
  py::dict d;
  d["scenario_id"] = r.scenario_id;
  d["seed"] = r.seed;
  d["policy"] = r.policy;
  d["objects_total"] = r.objects_total;
  d["robot_placed"] = r.robot_placed;
  d["human_placed"] = r.human_placed;
  d["missed"] = r.missed;
  d["corrections"] = r.corrections;
  d["human_interactions"] = r.human_interactions;
  d["recovery_mean_s"] = r.recovery_mean_s;
  d["recovery_p95_s"] = r.recovery_p95_s;
  d["energy_wh"] = r.energy_wh;
  d["co2e_g"] = r.co2e_g;
  d["combined_score"] = r.combined_score;
  return d;
}

}  // namespace

PYBIND11_MODULE(_gresilience, m) {
  m.doc() = "Gresilience game solver and collaborative-cell simulator";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<DomainError> domain(m, "DomainError", validation.ptr());
  static py::exception<DegenerateGameError> degenerate(m, "DegenerateGameError", error.ptr());
  static py::exception<InvariantError> invariant(m, "InvariantError", error.ptr());
  static py::exception<IntegrityError> integrity(m, "IntegrityError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      py::set_error(domain, e.what());
    } catch (const ValidationError& e) {
      py::set_error(validation, e.what());
    } catch (const DegenerateGameError& e) {
      py::set_error(degenerate, e.what());
    } catch (const InvariantError& e) {
      py::set_error(invariant, e.what());
    } catch (const IntegrityError& e) {
      py::set_error(integrity, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def(
      "solve",
      [](double eps, double t_h, double t_a, double h, double co2, const std::string& scale) {
        return solution_dict(solve({t_h, t_a, h, co2}, eps, parse_scale_mode(scale)));
      },
      py::arg("eps"), py::arg("t_h"), py::arg("t_a"), py::arg("h"), py::arg("co2"),
      py::arg("scale") = "complement",
      "Payoff matrix, pure and mixed equilibria of one game.");

  m.def(
      "decide",
      [](double eps, double t_h, double t_a, double h, double co2, const std::string& policy,
         std::uint64_t seed, int n) {
        const Policy p = parse_policy(policy);
        RandomSource rng(seed);
        py::list actions;
        py::dict out;
        for (int i = 0; i < n; ++i) {
          const Decision d = decide(eps, {t_h, t_a, h, co2}, p, rng);
          actions.append(std::string(to_string(d.action)));
          if (i == 0) {
            out["rationale"] = std::string(to_string(d.rationale));
            out["p_robot"] = d.sampled_probability_robot ? py::cast(*d.sampled_probability_robot)
                                                         : py::none();
          }
        }
        out["actions"] = actions;
        return out;
      },
      py::arg("eps"), py::arg("t_h"), py::arg("t_a"), py::arg("h"), py::arg("co2"),
      py::arg("policy") = "gresilience", py::arg("seed") = 0, py::arg("n") = 1,
      "Run the decision engine n times on one seeded stream.");

  m.def(
      "run_scenario",
      [](const std::string& path, std::optional<std::uint64_t> seed,
         std::optional<std::string> policy) {
        ScenarioConfig cfg = load_scenario(path);
        if (seed) cfg.seed = *seed;
        if (policy) cfg.policy = parse_policy(*policy);
        SimulationResult res;
        {
          py::gil_scoped_release release;
          res = run_scenario(cfg);
        }
        const RunReport report = build_report(res.log, cfg);
        py::dict out;
        out["report"] = row_dict(to_row(report));
        out["report_csv"] = write_report_csv({to_row(report)});
        out["events"] = res.log.to_text();
        out["episodes"] = report.episodes;
        out["in_flight"] = report.counters.in_flight;
        out["discarded"] = report.counters.discarded;
        return out;
      },
      py::arg("path"), py::arg("seed") = py::none(), py::arg("policy") = py::none(),
      "Simulate a scenario file; returns the report row and the event log text.");

  m.def(
      "co2e_g",
      [](double joules, double intensity) {
        EnergyLedger l;
        l.record(EnergySource::kCompute, joules, 1.0);
        return co2e(l, intensity).co2e_g;
      },
      py::arg("joules"), py::arg("carbon_intensity_g_per_kwh") = kDefaultCarbonIntensity);

  m.def("report_csv_columns", [] {
    std::vector<std::string> cols;
    std::string h(report_csv_header());
    std::size_t start = 0;
    for (std::size_t i = 0; i <= h.size(); ++i) {
      if (i == h.size() || h[i] == ',') {
        cols.push_back(h.substr(start, i - start));
        start = i + 1;
      }
    }
    return cols;
  });
}
