#include "scenario.hpp"

#include <fmt/core.h>

#include "delaymp/core/error.hpp"
#include "delaymp/sdde/test_problems.hpp"

namespace delaymp::cli {

LqParams lq_params(const ConfigFile& f, const RunConfig& run) {
  LqParams p;
  p.M = f.get_double("lq", "M", p.M);
  p.Mbar = f.get_double("lq", "Mbar", p.Mbar);
  p.C = f.get_double("lq", "C", p.C);
  p.D = f.get_double("lq", "D", p.D);
  p.Dbar = f.get_double("lq", "Dbar", p.Dbar);
  p.N = f.get_double("lq", "N", p.N);
  p.Nbar = f.get_double("lq", "Nbar", p.Nbar);
  p.phi = f.get_double("lq", "phi", p.phi);
  p.eta = f.get_double("lq", "eta", p.eta);
  p.horizon = run.horizon;
  p.delay = run.delay;
  if (!(p.N > 0.0)) {
    throw Error(Errc::ConfigError, fmt::format("key 'lq.N' must be positive, got {}", p.N));
  }
  if (!(p.Nbar > 0.0)) {
    throw Error(Errc::ConfigError, fmt::format("key 'lq.Nbar' must be positive, got {}", p.Nbar));
  }
  return p;
}

Scenario make_scenario(const ConfigFile& f, const RunConfig& run) {
  const TimeGrid grid = run.grid();
  const std::string name = f.get_string("sdde", "problem", "lq");
  if (name == "lq") {
    const LqParams p = lq_params(f, run);
    ControlProcess u = f.has("sdde", "control")
                           ? ControlProcess::constant(grid, lq_initial_data(p, grid),
                                                      f.get_double("sdde", "control", 0.0))
                           : closed_form_process(p, grid);
    return {lq_problem(p), lq_initial_data(p, grid), std::move(u), p};
  }
  DelayProblem problem;
  double phi = 0.0, eta = 0.0, control = 0.0;
  if (name == "smooth") {
    problem = smooth_test_problem();
    phi = 1.0;
    eta = -1.0;
    control = -1.0;
  } else if (name == "exp-martingale") {
    problem = exponential_martingale_problem();
    phi = 1.0;
  } else if (name == "frozen") {
    problem = frozen_problem();
  } else {
    throw Error(Errc::ConfigError,
                fmt::format("key 'sdde.problem' has value '{}', expected one of lq, smooth, "
                            "exp-martingale, frozen",
                            name));
  }
  phi = f.get_double("sdde", "phi", phi);
  eta = f.get_double("sdde", "eta", eta);
  control = f.get_double("sdde", "control", control);
  InitialData init = InitialData::constant(grid, phi, eta);
  ControlProcess u = ControlProcess::constant(grid, init, control);
  u.set_label(fmt::format("constant {}", control));
  return {std::move(problem), std::move(init), std::move(u), std::nullopt};
}

std::string example_stanza(const std::string& subcommand) {
  std::string s =
      "[core]\n"
      "T = 1\n"
      "delta = 0.5\n"
      "steps_per_delay = 8\n"
      "n_paths = 10000\n"
      "seed = 20240521\n"
      "degree = 2\n"
      "threads = 1\n"
      "\n"
      "[sdde]\n"
      "problem = lq        ; lq | smooth | exp-martingale | frozen\n";
  if (subcommand == "solve-absde") {
    s += "\n[absde]\nky = 0\nkz = 0\nka = 1\nkb = 0\nconstant = 0\nterminal = 1\n";
  } else if (subcommand == "order-study") {
    s += "\n[variation]\ntau = 0.25\neps_steps = 8, 16, 32, 64\nreplacement = 1\n";
  } else if (subcommand == "check-mp") {
    s += "\n[mp]\nadjoints = solved   ; solved | exact (lq only)\nv_grid = -2, -1, 1, 2\n";
  } else if (subcommand == "lq-demo") {
    s += "\n[lq]\nM = 2\nMbar = 2\nC = 0.5\nD = 0.3\nDbar = 0.2\nN = 1\nNbar = 1\nphi = 0\neta = -1\n";
  }
  return s;
}

}  // namespace delaymp::cli
