#include "delaymp/sdde/test_problems.hpp"

#include <cmath>

namespace delaymp {

DelayProblem smooth_test_problem() {
  DelayProblem p;
  p.name = "smooth";
  p.drift = [](const Arguments& a) {
    const double s = std::sin(a.x);
    return Jet{s + 0.5 * a.x_delay + a.v, std::cos(a.x), 0.5, -s, 0.0, 0.0};
  };
  p.diffusion = [](const Arguments& a) {
    return Jet{0.3 * a.x + 0.2 * a.x_delay + 0.5 * a.v + 0.2 * a.v_delay, 0.3, 0.2, 0.0, 0.0, 0.0};
  };
  p.running_cost = [](const Arguments& a) { return Jet{a.v * a.v}; };
  p.terminal_cost = [](double x) { return TerminalJet{x, 1.0, 0.0}; };
  p.controls = ControlSet::points({-1.0, 1.0});
  return p;
}

DelayProblem exponential_martingale_problem() {
  DelayProblem p;
  p.name = "exp-martingale";
  p.drift = [](const Arguments&) { return Jet{}; };
  p.diffusion = [](const Arguments& a) { return Jet{a.x, 1.0}; };
  p.running_cost = [](const Arguments&) { return Jet{}; };
  p.terminal_cost = [](double) { return TerminalJet{}; };
  return p;
}

DelayProblem frozen_problem() {
  DelayProblem p;
  p.name = "frozen";
  p.drift = [](const Arguments&) { return Jet{}; };
  p.diffusion = [](const Arguments&) { return Jet{}; };
  p.running_cost = [](const Arguments&) { return Jet{}; };
  p.terminal_cost = [](double) { return TerminalJet{}; };
  return p;
}

}  // namespace delaymp
