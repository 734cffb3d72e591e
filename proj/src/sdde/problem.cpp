#include "delaymp/sdde/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"
#include "delaymp/core/philox.hpp"

namespace delaymp {

ControlSet ControlSet::real_line() {
  ControlSet s;
  const double inf = std::numeric_limits<double>::infinity();
  s.pieces_ = {{-inf, inf}};
  return s;
}

ControlSet ControlSet::interval(double lower, double upper) {
  if (!(lower <= upper)) throw Error(Errc::InvalidArgument, "control interval needs lower <= upper");
  ControlSet s;
  s.pieces_ = {{lower, upper}};
  return s;
}

ControlSet ControlSet::outside(double lower, double upper) {
  if (!(lower < upper)) throw Error(Errc::InvalidArgument, "union of rays needs lower < upper");
  ControlSet s;
  const double inf = std::numeric_limits<double>::infinity();
  s.pieces_ = {{-inf, lower}, {upper, inf}};
  return s;
}

ControlSet ControlSet::points(std::vector<double> values) {
  if (values.empty()) throw Error(Errc::InvalidArgument, "control set needs at least one point");
  std::sort(values.begin(), values.end());
  ControlSet s;
  for (double v : values) s.pieces_.emplace_back(v, v);
  return s;
}

bool ControlSet::contains(double v) const noexcept {
  return std::any_of(pieces_.begin(), pieces_.end(),
                     [v](const auto& piece) { return piece.first <= v && v <= piece.second; });
}

std::vector<double> ControlSet::boundary_points() const {
  std::vector<double> out;
  for (const auto& [lo, hi] : pieces_) {
    if (std::isfinite(lo)) out.push_back(lo);
    if (std::isfinite(hi) && hi != lo) out.push_back(hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> ControlSet::sample(double lower, double upper, int count) const {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const double v = count == 1 ? lower : lower + (upper - lower) * k / (count - 1);
    if (contains(v)) out.push_back(v);
  }
  for (double b : boundary_points()) {
    if (b >= lower && b <= upper) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string ControlSet::describe() const {
  std::string out;
  for (const auto& [lo, hi] : pieces_) {
    if (!out.empty()) out += " U ";
    out += lo == hi ? fmt::format("{{{}}}", lo)
                    : fmt::format("{}{}, {}{}", std::isfinite(lo) ? "[" : "(", lo, hi,
                                  std::isfinite(hi) ? "]" : ")");
  }
  return out;
}

namespace {

struct Comparison {
  const char* name;
  double fd;
  double analytic;
};

double relative_gap(double fd, double analytic) {
  return std::abs(fd - analytic) / std::max(1.0, std::abs(analytic));
}

void record(std::vector<PartialCheck>& checks, const std::string& prefix, const Comparison& c,
            double tolerance) {
  const std::string name = prefix + "_" + c.name;
  auto it = std::find_if(checks.begin(), checks.end(),
                         [&](const PartialCheck& pc) { return pc.partial == name; });
  if (it == checks.end()) {
    checks.push_back({name, 0.0, true});
    it = checks.end() - 1;
  }
  it->max_error = std::max(it->max_error, relative_gap(c.fd, c.analytic));
  it->pass = it->max_error < tolerance;
}

void check_coefficient(std::vector<PartialCheck>& checks, const std::string& prefix,
                       const CoefficientFn& fn, const Arguments& at, double step, double tol) {
  auto shifted = [&](double dx, double dxd) {
    Arguments a = at;
    a.x += dx;
    a.x_delay += dxd;
    return fn(a);
  };
  const Jet centre = fn(at);
  const Jet xp = shifted(step, 0), xm = shifted(-step, 0);
  const Jet dp = shifted(0, step), dm = shifted(0, -step);
  const double two_h = 2.0 * step;
  const Comparison comparisons[] = {
      {"x", (xp.value - xm.value) / two_h, centre.d_x},
      {"xd", (dp.value - dm.value) / two_h, centre.d_xd},
      {"xx", (xp.d_x - xm.d_x) / two_h, centre.d_xx},
      {"xdxd", (dp.d_xd - dm.d_xd) / two_h, centre.d_xdxd},
      {"xxd", (dp.d_x - dm.d_x) / two_h, centre.d_xxd},
      {"xdx", (xp.d_xd - xm.d_xd) / two_h, centre.d_xxd},
  };
  for (const auto& c : comparisons) record(checks, prefix, c, tol);
}

}  // namespace

std::vector<PartialCheck> check_partials(const DelayProblem& problem,
                                         const PartialCheckOptions& options) {
  std::vector<PartialCheck> checks;
  const Philox4x32 gen({static_cast<std::uint32_t>(options.seed),
                        static_cast<std::uint32_t>(options.seed >> 32)});
  const auto controls = problem.controls.sample(-2.0, 2.0, 9);
  if (controls.empty()) throw Error(Errc::InvalidArgument, "control set has no sample in [-2, 2]");
  auto pick = [&](std::uint32_t word) { return controls[word % controls.size()]; };
  for (int s = 0; s < options.samples; ++s) {
    const auto r = gen({static_cast<std::uint32_t>(s), 0u, 0u, 0u});
    const auto r2 = gen({static_cast<std::uint32_t>(s), 1u, 0u, 0u});
    auto uniform = [&](std::uint32_t a, std::uint32_t b) {
      return to_open_unit((std::uint64_t{a} << 32) | b);
    };
    Arguments at;
    at.t = options.time_horizon * uniform(r[0], r[1]);
    at.x = options.state_range * (2.0 * uniform(r[2], r[3]) - 1.0);
    at.x_delay = options.state_range * (2.0 * uniform(r2[0], r2[1]) - 1.0);
    at.v = pick(r2[2]);
    at.v_delay = pick(r2[3]);
    check_coefficient(checks, "b", problem.drift, at, options.step, options.tolerance);
    check_coefficient(checks, "sigma", problem.diffusion, at, options.step, options.tolerance);
    check_coefficient(checks, "l", problem.running_cost, at, options.step, options.tolerance);

    const TerminalJet centre = problem.terminal_cost(at.x);
    const TerminalJet plus = problem.terminal_cost(at.x + options.step);
    const TerminalJet minus = problem.terminal_cost(at.x - options.step);
    const double two_h = 2.0 * options.step;
    record(checks, "h", {"x", (plus.value - minus.value) / two_h, centre.d_x}, options.tolerance);
    record(checks, "h", {"xx", (plus.d_x - minus.d_x) / two_h, centre.d_xx}, options.tolerance);
  }
  return checks;
}

}  // namespace delaymp
