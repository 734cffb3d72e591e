#pragma once

#include <optional>
#include <string>

#include "delaymp/core/config.hpp"
#include "delaymp/lq/lq.hpp"
#include "delaymp/sdde/control.hpp"
#include "delaymp/sdde/problem.hpp"

namespace delaymp::cli {

/// Problem, initial data and candidate control described by the [sdde] and
/// [lq] sections of a config.
struct Scenario {
  DelayProblem problem;
  InitialData init;
  ControlProcess control;
  std::optional<LqParams> lq;
};

LqParams lq_params(const ConfigFile& file, const RunConfig& run);
Scenario make_scenario(const ConfigFile& file, const RunConfig& run);

/// Example configuration shown with usage errors.
std::string example_stanza(const std::string& subcommand);

}  // namespace delaymp::cli
