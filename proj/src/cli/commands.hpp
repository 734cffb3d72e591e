#pragma once

#include <ostream>

#include "delaymp/cli/csv.hpp"
#include "delaymp/core/config.hpp"

namespace delaymp::cli {

struct Context {
  ConfigFile file;
  RunConfig run;
  ExperimentManifest manifest;
  std::ostream& out;
  std::ostream& err;
};

int cmd_simulate(const Context& ctx);
int cmd_solve_absde(const Context& ctx);
int cmd_adjoints(const Context& ctx);
int cmd_order_study(const Context& ctx);
int cmd_check_mp(const Context& ctx);
int cmd_lq_demo(const Context& ctx);

}  // namespace delaymp::cli
