#include "delaymp/cli/cli.hpp"

#include <chrono>
#include <ctime>
#include <functional>
#include <map>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "commands.hpp"
#include "delaymp/core/error.hpp"
#include "delaymp/core/parallel.hpp"
#include "scenario.hpp"

namespace delaymp::cli {

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ConfigError:
    case Errc::InvalidArgument:
    case Errc::NonDivisibleHorizon:
    case Errc::NonPositiveDelay:
    case Errc::InsufficientEpsilons:
    case Errc::EmptyGrid:
    case Errc::SpikeOutOfRange:
    case Errc::OutsideControlSet:
    case Errc::InadmissibleAlternative:
    case Errc::GridMismatch:
    case Errc::EnsembleMismatch:
      return kUsageError;
    case Errc::NonFiniteState:
    case Errc::IllConditionedRegression:
      return kCheckFailed;
  }
  return kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical toolkit for the stochastic maximum principle with delay", "delaymp"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<long long> seed;
  std::optional<int> threads;

  using Command = int (*)(const Context&);
  const std::vector<std::pair<std::string, std::pair<std::string, Command>>> commands = {
      {"simulate", {"Simulate the controlled delay equation (CSV: path, t, x)", cmd_simulate}},
      {"solve-absde", {"Solve a linear anticipated BSDE by regression", cmd_solve_absde}},
      {"adjoints", {"Solve the first and second adjoints and K", cmd_adjoints}},
      {"order-study", {"Spike-variation order study", cmd_order_study}},
      {"check-mp", {"Scan the delayed maximum condition", cmd_check_mp}},
      {"lq-demo", {"Linear-quadratic benchmark end to end (--out is a directory)", cmd_lq_demo}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "INI configuration file");
    sub->add_option("--out", out_path, "Output file (directory for lq-demo)");
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--threads", threads, "Worker threads (results do not depend on it)");
    subs[name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  std::string name;
  Command command = nullptr;
  for (const auto& [n, entry] : commands) {
    if (subs[n]->parsed()) {
      name = n;
      command = entry.second;
    }
  }

  try {
    ConfigFile file = config_path.empty() ? ConfigFile{} : ConfigFile::load(config_path);
    if (seed) file.set("core", "seed", std::to_string(*seed));
    if (threads) file.set("core", "threads", std::to_string(*threads));
    RunConfig run = RunConfig::from(file);
    if (seed) run.seed = static_cast<std::uint64_t>(*seed);
    run.validate();
    if (out_path.empty()) out_path = run.output.string();
    if (out_path.empty()) {
      throw Error(Errc::ConfigError, "no output given: pass --out or set key 'core.output'");
    }
    run.output = out_path;
    ScopedWorkers workers(run.threads);
    const Context ctx{file, run, {name, run, config_path, out_path, utc_now()}, out, err};
    return command(ctx);
  } catch (const Error& e) {
    err << fmt::format("delaymp {}: {}\n", name, e.what());
    const int code = exit_code_for(e.code());
    if (code == kUsageError) err << "example configuration:\n\n" << example_stanza(name);
    return code;
  } catch (const std::exception& e) {
    err << fmt::format("delaymp {}: {}\n", name, e.what());
    return kCheckFailed;
  }
}

}  // namespace delaymp::cli
