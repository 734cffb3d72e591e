#include "delaymp/cli/csv.hpp"

#include <sstream>

#include <fmt/core.h>

#include "delaymp/cli/cli.hpp"
#include "delaymp/core/error.hpp"

namespace delaymp::cli {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string manifest_header(const ExperimentManifest& m) {
  const RunConfig& c = m.config;
  const TimeGrid grid = c.grid();
  std::string out;
  out += fmt::format("# delaymp {} {}\n", kVersion, m.subcommand);
  out += fmt::format("# seed = {}\n", c.seed);
  out += fmt::format("# grid: T = {}, delta = {}, steps_per_delay = {}, h = {}\n", c.horizon,
                     c.delay, c.steps_per_delay, num(grid.step()));
  out += fmt::format("# n_paths = {}, basis_degree = {}\n", c.n_paths, c.basis_degree);
  out += fmt::format("# config = {}\n", m.config_path.empty() ? "(defaults)" : m.config_path.string());
  out += fmt::format("# wall_clock = {}\n", m.wall_clock);
  return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const ExperimentManifest& manifest,
                     const std::vector<std::string>& columns)
    : width_(columns.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw Error(Errc::ConfigError, fmt::format("cannot write '{}'", path.string()));
  out_ << manifest_header(manifest);
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) {
    throw Error(Errc::InvalidArgument,
                fmt::format("CSV row has {} cells, header has {}", cells.size(), width_));
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k > 0) out_ << ',';
    out_ << cells[k];
  }
  out_ << '\n';
}

std::string csv_body(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream body;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    body << line << '\n';
  }
  return body.str();
}

}  // namespace delaymp::cli
