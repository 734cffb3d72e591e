#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "delaymp/core/config.hpp"

namespace delaymp::cli {

struct ExperimentManifest {
  std::string subcommand;
  RunConfig config;
  std::filesystem::path config_path;
  std::filesystem::path output;
  std::string wall_clock;  ///< UTC start time, ISO 8601
};

/// Shortest round-trip decimal form, '.' separator.
std::string num(double v);

/// CSV file whose first lines are '#' comments carrying the manifest
/// (seed, grid, n_paths, version, wall clock), followed by the header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const ExperimentManifest& manifest,
            const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t width_;
};

std::string manifest_header(const ExperimentManifest& manifest);

/// Lines of a CSV file that are not '#' comments.
std::string csv_body(const std::filesystem::path& path);

}  // namespace delaymp::cli
