#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "delaymp/core/grid.hpp"

namespace delaymp {

/// Flat `[section]` / `key = value` configuration. Sections are named after
/// modules (core, sdde, absde, adjoint, variation, mp, lq).
class ConfigFile {
 public:
  ConfigFile() = default;

  /// Throws Errc::ConfigError naming the file on parse failure.
  static ConfigFile load(const std::filesystem::path& path);
  static ConfigFile parse(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> raw(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  /// Comma-separated list of reals.
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct Tolerances {
  double k_vanish = 2e-2;           ///< sup-node mean |K| gate
  std::optional<double> mp_margin;  ///< absent: 3 standard errors per cell
  double partial_check = 1e-4;      ///< finite-difference self-check
};

struct RunConfig {
  double horizon = 1.0;
  double delay = 0.5;
  int steps_per_delay = 8;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 20240521;
  int basis_degree = 2;
  int threads = 1;
  Tolerances tolerances;
  std::filesystem::path output;

  TimeGrid grid() const { return make_grid(horizon, delay, steps_per_delay); }

  /// Throws Errc::ConfigError when a tolerance is not positive or n_paths is
  /// below twice the regression basis size.
  void validate() const;

  /// Reads section [core]; DELAYMP_SEED in the environment overrides the
  /// configured seed.
  static RunConfig from(const ConfigFile& file);
};

/// Number of polynomial basis functions of total degree <= degree in two
/// variables.
constexpr std::size_t basis_size(int degree) noexcept {
  return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
}

}  // namespace delaymp
