#include "delaymp/core/config.hpp"

#include <cstdlib>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "delaymp/core/error.hpp"

namespace delaymp {

namespace {

ConfigFile from_tree(const boost::property_tree::ptree& tree) {
  ConfigFile file;
  for (const auto& [section, entries] : tree) {
    for (const auto& [key, value] : entries) file.set(section, key, value.data());
  }
  return file;
}

[[noreturn]] void bad_value(const std::string& section, const std::string& key,
                            const std::string& value, const char* expected) {
  throw Error(Errc::ConfigError,
              fmt::format("key '{}.{}' has value '{}', expected {}", section, key, value, expected));
}

double to_double(const std::string& section, const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    bad_value(section, key, text, "a real number");
  }
  if (used != text.size()) bad_value(section, key, text, "a real number");
  return v;
}

}  // namespace

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(Errc::ConfigError, e.what());
  }
  return from_tree(tree);
}

ConfigFile ConfigFile::parse(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(Errc::ConfigError, e.what());
  }
  return from_tree(tree);
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = boost::algorithm::trim_copy(value);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return raw(section, key).has_value();
}

std::optional<std::string> ConfigFile::raw(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  return raw(section, key).value_or(fallback);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  const auto text = raw(section, key);
  return text ? to_double(section, key, *text) : fallback;
}

long long ConfigFile::get_int(const std::string& section, const std::string& key,
                              long long fallback) const {
  const auto text = raw(section, key);
  if (!text) return fallback;
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(*text, &used);
  } catch (const std::exception&) {
    bad_value(section, key, *text, "an integer");
  }
  if (used != text->size()) bad_value(section, key, *text, "an integer");
  return v;
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) const {
  const auto text = raw(section, key);
  if (!text) return fallback;
  std::vector<std::string> parts;
  boost::algorithm::split(parts, *text, boost::algorithm::is_any_of(","));
  std::vector<double> out;
  for (auto& part : parts) {
    boost::algorithm::trim(part);
    if (part.empty()) continue;
    out.push_back(to_double(section, key, part));
  }
  return out;
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) {
      throw Error(Errc::ConfigError, fmt::format("key '{}' must be positive, got {}", key, v));
    }
  };
  positive(tolerances.k_vanish, "adjoint.k_tol");
  positive(tolerances.partial_check, "sdde.partial_tol");
  if (tolerances.mp_margin) positive(*tolerances.mp_margin, "mp.tol");
  if (basis_degree < 0) {
    throw Error(Errc::ConfigError, fmt::format("key 'core.degree' must be >= 0, got {}", basis_degree));
  }
  if (n_paths < 2 * basis_size(basis_degree)) {
    throw Error(Errc::ConfigError,
                fmt::format("key 'core.n_paths' = {} is below twice the basis size {}", n_paths,
                            basis_size(basis_degree)));
  }
  if (threads < 1) {
    throw Error(Errc::ConfigError, fmt::format("key 'core.threads' must be >= 1, got {}", threads));
  }
}

RunConfig RunConfig::from(const ConfigFile& file) {
  RunConfig c;
  c.horizon = file.get_double("core", "T", c.horizon);
  c.delay = file.get_double("core", "delta", c.delay);
  c.steps_per_delay = static_cast<int>(file.get_int("core", "steps_per_delay", c.steps_per_delay));
  const long long paths = file.get_int("core", "n_paths", static_cast<long long>(c.n_paths));
  if (paths < 1) {
    throw Error(Errc::ConfigError, fmt::format("key 'core.n_paths' must be >= 1, got {}", paths));
  }
  c.n_paths = static_cast<std::size_t>(paths);
  c.seed = static_cast<std::uint64_t>(file.get_int("core", "seed", static_cast<long long>(c.seed)));
  c.basis_degree = static_cast<int>(file.get_int("core", "degree", c.basis_degree));
  c.threads = static_cast<int>(file.get_int("core", "threads", c.threads));
  c.output = file.get_string("core", "output", "");
  c.tolerances.k_vanish = file.get_double("adjoint", "k_tol", c.tolerances.k_vanish);
  c.tolerances.partial_check = file.get_double("sdde", "partial_tol", c.tolerances.partial_check);
  if (file.has("mp", "tol")) c.tolerances.mp_margin = file.get_double("mp", "tol", 0.0);

  if (const char* env = std::getenv("DELAYMP_SEED"); env != nullptr && *env != '\0') {
    ConfigFile overlay;
    overlay.set("env", "DELAYMP_SEED", env);
    c.seed = static_cast<std::uint64_t>(overlay.get_int("env", "DELAYMP_SEED", 0));
  }
  return c;
}

}  // namespace delaymp
