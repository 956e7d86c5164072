#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "awr/experiments.hpp"

namespace awr {

/// Flat `key = value` configuration with `[section]` headers and `#`
/// comments. Keys are stored as "section.key" ("seed" lives at top level).
class Config {
 public:
  static Config parse(const std::string& text, const std::string& base_dir = ".");
  static Config load_file(const std::string& path);

  /// "key=value"; a bare key resolves to the unique known "section.key".
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::string& base_dir() const { return base_dir_; }

  /// Sorted "key=value" lines; the digest is FNV-1a 64 of this text.
  std::string canonical() const;
  std::uint64_t digest() const;

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> entries_;
  std::string base_dir_ = ".";
};

/// "log", "gamma:<g>" or "table:<csv with rho,p columns>".
PressureModel parse_pressure(const std::string& spec, const std::string& base_dir = ".");

Numerics build_numerics(const Config& cfg);
InitialData build_initial_data(const Config& cfg);
Interval build_window(const Config& cfg);
Scenario build_scenario(const Config& cfg);
SweepConfig build_sweep(const Config& cfg);

}  // namespace awr
