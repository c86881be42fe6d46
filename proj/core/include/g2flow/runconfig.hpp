#pragma once

// Flat key = value run configuration with [section] headers; keys are stored
// as "section.key".  Consumers declare their full key schema; anything else
// is rejected before a run starts.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "g2flow/errors.hpp"
#include "g2flow/lattice.hpp"

namespace g2flow {

class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;  // comma-separated
  std::vector<long> get_longs(const std::string& key) const;

  // Throws ConfigError when a present key is not in the allowed set.
  // Prefixes ending in '*' allow a family (e.g. "initial.mode*").
  void reject_unknown(const std::set<std::string>& allowed) const;

  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  LatticeSpec grid_spec() const;  // [grid] dims / spacing / stencil_order

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace g2flow
