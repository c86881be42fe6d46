#include "g2flow/runconfig.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace g2flow {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::parse_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (cfg.kv_.count(key))
      throw ConfigError("config: duplicate key '" + key + "'");
    cfg.kv_[key] = value;
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_string(ss.str());
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("config: missing key '" + key + "'");
  return it->second;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' is not a number: '" + v + "'");
  return d;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long RunConfig::get_long(const std::string& key) const {
  const std::string v = get_string(key);
  char* end = nullptr;
  const long d = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' is not an integer: '" + v + "'");
  return d;
}

long RunConfig::get_long(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
  const std::string v = get_string(key);
  std::vector<double> out;
  std::istringstream is(v);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    char* end = nullptr;
    const double d = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ConfigError("config: key '" + key + "' has a bad list entry: '" + tok + "'");
    out.push_back(d);
  }
  return out;
}

std::vector<long> RunConfig::get_longs(const std::string& key) const {
  const std::string v = get_string(key);
  std::vector<long> out;
  std::istringstream is(v);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    char* end = nullptr;
    const long d = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
      throw ConfigError("config: key '" + key + "' has a bad integer entry: '" + tok + "'");
    out.push_back(d);
  }
  return out;
}

void RunConfig::reject_unknown(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : kv_) {
    (void)value;
    if (allowed.count(key)) continue;
    bool matched = false;
    for (const auto& pat : allowed) {
      if (!pat.empty() && pat.back() == '*' &&
          key.compare(0, pat.size() - 1, pat, 0, pat.size() - 1) == 0) {
        matched = true;
        break;
      }
    }
    if (!matched) throw ConfigError("config: unknown key '" + key + "'");
  }
}

std::vector<std::string> RunConfig::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [key, value] : kv_) {
    (void)value;
    if (key.compare(0, prefix.size(), prefix) == 0) out.push_back(key);
  }
  return out;
}

LatticeSpec RunConfig::grid_spec() const {
  LatticeSpec spec;
  const auto dims = get_longs("grid.dims");
  if (dims.size() != 7) throw ConfigError("grid.dims needs exactly 7 entries");
  for (int a = 0; a < 7; ++a) spec.dims[a] = static_cast<int>(dims[a]);
  const auto spacing = get_doubles("grid.spacing");
  if (spacing.size() != 7) throw ConfigError("grid.spacing needs exactly 7 entries");
  for (int a = 0; a < 7; ++a) spec.spacing[a] = spacing[a];
  const long order = get_long("grid.stencil_order", 2);
  if (order != 2 && order != 4) throw ConfigError("grid.stencil_order must be 2 or 4");
  spec.stencil_order = (order == 4) ? StencilOrder::kFourth : StencilOrder::kSecond;
  spec.validate();
  return spec;
}

}  // namespace g2flow
