#pragma once

// Flat `key = value` text files: one pair per line, '#' starts a comment.
// Used for run configuration, pricing-scheme files and run manifests.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "heatgrid/errors.hpp"

namespace heatgrid {

class KvFile {
 public:
  KvFile() = default;

  static KvFile parse_text(const std::string& text, const std::string& origin = "<string>") {
    KvFile kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      require(eq != std::string::npos, Errc::BadConfig,
              origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      require(!key.empty(), Errc::BadConfig,
              origin + ":" + std::to_string(lineno) + ": empty key");
      kv.set(key, value);  // repeated keys keep the last value
    }
    return kv;
  }

  static KvFile parse_file(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) raise(Errc::FileNotFound, "no such file: " + path);
    std::ifstream in(path);
    if (!in) raise(Errc::IoFailure, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
  }

  bool has(const std::string& key) const { return pairs_.count(key) != 0; }

  std::optional<std::string> get(const std::string& key) const {
    auto it = pairs_.find(key);
    if (it == pairs_.end()) return std::nullopt;
    return it->second;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    auto v = get(key);
    return v ? *v : fallback;
  }

  std::string require_key(const std::string& key) const {
    auto v = get(key);
    if (!v) raise(Errc::BadConfig, "missing required key '" + key + "'");
    return *v;
  }

  double get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const double d = std::stod(*v, &used);
      require(used == v->size(), Errc::BadConfig, "bad number for '" + key + "': " + *v);
      return d;
    } catch (const Error&) {
      throw;
    } catch (...) {
      raise(Errc::BadConfig, "bad number for '" + key + "': " + *v);
    }
  }

  long long get_int(const std::string& key, long long fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const long long d = std::stoll(*v, &used);
      require(used == v->size(), Errc::BadConfig, "bad integer for '" + key + "': " + *v);
      return d;
    } catch (const Error&) {
      throw;
    } catch (...) {
      raise(Errc::BadConfig, "bad integer for '" + key + "': " + *v);
    }
  }

  void set(const std::string& key, const std::string& value) {
    if (!pairs_.count(key)) order_.push_back(key);
    pairs_[key] = value;
  }

  const std::map<std::string, std::string>& pairs() const { return pairs_; }

  // keys in first-set order, for deterministic serialization
  const std::vector<std::string>& order() const { return order_; }

  std::string serialize() const {
    std::string out;
    for (const std::string& k : order_) out += k + " = " + pairs_.at(k) + "\n";
    return out;
  }

  static std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

 private:
  std::map<std::string, std::string> pairs_;
  std::vector<std::string> order_;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace heatgrid
