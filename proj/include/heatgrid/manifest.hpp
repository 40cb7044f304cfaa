#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heatgrid/io_util.hpp"
#include "heatgrid/kvfile.hpp"
#include "heatgrid/rng.hpp"
#include "heatgrid/version.hpp"

namespace heatgrid {

// Reproducibility record written next to every command's outputs. Re-running
// with the echoed configuration reproduces the CSV outputs byte for byte;
// only the wall-clock entry varies between runs.
class RunManifest {
 public:
  explicit RunManifest(std::string command) {
    kv_.set("tool", "heatgrid");
    kv_.set("version", kVersion);
    kv_.set("command", std::move(command));
    kv_.set("rng", kRngAlgorithm);
  }

  void set(const std::string& key, const std::string& value) { kv_.set(key, value); }
  void set(const std::string& key, long long value) { kv_.set(key, std::to_string(value)); }
  void set(const std::string& key, std::uint64_t value) { kv_.set(key, std::to_string(value)); }
  void set_double(const std::string& key, double value) { kv_.set(key, format_double(value)); }

  void echo_config(const KvFile& cfg) {
    for (const std::string& k : cfg.order()) kv_.set("config." + k, cfg.pairs().at(k));
  }

  void add_input(const std::string& role, const std::string& path) {
    kv_.set("input." + role, path);
    kv_.set("digest." + role, fnv1a64_hex(read_file_bytes(path)));
  }

  void count(const std::string& what, std::uint64_t n) {
    kv_.set("count." + what, std::to_string(n));
  }

  void write(const std::string& path, double wall_ms) {
    kv_.set("wall_ms", format_double(wall_ms));
    write_file_atomic(path, kv_.serialize());
  }

 private:
  KvFile kv_;
};

}  // namespace heatgrid
