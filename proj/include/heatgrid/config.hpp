#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatgrid/analysis.hpp"
#include "heatgrid/demand.hpp"
#include "heatgrid/errors.hpp"
#include "heatgrid/kvfile.hpp"
#include "heatgrid/supply.hpp"
#include "heatgrid/technology.hpp"

namespace heatgrid {

// Inclusive calendar-year window "A-B".
inline std::pair<int, int> parse_year_window(const std::string& s) {
  const std::size_t dash = s.find('-', 1);  // allow negative years, not that they occur
  require(dash != std::string::npos, Errc::BadConfig, "bad period '" + s + "', expected A-B");
  try {
    const int a = std::stoi(s.substr(0, dash));
    const int b = std::stoi(s.substr(dash + 1));
    require(a <= b, Errc::BadConfig, "period '" + s + "' runs backwards");
    return {a, b};
  } catch (const Error&) {
    throw;
  } catch (...) {
    raise(Errc::BadConfig, "bad period '" + s + "'");
  }
}

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find(sep, pos);
    const std::string item = KvFile::trim(
        next == std::string::npos ? s.substr(pos) : s.substr(pos, next - pos));
    if (!item.empty()) out.push_back(item);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

// Everything a command run needs, resolved from a config file merged with
// flag overrides (flags win). The raw key-value view is echoed into the run
// manifest so a manifest alone re-specifies the run.
struct RunConfig {
  KvFile raw;

  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int jobs = 0;  // 0 = available cores

  DemandConfig demand;
  CopModel cop_model;
  Catalog catalog = default_catalog();

  std::string scheme_source = "unperturbed";  // unperturbed | balanced | file:PATH | mc
  std::uint32_t trials = 100;

  std::optional<std::pair<int, int>> period;
  std::vector<std::pair<int, int>> periods;
  int window = 10;
  std::optional<int> baseline_year;
  double k_co2 = kDefaultCo2Coupling;

  std::optional<std::pair<std::uint32_t, std::uint32_t>> curve_cell;

  std::optional<std::string> path(const std::string& role) const { return raw.get(role); }

  std::string require_path(const std::string& role) const {
    auto p = raw.get(role);
    if (!p) raise(Errc::BadConfig, "missing input path '" + role + "'");
    return *p;
  }

  // report inputs: model.<label> = path, sorted by label
  std::vector<std::pair<std::string, std::string>> models() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, v] : raw.pairs())
      if (k.rfind("model.", 0) == 0) out.emplace_back(k.substr(6), v);
    return out;  // std::map iteration is already sorted by label
  }

  static RunConfig resolve(const KvFile& kv) {
    RunConfig c;
    c.raw = kv;
    c.out_dir = kv.get_or("out", ".");
    c.seed = static_cast<std::uint64_t>(kv.get_int("seed", 1));
    c.jobs = static_cast<int>(kv.get_int("jobs", 0));

    c.demand.t_threshold = kv.get_double("t0", c.demand.t_threshold);
    c.demand.dhw_dd_per_day = kv.get_double("dhw", c.demand.dhw_dd_per_day);
    c.demand.validate();
    const std::string rule = kv.get_or("design_rule", "period_min_daily_mean");
    require(rule == "period_min_daily_mean", Errc::BadConfig,
            "unknown design_rule '" + rule + "'");

    if (auto s = kv.get("cop.air")) c.cop_model.air = parse_cop(*s, "cop.air");
    if (auto s = kv.get("cop.ground")) c.cop_model.ground = parse_cop(*s, "cop.ground");

    apply_catalog_overrides(c.catalog, kv);
    validate(c.catalog);

    c.scheme_source = kv.get_or("scheme", "unperturbed");
    const bool known = c.scheme_source == "unperturbed" || c.scheme_source == "balanced" ||
                       c.scheme_source == "mc" || c.scheme_source.rfind("file:", 0) == 0;
    require(known, Errc::BadConfig,
            "scheme must be unperturbed | balanced | mc | file:PATH, got '" +
                c.scheme_source + "'");
    c.trials = static_cast<std::uint32_t>(kv.get_int("trials", 100));
    require(c.trials >= 1, Errc::BadConfig, "trials must be >= 1");

    if (auto s = kv.get("period")) c.period = parse_year_window(*s);
    if (auto s = kv.get("periods"))
      for (const std::string& item : split_list(*s)) c.periods.push_back(parse_year_window(item));
    c.window = static_cast<int>(kv.get_int("window", 10));
    require(c.window >= 1, Errc::BadConfig, "window must be >= 1");
    if (kv.has("baseline_year"))
      c.baseline_year = static_cast<int>(kv.get_int("baseline_year", 0));
    c.k_co2 = kv.get_double("k_co2", c.k_co2);

    if (auto s = kv.get("curve_cell")) {
      const auto parts = split_list(*s);
      require(parts.size() == 2, Errc::BadConfig, "curve_cell must be 'I,J'");
      c.curve_cell = {static_cast<std::uint32_t>(std::stoul(parts[0])),
                      static_cast<std::uint32_t>(std::stoul(parts[1]))};
    }
    return c;
  }

 private:
  static CopCoefficients parse_cop(const std::string& s, const std::string& key) {
    const auto parts = split_list(s);
    require(parts.size() == 3, Errc::BadConfig, key + " must be 'c0,c1,c2'");
    try {
      return {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
    } catch (...) {
      raise(Errc::BadConfig, key + ": bad coefficient in '" + s + "'");
    }
  }

  static void apply_catalog_overrides(Catalog& cat, const KvFile& kv) {
    if (kv.has("catalog.capacity")) {
      const double cap = kv.get_double("catalog.capacity", 0.0);
      for (auto& t : cat) t.capacity_kw = cap;
    }
    if (kv.has("catalog.discount_rate")) {
      const double r = kv.get_double("catalog.discount_rate", 0.0);
      for (auto& t : cat) t.discount_rate = r;
    }
    for (auto& t : cat) {
      const std::string base = std::string("catalog.") + tech_key(t.id) + ".";
      override_range(t.install, kv, base + "install");
      override_range(t.equip, kv, base + "equip");
      override_range(t.maint, kv, base + "maint");
      if (kv.has(base + "fuel")) t.fuel = kv.get_double(base + "fuel", t.fuel);
      if (kv.has(base + "lifetime")) t.lifetime_years = kv.get_double(base + "lifetime", 0.0);
    }
  }

  // "nominal" pins the range to a point; "nominal,lo,hi" replaces it
  static void override_range(PriceRange& r, const KvFile& kv, const std::string& key) {
    auto s = kv.get(key);
    if (!s) return;
    const auto parts = split_list(*s);
    try {
      if (parts.size() == 1) {
        const double v = std::stod(parts[0]);
        r = {v, v, v};
      } else if (parts.size() == 3) {
        r = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
      } else {
        raise(Errc::BadConfig, key + " must be 'nominal' or 'nominal,lo,hi'");
      }
    } catch (const Error&) {
      throw;
    } catch (...) {
      raise(Errc::BadConfig, key + ": bad number in '" + *s + "'");
    }
  }
};

}  // namespace heatgrid
