#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "heatgrid/demand.hpp"
#include "heatgrid/errors.hpp"
#include "heatgrid/grid.hpp"
#include "heatgrid/pricing.hpp"
#include "heatgrid/supply.hpp"
#include "heatgrid/time.hpp"

namespace heatgrid {

struct TrendSeries {
  std::vector<int> years;        // strictly increasing
  std::vector<double> values;    // aggregate degree-days per year
  int baseline_year = 0;
  std::vector<double> normalized;  // percent of the baseline-year value

  void recompute_normalized() {
    normalized.assign(values.size(), 0.0);
    std::size_t b = 0;
    for (std::size_t i = 0; i < years.size(); ++i)
      if (years[i] == baseline_year) b = i;
    const double base = values[b];
    require(base != 0.0, Errc::DomainError, "baseline-year value is zero");
    for (std::size_t i = 0; i < values.size(); ++i) normalized[i] = 100.0 * values[i] / base;
  }
};

inline TrendSeries make_trend(std::vector<int> years, std::vector<double> values,
                              int baseline_year = 0) {
  require(!years.empty() && years.size() == values.size(), Errc::EmptySeries,
          "trend needs aligned, nonempty years/values");
  for (std::size_t i = 1; i < years.size(); ++i)
    require(years[i] > years[i - 1], Errc::BadArgument, "years must be strictly increasing");
  TrendSeries t;
  t.years = std::move(years);
  t.values = std::move(values);
  t.baseline_year = baseline_year == 0 ? t.years.front() : baseline_year;
  bool found = false;
  for (int y : t.years) found = found || y == t.baseline_year;
  require(found, Errc::BadArgument, "baseline year not in series");
  t.recompute_normalized();
  return t;
}

// Trailing moving average; the first window-1 entries average all years seen
// so far, so no value ever uses data from later years.
inline std::vector<double> moving_average(std::span<const double> v, int window) {
  require(window >= 1, Errc::BadArgument, "window must be >= 1");
  require(!v.empty(), Errc::EmptySeries, "moving_average needs a nonempty series");
  std::vector<double> out(v.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += v[i];
    if (i >= static_cast<std::size_t>(window)) acc -= v[i - window];
    const std::size_t n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

inline TrendSeries moving_average(const TrendSeries& s, int window = 10) {
  TrendSeries out = s;
  out.values = moving_average(std::span<const double>(s.values), window);
  out.normalized = moving_average(std::span<const double>(s.normalized), window);
  return out;
}

// Per-country, per-year degree-days: population-weighted mean over the
// country's cells scaled by the cell count, so sparsely populated cold cells
// do not dominate while the magnitude stays area-comparable. "EUR" holds the
// all-countries aggregate computed directly from cells.
struct CountryYearHdd {
  std::vector<int> years;
  std::map<std::string, std::vector<double>> by_country;  // ISO3 -> value per year
  std::vector<double> europe;
};

inline CountryYearHdd national_hdd(const TemperatureField& daily, const PopulationRaster& pop,
                                   const CountryMask& mask, const DemandConfig& cfg) {
  if (daily.dt_seconds != kStepDaily)
    raise(Errc::WrongStep, "national_hdd needs a daily field");
  cfg.validate();
  require_compatible(daily.grid, pop.grid, "national_hdd population");
  require_compatible(daily.grid, mask.grid, "national_hdd mask");

  // year index per sample
  std::vector<int> years;
  std::vector<std::uint32_t> year_of_t(daily.n_t);
  for (std::uint32_t t = 0; t < daily.n_t; ++t) {
    const int y = year_of_epoch_seconds(daily.t_start + static_cast<std::int64_t>(t) * kStepDaily);
    if (years.empty() || years.back() != y) years.push_back(y);
    year_of_t[t] = static_cast<std::uint32_t>(years.size() - 1);
  }

  const std::size_t cells = daily.grid.cell_count();
  const std::size_t n_years = years.size();

  // per-cell yearly HDD sums; a cell-year with no valid day stays NaN
  std::vector<double> hdd(cells * n_years, 0.0);
  std::vector<std::uint32_t> valid(cells * n_years, 0);
  for (std::uint32_t t = 0; t < daily.n_t; ++t) {
    const std::size_t y = year_of_t[t];
    for (std::size_t c = 0; c < cells; ++c) {
      const float v = daily.sample(t, c);
      if (std::isnan(v)) continue;
      hdd[c * n_years + y] += hdd_of(v, cfg.t_threshold);
      ++valid[c * n_years + y];
    }
  }

  // group cells by country code
  std::map<std::uint16_t, std::vector<std::size_t>> country_cells;
  for (std::size_t c = 0; c < cells; ++c)
    if (mask.codes[c] != 0) country_cells[mask.codes[c]].push_back(c);

  auto aggregate = [&](const std::vector<std::size_t>& members, const std::string& what) {
    std::vector<double> out(n_years, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t y = 0; y < n_years; ++y) {
      double wsum = 0.0, acc = 0.0;
      std::size_t n_valid = 0;
      for (std::size_t c : members) {
        if (valid[c * n_years + y] == 0) continue;
        ++n_valid;
        const double w = pop.values[c];
        wsum += w;
        acc += w * hdd[c * n_years + y];
      }
      if (n_valid == 0) continue;
      if (wsum <= 0.0) raise(Errc::ZeroPopulation, what + ": zero population");
      out[y] = acc / wsum * static_cast<double>(n_valid);
    }
    return out;
  };

  CountryYearHdd result;
  result.years = years;
  for (const auto& [code, members] : country_cells)
    result.by_country[mask.iso3(code)] = aggregate(members, mask.iso3(code));

  std::vector<std::size_t> all;
  for (const auto& [code, members] : country_cells)
    all.insert(all.end(), members.begin(), members.end());
  require(!all.empty(), Errc::BadArgument, "mask assigns no cell to any country");
  result.europe = aggregate(all, "EUR");
  return result;
}

struct EnsembleStat {
  double mean = 0.0;
  double sigma = 0.0;  // sample sigma (n-1); defined as 0 for n = 1
  double q25 = 0.0;
  double q75 = 0.0;
};

// Linear interpolation between order statistics (the same convention is
// recorded in run manifests, since quartile definitions differ).
inline double percentile(std::vector<double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
}

inline EnsembleStat ensemble_stats(std::span<const double> members) {
  require(!members.empty(), Errc::BadArgument, "ensemble needs at least one member");
  EnsembleStat s;
  for (double v : members) s.mean += v;
  s.mean /= static_cast<double>(members.size());
  if (members.size() > 1) {
    double ss = 0.0;
    for (double v : members) ss += (v - s.mean) * (v - s.mean);
    s.sigma = std::sqrt(ss / static_cast<double>(members.size() - 1));
  }
  std::vector<double> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  s.q25 = percentile(sorted, 0.25);
  s.q75 = percentile(sorted, 0.75);
  return s;
}

// Space heating's share of total CO2 emissions couples a relative change in
// degree-days to a relative change in emissions.
inline constexpr double kDefaultCo2Coupling = 0.2976;

inline double co2_change(double hdd_relative_change, double k = kDefaultCo2Coupling) {
  require(hdd_relative_change >= -1.0 && hdd_relative_change <= 1.0, Errc::DomainError,
          "relative HDD change must lie in [-1, 1]");
  return k * hdd_relative_change;
}

// Population-weighted national technology shares. Dominant and marginal wins
// are merged; cells without demand are skipped.
inline std::map<std::string, ShareVector> national_tech_shares(const TechnologyMap& map,
                                                               const PopulationRaster& pop,
                                                               const CountryMask& mask) {
  require_compatible(map.grid, pop.grid, "national_tech_shares population");
  require_compatible(map.grid, mask.grid, "national_tech_shares mask");

  std::map<std::uint16_t, std::array<double, kTechCount>> acc;
  std::map<std::uint16_t, double> totals;
  for (std::size_t c = 0; c < map.cells.size(); ++c) {
    const std::uint16_t code = mask.codes[c];
    if (code == 0 || map.cells[c].status != CellStatus::Ok) continue;
    const double w = pop.values[c];
    acc[code][static_cast<int>(map.cells[c].sel.winner)] += w;
    totals[code] += w;
  }

  std::map<std::string, ShareVector> out;
  for (const auto& [code, sums] : acc) {
    const double total = totals[code];
    if (total <= 0.0)
      raise(Errc::ZeroPopulation, "country " + mask.iso3(code) + " has zero population");
    ShareVector sv;
    for (int k = 0; k < kTechCount; ++k) sv.share[k] = sums[k] / total;
    out[mask.iso3(code)] = sv;
  }
  return out;
}

}  // namespace heatgrid
