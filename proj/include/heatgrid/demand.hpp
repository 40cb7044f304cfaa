#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "heatgrid/errors.hpp"
#include "heatgrid/grid.hpp"

namespace heatgrid {

struct DemandConfig {
  // Heating threshold T0: days with mean temperature below it accrue
  // degree-days.
  double t_threshold = 17.0;
  // Flat hot-water demand proxy, expressed in degree-day-equivalents per day.
  // Demand, peak and cost ratios all work in these units, which cancel in the
  // heat load factor and in cost ranking.
  double dhw_dd_per_day = 3.0;

  enum class DesignRule { PeriodMinDailyMean };
  DesignRule design_rule = DesignRule::PeriodMinDailyMean;

  void validate() const {
    require(t_threshold >= 10.0 && t_threshold <= 25.0, Errc::BadConfig,
            "t_threshold must be in [10, 25] degC");
    require(dhw_dd_per_day >= 0.0, Errc::BadConfig, "dhw_dd_per_day must be >= 0");
  }
};

struct DailyMeanStats {
  std::uint32_t dropped_samples = 0;  // trailing samples not forming a full day
  std::uint64_t missing_days = 0;     // days with < 4 valid samples
};

// Collapses a 3-hourly field into daily means (night-storage emulation).
// A day needs at least 4 of its 8 samples valid; otherwise it is NaN.
inline TemperatureField daily_mean(const TemperatureField& f, DailyMeanStats* stats = nullptr) {
  if (f.dt_seconds != kStepThreeHourly)
    raise(Errc::WrongStep, "daily_mean needs a 3-hourly field (dt = 10800 s)");
  const std::uint32_t samples_per_day = kStepDaily / kStepThreeHourly;  // 8
  const std::uint32_t n_days = f.n_t / samples_per_day;
  require(n_days >= 1, Errc::InvalidField, "field shorter than one day");
  if (stats) stats->dropped_samples = f.n_t - n_days * samples_per_day;

  TemperatureField out;
  out.grid = f.grid;
  out.t_start = f.t_start;
  out.t_start_iso = f.t_start_iso;
  out.dt_seconds = kStepDaily;
  out.n_t = n_days;
  const std::size_t cells = f.grid.cell_count();
  out.values.resize(static_cast<std::size_t>(n_days) * cells);

  for (std::uint32_t d = 0; d < n_days; ++d) {
    for (std::size_t c = 0; c < cells; ++c) {
      double sum = 0.0;
      int valid = 0;
      for (std::uint32_t s = 0; s < samples_per_day; ++s) {
        const float v = f.sample(d * samples_per_day + s, c);
        if (!std::isnan(v)) {
          sum += v;
          ++valid;
        }
      }
      float& o = out.values[static_cast<std::size_t>(d) * cells + c];
      if (valid >= 4) {
        o = static_cast<float>(sum / valid);
      } else {
        o = std::numeric_limits<float>::quiet_NaN();
        if (stats) ++stats->missing_days;
      }
    }
  }
  return out;
}

// HDD(d) = max(0, T0 - Tbar(d)); NaN days stay NaN.
inline double hdd_of(double daily_mean_c, double t_threshold) {
  return std::max(0.0, t_threshold - daily_mean_c);
}

inline DegreeDayField hdd_series(const TemperatureField& daily, const DemandConfig& cfg) {
  if (daily.dt_seconds != kStepDaily)
    raise(Errc::WrongStep, "hdd_series needs a daily field (dt = 86400 s)");
  cfg.validate();
  DegreeDayField out;
  out.grid = daily.grid;
  out.t_start = daily.t_start;
  out.n_t = daily.n_t;
  out.values.resize(daily.values.size());
  for (std::size_t k = 0; k < daily.values.size(); ++k) {
    const float v = daily.values[k];
    out.values[k] = std::isnan(v) ? std::numeric_limits<double>::quiet_NaN()
                                  : hdd_of(v, cfg.t_threshold);
  }
  return out;
}

// Coldest valid daily mean per cell over the whole period.
inline std::vector<double> design_temperature(const TemperatureField& daily) {
  if (daily.dt_seconds != kStepDaily)
    raise(Errc::WrongStep, "design_temperature needs a daily field");
  const std::size_t cells = daily.grid.cell_count();
  std::vector<double> out(cells, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < cells; ++c) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::uint32_t t = 0; t < daily.n_t; ++t) {
      const float v = daily.sample(t, c);
      if (std::isnan(v)) continue;
      any = true;
      best = std::min(best, static_cast<double>(v));
    }
    if (!any)
      raise(Errc::AllMissingCell,
            "cell " + std::to_string(c) + " has no valid day in the period");
    out[c] = best;
  }
  return out;
}

enum class CellStatus : std::uint8_t {
  Ok = 0,
  NoData,    // no valid day in the period
  ZeroPeak,  // design temperature at/above T0 with no hot water demand
};

// Per-cell demand summary over an analysis period.
struct HeatLoadSummary {
  CellStatus status = CellStatus::NoData;
  double mu = std::numeric_limits<double>::quiet_NaN();
  double t_design = std::numeric_limits<double>::quiet_NaN();
  double hdd_total = 0.0;
  double share_space_heat = 0.0;
  double share_hot_water = 0.0;
  double mean_temp = std::numeric_limits<double>::quiet_NaN();  // period mean (ground proxy)
  std::uint32_t n_days = 0;  // valid days
};

struct HeatLoadField {
  GridSpec grid;
  std::vector<HeatLoadSummary> cells;

  const HeatLoadSummary& at(std::uint32_t i, std::uint32_t j) const {
    return cells[static_cast<std::size_t>(i) * grid.n_lon + j];
  }
};

// One cell of heat_load_factor; `daily` holds the cell's daily means with the
// field's time stride.
inline HeatLoadSummary heat_load_cell(const TemperatureField& daily, std::size_t cell,
                                      const DemandConfig& cfg) {
  HeatLoadSummary s;
  double hdd_sum = 0.0;
  double q_sum = 0.0;
  double t_sum = 0.0;
  double t_min = std::numeric_limits<double>::infinity();
  std::uint32_t n = 0;
  for (std::uint32_t t = 0; t < daily.n_t; ++t) {
    const double v = daily.sample(t, cell);
    if (std::isnan(v)) continue;
    const double hdd = hdd_of(v, cfg.t_threshold);
    hdd_sum += hdd;
    q_sum += hdd + cfg.dhw_dd_per_day;
    t_sum += v;
    t_min = std::min(t_min, v);
    ++n;
  }
  if (n == 0) return s;  // NoData

  s.n_days = n;
  s.t_design = t_min;
  s.hdd_total = hdd_sum;
  s.mean_temp = t_sum / n;
  const double q_peak = std::max(0.0, cfg.t_threshold - t_min) + cfg.dhw_dd_per_day;
  if (q_peak <= 0.0) {
    s.status = CellStatus::ZeroPeak;  // no demand ever; excluded from maps
    return s;
  }
  s.status = CellStatus::Ok;
  // q(d) <= q_peak for every day by the design rule, so mu <= 1 exactly;
  // clamp the last-ulp rounding of the mean
  s.mu = std::min(1.0, (q_sum / n) / q_peak);
  const double total = hdd_sum + n * cfg.dhw_dd_per_day;
  if (total > 0.0) {
    s.share_space_heat = hdd_sum / total;
    s.share_hot_water = 1.0 - s.share_space_heat;
  }
  return s;
}

inline HeatLoadField heat_load_factor(const TemperatureField& daily, const DemandConfig& cfg) {
  if (daily.dt_seconds != kStepDaily)
    raise(Errc::WrongStep, "heat_load_factor needs a daily field");
  cfg.validate();
  HeatLoadField out;
  out.grid = daily.grid;
  const std::size_t cells = daily.grid.cell_count();
  out.cells.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) out.cells[c] = heat_load_cell(daily, c, cfg);
  return out;
}

}  // namespace heatgrid
