#pragma once

// Synthetic climate fixtures shared by the unit and acceptance suites. All
// generators are deterministic closed-form series so expected behaviour can
// be recomputed independently.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#include "heatgrid/grid.hpp"
#include "heatgrid/rng.hpp"

namespace testutil {

inline constexpr double kYearDays = 365.25;

inline heatgrid::GridSpec grid(std::uint32_t n_lat, std::uint32_t n_lon) {
  return {n_lat, n_lon, 55.0, 5.0, -0.11, 0.11};
}

inline heatgrid::TemperatureField make_field(
    const heatgrid::GridSpec& g, std::uint32_t n_t, std::uint32_t dt,
    const std::function<float(std::uint32_t, std::uint32_t, std::uint32_t)>& fn,
    const char* t_start = "1970-01-01T00:00:00Z") {
  heatgrid::TemperatureField f;
  f.grid = g;
  f.t_start_iso = t_start;
  f.t_start = heatgrid::parse_iso8601(f.t_start_iso);
  f.dt_seconds = dt;
  f.n_t = n_t;
  f.values.resize(static_cast<std::size_t>(n_t) * g.cell_count());
  for (std::uint32_t t = 0; t < n_t; ++t)
    for (std::uint32_t i = 0; i < g.n_lat; ++i)
      for (std::uint32_t j = 0; j < g.n_lon; ++j) f.at(t, i, j) = fn(t, i, j);
  return f;
}

// Daily temperature with a seasonal cosine plus short winter cold spells: the
// spell term only acts near the winter solstice (w^p is sharply peaked) and
// its depth cycles with an incommensurate fast period, so 20 years contain a
// handful of days near full depth. Annual mean ~ base, minimum ~ base - amp -
// spike.
inline double seasonal_series(std::uint32_t day, double base, double amp, double spike,
                              double fast_period = 9.3, int peak_power = 9) {
  const double theta = 2.0 * std::numbers::pi * day / kYearDays;
  const double w = std::max(0.0, std::cos(theta));
  double wp = 1.0;
  for (int k = 0; k < peak_power; ++k) wp *= w;
  const double mod = 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * day / fast_period));
  return base - amp * std::cos(theta) - spike * mod * wp;
}

// Nordic maritime profile: annual mean ~7 degC, design day ~ -14.5 degC.
inline heatgrid::TemperatureField nordic_field(int n_years = 20) {
  const auto g = grid(1, 1);
  const auto n_t = static_cast<std::uint32_t>(kYearDays * n_years);
  return make_field(g, n_t, heatgrid::kStepDaily, [](std::uint32_t t, std::uint32_t,
                                                     std::uint32_t) {
    return static_cast<float>(seasonal_series(t, 8.0, 7.0, 15.5));
  });
}

// North-south / maritime-continental 30x30 gradient used by the warming
// experiment: south is warm, east is peaky. `warming` shifts every day.
inline heatgrid::TemperatureField gradient_field(std::uint32_t n, int n_years, double warming) {
  const auto g = grid(n, n);
  const auto n_t = static_cast<std::uint32_t>(kYearDays * n_years);
  return make_field(g, n_t, heatgrid::kStepDaily,
                    [&](std::uint32_t t, std::uint32_t i, std::uint32_t j) {
                      const double fi = static_cast<double>(i) / (n - 1);
                      const double fj = static_cast<double>(j) / (n - 1);
                      const double base = 2.0 + 10.0 * fi + warming;
                      const double amp = 5.0 + 7.0 * fj;
                      const double spike = 6.0 + 8.0 * fj;
                      return static_cast<float>(seasonal_series(t, base, amp, spike));
                    });
}

// Cold-mean grid whose heat load factors sweep [~0.04, ~0.97]: square-wave
// "cold snap" cells cover the peaky low end, broad-to-flat sinusoid cells the
// high end.
inline heatgrid::TemperatureField mu_span_field(std::uint32_t n_cells = 100, int n_years = 2) {
  const auto g = grid(1, n_cells);
  const auto n_t = static_cast<std::uint32_t>(kYearDays * n_years);
  return make_field(g, n_t, heatgrid::kStepDaily,
                    [&](std::uint32_t t, std::uint32_t, std::uint32_t j) {
                      const double fk = static_cast<double>(j) / (n_cells - 1);
                      const std::uint32_t doy =
                          t % static_cast<std::uint32_t>(kYearDays);
                      if (fk < 0.5) {
                        // m days per year at snap temperature C, else mild
                        const double gg = 1.0 - 2.0 * fk;  // 1 -> 0
                        const double snap_temp = -20.0 - 40.0 * gg;
                        const auto snap_days = static_cast<std::uint32_t>(2 + 28 * (1.0 - gg));
                        return static_cast<float>(doy < snap_days ? snap_temp : 20.0);
                      }
                      const double gg = 2.0 * fk - 1.0;  // 0 -> 1
                      const double base = 2.0 + 4.5 * gg;
                      const double amp = 30.0 * (1.0 - gg) * (1.0 - gg) + 0.4;
                      const double theta = 2.0 * std::numbers::pi * doy / kYearDays;
                      return static_cast<float>(base - amp * std::cos(theta));
                    });
}

// Uniform random daily temperatures in [lo, hi] from the library's own
// deterministic stream.
inline heatgrid::TemperatureField random_field(const heatgrid::GridSpec& g, std::uint32_t n_t,
                                               std::uint64_t seed, double lo = -25.0,
                                               double hi = 30.0) {
  heatgrid::RngStream rng = heatgrid::RngStream::derive(seed, 0, 0, 0);
  return make_field(g, n_t, heatgrid::kStepDaily,
                    [&](std::uint32_t, std::uint32_t, std::uint32_t) {
                      return static_cast<float>(rng.next_uniform(lo, hi));
                    });
}

}  // namespace testutil
