#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "heatgrid/demand.hpp"
#include "heatgrid/errors.hpp"
#include "heatgrid/grid.hpp"
#include "heatgrid/parallel.hpp"
#include "heatgrid/technology.hpp"

namespace heatgrid {

// Empirical COP quadratics in the temperature lift dT = sink - source,
// fitted on field data for dT in [15, 60]. The lift is clamped to that range
// so the polynomial is never evaluated outside its fitted domain.
struct CopCoefficients {
  double c0, c1, c2;
  double operator()(double dt) const { return c0 + c1 * dt + c2 * dt * dt; }
};

struct CopModel {
  CopCoefficients air{6.81, -0.121, 0.000630};
  CopCoefficients ground{8.77, -0.150, 0.000734};
  double dt_min = 15.0;
  double dt_max = 60.0;

  double operator()(double sink_c, double source_c, HeatSource kind) const {
    const double dt = std::clamp(sink_c - source_c, dt_min, dt_max);
    return kind == HeatSource::Air ? air(dt) : ground(dt);
  }
};

inline double cop(double sink_c, double source_c, HeatSource kind) {
  return CopModel{}(sink_c, source_c, kind);
}

// Demand-weighted harmonic mean efficiency of one technology over a cell's
// period. Space heat is weighted by the daily degree-days, hot water by the
// flat proxy; missing days are skipped. Heat pumps draw from the daily air
// temperature (ASHP, A2A) or from the seasonally settled ground temperature
// (GSHP), approximated by the period mean air temperature.
inline double effective_efficiency(const TechnologySpec& tech, const TemperatureField& daily,
                                   std::size_t cell, const DemandConfig& cfg,
                                   double ground_temp_c, const CopModel& cop_model = {}) {
  double q_total = 0.0;
  double fuel_equiv = 0.0;  // sum of q / eta
  for (std::uint32_t t = 0; t < daily.n_t; ++t) {
    const double v = daily.sample(t, cell);
    if (std::isnan(v)) continue;
    const double q_sh = hdd_of(v, cfg.t_threshold);
    const double q_dhw = cfg.dhw_dd_per_day;
    q_total += q_sh + q_dhw;
    if (const auto* hp = std::get_if<HeatPumpEfficiency>(&tech.efficiency)) {
      const double source = hp->source == HeatSource::Ground ? ground_temp_c : v;
      fuel_equiv += (q_sh + q_dhw) / cop_model(hp->sink_c, source, hp->source);
    } else if (const auto* hy = std::get_if<HeatPumpWithDhwBoiler>(&tech.efficiency)) {
      const double source = hy->source == HeatSource::Ground ? ground_temp_c : v;
      fuel_equiv += q_sh / cop_model(hy->sink_c, source, hy->source) + q_dhw / hy->dhw_eta;
    }
  }
  if (q_total <= 0.0)
    raise(Errc::ZeroDemand, "no demand in period for cell " + std::to_string(cell));
  // fixed-efficiency boilers pass through the harmonic mean unchanged
  if (const auto* fx = std::get_if<FixedEfficiency>(&tech.efficiency)) return fx->eta;
  return q_total / fuel_equiv;
}

inline double capital_recovery_factor(double rate, double lifetime_years) {
  return rate / (1.0 - std::pow(1.0 + rate, -lifetime_years));
}

// Annualized total cost of one technology as a line in the heat load factor:
// cost(mu) = intercept + mu * slope, in EUR/yr at the installed capacity.
struct CostLine {
  TechId tech = TechId::GasBoiler;
  double intercept = 0.0;  // annualized capital + fixed maintenance
  double slope = 0.0;      // fuel cost at full utilization

  double cost(double mu) const { return intercept + mu * slope; }
};

inline CostLine cost_line(const TechnologySpec& tech, const TechPrices& prices,
                          double eta_eff) {
  require(eta_eff > 0.0, Errc::DomainError,
          std::string(tech_key(tech.id)) + ": efficiency must be positive");
  const double crf = capital_recovery_factor(tech.discount_rate, tech.lifetime_years);
  CostLine line;
  line.tech = tech.id;
  line.intercept =
      crf * (prices.install + prices.equip) * tech.capacity_kw + prices.maint * tech.capacity_kw;
  // full-load heat output in MWh/yr divided by efficiency gives fuel bought
  line.slope = prices.fuel * (tech.capacity_kw * 8760.0 / 1000.0) / eta_eff;
  return line;
}

enum class Dominance : std::uint8_t { Dominant, MarginallyBetter };

// The winner is only marginally better when the cell's mu falls inside this
// band around the winner/runner-up crossing point.
inline constexpr double kDominanceBand = 0.05;

struct Selection {
  TechId winner = TechId::GasBoiler;
  TechId runner_up = TechId::GasBoiler;
  Dominance dominance = Dominance::Dominant;
  std::optional<double> mu_shift;  // crossing with the runner-up, if inside [0, 1]
  bool tie = false;                // exact cost tie, broken by catalog order
};

// Cheapest line at the given heat load factor. Ties break toward the earlier
// catalog entry; the crossing point against the runner-up classifies the win
// as dominant or marginal.
inline Selection select_optimal(std::span<const CostLine> lines, double mu) {
  require(lines.size() >= 2, Errc::BadArgument, "select_optimal needs at least two lines");
  require(mu >= 0.0 && mu <= 1.0, Errc::DomainError, "mu must lie in [0, 1]");

  std::size_t best = 0, second = lines.size();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].cost(mu) < lines[best].cost(mu)) {
      second = best;
      best = i;
    } else if (second == lines.size() || lines[i].cost(mu) < lines[second].cost(mu)) {
      second = i;
    }
  }

  Selection sel;
  sel.winner = lines[best].tech;
  sel.runner_up = lines[second].tech;
  sel.tie = lines[best].cost(mu) == lines[second].cost(mu);

  const double b1 = lines[best].slope, b2 = lines[second].slope;
  if (b1 != b2) {
    const double crossing = (lines[second].intercept - lines[best].intercept) / (b1 - b2);
    if (crossing >= 0.0 && crossing <= 1.0) {
      sel.mu_shift = crossing;
      if (std::abs(mu - crossing) < kDominanceBand) sel.dominance = Dominance::MarginallyBetter;
    }
  }
  return sel;
}

struct MapCell {
  CellStatus status = CellStatus::NoData;
  Selection sel;
  double mu = std::numeric_limits<double>::quiet_NaN();
};

struct TechnologyMap {
  GridSpec grid;
  std::vector<MapCell> cells;

  const MapCell& at(std::uint32_t i, std::uint32_t j) const {
    return cells[static_cast<std::size_t>(i) * grid.n_lon + j];
  }
};

inline std::array<CostLine, kTechCount> cell_cost_lines(const TemperatureField& daily,
                                                        std::size_t cell,
                                                        const HeatLoadSummary& summary,
                                                        const PricingScheme& scheme,
                                                        const Catalog& catalog,
                                                        const DemandConfig& cfg,
                                                        const CopModel& cop_model = {}) {
  std::array<CostLine, kTechCount> lines;
  for (int k = 0; k < kTechCount; ++k) {
    const double eta =
        effective_efficiency(catalog[k], daily, cell, cfg, summary.mean_temp, cop_model);
    lines[k] = cost_line(catalog[k], scheme.prices[k], eta);
  }
  return lines;
}

// Cost-optimal technology per cell. Pure per-cell work; parallelizes over
// cells with identical results for any jobs count.
inline TechnologyMap screen_grid(const TemperatureField& daily, const HeatLoadField& summaries,
                                 const PricingScheme& scheme, const Catalog& catalog,
                                 const DemandConfig& cfg, const CopModel& cop_model = {},
                                 int jobs = 1) {
  require_compatible(daily.grid, summaries.grid, "screen_grid");
  scheme.validate();
  validate(catalog);

  TechnologyMap map;
  map.grid = daily.grid;
  map.cells.resize(daily.grid.cell_count());

  parallel_for(map.cells.size(), jobs, [&](std::size_t c) {
    const HeatLoadSummary& s = summaries.cells[c];
    MapCell& out = map.cells[c];
    out.status = s.status;
    if (s.status != CellStatus::Ok) return;  // NoData or ZeroPeak: flagged, no selection
    const auto lines = cell_cost_lines(daily, c, s, scheme, catalog, cfg, cop_model);
    out.mu = s.mu;
    out.sel = select_optimal(lines, s.mu);
  });
  return map;
}

}  // namespace heatgrid
