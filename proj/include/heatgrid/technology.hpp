#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "heatgrid/errors.hpp"

namespace heatgrid {

// Catalog order is the deterministic tie-break order for cost ties.
enum class TechId : int {
  GasBoiler = 0,
  OilBoiler,
  ElectricBoiler,
  A2aWithElectricBoiler,  // air-to-air heat pump + electric boiler for hot water
  AirSourceHeatPump,
  GroundSourceHeatPump,
  BiomassBoiler,
};

inline constexpr int kTechCount = 7;

inline constexpr std::array<TechId, kTechCount> kAllTech = {
    TechId::GasBoiler,          TechId::OilBoiler,
    TechId::ElectricBoiler,     TechId::A2aWithElectricBoiler,
    TechId::AirSourceHeatPump,  TechId::GroundSourceHeatPump,
    TechId::BiomassBoiler,
};

constexpr const char* tech_key(TechId id) {
  switch (id) {
    case TechId::GasBoiler: return "gas";
    case TechId::OilBoiler: return "oil";
    case TechId::ElectricBoiler: return "electric_boiler";
    case TechId::A2aWithElectricBoiler: return "a2a_eb";
    case TechId::AirSourceHeatPump: return "ashp";
    case TechId::GroundSourceHeatPump: return "gshp";
    case TechId::BiomassBoiler: return "biomass";
  }
  return "?";
}

inline std::optional<TechId> tech_from_key(std::string_view key) {
  for (TechId id : kAllTech)
    if (key == tech_key(id)) return id;
  return std::nullopt;
}

// Electricity-fueled technologies share one fuel-price draw per scheme.
constexpr bool uses_electricity(TechId id) {
  return id == TechId::ElectricBoiler || id == TechId::A2aWithElectricBoiler ||
         id == TechId::AirSourceHeatPump || id == TechId::GroundSourceHeatPump;
}

struct PriceRange {
  double nominal = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  void validate(const std::string& what) const {
    require(lo <= nominal && nominal <= hi, Errc::BadConfig,
            what + ": range must satisfy lo <= nominal <= hi");
    require(lo > 0.0, Errc::BadConfig, what + ": prices must be positive");
  }
};

enum class HeatSource { Air, Ground };

struct FixedEfficiency {
  double eta;  // in (0, 1]
};
struct HeatPumpEfficiency {
  double sink_c;
  HeatSource source;
};
// Hybrid: heat pump covers space heat, an electric boiler covers hot water.
struct HeatPumpWithDhwBoiler {
  double sink_c;
  HeatSource source;
  double dhw_eta;
};
using EfficiencyModel = std::variant<FixedEfficiency, HeatPumpEfficiency, HeatPumpWithDhwBoiler>;

struct TechnologySpec {
  TechId id = TechId::GasBoiler;
  PriceRange install;  // EUR/kW
  PriceRange equip;    // EUR/kW
  PriceRange maint;    // EUR/kW/yr
  double fuel = 0.0;   // EUR/MWh nominal; perturbed with sigma = 20% of the mean
  double lifetime_years = 0.0;
  double discount_rate = 0.0;  // fraction/yr
  double capacity_kw = 0.0;    // identical across a catalog
  EfficiencyModel efficiency = FixedEfficiency{1.0};

  void validate() const {
    const std::string k = tech_key(id);
    install.validate(k + ".install");
    equip.validate(k + ".equip");
    maint.validate(k + ".maint");
    require(fuel > 0.0, Errc::BadConfig, k + ": fuel price must be positive");
    require(lifetime_years > 0.0, Errc::BadConfig, k + ": lifetime must be positive");
    require(discount_rate > 0.0 && discount_rate < 1.0, Errc::BadConfig,
            k + ": discount rate must be in (0, 1)");
    require(capacity_kw > 0.0, Errc::BadConfig, k + ": capacity must be positive");
    if (const auto* fx = std::get_if<FixedEfficiency>(&efficiency))
      require(fx->eta > 0.0 && fx->eta <= 1.0, Errc::BadConfig,
              k + ": fixed efficiency must be in (0, 1]");
  }
};

using Catalog = std::array<TechnologySpec, kTechCount>;

inline void validate(const Catalog& cat) {
  for (int i = 0; i < kTechCount; ++i) {
    require(cat[i].id == kAllTech[i], Errc::BadConfig, "catalog order must follow TechId");
    cat[i].validate();
    require(cat[i].capacity_kw == cat[0].capacity_kw, Errc::BadConfig,
            "capacity must be identical across the catalog");
  }
}

// Reference catalog: retrofit costs for single-family houses, excluding
// taxes/levies and assumed uniform across regions. Capacities are pinned to
// 10 kW so totals scale to a typical household; the choice cancels in the
// per-cell ranking.
inline Catalog default_catalog() {
  constexpr double kCap = 10.0;
  constexpr double kRate = 0.04;
  auto tech = [&](TechId id, PriceRange install, PriceRange equip, PriceRange maint,
                  double fuel, double life, EfficiencyModel eff) {
    TechnologySpec t;
    t.id = id;
    t.install = install;
    t.equip = equip;
    t.maint = maint;
    t.fuel = fuel;
    t.lifetime_years = life;
    t.discount_rate = kRate;
    t.capacity_kw = kCap;
    t.efficiency = eff;
    return t;
  };
  return Catalog{
      tech(TechId::GasBoiler, {100, 93, 148}, {170, 157, 252}, {17, 14, 22}, 45, 20,
           FixedEfficiency{0.97}),
      tech(TechId::OilBoiler, {100, 80, 140}, {230, 187, 326}, {14, 13, 18}, 64, 20,
           FixedEfficiency{0.95}),
      tech(TechId::ElectricBoiler, {50, 30, 70}, {50, 30, 70}, {7, 5, 10}, 127, 20,
           FixedEfficiency{1.0}),
      tech(TechId::A2aWithElectricBoiler, {75, 50, 83}, {225, 150, 250}, {22, 17, 25}, 127, 12,
           HeatPumpWithDhwBoiler{30.0, HeatSource::Air, 1.0}),
      tech(TechId::AirSourceHeatPump, {304, 240, 480}, {456, 360, 720}, {24, 19, 30}, 127, 18,
           HeatPumpEfficiency{55.0, HeatSource::Air}),
      tech(TechId::GroundSourceHeatPump, {420, 350, 560}, {780, 650, 1040}, {24, 19, 30}, 127,
           20, HeatPumpEfficiency{55.0, HeatSource::Ground}),
      tech(TechId::BiomassBoiler, {118, 40, 200}, {472, 160, 800}, {25, 16, 27}, 51, 20,
           FixedEfficiency{0.88}),
  };
}

// One concrete price assignment for all technologies.
struct TechPrices {
  double install = 0.0;  // EUR/kW
  double equip = 0.0;    // EUR/kW
  double maint = 0.0;    // EUR/kW/yr
  double fuel = 0.0;     // EUR/MWh
};

enum class Provenance { Unperturbed, Perturbed, Balanced };

constexpr const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Unperturbed: return "unperturbed";
    case Provenance::Perturbed: return "perturbed";
    case Provenance::Balanced: return "balanced";
  }
  return "?";
}

struct PricingScheme {
  std::array<TechPrices, kTechCount> prices{};
  Provenance provenance = Provenance::Unperturbed;
  std::uint64_t seed = 0;
  std::uint32_t trial = 0;

  const TechPrices& of(TechId id) const { return prices[static_cast<int>(id)]; }
  TechPrices& of(TechId id) { return prices[static_cast<int>(id)]; }

  void validate() const {
    for (int i = 0; i < kTechCount; ++i) {
      const TechPrices& p = prices[i];
      require(p.install > 0 && p.equip > 0 && p.maint > 0 && p.fuel > 0, Errc::BadConfig,
              std::string(tech_key(kAllTech[i])) + ": scheme prices must be positive");
    }
  }
};

inline PricingScheme unperturbed_scheme(const Catalog& cat) {
  PricingScheme s;
  s.provenance = Provenance::Unperturbed;
  for (int i = 0; i < kTechCount; ++i)
    s.prices[i] = {cat[i].install.nominal, cat[i].equip.nominal, cat[i].maint.nominal,
                   cat[i].fuel};
  return s;
}

// Built-in preset of the balanced scheme (the Monte Carlo outcome that evens
// out the Europe-wide technology shares), so downstream runs can reproduce
// the balanced-scheme maps without rerunning the search.
inline PricingScheme balanced_scheme() {
  PricingScheme s;
  s.provenance = Provenance::Balanced;
  s.of(TechId::GasBoiler) = {117, 200, 18, 65};
  s.of(TechId::OilBoiler) = {99, 293, 17, 80};
  s.of(TechId::ElectricBoiler) = {64, 48, 7, 144};
  s.of(TechId::A2aWithElectricBoiler) = {65, 194, 21, 144};
  s.of(TechId::AirSourceHeatPump) = {347, 520, 24, 144};
  s.of(TechId::GroundSourceHeatPump) = {443, 824, 24, 144};
  s.of(TechId::BiomassBoiler) = {84, 336, 23, 59};
  return s;
}

}  // namespace heatgrid
