#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heatgrid/errors.hpp"
#include "heatgrid/grid.hpp"
#include "heatgrid/io_util.hpp"
#include "heatgrid/kvfile.hpp"
#include "heatgrid/rng.hpp"
#include "heatgrid/supply.hpp"
#include "heatgrid/technology.hpp"

namespace heatgrid {

namespace rng_field {
inline constexpr std::uint64_t kInstall = 0;
inline constexpr std::uint64_t kEquip = 1;
inline constexpr std::uint64_t kMaint = 2;
inline constexpr std::uint64_t kFuel = 3;
// pseudo-technology slot for the electricity price shared by all
// electricity-fueled technologies
inline constexpr std::uint64_t kSharedElectricity = kTechCount;
}  // namespace rng_field

inline constexpr double kFuelSigmaFraction = 0.20;

// One Monte Carlo draw of the pricing scheme. Capital and maintenance prices
// are uniform inside their catalog ranges; fuel prices are Gaussian with a
// 20% spread, truncated positive by resampling. All electricity-fueled
// technologies reuse a single electricity draw, so the perturbation never
// introduces artificial electric-vs-heat-pump fuel spreads. Deterministic in
// (seed, trial) alone.
inline PricingScheme perturb_one(const Catalog& cat, std::uint64_t seed, std::uint32_t trial) {
  PricingScheme s;
  s.provenance = Provenance::Perturbed;
  s.seed = seed;
  s.trial = trial;

  RngStream elec = RngStream::derive(seed, trial, rng_field::kSharedElectricity, rng_field::kFuel);
  double elec_price = 0.0;
  bool elec_drawn = false;

  for (int k = 0; k < kTechCount; ++k) {
    const TechnologySpec& t = cat[k];
    TechPrices& p = s.prices[k];
    p.install = RngStream::derive(seed, trial, k, rng_field::kInstall)
                    .next_uniform(t.install.lo, t.install.hi);
    p.equip = RngStream::derive(seed, trial, k, rng_field::kEquip)
                  .next_uniform(t.equip.lo, t.equip.hi);
    p.maint = RngStream::derive(seed, trial, k, rng_field::kMaint)
                  .next_uniform(t.maint.lo, t.maint.hi);
    if (uses_electricity(t.id)) {
      if (!elec_drawn) {
        elec_price = elec.next_positive_normal(t.fuel, kFuelSigmaFraction * t.fuel);
        elec_drawn = true;
      }
      p.fuel = elec_price;
    } else {
      p.fuel = RngStream::derive(seed, trial, k, rng_field::kFuel)
                   .next_positive_normal(t.fuel, kFuelSigmaFraction * t.fuel);
    }
  }
  return s;
}

// Perturbed trials 1..n_trials (trial 0 is reserved for the unperturbed
// scheme in Monte Carlo runs). Trial k's prices do not depend on n_trials.
inline std::vector<PricingScheme> perturb(const Catalog& cat, std::uint32_t n_trials,
                                          std::uint64_t seed) {
  require(n_trials >= 1, Errc::BadArgument, "perturb needs n_trials >= 1");
  validate(cat);
  std::vector<PricingScheme> out;
  out.reserve(n_trials);
  for (std::uint32_t t = 1; t <= n_trials; ++t) out.push_back(perturb_one(cat, seed, t));
  return out;
}

// Fraction of demand cells won by each technology; sums to 1. With a
// population raster, each cell counts its population instead of 1.
struct ShareVector {
  std::array<double, kTechCount> share{};

  double of(TechId id) const { return share[static_cast<int>(id)]; }
  double max_share() const {
    double m = share[0];
    for (double v : share) m = std::max(m, v);
    return m;
  }
};

inline ShareVector share_vector(const TechnologyMap& map,
                                const PopulationRaster* weights = nullptr) {
  if (weights) require_compatible(map.grid, weights->grid, "share_vector");
  ShareVector sv;
  double total = 0.0;
  for (std::size_t c = 0; c < map.cells.size(); ++c) {
    const MapCell& cell = map.cells[c];
    if (cell.status != CellStatus::Ok) continue;
    const double w = weights ? static_cast<double>(weights->values[c]) : 1.0;
    sv.share[static_cast<int>(cell.sel.winner)] += w;
    total += w;
  }
  if (total <= 0.0)
    raise(weights ? Errc::ZeroPopulation : Errc::ZeroDemand,
          "no weight on any demand cell");
  for (double& v : sv.share) v /= total;
  return sv;
}

// Balance score: sum of squared distances of every technology share from the
// scheme's own largest share. Zero iff all seven shares are equal.
inline double balance_score(const ShareVector& sv) {
  const double top = sv.max_share();
  double score = 0.0;
  for (double v : sv.share) score += (v - top) * (v - top);
  return score;
}

inline std::size_t balanced_select_index(std::span<const ShareVector> shares) {
  require(!shares.empty(), Errc::BadArgument, "balanced_select needs at least one trial");
  std::size_t best = 0;
  double best_score = balance_score(shares[0]);
  for (std::size_t i = 1; i < shares.size(); ++i) {
    const double s = balance_score(shares[i]);
    if (s < best_score) {  // ties keep the lowest trial index
      best = i;
      best_score = s;
    }
  }
  return best;
}

inline PricingScheme balanced_select(std::span<const PricingScheme> schemes,
                                     std::span<const ShareVector> shares) {
  require(schemes.size() == shares.size(), Errc::BadArgument,
          "schemes and share vectors must align");
  return schemes[balanced_select_index(shares)];
}

// Scheme files are flat key-value text: `<tech>.<field> = price` plus
// meta.provenance / meta.seed / meta.trial.
inline std::string serialize_scheme(const PricingScheme& s) {
  KvFile kv;
  kv.set("meta.provenance", provenance_name(s.provenance));
  kv.set("meta.seed", std::to_string(s.seed));
  kv.set("meta.trial", std::to_string(s.trial));
  for (TechId id : kAllTech) {
    const std::string k = tech_key(id);
    const TechPrices& p = s.of(id);
    kv.set(k + ".install", format_double(p.install));
    kv.set(k + ".equip", format_double(p.equip));
    kv.set(k + ".maint", format_double(p.maint));
    kv.set(k + ".fuel", format_double(p.fuel));
  }
  return kv.serialize();
}

inline void write_scheme(const PricingScheme& s, const std::string& path) {
  write_file_atomic(path, serialize_scheme(s));
}

inline PricingScheme read_scheme(const std::string& path) {
  const KvFile kv = KvFile::parse_file(path);
  PricingScheme s;
  const std::string prov = kv.get_or("meta.provenance", "unperturbed");
  if (prov == "unperturbed")
    s.provenance = Provenance::Unperturbed;
  else if (prov == "perturbed")
    s.provenance = Provenance::Perturbed;
  else if (prov == "balanced")
    s.provenance = Provenance::Balanced;
  else
    raise(Errc::BadConfig, path + ": unknown provenance '" + prov + "'");
  s.seed = static_cast<std::uint64_t>(kv.get_int("meta.seed", 0));
  s.trial = static_cast<std::uint32_t>(kv.get_int("meta.trial", 0));
  for (TechId id : kAllTech) {
    const std::string k = tech_key(id);
    TechPrices& p = s.of(id);
    p.install = kv.get_double(k + ".install", 0.0);
    p.equip = kv.get_double(k + ".equip", 0.0);
    p.maint = kv.get_double(k + ".maint", 0.0);
    p.fuel = kv.get_double(k + ".fuel", 0.0);
  }
  s.validate();
  return s;
}

}  // namespace heatgrid
