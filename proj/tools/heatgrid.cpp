// heatgrid command-line front end: orchestrates the pipeline from GTSF
// rasters to plot-ready CSV exports, with a reproducibility manifest per run.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heatgrid/analysis.hpp"
#include "heatgrid/config.hpp"
#include "heatgrid/csv.hpp"
#include "heatgrid/demand.hpp"
#include "heatgrid/gtsf.hpp"
#include "heatgrid/manifest.hpp"
#include "heatgrid/pricing.hpp"
#include "heatgrid/supply.hpp"
#include "heatgrid/version.hpp"

namespace hg = heatgrid;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string out_path(const hg::RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

struct LoadedField {
  hg::TemperatureField daily;
  hg::DailyMeanStats stats;
  bool averaged = false;
};

// Reads a temperature field and brings it to daily resolution; 3-hourly
// inputs go through the night-storage daily mean.
LoadedField load_daily(const std::string& path, const hg::RunConfig& cfg,
                       bool apply_period = true) {
  LoadedField out;
  hg::TemperatureField f = hg::read_gtsf(path);
  if (f.dt_seconds == hg::kStepThreeHourly) {
    out.daily = hg::daily_mean(f, &out.stats);
    out.averaged = true;
    if (out.stats.dropped_samples > 0)
      std::cerr << "warning: " << path << ": dropped " << out.stats.dropped_samples
                << " trailing samples not forming a full day\n";
  } else {
    out.daily = std::move(f);
  }
  if (apply_period && cfg.period)
    out.daily = hg::slice_years(out.daily, cfg.period->first, cfg.period->second);
  return out;
}

const char* dominance_name(hg::Dominance d) {
  return d == hg::Dominance::Dominant ? "dominant" : "marginally_better";
}

void count_cells(hg::RunManifest& man, const hg::HeatLoadField& hlf) {
  std::uint64_t ok = 0, nodata = 0, zeropeak = 0;
  for (const auto& c : hlf.cells) {
    if (c.status == hg::CellStatus::Ok) ++ok;
    if (c.status == hg::CellStatus::NoData) ++nodata;
    if (c.status == hg::CellStatus::ZeroPeak) ++zeropeak;
  }
  man.count("cells", hlf.cells.size());
  man.count("cells_ok", ok);
  man.count("cells_no_data", nodata);
  man.count("cells_no_demand", zeropeak);
}

// Resolves the configured scheme source; "mc" runs the Monte Carlo search on
// the given field and returns the balanced pick.
hg::PricingScheme resolve_scheme(const hg::RunConfig& cfg, const hg::TemperatureField& daily,
                                 const hg::HeatLoadField& hlf) {
  const std::string& src = cfg.scheme_source;
  if (src == "unperturbed") return hg::unperturbed_scheme(cfg.catalog);
  if (src == "balanced") return hg::balanced_scheme();
  if (src.rfind("file:", 0) == 0) return hg::read_scheme(src.substr(5));

  // monte-carlo: trial 0 is the unperturbed scheme, trials 1..n-1 perturbed
  std::vector<hg::PricingScheme> schemes;
  schemes.push_back(hg::unperturbed_scheme(cfg.catalog));
  if (cfg.trials > 1) {
    auto perturbed = hg::perturb(cfg.catalog, cfg.trials - 1, cfg.seed);
    schemes.insert(schemes.end(), perturbed.begin(), perturbed.end());
  }
  std::vector<hg::ShareVector> shares;
  shares.reserve(schemes.size());
  for (const auto& s : schemes) {
    const auto map = hg::screen_grid(daily, hlf, s, cfg.catalog, cfg.demand, cfg.cop_model,
                                     cfg.jobs);
    shares.push_back(hg::share_vector(map));
  }
  hg::PricingScheme best = hg::balanced_select(schemes, shares);
  best.provenance = hg::Provenance::Balanced;
  return best;
}

int cmd_inspect(const std::vector<std::string>& paths) {
  for (const std::string& path : paths) {
    hg::gtsf::detail::Reader r(hg::gtsf::detail::slurp(path), path);
    const auto h = hg::gtsf::detail::read_header(r, path);
    std::printf("file: %s\n", path.c_str());
    std::printf("payload: %s\n", h.payload_kind == hg::gtsf::kPayloadFloat32 ? "float32" : "uint16");
    std::printf("grid: %u x %u\n", h.grid.n_lat, h.grid.n_lon);
    std::printf("origin: lat0=%.6g lon0=%.6g d_lat=%.6g d_lon=%.6g\n", h.grid.lat0, h.grid.lon0,
                h.grid.d_lat, h.grid.d_lon);
    std::printf("t_start: %s\n", h.t_start_iso.c_str());
    std::printf("dt_seconds: %u\n", h.dt_seconds);
    std::printf("n_t: %u\n", h.n_t);
    std::printf("payload_values: %zu\n",
                static_cast<std::size_t>(h.n_t) * h.grid.cell_count());
  }
  return 0;
}

int cmd_hdd(const hg::RunConfig& cfg) {
  const auto t0 = Clock::now();
  hg::RunManifest man("hdd");
  man.echo_config(cfg.raw);
  man.set("seed", cfg.seed);

  const std::string temp_path = cfg.require_path("temperature");
  const std::string pop_path = cfg.require_path("population");
  const std::string mask_path = cfg.require_path("mask");
  const std::string legend_path = cfg.require_path("legend");
  man.add_input("temperature", temp_path);
  man.add_input("population", pop_path);
  man.add_input("mask", mask_path);
  man.add_input("legend", legend_path);

  const LoadedField lf = load_daily(temp_path, cfg);
  const auto pop = hg::read_population(pop_path);
  const auto mask = hg::read_mask(mask_path, legend_path);

  const auto table = hg::national_hdd(lf.daily, pop, mask, cfg.demand);

  hg::CsvWriter by_country("country,year,hdd");
  for (const auto& [iso3, values] : table.by_country)
    for (std::size_t y = 0; y < table.years.size(); ++y) {
      by_country.field(iso3).field(table.years[y]).field(values[y]);
      by_country.end_row();
    }
  by_country.write(out_path(cfg, "hdd_by_country_year.csv"));

  const int baseline = cfg.baseline_year.value_or(table.years.front());
  const auto trend = hg::make_trend(table.years, table.europe, baseline);
  const auto smoothed_pct =
      hg::moving_average(std::span<const double>(trend.normalized), cfg.window);

  hg::CsvWriter europe("year,raw,smoothed,pct_of_baseline");
  for (std::size_t y = 0; y < trend.years.size(); ++y) {
    europe.field(trend.years[y]).field(trend.values[y]).field(smoothed_pct[y]).field(
        trend.normalized[y]);
    europe.end_row();
  }
  europe.write(out_path(cfg, "trend_europe.csv"));

  man.count("years", table.years.size());
  man.count("countries", table.by_country.size());
  man.count("rows_hdd_by_country_year", by_country.rows());
  man.count("rows_trend_europe", europe.rows());
  man.count("dropped_samples", lf.stats.dropped_samples);
  man.count("missing_days", lf.stats.missing_days);
  man.write(out_path(cfg, "run_manifest.txt"), ms_since(t0));
  return 0;
}

int cmd_hlf(const hg::RunConfig& cfg) {
  const auto t0 = Clock::now();
  hg::RunManifest man("hlf");
  man.echo_config(cfg.raw);

  const std::string temp_path = cfg.require_path("temperature");
  man.add_input("temperature", temp_path);
  const LoadedField lf = load_daily(temp_path, cfg);
  const auto hlf = hg::heat_load_factor(lf.daily, cfg.demand);

  hg::CsvWriter csv("cell_i,cell_j,lat,lon,mu,t_design,hdd_total,share_sh,share_dhw");
  const hg::GridSpec& g = hlf.grid;
  for (std::uint32_t i = 0; i < g.n_lat; ++i)
    for (std::uint32_t j = 0; j < g.n_lon; ++j) {
      const auto& s = hlf.at(i, j);
      if (s.status != hg::CellStatus::Ok) continue;
      csv.field(i).field(j).field(g.lat(i)).field(g.lon(j)).field(s.mu).field(s.t_design)
          .field(s.hdd_total).field(s.share_space_heat).field(s.share_hot_water);
      csv.end_row();
    }
  csv.write(out_path(cfg, "heat_load.csv"));

  count_cells(man, hlf);
  man.count("rows_heat_load", csv.rows());
  man.count("dropped_samples", lf.stats.dropped_samples);
  man.write(out_path(cfg, "run_manifest.txt"), ms_since(t0));
  return 0;
}

void write_map_csv(const hg::TechnologyMap& map, const std::string& path) {
  hg::CsvWriter csv("cell_i,cell_j,winner,dominance,mu,mu_shift,runner_up");
  for (std::uint32_t i = 0; i < map.grid.n_lat; ++i)
    for (std::uint32_t j = 0; j < map.grid.n_lon; ++j) {
      const auto& c = map.at(i, j);
      if (c.status != hg::CellStatus::Ok) continue;
      csv.field(i).field(j).field(hg::tech_key(c.sel.winner)).field(
          dominance_name(c.sel.dominance));
      csv.field(c.mu);
      if (c.sel.mu_shift)
        csv.field(*c.sel.mu_shift);
      else
        csv.field(std::string());
      csv.field(hg::tech_key(c.sel.runner_up));
      csv.end_row();
    }
  csv.write(path);
}

// Screening-curve data for one cell: annualized cost per kW of every
// technology on a 0.01-step heat-load-factor grid.
void write_curve_csv(const hg::TemperatureField& daily, const hg::HeatLoadField& hlf,
                     std::uint32_t ci, std::uint32_t cj, const hg::PricingScheme& scheme,
                     const hg::RunConfig& cfg, const std::string& path) {
  hg::require(ci < daily.grid.n_lat && cj < daily.grid.n_lon, hg::Errc::BadConfig,
              "curve_cell outside the grid");
  const std::size_t cell = static_cast<std::size_t>(ci) * daily.grid.n_lon + cj;
  const auto& summary = hlf.cells[cell];
  hg::require(summary.status == hg::CellStatus::Ok, hg::Errc::ZeroPeak,
              "curve cell has no demand");
  const auto lines =
      hg::cell_cost_lines(daily, cell, summary, scheme, cfg.catalog, cfg.demand, cfg.cop_model);

  std::string header = "mu";
  for (hg::TechId id : hg::kAllTech) header += std::string(",") + hg::tech_key(id);
  hg::CsvWriter csv(header);
  const double kappa = cfg.catalog[0].capacity_kw;
  for (int k = 0; k <= 100; ++k) {
    const double mu = k / 100.0;
    csv.field(mu);
    for (const auto& line : lines) csv.field(line.cost(mu) / kappa);
    csv.end_row();
  }
  csv.write(path);
}

int cmd_screen(const hg::RunConfig& cfg) {
  const auto t0 = Clock::now();
  hg::RunManifest man("screen");
  man.echo_config(cfg.raw);
  man.set("seed", cfg.seed);

  const std::string temp_path = cfg.require_path("temperature");
  man.add_input("temperature", temp_path);
  const LoadedField lf = load_daily(temp_path, cfg);
  const auto hlf = hg::heat_load_factor(lf.daily, cfg.demand);
  const hg::PricingScheme scheme = resolve_scheme(cfg, lf.daily, hlf);
  man.set("scheme", hg::provenance_name(scheme.provenance));

  const auto map =
      hg::screen_grid(lf.daily, hlf, scheme, cfg.catalog, cfg.demand, cfg.cop_model, cfg.jobs);
  write_map_csv(map, out_path(cfg, "technology_map.csv"));

  const std::uint32_t ci = cfg.curve_cell ? cfg.curve_cell->first : map.grid.n_lat / 2;
  const std::uint32_t cj = cfg.curve_cell ? cfg.curve_cell->second : map.grid.n_lon / 2;
  write_curve_csv(lf.daily, hlf, ci, cj, scheme, cfg, out_path(cfg, "screening_curve.csv"));

  std::uint64_t ties = 0, marginal = 0;
  for (const auto& c : map.cells)
    if (c.status == hg::CellStatus::Ok) {
      ties += c.sel.tie ? 1 : 0;
      marginal += c.sel.dominance == hg::Dominance::MarginallyBetter ? 1 : 0;
    }
  count_cells(man, hlf);
  man.count("ties", ties);
  man.count("marginally_better", marginal);
  man.set("curve_cell", std::to_string(ci) + "," + std::to_string(cj));
  man.write(out_path(cfg, "run_manifest.txt"), ms_since(t0));
  return 0;
}

int cmd_mc(const hg::RunConfig& cfg) {
  const auto t0 = Clock::now();
  hg::RunManifest man("mc");
  man.echo_config(cfg.raw);
  man.set("seed", cfg.seed);
  man.set("trials", static_cast<long long>(cfg.trials));

  const std::string temp_path = cfg.require_path("temperature");
  man.add_input("temperature", temp_path);
  const LoadedField lf = load_daily(temp_path, cfg);
  const auto hlf = hg::heat_load_factor(lf.daily, cfg.demand);

  std::vector<hg::PricingScheme> schemes;
  schemes.push_back(hg::unperturbed_scheme(cfg.catalog));
  if (cfg.trials > 1) {
    auto perturbed = hg::perturb(cfg.catalog, cfg.trials - 1, cfg.seed);
    schemes.insert(schemes.end(), perturbed.begin(), perturbed.end());
  }

  std::vector<hg::ShareVector> shares(schemes.size());
  for (std::size_t t = 0; t < schemes.size(); ++t) {
    const auto map = hg::screen_grid(lf.daily, hlf, schemes[t], cfg.catalog, cfg.demand,
                                     cfg.cop_model, cfg.jobs);
    shares[t] = hg::share_vector(map);
  }

  std::string header = "trial,score";
  for (hg::TechId id : hg::kAllTech) header += std::string(",share_") + hg::tech_key(id);
  hg::CsvWriter csv(header);
  for (std::size_t t = 0; t < schemes.size(); ++t) {
    csv.field(static_cast<long long>(t)).field(hg::balance_score(shares[t]));
    for (double v : shares[t].share) csv.field(v);
    csv.end_row();
  }
  csv.write(out_path(cfg, "trials.csv"));

  const std::size_t best = hg::balanced_select_index(shares);
  hg::PricingScheme balanced = schemes[best];
  balanced.provenance = hg::Provenance::Balanced;
  hg::write_scheme(balanced, out_path(cfg, "balanced_scheme.txt"));

  count_cells(man, hlf);
  man.count("trials_run", schemes.size());
  man.set("balanced_trial", static_cast<long long>(best));
  man.set_double("balanced_score", hg::balance_score(shares[best]));
  man.write(out_path(cfg, "run_manifest.txt"), ms_since(t0));
  return 0;
}

int cmd_report(const hg::RunConfig& cfg) {
  const auto t0 = Clock::now();
  hg::RunManifest man("report");
  man.echo_config(cfg.raw);
  man.set("seed", cfg.seed);

  const auto models = cfg.models();
  hg::require(!models.empty(), hg::Errc::BadConfig,
              "report needs at least one 'model.<label> = path' input");
  hg::require(!cfg.periods.empty(), hg::Errc::BadConfig,
              "report needs 'periods = A-B,...' (first window is the baseline)");

  const std::string pop_path = cfg.require_path("population");
  const std::string mask_path = cfg.require_path("mask");
  const std::string legend_path = cfg.require_path("legend");
  man.add_input("population", pop_path);
  man.add_input("mask", mask_path);
  man.add_input("legend", legend_path);
  const auto pop = hg::read_population(pop_path);
  const auto mask = hg::read_mask(mask_path, legend_path);

  auto period_label = [](std::pair<int, int> p) {
    return std::to_string(p.first) + "-" + std::to_string(p.second);
  };

  // (period, country, tech) -> per-model shares; (period) -> per-model HDD
  std::map<std::string, std::map<std::string, std::array<std::vector<double>, hg::kTechCount>>>
      shares;
  std::map<std::string, std::vector<double>> europe_hdd;
  std::optional<hg::PricingScheme> scheme;

  for (const auto& [label, path] : models) {
    man.add_input("model." + label, path);
    const LoadedField lf = load_daily(path, cfg, /*apply_period=*/false);
    for (const auto& window : cfg.periods) {
      const auto sliced = hg::slice_years(lf.daily, window.first, window.second);
      const auto hlf = hg::heat_load_factor(sliced, cfg.demand);
      if (!scheme) scheme = resolve_scheme(cfg, sliced, hlf);
      const auto map = hg::screen_grid(sliced, hlf, *scheme, cfg.catalog, cfg.demand,
                                       cfg.cop_model, cfg.jobs);
      const auto national = hg::national_tech_shares(map, pop, mask);
      const std::string plabel = period_label(window);
      for (const auto& [iso3, sv] : national)
        for (int k = 0; k < hg::kTechCount; ++k)
          shares[plabel][iso3][k].push_back(sv.share[k]);

      const auto hdd = hg::national_hdd(sliced, pop, mask, cfg.demand);
      double mean_annual = 0.0;
      for (double v : hdd.europe) mean_annual += v;
      mean_annual /= static_cast<double>(hdd.europe.size());
      europe_hdd[plabel].push_back(mean_annual);
    }
  }
  man.set("scheme", hg::provenance_name(scheme->provenance));

  hg::CsvWriter shares_csv("period,country,tech,mean,sigma,q25,q75");
  for (const auto& window : cfg.periods) {
    const std::string plabel = period_label(window);
    for (const auto& [iso3, per_tech] : shares[plabel])
      for (int k = 0; k < hg::kTechCount; ++k) {
        const auto stat = hg::ensemble_stats(per_tech[k]);
        shares_csv.field(plabel).field(iso3).field(hg::tech_key(hg::kAllTech[k]))
            .field(stat.mean).field(stat.sigma).field(stat.q25).field(stat.q75);
        shares_csv.end_row();
      }
  }
  shares_csv.write(out_path(cfg, "ensemble_tech_shares.csv"));

  // relative HDD change of each later window against the baseline window,
  // mapped to a CO2-emission change
  hg::CsvWriter co2_csv("period,model,dhdd,co2");
  const std::string base_label = period_label(cfg.periods.front());
  for (std::size_t w = 1; w < cfg.periods.size(); ++w) {
    const std::string plabel = period_label(cfg.periods[w]);
    std::vector<double> dhdd, co2;
    for (std::size_t m = 0; m < models.size(); ++m) {
      const double base = europe_hdd[base_label][m];
      const double now = europe_hdd[plabel][m];
      const double rel = (now - base) / base;
      dhdd.push_back(rel);
      co2.push_back(hg::co2_change(rel, cfg.k_co2));
      co2_csv.field(plabel).field(models[m].first).field(rel).field(co2.back());
      co2_csv.end_row();
    }
    const auto sd = hg::ensemble_stats(dhdd);
    const auto sc = hg::ensemble_stats(co2);
    co2_csv.field(plabel).field(std::string("ensemble_mean")).field(sd.mean).field(sc.mean);
    co2_csv.end_row();
    co2_csv.field(plabel).field(std::string("ensemble_sigma")).field(sd.sigma).field(sc.sigma);
    co2_csv.end_row();
    co2_csv.field(plabel).field(std::string("ensemble_q25")).field(sd.q25).field(sc.q25);
    co2_csv.end_row();
    co2_csv.field(plabel).field(std::string("ensemble_q75")).field(sd.q75).field(sc.q75);
    co2_csv.end_row();
  }
  co2_csv.write(out_path(cfg, "co2.csv"));

  man.count("models", models.size());
  man.count("periods", cfg.periods.size());
  man.count("rows_ensemble_tech_shares", shares_csv.rows());
  man.count("rows_co2", co2_csv.rows());
  man.write(out_path(cfg, "run_manifest.txt"), ms_since(t0));
  return 0;
}

int cmd_co2(const hg::RunConfig& cfg, const std::string& deltas) {
  const auto t0 = Clock::now();
  hg::RunManifest man("co2");
  man.echo_config(cfg.raw);
  man.set_double("k_co2", cfg.k_co2);

  hg::CsvWriter csv("dhdd,co2");
  for (const std::string& item : hg::split_list(deltas)) {
    double d = 0.0;
    try {
      d = std::stod(item);
    } catch (...) {
      hg::raise(hg::Errc::BadConfig, "bad delta '" + item + "'");
    }
    csv.field(d).field(hg::co2_change(d, cfg.k_co2));
    csv.end_row();
  }
  csv.write(out_path(cfg, "co2.csv"));
  man.count("rows_co2", csv.rows());
  man.write(out_path(cfg, "run_manifest.txt"), ms_since(t0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridded techno-economic screening of decentralised heating technologies"};
  app.set_version_flag("--version", std::string("heatgrid ") + hg::kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> model_args;

  app.add_option("--config", config_path, "flat key = value configuration file");
  auto add_override = [&](CLI::App* cmd, const char* flag, const char* key, const char* help) {
    cmd->add_option_function<std::string>(
        flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
  };

  auto add_common = [&](CLI::App* cmd, bool with_scheme) {
    add_override(cmd, "--seed", "seed", "RNG seed");
    add_override(cmd, "--jobs", "jobs", "parallel jobs (0 = available cores)");
    add_override(cmd, "--out", "out", "output directory");
    add_override(cmd, "--t0", "t0", "heating threshold temperature [degC]");
    add_override(cmd, "--dhw", "dhw", "hot-water proxy [degree-days/day]");
    add_override(cmd, "--temperature", "temperature", "GTSF temperature field");
    add_override(cmd, "--period", "period", "calendar-year window A-B (inclusive)");
    if (with_scheme) {
      add_override(cmd, "--scheme", "scheme",
                   "pricing scheme: unperturbed | balanced | mc | file:PATH");
      add_override(cmd, "--trials", "trials", "Monte Carlo trials (incl. trial 0)");
    }
  };

  CLI::App* inspect = app.add_subcommand("inspect", "dump GTSF headers");
  std::vector<std::string> inspect_paths;
  inspect->add_option("files", inspect_paths, "GTSF files")->required();

  CLI::App* hdd = app.add_subcommand("hdd", "degree-day trends per country and for Europe");
  add_common(hdd, false);
  add_override(hdd, "--population", "population", "GTSF population raster");
  add_override(hdd, "--mask", "mask", "GTSF country mask (uint16)");
  add_override(hdd, "--legend", "legend", "country legend CSV");
  add_override(hdd, "--window", "window", "moving-average window in years");
  add_override(hdd, "--baseline-year", "baseline_year", "trend baseline year");

  CLI::App* hlf = app.add_subcommand("hlf", "per-cell heat load factors");
  add_common(hlf, false);

  CLI::App* screen = app.add_subcommand("screen", "per-cell cost-optimal technology map");
  add_common(screen, true);
  add_override(screen, "--curve-cell", "curve_cell", "cell I,J for the screening-curve export");

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo pricing search for a balanced scheme");
  add_common(mc, true);

  CLI::App* report = app.add_subcommand("report", "climate-ensemble technology shares and CO2");
  add_common(report, true);
  add_override(report, "--population", "population", "GTSF population raster");
  add_override(report, "--mask", "mask", "GTSF country mask (uint16)");
  add_override(report, "--legend", "legend", "country legend CSV");
  add_override(report, "--periods", "periods", "comma list of A-B windows; first is baseline");
  report->add_option("--model", model_args, "ensemble member as label=path (repeatable)");
  add_override(report, "--k", "k_co2", "CO2 coupling coefficient");

  CLI::App* co2 = app.add_subcommand("co2", "map relative HDD changes to CO2 changes");
  std::string deltas;
  co2->add_option("--delta", deltas, "comma list of relative HDD changes in [-1, 1]")
      ->required();
  add_override(co2, "--k", "k_co2", "CO2 coupling coefficient");
  add_override(co2, "--out", "out", "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 3;
  }

  try {
    hg::KvFile kv;
    if (!config_path.empty()) kv = hg::KvFile::parse_file(config_path);
    for (const auto& [k, v] : overrides) kv.set(k, v);
    for (const std::string& m : model_args) {
      const std::size_t eq = m.find('=');
      hg::require(eq != std::string::npos, hg::Errc::BadConfig,
                  "--model expects label=path, got '" + m + "'");
      kv.set("model." + m.substr(0, eq), m.substr(eq + 1));
    }
    const hg::RunConfig cfg = hg::RunConfig::resolve(kv);

    if (inspect->parsed()) return cmd_inspect(inspect_paths);
    if (hdd->parsed()) return cmd_hdd(cfg);
    if (hlf->parsed()) return cmd_hlf(cfg);
    if (screen->parsed()) return cmd_screen(cfg);
    if (mc->parsed()) return cmd_mc(cfg);
    if (report->parsed()) return cmd_report(cfg);
    if (co2->parsed()) return cmd_co2(cfg, deltas);
  } catch (const hg::Error& e) {
    std::cerr << "heatgrid: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "heatgrid: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
