#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "heatgrid/analysis.hpp"
#include "heatgrid/gtsf.hpp"
#include "heatgrid/io_util.hpp"
#include "heatgrid/pricing.hpp"
#include "synthetic.hpp"

using namespace heatgrid;

namespace {

namespace fs = std::filesystem;

const fs::path kWork = fs::temp_directory_path() / "heatgrid_cli_tests";

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  fs::create_directories(kWork);
  const std::string out_file = (kWork / "stdout.txt").string();
  const std::string err_file = (kWork / "stderr.txt").string();
  const std::string cmd =
      std::string(HEATGRID_CLI_PATH) + " " + args + " >" + out_file + " 2>" + err_file;
  const int status = std::system(cmd.c_str());
  RunResult r;
  if (status != -1 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  r.out = read_file_bytes(out_file);
  r.err = read_file_bytes(err_file);
  return r;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::istringstream in(read_file_bytes(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string path_of(const std::string& name) { return (kWork / name).string(); }

// single-cell world with a linear warming drift
void write_world(double warming_per_year) {
  fs::create_directories(kWork);
  const auto g = testutil::grid(1, 1);
  const int n_years = 10;
  const auto n_t = static_cast<std::uint32_t>(testutil::kYearDays * n_years);
  const auto f = testutil::make_field(
      g, n_t, kStepDaily, [&](std::uint32_t t, std::uint32_t, std::uint32_t) {
        const double year = t / testutil::kYearDays;
        return static_cast<float>(testutil::seasonal_series(t, 6.0, 8.0, 10.0) +
                                  warming_per_year * year);
      });
  write_gtsf(f, path_of("temp.gtsf"));

  PopulationRaster pop;
  pop.grid = g;
  pop.values = {100.0f};
  write_population(pop, path_of("pop.gtsf"));

  CountryMask m;
  m.grid = g;
  m.codes = {1};
  m.legend = {{1, "SWE"}};
  write_mask(m, path_of("mask.gtsf"), path_of("legend.csv"));
}

std::string common_inputs() {
  return "--temperature " + path_of("temp.gtsf") + " --population " + path_of("pop.gtsf") +
         " --mask " + path_of("mask.gtsf") + " --legend " + path_of("legend.csv");
}

// constant temperature across a leap-free span, so every calendar year holds
// the same degree-day total
void write_flat_world() {
  write_world(0.0);
  const auto g = testutil::grid(1, 1);
  const auto f = testutil::make_field(g, 3 * 365, kStepDaily,
                                      [](std::uint32_t, std::uint32_t, std::uint32_t) {
                                        return 6.0f;
                                      },
                                      "2001-01-01T00:00:00Z");
  write_gtsf(f, path_of("temp_flat.gtsf"));
}

}  // namespace

TEST_CASE("cli: missing input file exits 2 and names the path") {
  write_world(0.0);
  const auto r = run_cli("hdd --temperature /no/such/file.gtsf --population " +
                         path_of("pop.gtsf") + " --mask " + path_of("mask.gtsf") +
                         " --legend " + path_of("legend.csv") + " --out " + path_of("out_miss"));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("/no/such/file.gtsf") != std::string::npos);
}

TEST_CASE("cli: invalid configuration exits 3") {
  write_world(0.0);
  const auto r =
      run_cli("hlf " + common_inputs() + " --t0 50 --out " + path_of("out_bad"));
  CHECK(r.exit_code == 3);
}

TEST_CASE("cli: constant climate gives a flat trend at 100%") {
  write_flat_world();
  const auto r = run_cli("hdd --temperature " + path_of("temp_flat.gtsf") + " --population " +
                         path_of("pop.gtsf") + " --mask " + path_of("mask.gtsf") +
                         " --legend " + path_of("legend.csv") + " --out " + path_of("out_flat"));
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(path_of("out_flat") + "/trend_europe.csv");
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == std::vector<std::string>{"year", "raw", "smoothed", "pct_of_baseline"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK_THAT(std::stod(rows[i][2]), Catch::Matchers::WithinAbs(100.0, 1e-6));
    CHECK_THAT(std::stod(rows[i][3]), Catch::Matchers::WithinAbs(100.0, 1e-6));
  }
}

TEST_CASE("cli: warming drift gives a strictly decreasing smoothed trend") {
  write_world(0.5);  // the threshold gap shrinks by 5 degC over the decade
  const auto r = run_cli("hdd " + common_inputs() + " --window 3 --out " + path_of("out_warm"));
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(path_of("out_warm") + "/trend_europe.csv");
  REQUIRE(rows.size() > 3);

  // scalar oracle: recompute the per-year degree-day sums straight from the file
  const auto f = read_gtsf(path_of("temp.gtsf"));
  std::map<int, double> expect;
  for (std::uint32_t t = 0; t < f.n_t; ++t) {
    const int year = year_of_epoch_seconds(f.t_start + static_cast<std::int64_t>(t) * 86400);
    expect[year] += std::max(0.0, 17.0 - static_cast<double>(f.values[t]));
  }
  double prev = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int year = std::stoi(rows[i][0]);
    CHECK_THAT(std::stod(rows[i][1]), Catch::Matchers::WithinRel(expect.at(year), 1e-6));
    const double smoothed = std::stod(rows[i][2]);
    if (i > 1) CHECK(smoothed < prev);
    prev = smoothed;
  }
}

TEST_CASE("cli: hlf exports the per-cell summary") {
  write_world(0.0);
  const auto r = run_cli("hlf --temperature " + path_of("temp.gtsf") + " --out " +
                         path_of("out_hlf"));
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(path_of("out_hlf") + "/heat_load.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "cell_i");

  const auto f = read_gtsf(path_of("temp.gtsf"));
  DemandConfig cfg;
  const auto hlf = heat_load_factor(f, cfg);
  CHECK_THAT(std::stod(rows[1][4]), Catch::Matchers::WithinRel(hlf.cells[0].mu, 1e-9));
  CHECK_THAT(std::stod(rows[1][5]), Catch::Matchers::WithinRel(hlf.cells[0].t_design, 1e-6));

  // the manifest's declared row count matches the written table
  const auto manifest = KvFile::parse_file(path_of("out_hlf") + "/run_manifest.txt");
  CHECK(manifest.require_key("count.rows_heat_load") == std::to_string(rows.size() - 1));
  CHECK(manifest.require_key("count.cells") == "1");
}

TEST_CASE("cli: screen on one cell equals the library selection") {
  write_world(0.0);
  const auto r = run_cli("screen --temperature " + path_of("temp.gtsf") +
                         " --scheme balanced --out " + path_of("out_screen"));
  REQUIRE(r.exit_code == 0);

  const auto rows = read_csv(path_of("out_screen") + "/technology_map.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"cell_i", "cell_j", "winner", "dominance", "mu",
                                            "mu_shift", "runner_up"});

  const auto f = read_gtsf(path_of("temp.gtsf"));
  DemandConfig cfg;
  const auto hlf = heat_load_factor(f, cfg);
  const auto map = screen_grid(f, hlf, balanced_scheme(), default_catalog(), cfg);
  CHECK(rows[1][2] == tech_key(map.cells[0].sel.winner));
  CHECK(rows[1][6] == tech_key(map.cells[0].sel.runner_up));

  const auto curve = read_csv(path_of("out_screen") + "/screening_curve.csv");
  CHECK(curve.size() == 102);  // header + 101 mu steps
  CHECK(curve[0][0] == "mu");

  // determinism: a rerun produces byte-identical CSVs and never mutates inputs
  const std::string input_before = read_file_bytes(path_of("temp.gtsf"));
  const auto again = run_cli("screen --temperature " + path_of("temp.gtsf") +
                             " --scheme balanced --out " + path_of("out_screen2"));
  REQUIRE(again.exit_code == 0);
  CHECK(read_file_bytes(path_of("out_screen") + "/technology_map.csv") ==
        read_file_bytes(path_of("out_screen2") + "/technology_map.csv"));
  CHECK(read_file_bytes(path_of("out_screen") + "/screening_curve.csv") ==
        read_file_bytes(path_of("out_screen2") + "/screening_curve.csv"));
  CHECK(read_file_bytes(path_of("temp.gtsf")) == input_before);
}

TEST_CASE("cli: screen can source its scheme from an inline Monte Carlo search") {
  write_world(0.0);
  const auto r = run_cli("screen --temperature " + path_of("temp.gtsf") +
                         " --scheme mc --trials 4 --seed 11 --out " + path_of("out_screen_mc"));
  REQUIRE(r.exit_code == 0);
  const auto manifest = KvFile::parse_file(path_of("out_screen_mc") + "/run_manifest.txt");
  CHECK(manifest.require_key("scheme") == "balanced");
  CHECK(read_csv(path_of("out_screen_mc") + "/technology_map.csv").size() == 2);
}

TEST_CASE("cli: mc with one trial returns the unperturbed scheme as balanced") {
  write_world(0.0);
  const auto r = run_cli("mc --temperature " + path_of("temp.gtsf") +
                         " --trials 1 --seed 3 --out " + path_of("out_mc1"));
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(path_of("out_mc1") + "/trials.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "0");

  const auto scheme = read_scheme(path_of("out_mc1") + "/balanced_scheme.txt");
  CHECK(scheme.provenance == Provenance::Balanced);
  CHECK(scheme.trial == 0);
  const auto nominal = unperturbed_scheme(default_catalog());
  for (int k = 0; k < kTechCount; ++k) {
    CHECK(scheme.prices[k].install == nominal.prices[k].install);
    CHECK(scheme.prices[k].fuel == nominal.prices[k].fuel);
  }
}

TEST_CASE("cli: mc is seed-deterministic and picks the score minimizer") {
  write_world(0.0);
  const std::string args = "mc --temperature " + path_of("temp.gtsf") + " --trials 8 --seed 5";
  REQUIRE(run_cli(args + " --out " + path_of("out_mc_a")).exit_code == 0);
  REQUIRE(run_cli(args + " --out " + path_of("out_mc_b")).exit_code == 0);
  CHECK(read_file_bytes(path_of("out_mc_a") + "/trials.csv") ==
        read_file_bytes(path_of("out_mc_b") + "/trials.csv"));

  const auto rows = read_csv(path_of("out_mc_a") + "/trials.csv");
  REQUIRE(rows.size() == 9);
  std::size_t best = 1;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::stod(rows[i][1]) < std::stod(rows[best][1])) best = i;

  const auto manifest = KvFile::parse_file(path_of("out_mc_a") + "/run_manifest.txt");
  CHECK(manifest.require_key("balanced_trial") == rows[best][0]);
}

TEST_CASE("cli: report ensembles across models") {
  write_world(0.0);
  // three "models": same world, increasingly warm futures
  const auto g = testutil::grid(1, 1);
  const auto n_t = static_cast<std::uint32_t>(testutil::kYearDays * 40);
  for (int m = 0; m < 3; ++m) {
    const auto f = testutil::make_field(
        g, n_t, kStepDaily, [&](std::uint32_t t, std::uint32_t, std::uint32_t) {
          const double year = t / testutil::kYearDays;
          const double drift = year < 20 ? 0.0 : (m + 1) * 0.08 * (year - 20);
          return static_cast<float>(testutil::seasonal_series(t, 6.0, 8.0, 10.0) + drift);
        },
        "1970-01-01T00:00:00Z");
    write_gtsf(f, path_of("model" + std::to_string(m) + ".gtsf"));
  }
  const std::string models3 = " --model a=" + path_of("model0.gtsf") +
                              " --model b=" + path_of("model1.gtsf") +
                              " --model c=" + path_of("model2.gtsf");
  const std::string base = "report --population " + path_of("pop.gtsf") + " --mask " +
                           path_of("mask.gtsf") + " --legend " + path_of("legend.csv") +
                           " --periods 1970-1989,1990-2009 --scheme balanced";

  SECTION("single model has zero-sigma statistics") {
    const auto r = run_cli(base + " --model solo=" + path_of("model0.gtsf") + " --out " +
                           path_of("out_rep1"));
    REQUIRE(r.exit_code == 0);
    const auto rows = read_csv(path_of("out_rep1") + "/ensemble_tech_shares.csv");
    REQUIRE(rows.size() > 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(std::stod(rows[i][4]) == 0.0);              // sigma
      CHECK(rows[i][5] == rows[i][6]);                  // q25 == q75
      CHECK(std::stod(rows[i][3]) >= 0.0);
      CHECK(std::stod(rows[i][3]) <= 1.0);
    }
  }

  SECTION("model order does not matter") {
    const std::string shuffled = " --model c=" + path_of("model2.gtsf") +
                                 " --model a=" + path_of("model0.gtsf") +
                                 " --model b=" + path_of("model1.gtsf");
    REQUIRE(run_cli(base + models3 + " --out " + path_of("out_rep_a")).exit_code == 0);
    REQUIRE(run_cli(base + shuffled + " --out " + path_of("out_rep_b")).exit_code == 0);
    CHECK(read_file_bytes(path_of("out_rep_a") + "/ensemble_tech_shares.csv") ==
          read_file_bytes(path_of("out_rep_b") + "/ensemble_tech_shares.csv"));
    CHECK(read_file_bytes(path_of("out_rep_a") + "/co2.csv") ==
          read_file_bytes(path_of("out_rep_b") + "/co2.csv"));
  }

  SECTION("ensemble rows in co2.csv match recomputed statistics") {
    REQUIRE(run_cli(base + models3 + " --out " + path_of("out_rep_c")).exit_code == 0);
    const auto rows = read_csv(path_of("out_rep_c") + "/co2.csv");
    std::vector<double> dhdd;
    std::map<std::string, double> stats;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i][1].rfind("ensemble_", 0) == 0)
        stats[rows[i][1]] = std::stod(rows[i][2]);
      else
        dhdd.push_back(std::stod(rows[i][2]));
    }
    REQUIRE(dhdd.size() == 3);
    const auto s = ensemble_stats(dhdd);
    CHECK_THAT(stats.at("ensemble_mean"), Catch::Matchers::WithinRel(s.mean, 1e-9));
    CHECK_THAT(stats.at("ensemble_sigma"), Catch::Matchers::WithinRel(s.sigma, 1e-9));
    CHECK_THAT(stats.at("ensemble_q25"), Catch::Matchers::WithinRel(s.q25, 1e-9));
    CHECK_THAT(stats.at("ensemble_q75"), Catch::Matchers::WithinRel(s.q75, 1e-9));
    // warming lowers degree-days, so the coupled emission change is negative
    for (double v : dhdd) CHECK(v < 0.0);
  }
}

TEST_CASE("cli: three-hourly input is averaged before the pipeline") {
  fs::create_directories(kWork);
  const auto g = testutil::grid(1, 1);
  // two days of alternating 0/20 degC samples: both daily means are 10
  const auto f = testutil::make_field(g, 16, kStepThreeHourly,
                                      [](std::uint32_t t, std::uint32_t, std::uint32_t) {
                                        return t % 2 ? 20.0f : 0.0f;
                                      });
  write_gtsf(f, path_of("temp3h.gtsf"));
  const auto r = run_cli("hlf --temperature " + path_of("temp3h.gtsf") + " --out " +
                         path_of("out_3h"));
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(path_of("out_3h") + "/heat_load.csv");
  REQUIRE(rows.size() == 2);
  CHECK_THAT(std::stod(rows[1][5]), Catch::Matchers::WithinAbs(10.0, 1e-6));  // t_design
  CHECK_THAT(std::stod(rows[1][4]), Catch::Matchers::WithinAbs(1.0, 1e-12));  // constant load
}

TEST_CASE("cli: period window restricts the analysis years") {
  write_world(0.0);
  const auto r = run_cli("hdd " + common_inputs() + " --period 1972-1974 --out " +
                         path_of("out_period"));
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(path_of("out_period") + "/trend_europe.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][0] == "1972");
  CHECK(rows[3][0] == "1974");

  const auto bad = run_cli("hdd " + common_inputs() + " --period 2050-2060 --out " +
                           path_of("out_period_bad"));
  CHECK(bad.exit_code == 3);
}

TEST_CASE("cli: co2 maps the published anchor points") {
  const auto r = run_cli("co2 --delta -0.42,-0.24,-0.16 --out " + path_of("out_co2"));
  REQUIRE(r.exit_code == 0);
  const auto rows = read_csv(path_of("out_co2") + "/co2.csv");
  REQUIRE(rows.size() == 4);
  CHECK_THAT(std::stod(rows[1][1]), Catch::Matchers::WithinAbs(-0.125, 1e-3));
  CHECK_THAT(std::stod(rows[2][1]), Catch::Matchers::WithinAbs(-0.072, 1e-3));
  CHECK_THAT(std::stod(rows[3][1]), Catch::Matchers::WithinAbs(-0.048, 1e-3));
}

TEST_CASE("cli: inspect dumps the header") {
  write_world(0.0);
  const auto r = run_cli("inspect " + path_of("temp.gtsf"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("grid: 1 x 1") != std::string::npos);
  CHECK(r.out.find("dt_seconds: 86400") != std::string::npos);
  CHECK(r.out.find("payload: float32") != std::string::npos);
}

TEST_CASE("cli: config file merges with flag overrides") {
  write_world(0.0);
  const std::string cfg_path = path_of("run.cfg");
  write_file_atomic(cfg_path, "temperature = " + path_of("temp.gtsf") +
                                  "\nout = " + path_of("out_cfg") + "\nt0 = 18\n");
  REQUIRE(run_cli("hlf --config " + cfg_path).exit_code == 0);
  const auto manifest = KvFile::parse_file(path_of("out_cfg") + "/run_manifest.txt");
  CHECK(manifest.require_key("config.t0") == "18");

  // flags win over the file
  REQUIRE(run_cli("hlf --config " + cfg_path + " --t0 16 --out " + path_of("out_cfg2"))
              .exit_code == 0);
  const auto manifest2 = KvFile::parse_file(path_of("out_cfg2") + "/run_manifest.txt");
  CHECK(manifest2.require_key("config.t0") == "16");
}
