// Generates a small self-consistent input set (temperature series, population
// raster, country mask, legend) so the README walkthrough runs out of the box:
//
//   make_sample_inputs OUTDIR [N_CELLS_PER_SIDE] [N_YEARS]
//
// The climate is a north-south gradient with maritime west and continental
// east, the population is denser toward the south-west, and the mask splits
// the domain into two countries.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>

#include "heatgrid/gtsf.hpp"

namespace hg = heatgrid;

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s OUTDIR [N_CELLS_PER_SIDE] [N_YEARS]\n", argv[0]);
    return 3;
  }
  const std::string dir = argv[1];
  const unsigned n = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 12;
  const unsigned years = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 24;
  if (n < 2 || years < 1) {
    std::fprintf(stderr, "need at least a 2x2 grid and one year\n");
    return 3;
  }

  try {
    std::filesystem::create_directories(dir);
    const hg::GridSpec grid{n, n, 55.0, 5.0, -0.11, 0.11};
    const auto n_t = static_cast<std::uint32_t>(365.25 * years);

    hg::TemperatureField temps;
    temps.grid = grid;
    temps.set_start(0);  // 1970-01-01T00:00:00Z
    temps.dt_seconds = hg::kStepDaily;
    temps.n_t = n_t;
    temps.values.resize(static_cast<std::size_t>(n_t) * grid.cell_count());
    for (std::uint32_t t = 0; t < n_t; ++t) {
      const double theta = 2.0 * std::numbers::pi * t / 365.25;
      const double w = std::max(0.0, std::cos(theta));
      const double cold_mod = 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * t / 9.3));
      for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
          const double fi = static_cast<double>(i) / (n - 1);  // 0 = north
          const double fj = static_cast<double>(j) / (n - 1);  // 0 = maritime west
          const double base = 2.0 + 10.0 * fi;
          const double amp = 5.0 + 7.0 * fj;
          const double spike = (6.0 + 8.0 * fj) * cold_mod * std::pow(w, 9);
          temps.at(t, i, j) = static_cast<float>(base - amp * std::cos(theta) - spike);
        }
    }
    hg::write_gtsf(temps, dir + "/temps.gtsf");

    hg::PopulationRaster pop;
    pop.grid = grid;
    pop.values.resize(grid.cell_count());
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        pop.at(i, j) = static_cast<float>(50.0 + 500.0 * (i + (n - 1.0 - j)) / (2 * n - 2));
    hg::write_population(pop, dir + "/pop.gtsf");

    hg::CountryMask mask;
    mask.grid = grid;
    mask.codes.resize(grid.cell_count());
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        mask.codes[static_cast<std::size_t>(i) * n + j] = i < n / 2 ? 1 : 2;
    mask.legend = {{1, "NOR"}, {2, "DEU"}};
    hg::write_mask(mask, dir + "/mask.gtsf", dir + "/legend.csv");

    std::printf("wrote %s/{temps.gtsf,pop.gtsf,mask.gtsf,legend.csv} (%ux%u cells, %u years)\n",
                dir.c_str(), n, n, years);
  } catch (const hg::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return e.exit_code();
  }
  return 0;
}
