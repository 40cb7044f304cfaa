#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heatgrid/errors.hpp"
#include "heatgrid/time.hpp"

namespace heatgrid {

// Regular lat/lon grid. (lat0, lon0) is the center of cell (0, 0); rows step
// by d_lat and columns by d_lon. Two grids are compatible iff all six fields
// are equal; multi-raster operations never resample.
struct GridSpec {
  std::uint32_t n_lat = 0;
  std::uint32_t n_lon = 0;
  double lat0 = 0.0;
  double lon0 = 0.0;
  double d_lat = 0.0;
  double d_lon = 0.0;

  bool operator==(const GridSpec&) const = default;

  std::size_t cell_count() const {
    return static_cast<std::size_t>(n_lat) * n_lon;
  }
  double lat(std::uint32_t i) const { return lat0 + d_lat * i; }
  double lon(std::uint32_t j) const { return lon0 + d_lon * j; }

  void validate() const {
    require(n_lat >= 1 && n_lon >= 1, Errc::InvalidField, "grid must have n_lat,n_lon >= 1");
    require(d_lat != 0.0 && d_lon != 0.0, Errc::InvalidField, "grid step must be nonzero");
  }
};

inline void require_compatible(const GridSpec& a, const GridSpec& b, const std::string& what) {
  if (!(a == b)) raise(Errc::GridMismatch, what + ": incompatible grids");
}

template <typename T>
struct Raster {
  GridSpec grid;
  std::vector<T> values;  // row-major (lat, lon)

  T& at(std::uint32_t i, std::uint32_t j) {
    return values[static_cast<std::size_t>(i) * grid.n_lon + j];
  }
  const T& at(std::uint32_t i, std::uint32_t j) const {
    return values[static_cast<std::size_t>(i) * grid.n_lon + j];
  }
};

using PopulationRaster = Raster<float>;

struct CountryMask {
  GridSpec grid;
  std::vector<std::uint16_t> codes;  // 0 = no country / sea
  std::vector<std::pair<std::uint16_t, std::string>> legend;  // (code, ISO3)

  std::uint16_t at(std::uint32_t i, std::uint32_t j) const {
    return codes[static_cast<std::size_t>(i) * grid.n_lon + j];
  }
  const std::string& iso3(std::uint16_t code) const {
    for (const auto& [c, name] : legend)
      if (c == code) return name;
    raise(Errc::LegendMissingCode, "code " + std::to_string(code) + " not in legend");
  }
};

inline constexpr std::uint32_t kStepThreeHourly = 10800;
inline constexpr std::uint32_t kStepDaily = 86400;

// Gridded time series of ambient air temperature in degC; missing = NaN.
// Payload layout is row-major (t, lat, lon), matching the file format.
struct TemperatureField {
  GridSpec grid;
  std::int64_t t_start = 0;       // epoch seconds UTC of the first sample
  std::string t_start_iso;        // verbatim header string, kept for bit-exact round trips
  std::uint32_t dt_seconds = 0;   // 10800 (3-hourly) or 86400 (daily)
  std::uint32_t n_t = 0;
  std::vector<float> values;

  float at(std::uint32_t t, std::uint32_t i, std::uint32_t j) const {
    return values[(static_cast<std::size_t>(t) * grid.n_lat + i) * grid.n_lon + j];
  }
  float& at(std::uint32_t t, std::uint32_t i, std::uint32_t j) {
    return values[(static_cast<std::size_t>(t) * grid.n_lat + i) * grid.n_lon + j];
  }

  // Strided view over one cell's samples.
  float sample(std::uint32_t t, std::size_t cell) const {
    return values[static_cast<std::size_t>(t) * grid.cell_count() + cell];
  }

  void set_start(std::int64_t epoch_s) {
    t_start = epoch_s;
    t_start_iso = format_iso8601(epoch_s);
  }

  void validate() const {
    grid.validate();
    require(dt_seconds == kStepThreeHourly || dt_seconds == kStepDaily, Errc::InvalidField,
            "dt must be 10800 or 86400 s, got " + std::to_string(dt_seconds));
    require(n_t >= 1, Errc::InvalidField, "field needs n_t >= 1");
    require(values.size() == static_cast<std::size_t>(n_t) * grid.cell_count(),
            Errc::InvalidField, "value count does not match header dimensions");
    for (float v : values) {
      if (std::isnan(v)) continue;
      require(std::isfinite(v) && v >= -90.0f && v <= 60.0f, Errc::OutOfRangeValue,
              "temperature " + std::to_string(v) + " degC outside [-90, 60]");
    }
  }
};

// Contiguous sub-series covering calendar years [y0, y1] inclusive (UTC).
inline TemperatureField slice_years(const TemperatureField& f, int y0, int y1) {
  std::uint32_t first = f.n_t, last = 0;
  for (std::uint32_t t = 0; t < f.n_t; ++t) {
    const int y = year_of_epoch_seconds(f.t_start + static_cast<std::int64_t>(t) * f.dt_seconds);
    if (y < y0 || y > y1) continue;
    first = std::min(first, t);
    last = t;
  }
  require(first < f.n_t, Errc::BadConfig,
          "period " + std::to_string(y0) + "-" + std::to_string(y1) +
              " lies outside the data's time span");
  TemperatureField out;
  out.grid = f.grid;
  out.dt_seconds = f.dt_seconds;
  out.set_start(f.t_start + static_cast<std::int64_t>(first) * f.dt_seconds);
  out.n_t = last - first + 1;
  const std::size_t cells = f.grid.cell_count();
  out.values.assign(f.values.begin() + static_cast<std::ptrdiff_t>(first * cells),
                    f.values.begin() + static_cast<std::ptrdiff_t>((last + 1) * cells));
  return out;
}

// Per-cell daily series derived from a temperature field (e.g. degree-days).
// Stored in double; NaN marks days that were missing in the source.
struct DegreeDayField {
  GridSpec grid;
  std::int64_t t_start = 0;
  std::uint32_t dt_seconds = kStepDaily;
  std::uint32_t n_t = 0;
  std::vector<double> values;

  double at(std::uint32_t t, std::uint32_t i, std::uint32_t j) const {
    return values[(static_cast<std::size_t>(t) * grid.n_lat + i) * grid.n_lon + j];
  }
};

}  // namespace heatgrid
