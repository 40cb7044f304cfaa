#pragma once

// GTSF: little-endian binary container for gridded time series.
//
//   magic "GTSF" | version u16 (=1) | payload_kind u8 (0=float32, 1=uint16) |
//   reserved u8 | n_lat u32 | n_lon u32 | lat0 f64 | lon0 f64 | d_lat f64 |
//   d_lon f64 | t_start u16-length-prefixed UTF-8 ISO-8601 | dt_seconds u32 |
//   n_t u32 | payload, n_t*n_lat*n_lon elements row-major (t, lat, lon)
//
// Writers emit the layout byte-for-byte deterministically; readers validate
// before returning. Loaded rasters are immutable and shareable across
// threads; writing is single-writer per path.

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "heatgrid/errors.hpp"
#include "heatgrid/grid.hpp"
#include "heatgrid/io_util.hpp"

namespace heatgrid {

namespace gtsf {

inline constexpr char kMagic[4] = {'G', 'T', 'S', 'F'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::uint8_t kPayloadFloat32 = 0;
inline constexpr std::uint8_t kPayloadUint16 = 1;

namespace detail {

inline void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xff));
  b.push_back(static_cast<char>(v >> 8));
}
inline void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u64(std::string& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_f64(std::string& b, double v) { put_u64(b, std::bit_cast<std::uint64_t>(v)); }
inline void put_f32(std::string& b, float v) { put_u32(b, std::bit_cast<std::uint32_t>(v)); }

class Reader {
 public:
  Reader(std::string bytes, std::string path)
      : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint16_t u16() {
    const char* p = take(2);
    return static_cast<std::uint16_t>(static_cast<std::uint8_t>(p[0]) |
                                      (static_cast<std::uint8_t>(p[1]) << 8));
  }
  std::uint32_t u32() {
    const char* p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(p[i])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const char* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(p[i])) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string str(std::size_t n) { return std::string(take(n), n); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  const char* take(std::size_t n) {
    if (remaining() < n)
      raise(Errc::TruncatedPayload, path_ + ": file ends " + std::to_string(n - remaining()) +
                                        " bytes short");
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

 private:
  std::string bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

inline std::string slurp(const std::string& path) { return read_file_bytes(path); }

struct Header {
  std::uint8_t payload_kind;
  GridSpec grid;
  std::string t_start_iso;
  std::uint32_t dt_seconds;
  std::uint32_t n_t;
};

inline Header read_header(Reader& r, const std::string& path) {
  const std::string magic = r.str(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    raise(Errc::BadMagic, path + ": not a GTSF file");
  const std::uint16_t version = r.u16();
  if (version != kVersion)
    raise(Errc::UnsupportedVersion,
          path + ": version " + std::to_string(version) + ", expected 1");
  Header h;
  h.payload_kind = r.u8();
  r.u8();  // reserved
  h.grid.n_lat = r.u32();
  h.grid.n_lon = r.u32();
  h.grid.lat0 = r.f64();
  h.grid.lon0 = r.f64();
  h.grid.d_lat = r.f64();
  h.grid.d_lon = r.f64();
  h.t_start_iso = r.str(r.u16());
  h.dt_seconds = r.u32();
  h.n_t = r.u32();
  h.grid.validate();
  require(h.n_t >= 1, Errc::InvalidField, path + ": n_t must be >= 1");
  return h;
}

inline void write_header(std::string& b, std::uint8_t payload_kind, const GridSpec& g,
                         const std::string& t_start_iso, std::uint32_t dt_seconds,
                         std::uint32_t n_t) {
  b.append(kMagic, 4);
  put_u16(b, kVersion);
  b.push_back(static_cast<char>(payload_kind));
  b.push_back('\0');
  put_u32(b, g.n_lat);
  put_u32(b, g.n_lon);
  put_f64(b, g.lat0);
  put_f64(b, g.lon0);
  put_f64(b, g.d_lat);
  put_f64(b, g.d_lon);
  require(t_start_iso.size() <= 0xffff, Errc::InvalidField, "t_start string too long");
  put_u16(b, static_cast<std::uint16_t>(t_start_iso.size()));
  b.append(t_start_iso);
  put_u32(b, dt_seconds);
  put_u32(b, n_t);
}

}  // namespace detail
}  // namespace gtsf

inline TemperatureField read_gtsf(const std::string& path) {
  gtsf::detail::Reader r(gtsf::detail::slurp(path), path);
  const auto h = gtsf::detail::read_header(r, path);
  if (h.payload_kind != gtsf::kPayloadFloat32)
    raise(Errc::WrongPayloadKind, path + ": expected float32 payload");
  TemperatureField f;
  f.grid = h.grid;
  f.t_start_iso = h.t_start_iso;
  f.t_start = parse_iso8601(h.t_start_iso);
  f.dt_seconds = h.dt_seconds;
  f.n_t = h.n_t;
  const std::size_t n = static_cast<std::size_t>(h.n_t) * h.grid.cell_count();
  if (r.remaining() < n * 4)
    raise(Errc::TruncatedPayload, path + ": payload declares " + std::to_string(n) +
                                      " values but file holds " + std::to_string(r.remaining() / 4));
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.values[i] = r.f32();
  f.validate();
  return f;
}

inline void write_gtsf(const TemperatureField& f, const std::string& path) {
  f.validate();
  std::string b;
  b.reserve(64 + f.t_start_iso.size() + f.values.size() * 4);
  gtsf::detail::write_header(b, gtsf::kPayloadFloat32, f.grid, f.t_start_iso, f.dt_seconds, f.n_t);
  for (float v : f.values) gtsf::detail::put_f32(b, v);
  write_file_atomic(path, b);
}

// Population rasters reuse the float32 layout with n_t = 1. NaN cells (NoData
// over sea) are loaded as zero population; negative values are rejected.
inline PopulationRaster read_population(const std::string& path) {
  gtsf::detail::Reader r(gtsf::detail::slurp(path), path);
  const auto h = gtsf::detail::read_header(r, path);
  if (h.payload_kind != gtsf::kPayloadFloat32)
    raise(Errc::WrongPayloadKind, path + ": expected float32 payload");
  require(h.n_t == 1, Errc::InvalidField, path + ": population raster must have n_t = 1");
  const std::size_t n = h.grid.cell_count();
  if (r.remaining() < n * 4)
    raise(Errc::TruncatedPayload, path + ": payload declares " + std::to_string(n) +
                                      " values but file holds " + std::to_string(r.remaining() / 4));
  PopulationRaster p;
  p.grid = h.grid;
  p.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    float v = r.f32();
    if (std::isnan(v)) v = 0.0f;
    if (v < 0.0f) raise(Errc::NegativePopulation, path + ": negative population " + std::to_string(v));
    p.values[i] = v;
  }
  return p;
}

inline void write_population(const PopulationRaster& p, const std::string& path) {
  p.grid.validate();
  require(p.values.size() == p.grid.cell_count(), Errc::InvalidField,
          "population raster size mismatch");
  std::string b;
  gtsf::detail::write_header(b, gtsf::kPayloadFloat32, p.grid, "1970-01-01T00:00:00Z",
                             kStepDaily, 1);
  for (float v : p.values) gtsf::detail::put_f32(b, v);
  write_file_atomic(path, b);
}

namespace gtsf::detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::pair<std::uint16_t, std::string>> read_legend(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) raise(Errc::FileNotFound, "no such file: " + path);
  std::ifstream in(path);
  if (!in) raise(Errc::IoFailure, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "code,iso3")
    raise(Errc::BadConfig, path + ": legend must start with header 'code,iso3'");
  std::vector<std::pair<std::uint16_t, std::string>> legend;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    require(comma != std::string::npos, Errc::BadConfig, path + ": bad legend row '" + line + "'");
    const std::string code_s = trim(line.substr(0, comma));
    const std::string iso = trim(line.substr(comma + 1));
    unsigned long code = 0;
    try {
      code = std::stoul(code_s);
    } catch (...) {
      raise(Errc::BadConfig, path + ": bad code '" + code_s + "'");
    }
    require(code >= 1 && code <= 0xffff, Errc::BadConfig,
            path + ": code " + code_s + " out of range [1, 65535]");
    require(iso.size() == 3 && std::isupper(static_cast<unsigned char>(iso[0])) &&
                std::isupper(static_cast<unsigned char>(iso[1])) &&
                std::isupper(static_cast<unsigned char>(iso[2])),
            Errc::BadConfig, path + ": '" + iso + "' is not an ISO3 code");
    for (const auto& [c, name] : legend)
      if (c == code)
        raise(Errc::LegendDuplicateCode, path + ": code " + code_s + " listed twice");
    legend.emplace_back(static_cast<std::uint16_t>(code), iso);
  }
  return legend;
}

}  // namespace gtsf::detail

inline CountryMask read_mask(const std::string& path, const std::string& legend_path) {
  gtsf::detail::Reader r(gtsf::detail::slurp(path), path);
  const auto h = gtsf::detail::read_header(r, path);
  if (h.payload_kind != gtsf::kPayloadUint16)
    raise(Errc::WrongPayloadKind, path + ": expected uint16 payload");
  require(h.n_t == 1, Errc::InvalidField, path + ": mask must have n_t = 1");
  CountryMask m;
  m.grid = h.grid;
  const std::size_t n = h.grid.cell_count();
  if (r.remaining() < n * 2)
    raise(Errc::TruncatedPayload, path + ": payload declares " + std::to_string(n) +
                                      " values but file holds " + std::to_string(r.remaining() / 2));
  m.codes.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.codes[i] = r.u16();
  m.legend = gtsf::detail::read_legend(legend_path);
  for (std::uint16_t c : m.codes) {
    if (c == 0) continue;
    bool found = false;
    for (const auto& [code, name] : m.legend)
      if (code == c) {
        found = true;
        break;
      }
    if (!found)
      raise(Errc::LegendMissingCode,
            path + ": raster code " + std::to_string(c) + " missing from legend");
  }
  return m;
}

inline void write_mask(const CountryMask& m, const std::string& path,
                       const std::string& legend_path) {
  m.grid.validate();
  require(m.codes.size() == m.grid.cell_count(), Errc::InvalidField, "mask size mismatch");
  std::string b;
  gtsf::detail::write_header(b, gtsf::kPayloadUint16, m.grid, "1970-01-01T00:00:00Z",
                             kStepDaily, 1);
  for (std::uint16_t v : m.codes) gtsf::detail::put_u16(b, v);
  write_file_atomic(path, b);

  std::string csv = "code,iso3\n";
  for (const auto& [code, name] : m.legend)
    csv += std::to_string(code) + "," + name + "\n";
  write_file_atomic(legend_path, csv);
}

}  // namespace heatgrid
