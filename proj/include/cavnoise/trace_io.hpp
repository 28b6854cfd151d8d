#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cavnoise/stochastic.hpp"
#include "cavnoise/welch.hpp"

namespace cavnoise {

// Binary columnar trace, little-endian:
//   char[8]  "CAVTRACE"
//   u32      format version (1)
//   u32      column count C
//   u64      row count N
//   f64      dt [s]
//   f64      t0 [s], time of the first row
//   u64      master seed
//   C x { u16 name length, name bytes (UTF-8) }
//   C x N    f64 samples, column-major
struct TraceTable {
  std::uint32_t version = 1;
  double dt = 0.0;
  double t0 = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};

inline constexpr std::uint32_t kTraceFormatVersion = 1;

/// Columns dX, dY, dQ, dP, y_out, signal, position.
TraceTable to_table(const SimTrace& trace);

std::string encode_trace(const TraceTable& table);
TraceTable decode_trace(const std::string& bytes);

void write_trace(const std::filesystem::path& path, const TraceTable& table);
TraceTable read_trace(const std::filesystem::path& path);

/// `omega_rad_s,psd` rows in ascending omega.
std::string psd_csv(const PsdEstimate& est);

}  // namespace cavnoise
