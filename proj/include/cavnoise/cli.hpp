#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavnoise/params.hpp"
#include "cavnoise/stochastic.hpp"

namespace cavnoise::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSpectrumSchema = "spectrum/1";
inline constexpr const char* kBudgetSchema = "budget/1";
inline constexpr const char* kCompareSchema = "compare/1";

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kTolerance = 2,
  kRuntimeCap = 3,
};

/// Simulation settings read from a `key = value` file. Band limits of 0
/// select [nu/3, 3 nu].
struct SimSettings {
  SimConfig config;
  double band_min = 0.0;
  double band_max = 0.0;
  double tolerance = 0.10;
  double runtime_cap = 900.0;  // s
  bool per_term = false;
};

/// Keys: dt_s, duration_s, burn_in_s, seed, segment_length, n_segments,
/// n_trajectories, sources (vacuum | thermal | all | none | comma list of
/// source names), classical_x, classical_y (shape specs), readout
/// (pm | homodyne), band_min_rad_s, band_max_rad_s, tolerance,
/// runtime_cap_s, per_term (true | false).
SimSettings parse_sim_settings(std::string_view text);
SimSettings load_sim_settings(const std::filesystem::path& path);

SourceSwitches parse_sources(std::string_view spec);

/// Column line of the spectrum CSV.
std::string spectrum_csv_header();

/// Entry point for the `cavnoise` executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cavnoise::cli
