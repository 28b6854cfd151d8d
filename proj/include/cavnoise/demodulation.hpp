#pragma once

#include <cstdint>
#include <vector>

#include "cavnoise/params.hpp"

namespace cavnoise {

/// Carrier-level check of the demodulation pickup. White delta X_in and
/// delta Y_in are sampled on a grid fine enough to resolve 2 Delta, and the
/// windowed integrals
///   q1(t) = -((beta - sqrt(gamma) alpha) / T) int_0^T sin(Delta (t+s)) dX_in(t+s) ds
///   q2(t) =  (epsilon beta / T)              int_0^T cos(2 Delta (t+s)) dY_in(t+s) ds
/// are formed directly.
struct DemodConfig {
  double carrier = 0.0;          // Delta [rad/s]
  double averaging_time = 0.0;   // T [s]
  double duration = 0.0;         // s of q path
  int samples_per_period = 16;   // per period of 2 Delta
  int lag_stride = 0;            // fine samples per lag step; 0 selects T/16
  double max_lag = 0.0;          // s; 0 selects 1.5 T
  int batches = 32;              // for batch-means standard errors
  std::uint64_t seed = 1;
};

struct DemodResult {
  double dt = 0.0;               // fine grid step
  double lag_step = 0.0;         // spacing of `lags` and of the stored paths
  std::vector<double> lags;      // 0, h, 2h, ... [s]
  std::vector<double> q1_autocorrelation;
  std::vector<double> q2_autocorrelation;
  std::vector<double> q1_standard_error;
  std::vector<double> q2_standard_error;
  std::vector<double> q1_path;   // sampled every lag_step
  std::vector<double> q2_path;
  // Two-sided integrals of the autocorrelations (effective white densities).
  double q1_density = 0.0;
  double q2_density = 0.0;
  double q1_density_error = 0.0;
  double q2_density_error = 0.0;
  // Closed-form values the paths should reproduce.
  double q1_density_expected = 0.0;  // (1/2)(beta - sqrt(gamma) alpha)^2
  double q2_density_expected = 0.0;  // (1/2)(epsilon beta)^2
  /// (epsilon beta)^2 / 2 * (T - |tau|) / T^2, zero beyond T.
  [[nodiscard]] double q2_triangle(double tau, double epsilon_beta, double averaging_time) const;
};

/// Throws ConfigError (see stochastic.hpp) when Delta T is not large compared
/// to 2 pi or when the grid cannot resolve 2 Delta.
DemodResult demodulation_floor_sim(const DerivedParams& d, const DemodConfig& cfg);

}  // namespace cavnoise
