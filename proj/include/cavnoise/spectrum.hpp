#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cavnoise/noise_model.hpp"
#include "cavnoise/params.hpp"

namespace cavnoise {

/// Sideband phase-modulation readout, demodulated at the modulation frequency.
struct PhaseModulation {
  double epsilon;  // J_1(M) = M / 2
};

/// Ideal homodyne readout of the output phase quadrature.
struct Homodyne {
  double lo_amplitude;  // beta-tilde, s^-1/2
  double reflectivity;  // beamsplitter kappa in (0, 1)
};

using DetectionScheme = std::variant<PhaseModulation, Homodyne>;

/// Phase modulation at the modulation index stored in `d`.
PhaseModulation phase_modulation(const DerivedParams& d);

void check_scheme(const DetectionScheme& s);
std::string scheme_name(const DetectionScheme& s);

enum class ThermalModel {
  Corrected,  // Lindblad-form corrected Brownian motion master equation
  Standard,   // standard Brownian motion master equation
};

std::string thermal_model_name(ThermalModel m);

/// Per-term signal spectrum at one frequency, normalized by the squared
/// readout gain: (eps beta)^2 for phase modulation, (kappa beta~)^2 for
/// homodyne.
struct SpectrumBreakdown {
  double omega = 0.0;
  double shot = 0.0;
  double back_action = 0.0;
  double internal_loss = 0.0;
  double amplitude_noise = 0.0;
  double phase_noise = 0.0;
  double thermal_t = 0.0;           // proportional to T_s
  double thermal_correction = 0.0;  // 1/T_s term, or the odd standard-model term
  double total = 0.0;
  bool thermal_valid = true;        // false when T_s < 10 (k_B T >> hbar nu violated)
};

/// Split of the shot floor by physical origin.
struct ShotFloor {
  double output_vacuum = 1.0;  // delta Y_out after the cavity
  double carrier_sideband = 0.0;  // q1, noise at the modulation frequency
  double double_sideband = 0.0;   // q2, noise at twice the modulation frequency

  [[nodiscard]] double total() const { return output_vacuum + carrier_sideband + double_sideband; }
  /// Floor of earlier treatments that dropped the 2 Delta pickup.
  [[nodiscard]] double semiclassical() const { return output_vacuum + carrier_sideband; }
};

ShotFloor shot_floor_components(const DerivedParams& d, const DetectionScheme& s);
double shot_floor(const DerivedParams& d, const DetectionScheme& s);

/// (eps beta)^2 or (kappa beta~)^2; multiplies a normalized value into s^-1.
double raw_scale(const DerivedParams& d, const DetectionScheme& s);

/// The common response kernel (chi^2 alpha^2 nu)^2 / |D(omega)|^2 shared by
/// back-action, internal loss and amplitude noise.
double force_kernel(const DerivedParams& d, double omega);

/// (kappa_c^2 + omega^2) / |D(omega)|^2, shared by both thermal terms.
double thermal_kernel(const DerivedParams& d, double omega);

SpectrumBreakdown evaluate(const DerivedParams& d, const NoiseModel& noise, const DetectionScheme& s,
                           ThermalModel thermal, double omega);

std::vector<SpectrumBreakdown> evaluate_grid(const DerivedParams& d, const NoiseModel& noise,
                                             const DetectionScheme& s, ThermalModel thermal,
                                             std::span<const double> omegas);

/// Temperature below which the 1/T_s term of the corrected model exceeds the
/// T_s term at `omega`: hbar sqrt(Gamma^2 + omega^2) / (sqrt(12) k_B).
/// Returns 0 for Gamma = omega = 0.
double diosi_crossover_temperature(double damping, double omega);

}  // namespace cavnoise
