#include "cavnoise/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "cavnoise/constants.hpp"
#include "cavnoise/dynamics.hpp"

namespace cavnoise {

PhaseModulation phase_modulation(const DerivedParams& d) { return {d.epsilon}; }

void check_scheme(const DetectionScheme& s) {
  if (const auto* pm = std::get_if<PhaseModulation>(&s)) {
    if (!(pm->epsilon > 0.0)) throw std::invalid_argument("phase modulation needs epsilon > 0");
  } else {
    const auto& h = std::get<Homodyne>(s);
    if (!(h.lo_amplitude > 0.0)) throw std::invalid_argument("homodyne needs local oscillator amplitude > 0");
    if (!(h.reflectivity > 0.0 && h.reflectivity < 1.0)) {
      throw std::invalid_argument("homodyne beamsplitter reflectivity must lie in (0, 1)");
    }
  }
}

std::string scheme_name(const DetectionScheme& s) {
  return std::holds_alternative<PhaseModulation>(s) ? "pm" : "homodyne";
}

std::string thermal_model_name(ThermalModel m) {
  return m == ThermalModel::Corrected ? "cbmme" : "sbmme";
}

ShotFloor shot_floor_components(const DerivedParams& d, const DetectionScheme& s) {
  check_scheme(s);
  ShotFloor f;
  if (const auto* pm = std::get_if<PhaseModulation>(&s)) {
    const double imbalance = (d.gamma - d.mu) / (pm->epsilon * (d.gamma + d.mu));
    f.carrier_sideband = 0.5 * imbalance * imbalance;
    f.double_sideband = 0.5;
  }
  return f;
}

double shot_floor(const DerivedParams& d, const DetectionScheme& s) {
  return shot_floor_components(d, s).total();
}

double raw_scale(const DerivedParams& d, const DetectionScheme& s) {
  check_scheme(s);
  if (const auto* pm = std::get_if<PhaseModulation>(&s)) {
    const double gain = pm->epsilon * d.beta;
    return gain * gain;
  }
  const auto& h = std::get<Homodyne>(s);
  const double gain = h.reflectivity * h.lo_amplitude;
  return gain * gain;
}

double force_kernel(const DerivedParams& d, double omega) {
  const double ca2 = d.coupling() * d.coupling();
  const double num = ca2 * d.nu;
  return num * num / transfer_denominator_norm2(LinearRates::from(d), omega);
}

double thermal_kernel(const DerivedParams& d, double omega) {
  return (d.kappa_c * d.kappa_c + omega * omega) /
         transfer_denominator_norm2(LinearRates::from(d), omega);
}

SpectrumBreakdown evaluate(const DerivedParams& d, const NoiseModel& noise, const DetectionScheme& s,
                           ThermalModel thermal, double omega) {
  SpectrumBreakdown b;
  b.omega = omega;
  b.shot = shot_floor(d, s);

  const double w2 = omega * omega;
  const double k2 = d.kappa_c * d.kappa_c;
  const double force = force_kernel(d, omega);
  b.back_action = d.gamma * d.gamma * force;
  b.internal_loss = d.gamma * d.mu * force;
  b.amplitude_noise = 4.0 * d.gamma * d.gamma * noise.amplitude_density(omega) * force;

  const double gy = noise.phase_density(omega);
  if (std::holds_alternative<PhaseModulation>(s)) {
    const double ratio = 2.0 * d.gamma / (d.gamma + d.mu);
    b.phase_noise = 4.0 * gy * ratio * ratio * w2 / (k2 + w2);
  } else {
    const double half_imbalance = 0.5 * (d.gamma - d.mu);
    b.phase_noise = 4.0 * gy * (half_imbalance * half_imbalance + w2) / (k2 + w2);
  }

  const double ca2 = d.coupling() * d.coupling();
  const double ts = d.scaled_temperature;
  const double kern = thermal_kernel(d, omega);
  const double prefactor = d.gamma * ca2 * d.damping;
  b.thermal_t = prefactor * 4.0 * d.nu * d.nu * ts * kern;
  if (thermal == ThermalModel::Corrected) {
    b.thermal_correction = prefactor * (d.damping * d.damping + w2) / (3.0 * ts) * kern;
  } else {
    b.thermal_correction = 2.0 * omega * d.gamma * d.damping * ca2 * d.nu * kern;
  }
  b.thermal_valid = ts >= 10.0;

  b.total = b.shot + b.back_action + b.internal_loss + b.amplitude_noise + b.phase_noise +
            b.thermal_t + b.thermal_correction;
  return b;
}

std::vector<SpectrumBreakdown> evaluate_grid(const DerivedParams& d, const NoiseModel& noise,
                                             const DetectionScheme& s, ThermalModel thermal,
                                             std::span<const double> omegas) {
  std::vector<SpectrumBreakdown> out;
  out.reserve(omegas.size());
  for (double w : omegas) out.push_back(evaluate(d, noise, s, thermal, w));
  return out;
}

double diosi_crossover_temperature(double damping, double omega) {
  return constants::hbar * std::hypot(damping, omega) / (std::sqrt(12.0) * constants::k_boltzmann);
}

}  // namespace cavnoise
