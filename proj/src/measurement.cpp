#include "cavnoise/measurement.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cavnoise/constants.hpp"
#include "cavnoise/io.hpp"

namespace cavnoise {

namespace {

using constants::hbar;
using constants::k_boltzmann;
using constants::pi;
using constants::speed_of_light;

void finish(ErrorBudget& b) {
  b.photon_noise_total = b.back_action + b.internal_loss;
  b.total = b.shot + b.back_action + b.internal_loss + b.thermal + b.classical_amp + b.classical_phase;
}

void check_tau(ErrorBudget& b, const DerivedParams& d, double tau_m) {
  if (!(tau_m > 0.0)) throw std::invalid_argument("measurement time must be positive");
  if (tau_m * d.damping < 5.0) {
    b.warnings.push_back("measurement time is not much longer than the mirror correlation time 1/Gamma");
  }
}

}  // namespace

std::string method_name(BudgetMethod m) {
  return m == BudgetMethod::ClosedForm ? "closed_form" : "spectrum_scaled";
}

double scaled_position_per_normalized(const DerivedParams& d, double omega) {
  const double ca2 = d.coupling() * d.coupling();
  if (!(ca2 > 0.0)) throw std::domain_error("no optomechanical transduction (chi * alpha = 0)");
  return (d.kappa_c * d.kappa_c + omega * omega) / (d.gamma * ca2);
}

double position_per_normalized(const DerivedParams& d, double omega) {
  return hbar / (2.0 * d.mass * d.nu) * scaled_position_per_normalized(d, omega);
}

double position_scaling(const DerivedParams& d, double omega) {
  const double gain = d.epsilon * d.beta;
  return position_per_normalized(d, omega) / (gain * gain);
}

ErrorBudget error_from_spectrum(const DerivedParams& d, const NoiseModel& noise,
                                const DetectionScheme& scheme, ThermalModel thermal, double omega,
                                double tau_m) {
  ErrorBudget b;
  check_tau(b, d, tau_m);
  const SpectrumBreakdown s = evaluate(d, noise, scheme, thermal, omega);
  const double scale = position_per_normalized(d, omega) / tau_m;
  b.shot = scale * s.shot;
  b.back_action = scale * s.back_action;
  b.internal_loss = scale * s.internal_loss;
  b.thermal = scale * (s.thermal_t + s.thermal_correction);
  b.classical_amp = scale * s.amplitude_noise;
  b.classical_phase = scale * s.phase_noise;
  b.at_frequency = omega;
  b.measurement_time = tau_m;
  b.method = BudgetMethod::SpectrumScaled;
  if (!s.thermal_valid) b.warnings.push_back("thermal terms outside k_B T >> hbar nu");
  finish(b);
  return b;
}

double measurement_omega(const DerivedParams& d, MeasurementPoint at) {
  return at == MeasurementPoint::Dc ? 0.0 : d.nu;
}

double closed_form_thermal(const DerivedParams& d, MeasurementPoint at, double temperature, double tau_m) {
  const double m = d.mass, nu = d.nu, q = d.q_factor, t = temperature;
  const double kt = k_boltzmann * t;
  if (at == MeasurementPoint::Dc) {
    return 2.0 * kt / (m * nu * nu * nu * q * tau_m) + hbar * hbar / (6.0 * m * nu * kt * q * q * q * tau_m);
  }
  return 2.0 * kt * q / (m * nu * nu * nu * tau_m) + hbar * hbar * q / (6.0 * m * nu * kt * tau_m);
}

ErrorBudget closed_form_budget(const DerivedParams& d, MeasurementPoint at, double tau_m) {
  if (std::abs(d.mu - d.gamma) > 1e-12 * d.gamma) {
    throw std::domain_error("closed forms assume impedance matching (mu = gamma)");
  }
  ErrorBudget b;
  check_tau(b, d, tau_m);
  if (d.gamma / d.nu < 100.0) b.warnings.push_back("approximation gamma >> nu degraded (gamma/nu < 100)");

  const double c2 = speed_of_light * speed_of_light;
  const double f2 = d.finesse * d.finesse;
  const double nu4 = d.nu * d.nu * d.nu * d.nu;
  b.shot = 3.0 * pi * pi / 32.0 * (hbar * c2 / d.omega0) / (f2 * d.power * tau_m);
  const double ba_dc = 4.0 / (pi * pi) * (hbar * d.omega0 / c2) / (d.mass * d.mass * nu4) * f2 * d.power / tau_m;
  b.back_action = at == MeasurementPoint::Dc ? ba_dc : d.q_factor * d.q_factor * ba_dc;
  b.internal_loss = b.back_action;
  b.thermal = closed_form_thermal(d, at, d.temperature, tau_m);
  b.at_frequency = measurement_omega(d, at);
  b.measurement_time = tau_m;
  b.method = BudgetMethod::ClosedForm;
  finish(b);
  return b;
}

double thermal_optimum_temperature(const DerivedParams& d, MeasurementPoint at) {
  const double t_res = hbar * d.nu / (std::sqrt(12.0) * k_boltzmann);
  return at == MeasurementPoint::Dc ? t_res / d.q_factor : t_res;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_grid needs 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<SweepRow> power_sweep(const PhysicalParams& base, std::span<const double> powers, double tau_m,
                                  BudgetMethod method, std::span<const MeasurementPoint> points) {
  std::vector<SweepRow> rows;
  rows.reserve(powers.size() * points.size());
  for (double p : powers) {
    PhysicalParams pp = base;
    pp.laser_power = p;
    const DerivedParams d = derive(pp);
    for (MeasurementPoint at : points) {
      SweepRow row{p, at, {}};
      if (method == BudgetMethod::ClosedForm) {
        row.budget = closed_form_budget(d, at, tau_m);
      } else {
        row.budget = error_from_spectrum(d, NoiseModel{}, phase_modulation(d), ThermalModel::Corrected,
                                         measurement_omega(d, at), tau_m);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

double shot_backaction_crossing(const PhysicalParams& base, MeasurementPoint at, double tau_m,
                                BudgetMethod method) {
  const double p_ref = 1.0;
  const MeasurementPoint pts[] = {at};
  const double pw[] = {p_ref};
  const auto row = power_sweep(base, pw, tau_m, method, pts).front();
  // shot ~ 1/P and back-action ~ P, so shot(P*) = ba(P*) at P* = sqrt(shot/ba) * P_ref.
  return p_ref * std::sqrt(row.budget.shot / row.budget.back_action);
}

std::string budget_csv_header() {
  return "P_W,dx2_shot,dx2_ba,dx2_loss,dx2_pn,dx2_thermal,dx2_amp,dx2_phase,dx2_total,omega_rad_s,method";
}

std::string budget_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << budget_csv_header() << '\n';
  for (const auto& r : rows) {
    const auto& b = r.budget;
    using io::format_double;
    out << format_double(r.power) << ',' << format_double(b.shot) << ',' << format_double(b.back_action) << ','
        << format_double(b.internal_loss) << ',' << format_double(b.photon_noise_total) << ','
        << format_double(b.thermal) << ',' << format_double(b.classical_amp) << ','
        << format_double(b.classical_phase) << ',' << format_double(b.total) << ','
        << format_double(b.at_frequency) << ',' << method_name(b.method) << '\n';
  }
  return out.str();
}

}  // namespace cavnoise
