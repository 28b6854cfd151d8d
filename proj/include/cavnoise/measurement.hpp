#pragma once

#include <span>
#include <string>
#include <vector>

#include "cavnoise/params.hpp"
#include "cavnoise/spectrum.hpp"

namespace cavnoise {

enum class BudgetMethod { ClosedForm, SpectrumScaled };
enum class MeasurementPoint { Dc, Resonance };

std::string method_name(BudgetMethod m);

/// Squared position errors [m^2] for one measurement of duration tau_m.
struct ErrorBudget {
  double shot = 0.0;
  double back_action = 0.0;
  double internal_loss = 0.0;
  double photon_noise_total = 0.0;  // back_action + internal_loss
  double thermal = 0.0;
  double classical_amp = 0.0;
  double classical_phase = 0.0;
  double total = 0.0;  // shot + back_action + internal_loss + thermal + classical
  double at_frequency = 0.0;
  double measurement_time = 0.0;
  BudgetMethod method = BudgetMethod::SpectrumScaled;
  std::vector<std::string> warnings;
};

/// Converts a normalized phase-readout spectrum value into the position
/// spectral density of the mirror [m^2 s]. Scheme independent.
/// Throws std::domain_error when chi * alpha = 0.
double position_per_normalized(const DerivedParams& d, double omega);

/// Same conversion expressed on the scaled position quadrature delta Q.
double scaled_position_per_normalized(const DerivedParams& d, double omega);

/// hbar (kappa_c^2 + omega^2) / (2 m (eps beta)^2 gamma nu chi^2 alpha^2).
/// Applied to the raw (unnormalized) phase-modulation spectrum it yields the
/// position spectral density in m^2 s.
double position_scaling(const DerivedParams& d, double omega);

/// Each component is position_per_normalized(omega) * term(omega) / tau_m.
ErrorBudget error_from_spectrum(const DerivedParams& d, const NoiseModel& noise,
                                const DetectionScheme& scheme, ThermalModel thermal, double omega,
                                double tau_m);

double measurement_omega(const DerivedParams& d, MeasurementPoint at);

/// Experimentalist closed forms, valid for mu = gamma and gamma >> nu >> Gamma.
/// Throws std::domain_error when the cavity is not impedance matched.
ErrorBudget closed_form_budget(const DerivedParams& d, MeasurementPoint at, double tau_m);

/// Temperature minimizing the closed-form thermal error (its two terms equal).
double thermal_optimum_temperature(const DerivedParams& d, MeasurementPoint at);

/// Closed-form thermal error as a function of temperature, other params fixed.
double closed_form_thermal(const DerivedParams& d, MeasurementPoint at, double temperature, double tau_m);

struct SweepRow {
  double power = 0.0;
  MeasurementPoint at = MeasurementPoint::Dc;
  ErrorBudget budget;
};

/// Error budgets across laser powers, one DC and one resonance row per power.
std::vector<SweepRow> power_sweep(const PhysicalParams& base, std::span<const double> powers, double tau_m,
                                  BudgetMethod method, std::span<const MeasurementPoint> points);

std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Power at which the shot error equals the back-action error (single root,
/// since their product is power independent).
double shot_backaction_crossing(const PhysicalParams& base, MeasurementPoint at, double tau_m,
                                BudgetMethod method);

/// Fig-2 style table. Column set is pinned by budget_csv_header().
std::string budget_csv_header();
std::string budget_csv(std::span<const SweepRow> rows);

}  // namespace cavnoise
