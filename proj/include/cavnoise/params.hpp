#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cavnoise {

/// Lab-facing inputs, strict SI with angular frequencies in rad/s.
///
/// Required scalars left at 0 count as missing. Each alternate pair must
/// have exactly one member set: (omega0, wavelength), (mirror_q,
/// mirror_damping) and (input_decay, finesse).
struct PhysicalParams {
  double laser_power = 0.0;                  // W
  std::optional<double> laser_omega;         // rad/s
  std::optional<double> wavelength;          // m, converted via 2 pi c / lambda
  double cavity_length = 0.0;                // m
  double mirror_mass = 0.0;                  // kg
  double mirror_omega = 0.0;                 // rad/s
  std::optional<double> mirror_q;            // dimensionless
  std::optional<double> mirror_damping;      // 1/s
  double temperature = 0.0;                  // K
  std::optional<double> input_decay;         // gamma, 1/s
  std::optional<double> finesse;             // dimensionless
  double internal_loss = 0.0;                // mu, 1/s
  double modulation_index = 0.0;             // epsilon
  double measurement_time = 0.0;             // s
};

/// Everything the noise model needs, resolved to one consistent set.
struct DerivedParams {
  // Resolved inputs.
  double power;          // P [W]
  double omega0;         // laser angular frequency [rad/s]
  double length;         // L [m]
  double mass;           // m [kg]
  double nu;             // mirror angular frequency [rad/s]
  double q_factor;       // Q = nu / Gamma
  double damping;        // Gamma [1/s]
  double temperature;    // T [K]
  double gamma;          // input coupler decay [1/s]
  double mu;             // internal loss decay [1/s]
  double epsilon;        // modulation index
  double tau_m;          // measurement time [s]
  double finesse;        // pi c / (2 L gamma)

  // Steady state and couplings.
  double g;              // omega0 / L [rad/(s m)]
  double chi;            // g sqrt(2 hbar / (m nu)) [1/s]
  double drive;          // E = sqrt(P gamma / (hbar omega0)) [1/s]
  double beta;           // input amplitude, beta^2 = photon flux [s^-1/2]
  double alpha;          // intracavity amplitude 2E / (gamma + mu)
  double q_ss;           // steady displacement hbar g alpha^2 / (m nu^2) [m]
  double p_ss;           // always 0
  double detuning;       // g q_ss, compensates the static shift [rad/s]
  double scaled_temperature;  // T_s = k_B T / (hbar nu)
  double kappa_c;        // (gamma + mu) / 2 [1/s]

  /// chi * alpha, the optomechanical rate entering the drift matrix.
  [[nodiscard]] double coupling() const { return chi * alpha; }
};

struct Violation {
  std::string field;
  std::string rule;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  [[nodiscard]] const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Lists every rule `p` breaks. Empty iff derive(p) succeeds.
std::vector<Violation> validate(const PhysicalParams& p);

/// Throws ValidationError carrying the full violation list.
DerivedParams derive(const PhysicalParams& p);

double damping_from_q(double nu, double q);
double q_from_damping(double nu, double damping);
double finesse_from_decay(double length, double gamma);
double decay_from_finesse(double length, double finesse);
double omega_from_wavelength(double wavelength);

/// Parameter set quoted for the Nd:YAG / 1 cm cavity experiment, impedance
/// matched, tau_m = 300 s. The modulation index is not quoted; 0.1 is used.
PhysicalParams reference_parameters();

/// Small-scale set used by the time-domain oracle: gamma/nu = 50, Q = 100,
/// mu = gamma, chi*alpha ~ 1.5 nu, T_s ~ 131.
PhysicalParams desk_parameters();

/// Parses the flat `key = value` parameter format (SI units, `#` comments).
/// Throws std::runtime_error on syntax errors, unknown or duplicate keys.
PhysicalParams parse_params(std::string_view text);
PhysicalParams load_params(const std::filesystem::path& path);

/// Inverse of parse_params; only keys that are set are written.
std::string format_params(const PhysicalParams& p);

}  // namespace cavnoise
