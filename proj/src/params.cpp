#include "cavnoise/params.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "cavnoise/constants.hpp"
#include "cavnoise/io.hpp"

namespace cavnoise {

namespace {

using constants::hbar;
using constants::k_boltzmann;
using constants::pi;
using constants::speed_of_light;

std::string join_violations(const std::vector<Violation>& v) {
  std::string msg = "invalid parameters:";
  for (const auto& x : v) msg += "\n  " + x.field + ": " + x.rule;
  return msg;
}

void require_positive(std::vector<Violation>& out, const char* field, double value,
                      const char* rule) {
  if (!std::isfinite(value)) {
    out.push_back({field, "must be finite"});
  } else if (value <= 0.0) {
    out.push_back({field, rule});
  }
}

void require_one_of(std::vector<Violation>& out, const char* a_name, const std::optional<double>& a,
                    const char* b_name, const std::optional<double>& b) {
  if (a.has_value() == b.has_value()) {
    out.push_back({std::string(a_name) + "|" + b_name,
                   std::string("ambiguous: supply exactly one of ") + a_name + ", " + b_name +
                       (a ? " (both given)" : " (neither given)")});
    return;
  }
  if (a) require_positive(out, a_name, *a, "must be positive");
  if (b) require_positive(out, b_name, *b, "must be positive");
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

double damping_from_q(double nu, double q) { return nu / q; }
double q_from_damping(double nu, double damping) { return nu / damping; }
double finesse_from_decay(double length, double gamma) {
  return pi * speed_of_light / (2.0 * length * gamma);
}
double decay_from_finesse(double length, double finesse) {
  return pi * speed_of_light / (2.0 * length * finesse);
}
double omega_from_wavelength(double wavelength) { return 2.0 * pi * speed_of_light / wavelength; }

std::vector<Violation> validate(const PhysicalParams& p) {
  std::vector<Violation> out;
  require_positive(out, "laser_power_W", p.laser_power, "must be positive (zero drive degenerates the linearization)");
  require_one_of(out, "omega0_rad_s", p.laser_omega, "wavelength_m", p.wavelength);
  require_positive(out, "cavity_length_m", p.cavity_length, "must be positive");
  require_positive(out, "mirror_mass_kg", p.mirror_mass, "must be positive");
  require_positive(out, "mirror_freq_rad_s", p.mirror_omega, "must be positive");
  require_one_of(out, "mirror_Q", p.mirror_q, "mirror_gamma_s", p.mirror_damping);
  require_positive(out, "temperature_K", p.temperature, "temperature must be positive");
  require_one_of(out, "gamma_s", p.input_decay, "finesse", p.finesse);
  if (!std::isfinite(p.internal_loss)) {
    out.push_back({"mu_s", "must be finite"});
  } else if (p.internal_loss < 0.0) {
    out.push_back({"mu_s", "must be non-negative"});
  }
  if (!std::isfinite(p.modulation_index) || p.modulation_index <= 0.0 ||
      p.modulation_index > 0.5) {
    out.push_back({"mod_index", "modulation index outside small-signal regime (0, 0.5]"});
  }
  require_positive(out, "measurement_time_s", p.measurement_time, "must be positive");
  return out;
}

DerivedParams derive(const PhysicalParams& p) {
  if (auto v = validate(p); !v.empty()) throw ValidationError(std::move(v));

  DerivedParams d{};
  d.power = p.laser_power;
  d.omega0 = p.laser_omega ? *p.laser_omega : omega_from_wavelength(*p.wavelength);
  d.length = p.cavity_length;
  d.mass = p.mirror_mass;
  d.nu = p.mirror_omega;
  if (p.mirror_q) {
    d.q_factor = *p.mirror_q;
    d.damping = damping_from_q(d.nu, d.q_factor);
  } else {
    d.damping = *p.mirror_damping;
    d.q_factor = q_from_damping(d.nu, d.damping);
  }
  d.temperature = p.temperature;
  if (p.input_decay) {
    d.gamma = *p.input_decay;
    d.finesse = finesse_from_decay(d.length, d.gamma);
  } else {
    d.finesse = *p.finesse;
    d.gamma = decay_from_finesse(d.length, d.finesse);
  }
  d.mu = p.internal_loss;
  d.epsilon = p.modulation_index;
  d.tau_m = p.measurement_time;

  d.kappa_c = 0.5 * (d.gamma + d.mu);
  d.g = d.omega0 / d.length;
  d.chi = d.g * std::sqrt(2.0 * hbar / (d.mass * d.nu));
  d.beta = std::sqrt(d.power / (hbar * d.omega0));
  d.drive = std::sqrt(d.gamma) * d.beta;
  d.alpha = 2.0 * d.drive / (d.gamma + d.mu);
  d.q_ss = hbar * d.g / (d.mass * d.nu * d.nu) * d.alpha * d.alpha;
  d.p_ss = 0.0;
  d.detuning = d.g * d.q_ss;
  d.scaled_temperature = k_boltzmann * d.temperature / (hbar * d.nu);
  return d;
}

PhysicalParams reference_parameters() {
  PhysicalParams p;
  p.laser_power = 1e-3;
  p.laser_omega = 2.0 * pi * 2.82e14;
  p.cavity_length = 1e-2;
  p.mirror_mass = 1e-5;
  p.mirror_omega = 2.0 * pi * 2e4;
  p.mirror_q = 4e6;
  p.temperature = 4.2;
  p.input_decay = 4.7e5;
  p.internal_loss = 4.7e5;
  p.modulation_index = 0.1;
  p.measurement_time = 300.0;
  return p;
}

PhysicalParams desk_parameters() {
  PhysicalParams p;
  p.laser_power = 3e-11;
  p.wavelength = 1064e-9;
  p.cavity_length = 1e-2;
  p.mirror_mass = 1e-5;
  p.mirror_omega = 1e3;
  p.mirror_q = 100.0;
  p.temperature = 1e-6;
  p.input_decay = 5e4;
  p.internal_loss = 5e4;
  p.modulation_index = 0.1;
  p.measurement_time = 300.0;
  return p;
}

namespace {

enum class Key {
  Power, Wavelength, Omega0, Length, Mass, MirrorFreq, MirrorQ, MirrorGamma,
  Temperature, Gamma, Finesse, Mu, ModIndex, TauM
};

const std::map<std::string, Key, std::less<>>& key_table() {
  static const std::map<std::string, Key, std::less<>> table = {
      {"laser_power_W", Key::Power},         {"wavelength_m", Key::Wavelength},
      {"omega0_rad_s", Key::Omega0},         {"cavity_length_m", Key::Length},
      {"mirror_mass_kg", Key::Mass},         {"mirror_freq_rad_s", Key::MirrorFreq},
      {"mirror_Q", Key::MirrorQ},            {"mirror_gamma_s", Key::MirrorGamma},
      {"temperature_K", Key::Temperature},   {"gamma_s", Key::Gamma},
      {"finesse", Key::Finesse},             {"mu_s", Key::Mu},
      {"mod_index", Key::ModIndex},          {"measurement_time_s", Key::TauM},
  };
  return table;
}

}  // namespace

PhysicalParams parse_params(std::string_view text) {
  PhysicalParams p;
  std::map<std::string, int, std::less<>> seen;
  for (const auto& kv : io::parse_key_values(text)) {
    const auto it = key_table().find(kv.key);
    if (it == key_table().end()) {
      throw std::runtime_error("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    }
    if (!seen.emplace(kv.key, kv.line).second) {
      throw std::runtime_error("line " + std::to_string(kv.line) + ": duplicate key '" + kv.key + "'");
    }
    const double v = io::parse_double(kv.value, kv.key);
    switch (it->second) {
      case Key::Power: p.laser_power = v; break;
      case Key::Wavelength: p.wavelength = v; break;
      case Key::Omega0: p.laser_omega = v; break;
      case Key::Length: p.cavity_length = v; break;
      case Key::Mass: p.mirror_mass = v; break;
      case Key::MirrorFreq: p.mirror_omega = v; break;
      case Key::MirrorQ: p.mirror_q = v; break;
      case Key::MirrorGamma: p.mirror_damping = v; break;
      case Key::Temperature: p.temperature = v; break;
      case Key::Gamma: p.input_decay = v; break;
      case Key::Finesse: p.finesse = v; break;
      case Key::Mu: p.internal_loss = v; break;
      case Key::ModIndex: p.modulation_index = v; break;
      case Key::TauM: p.measurement_time = v; break;
    }
  }
  return p;
}

PhysicalParams load_params(const std::filesystem::path& path) {
  return parse_params(io::read_text(path));
}

std::string format_params(const PhysicalParams& p) {
  std::ostringstream out;
  auto line = [&](const char* key, double v) { out << key << " = " << io::format_double(v) << '\n'; };
  line("laser_power_W", p.laser_power);
  if (p.laser_omega) line("omega0_rad_s", *p.laser_omega);
  if (p.wavelength) line("wavelength_m", *p.wavelength);
  line("cavity_length_m", p.cavity_length);
  line("mirror_mass_kg", p.mirror_mass);
  line("mirror_freq_rad_s", p.mirror_omega);
  if (p.mirror_q) line("mirror_Q", *p.mirror_q);
  if (p.mirror_damping) line("mirror_gamma_s", *p.mirror_damping);
  line("temperature_K", p.temperature);
  if (p.input_decay) line("gamma_s", *p.input_decay);
  if (p.finesse) line("finesse", *p.finesse);
  line("mu_s", p.internal_loss);
  line("mod_index", p.modulation_index);
  line("measurement_time_s", p.measurement_time);
  return out.str();
}

}  // namespace cavnoise
