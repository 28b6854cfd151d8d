#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cavnoise {

// Classical laser noise as symmetrized two-sided spectral densities,
// dimensionless per unit of the input quadrature, functions of |omega|.

struct ZeroNoise {};

struct WhiteNoise {
  double level;
};

/// level * wc^2 / (wc^2 + omega^2); an Ornstein-Uhlenbeck spectrum.
struct LorentzianNoise {
  double level;
  double corner;
};

/// floor + level * min(1, corner / |omega|): flat below the corner, 1/f above.
struct OneOverFNoise {
  double level;
  double corner;
  double floor;
};

/// Samples on ascending omega > 0, linearly interpolated in log(omega) and
/// clamped to the end values outside the table.
struct TabulatedNoise {
  std::shared_ptr<const std::vector<double>> omega;
  std::shared_ptr<const std::vector<double>> value;
};

using NoiseShape = std::variant<ZeroNoise, WhiteNoise, LorentzianNoise, OneOverFNoise, TabulatedNoise>;

double density(const NoiseShape& shape, double omega);

/// Throws std::invalid_argument on negative levels or non-positive corners.
void check_shape(const NoiseShape& shape);

std::string describe(const NoiseShape& shape);

struct NoiseModel {
  NoiseShape amplitude = ZeroNoise{};  // G_x
  NoiseShape phase = ZeroNoise{};      // G_y

  [[nodiscard]] double amplitude_density(double omega) const { return density(amplitude, omega); }
  [[nodiscard]] double phase_density(double omega) const { return density(phase, omega); }
};

/// Parses `zero`, `white:L`, `lorentzian:L:WC` or `one_over_f:L:WC:FLOOR`.
NoiseShape parse_shape(std::string_view spec);

/// Reads the whitespace-separated table `omega Gx [Gy]`, `#` comments.
/// A two-column file leaves the phase noise at zero.
NoiseModel load_noise_table(const std::filesystem::path& path);
NoiseModel parse_noise_table(std::string_view text);

/// CLI form: a shape spec applied to both quadratures, or a table file.
NoiseModel parse_noise_argument(std::string_view arg);

}  // namespace cavnoise
