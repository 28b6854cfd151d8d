#pragma once

#include <complex>

#include <Eigen/Dense>

#include "cavnoise/params.hpp"

namespace cavnoise {

using Complex = std::complex<double>;

// State ordering shared by every module: amplitude quadrature, phase
// quadrature, scaled position, scaled momentum.
enum StateIndex : int { kX = 0, kY = 1, kQ = 2, kP = 3 };

/// Real 4x4 drift of the linearized fluctuations, entries in 1/s.
struct DriftMatrix {
  Eigen::Matrix4d a;
};

/// Resolvent at one angular frequency, together with its common denominator
/// D(omega) = (kappa_c - i omega)^2 (nu^2 - omega^2 - i Gamma omega).
struct TransferMatrix {
  double omega = 0.0;
  Eigen::Matrix4cd m;
  Complex denominator;
};

/// Rates the linear system depends on. Kept separate from DerivedParams so
/// property tests can sweep them directly.
struct LinearRates {
  double gamma;     // input coupler decay
  double mu;        // internal loss
  double nu;        // mirror angular frequency
  double damping;   // Gamma
  double coupling;  // chi * alpha

  [[nodiscard]] double kappa_c() const { return 0.5 * (gamma + mu); }
  static LinearRates from(const DerivedParams& d);
};

DriftMatrix drift_matrix(const LinearRates& r);
DriftMatrix drift_matrix(const DerivedParams& d);

/// D(omega) as a product of the cavity and mechanical factors.
Complex transfer_denominator(const LinearRates& r, double omega);

/// |D(omega)|^2 evaluated from even-in-omega factors only.
double transfer_denominator_norm2(const LinearRates& r, double omega);

/// Resolvent assembled entry-by-entry from the eight nonzero numerators.
TransferMatrix transfer_closed_form(const LinearRates& r, double omega);
TransferMatrix transfer_closed_form(const DerivedParams& d, double omega);

/// (-i omega I - A)^{-1} by LU factorization, e^{+i omega t} transform
/// convention. `denominator` is filled for comparison only.
TransferMatrix transfer_numeric(const LinearRates& r, double omega);
TransferMatrix transfer_numeric(const DerivedParams& d, double omega);

}  // namespace cavnoise
