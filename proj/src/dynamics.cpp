#include "cavnoise/dynamics.hpp"

#include <cassert>
#include <stdexcept>

namespace cavnoise {

namespace {
constexpr Complex kI{0.0, 1.0};
}

LinearRates LinearRates::from(const DerivedParams& d) {
  return {d.gamma, d.mu, d.nu, d.damping, d.coupling()};
}

DriftMatrix drift_matrix(const LinearRates& r) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  const double k = r.kappa_c();
  a(kX, kX) = -k;
  a(kY, kY) = -k;
  a(kY, kQ) = r.coupling;
  a(kQ, kP) = r.nu;
  a(kP, kX) = r.coupling;
  a(kP, kQ) = -r.nu;
  a(kP, kP) = -r.damping;
  return {a};
}

DriftMatrix drift_matrix(const DerivedParams& d) { return drift_matrix(LinearRates::from(d)); }

Complex transfer_denominator(const LinearRates& r, double omega) {
  const Complex cav = r.kappa_c() - kI * omega;
  const Complex mech = r.nu * r.nu - omega * omega - kI * r.damping * omega;
  return cav * cav * mech;
}

double transfer_denominator_norm2(const LinearRates& r, double omega) {
  const double w2 = omega * omega;
  const double k = r.kappa_c();
  const double cav = k * k + w2;
  const double detune = r.nu * r.nu - w2;
  return cav * cav * (detune * detune + r.damping * r.damping * w2);
}

TransferMatrix transfer_closed_form(const LinearRates& r, double omega) {
  const Complex cav = r.kappa_c() - kI * omega;
  const Complex mech = r.nu * r.nu - omega * omega - kI * r.damping * omega;
  const Complex denom = cav * cav * mech;
  // Poles sit at -kappa_c and in the lower half plane of the mechanical
  // factor; neither reaches the real axis for positive damping.
  assert(std::abs(denom) > 0.0);
  if (denom == Complex{0.0, 0.0}) throw std::logic_error("transfer_closed_form: D(omega) = 0");

  const double ca = r.coupling;
  const Complex damp = r.damping - kI * omega;

  Eigen::Matrix4cd num = Eigen::Matrix4cd::Zero();
  num(kX, kX) = cav * mech;
  num(kY, kY) = cav * mech;
  num(kY, kX) = ca * ca * r.nu;
  num(kY, kQ) = ca * damp * cav;
  num(kY, kP) = ca * r.nu * cav;
  num(kQ, kX) = ca * r.nu * cav;
  num(kQ, kQ) = damp * cav * cav;
  num(kQ, kP) = r.nu * cav * cav;
  num(kP, kQ) = -r.nu * cav * cav;
  num(kP, kX) = -kI * ca * omega * cav;
  num(kP, kP) = -kI * omega * cav * cav;

  return {omega, num / denom, denom};
}

TransferMatrix transfer_closed_form(const DerivedParams& d, double omega) {
  return transfer_closed_form(LinearRates::from(d), omega);
}

TransferMatrix transfer_numeric(const LinearRates& r, double omega) {
  const Eigen::Matrix4cd a = drift_matrix(r).a.cast<Complex>();
  const Eigen::Matrix4cd lhs = -kI * omega * Eigen::Matrix4cd::Identity() - a;
  // Rates can span ten decades, so rank thresholds are meaningless here;
  // a genuinely singular matrix shows up as a non-finite inverse.
  const Eigen::Matrix4cd inv = Eigen::FullPivLU<Eigen::Matrix4cd>(lhs).inverse();
  if (!inv.allFinite()) throw std::logic_error("transfer_numeric: singular resolvent");
  return {omega, inv, transfer_denominator(r, omega)};
}

TransferMatrix transfer_numeric(const DerivedParams& d, double omega) {
  return transfer_numeric(LinearRates::from(d), omega);
}

}  // namespace cavnoise
