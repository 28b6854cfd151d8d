#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "cavnoise/dynamics.hpp"

using namespace cavnoise;

namespace {

LinearRates random_rates(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto logu = [&](double lo, double hi) { return std::pow(10.0, lo + (hi - lo) * u(rng)); };
  LinearRates r{};
  r.gamma = logu(2.0, 7.0);
  r.mu = u(rng) < 0.2 ? 0.0 : logu(2.0, 7.0);
  r.nu = logu(1.0, 6.0);
  r.damping = r.nu / logu(0.5, 7.0);
  r.coupling = u(rng) < 0.1 ? 0.0 : logu(-2.0, 5.0);
  return r;
}

double max_rel_entry_error(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  const double scale = b.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double ref = std::abs(b(i, j));
      const double err = std::abs(a(i, j) - b(i, j));
      // Relative per entry; entries that vanish analytically are held to the matrix scale.
      worst = std::max(worst, ref > 1e-14 * scale ? err / ref : err / scale);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("drift matrix pattern") {
  const LinearRates r{3.0, 5.0, 7.0, 0.1, 2.0};
  const Eigen::Matrix4d a = drift_matrix(r).a;
  Eigen::Matrix4d expected;
  expected << -4.0, 0, 0, 0,
              0, -4.0, 2.0, 0,
              0, 0, 0, 7.0,
              2.0, 0, -7.0, -0.1;
  CHECK(a == expected);
}

TEST_CASE("reference drift: A11 = -gamma when impedance matched") {
  const DerivedParams d = derive(reference_parameters());
  CHECK(drift_matrix(d).a(kX, kX) == -4.7e5);
  CHECK(drift_matrix(d).a(kP, kQ) == -d.nu);
}

TEST_CASE("decoupled limit is block diagonal") {
  const Eigen::Matrix4d a = drift_matrix(LinearRates{1.0, 2.0, 3.0, 0.5, 0.0}).a;
  CHECK(a.block<2, 2>(0, 2).isZero());
  CHECK(a.block<2, 2>(2, 0).isZero());
}

TEST_CASE("closed form at omega = 0") {
  const LinearRates r{4.0, 2.0, 5.0, 0.3, 1.7};
  const TransferMatrix m = transfer_closed_form(r, 0.0);
  CHECK(m.m(kQ, kQ).real() == doctest::Approx(r.damping / (r.nu * r.nu)));
  CHECK(std::abs(m.m(kP, kP)) == 0.0);
  CHECK(m.denominator.real() == doctest::Approx(r.kappa_c() * r.kappa_c() * r.nu * r.nu));
}

TEST_CASE("numeric optical block in the decoupled limit") {
  const LinearRates r{4.0, 2.0, 5.0, 0.3, 0.0};
  const TransferMatrix m = transfer_numeric(r, 0.0);
  CHECK(m.m(kX, kX).real() == doctest::Approx(2.0 / (r.gamma + r.mu)));
}

TEST_CASE("property: closed form equals the numeric resolvent") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const LinearRates r = random_rates(rng);
    std::uniform_real_distribution<double> lw(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
      const double pick = std::pow(10.0, lw(rng));
      const double w = (k % 2 ? -1.0 : 1.0) * pick * (k % 3 == 0 ? r.nu : (k % 3 == 1 ? r.kappa_c() : r.damping));
      worst = std::max(worst, max_rel_entry_error(transfer_closed_form(r, w).m, transfer_numeric(r, w).m));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("closed form is a right inverse of (-i w I - A)") {
  std::mt19937_64 rng(99);
  for (int draw = 0; draw < 50; ++draw) {
    const LinearRates r = random_rates(rng);
    for (double w : {0.0, r.damping, r.nu, -r.nu, r.kappa_c(), 10.0 * r.kappa_c()}) {
      const Eigen::Matrix4cd lhs =
          -Complex(0.0, 1.0) * w * Eigen::Matrix4cd::Identity() - drift_matrix(r).a.cast<Complex>();
      const Eigen::Matrix4cd prod = lhs * transfer_closed_form(r, w).m;
      // Scale the residual by the conditioning of the product.
      const double scale = lhs.cwiseAbs().maxCoeff() * transfer_closed_form(r, w).m.cwiseAbs().maxCoeff();
      CHECK((prod - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("reference grid: closed form vs numeric on [1e-2 Gamma, 1e2 gamma]") {
  const DerivedParams d = derive(reference_parameters());
  const double lo = std::log(1e-2 * d.damping), hi = std::log(1e2 * d.gamma);
  for (int k = 0; k < 100; ++k) {
    const double w = std::exp(lo + (hi - lo) * k / 99.0);
    CHECK(max_rel_entry_error(transfer_closed_form(d, w).m, transfer_numeric(d, w).m) < 1e-10);
  }
}

TEST_CASE("reality: M(-w) = conj M(w) on both paths") {
  std::mt19937_64 rng(5);
  for (int draw = 0; draw < 50; ++draw) {
    const LinearRates r = random_rates(rng);
    const double w = r.nu * 0.7;
    CHECK(max_rel_entry_error(transfer_closed_form(r, -w).m, transfer_closed_form(r, w).m.conjugate()) < 1e-14);
    CHECK(max_rel_entry_error(transfer_numeric(r, -w).m, transfer_numeric(r, w).m.conjugate()) < 1e-12);
  }
}

TEST_CASE("denominator norm matches |D|^2") {
  std::mt19937_64 rng(8);
  for (int draw = 0; draw < 200; ++draw) {
    const LinearRates r = random_rates(rng);
    const double w = r.nu * 1.3;
    CHECK(transfer_denominator_norm2(r, w) == doctest::Approx(std::norm(transfer_denominator(r, w))).epsilon(1e-12));
  }
}

TEST_CASE("stability: eigenvalues in the open left half plane") {
  std::mt19937_64 rng(13);
  for (int draw = 0; draw < 200; ++draw) {
    const LinearRates r = random_rates(rng);
    Eigen::EigenSolver<Eigen::Matrix4d> es(drift_matrix(r).a);
    for (int i = 0; i < 4; ++i) CHECK(es.eigenvalues()(i).real() < 0.0);
  }
}

TEST_CASE("zero coupling: mechanical entries ignore the optical rates") {
  const LinearRates a{10.0, 3.0, 5.0, 0.2, 0.0};
  const LinearRates b{1e4, 0.0, 5.0, 0.2, 0.0};
  for (double w : {0.0, 2.0, 5.0, 40.0}) {
    const auto ma = transfer_numeric(a, w).m, mb = transfer_numeric(b, w).m;
    CHECK(std::abs(ma(kQ, kQ) - mb(kQ, kQ)) < 1e-14 * std::abs(ma(kQ, kQ)) + 1e-300);
    CHECK(std::abs(ma(kP, kQ) - mb(kP, kQ)) < 1e-14 * std::abs(ma(kP, kQ)) + 1e-300);
    CHECK(std::abs(ma(kQ, kP) - mb(kQ, kP)) < 1e-14 * std::abs(ma(kQ, kP)) + 1e-300);
  }
}
