#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "cavnoise/constants.hpp"
#include "cavnoise/params.hpp"

using namespace cavnoise;

namespace {

bool has_violation(const std::vector<Violation>& v, const std::string& field, const std::string& fragment = "") {
  for (const auto& x : v) {
    if (x.field == field && x.rule.find(fragment) != std::string::npos) return true;
  }
  return false;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("reference set: damping and scaled temperature") {
  const DerivedParams d = derive(reference_parameters());
  CHECK(rel(d.damping, 3e-2) < 0.05);
  CHECK(rel(d.scaled_temperature, 4.37e6) < 0.01);
  CHECK(validate(reference_parameters()).empty());
}

TEST_CASE("finesse regression at L = 1 cm, gamma = 4.7e5") {
  const DerivedParams d = derive(reference_parameters());
  const double expected = 3.141592653589793 * 299792458.0 / (2.0 * 0.01 * 4.7e5);
  CHECK(rel(d.finesse, expected) < 1e-15);
  CHECK(rel(d.finesse, 100194.2323036624) < 1e-12);
}

TEST_CASE("chi follows its definition, not the quoted 2.29e-4") {
  const DerivedParams d = derive(reference_parameters());
  // g sqrt(2 hbar / (m nu)) with omega0 = 2 pi 2.82e14, L = 1 cm, m = 10 mg.
  CHECK(rel(d.chi, 2.29549907925431) < 1e-10);
}

TEST_CASE("derived relations hold") {
  const DerivedParams d = derive(reference_parameters());
  const double hbar = 1.054571817e-34;
  CHECK(d.g == doctest::Approx(d.omega0 / d.length).epsilon(1e-15));
  CHECK(rel(d.chi, d.g * std::sqrt(2.0 * hbar / (d.mass * d.nu))) < 1e-14);
  CHECK(rel(d.drive, std::sqrt(d.power * d.gamma / (hbar * d.omega0))) < 1e-14);
  CHECK(rel(d.drive, std::sqrt(d.gamma) * d.beta) < 1e-14);
  CHECK(rel(d.alpha, 2.0 * d.drive / (d.gamma + d.mu)) < 1e-14);
  CHECK(rel(d.q_ss, hbar * d.g / (d.mass * d.nu * d.nu) * d.alpha * d.alpha) < 1e-14);
  CHECK(d.p_ss == 0.0);
  CHECK(rel(d.detuning, d.g * d.q_ss) < 1e-14);
  CHECK(rel(d.kappa_c, 0.5 * (d.gamma + d.mu)) < 1e-15);
}

TEST_CASE("derive is deterministic") {
  const DerivedParams a = derive(reference_parameters());
  const DerivedParams b = derive(reference_parameters());
  CHECK(std::memcmp(&a, &b, sizeof(DerivedParams)) == 0);
}

TEST_CASE("validation rules") {
  PhysicalParams p = reference_parameters();

  SUBCASE("zero power") {
    p.laser_power = 0.0;
    CHECK(has_violation(validate(p), "laser_power_W"));
    CHECK_THROWS_AS(derive(p), ValidationError);
  }
  SUBCASE("zero temperature") {
    p.temperature = 0.0;
    CHECK(has_violation(validate(p), "temperature_K", "temperature must be positive"));
  }
  SUBCASE("large modulation index") {
    p.modulation_index = 0.9;
    CHECK(has_violation(validate(p), "mod_index", "modulation index outside small-signal regime"));
  }
  SUBCASE("modulation index at the bound is accepted") {
    p.modulation_index = 0.5;
    CHECK(validate(p).empty());
  }
  SUBCASE("both Q and damping") {
    p.mirror_damping = 0.03;
    const auto v = validate(p);
    CHECK(has_violation(v, "mirror_Q|mirror_gamma_s", "ambiguous"));
  }
  SUBCASE("neither Q nor damping") {
    p.mirror_q.reset();
    const auto v = validate(p);
    CHECK(has_violation(v, "mirror_Q|mirror_gamma_s", "ambiguous"));
    CHECK(has_violation(v, "mirror_Q|mirror_gamma_s", "neither"));
  }
  SUBCASE("both gamma and finesse") {
    p.finesse = 1e5;
    CHECK(!validate(p).empty());
  }
  SUBCASE("both wavelength and omega0") {
    p.wavelength = 1064e-9;
    CHECK(!validate(p).empty());
  }
  SUBCASE("negative internal loss") {
    p.internal_loss = -1.0;
    CHECK(has_violation(validate(p), "mu_s"));
  }
  SUBCASE("zero internal loss is allowed") {
    p.internal_loss = 0.0;
    CHECK(validate(p).empty());
  }
  SUBCASE("every violation is reported") {
    p.laser_power = -1.0;
    p.mirror_mass = 0.0;
    p.temperature = 0.0;
    const auto v = validate(p);
    CHECK(v.size() == 3);
    try {
      derive(p);
      FAIL("derive accepted invalid input");
    } catch (const ValidationError& e) {
      CHECK(e.violations().size() == 3);
    }
  }
}

TEST_CASE("wavelength input converts through 2 pi c / lambda") {
  PhysicalParams p = reference_parameters();
  p.laser_omega.reset();
  p.wavelength = 1064e-9;
  const DerivedParams d = derive(p);
  CHECK(rel(d.omega0, 2.0 * 3.141592653589793 * 299792458.0 / 1064e-9) < 1e-15);
}

TEST_CASE("finesse input gives back gamma") {
  PhysicalParams p = reference_parameters();
  p.input_decay.reset();
  p.finesse = 100194.2323036624;
  const DerivedParams d = derive(p);
  CHECK(rel(d.gamma, 4.7e5) < 1e-12);
}

TEST_CASE("property: Q <-> Gamma and gamma <-> finesse round trips") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-6.0, 8.0);
  for (int i = 0; i < 1000; ++i) {
    const double nu = std::pow(10.0, u(rng));
    const double q = std::pow(10.0, u(rng));
    CHECK(rel(q_from_damping(nu, damping_from_q(nu, q)), q) < 4e-16);
    const double length = std::pow(10.0, u(rng) / 4.0 - 2.0);
    const double gamma = std::pow(10.0, u(rng));
    CHECK(rel(decay_from_finesse(length, finesse_from_decay(length, gamma)), gamma) < 4e-16);
  }
}

TEST_CASE("property: power scaling of alpha, chi and q_ss") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-9.0, 0.0);
  for (int i = 0; i < 200; ++i) {
    PhysicalParams p = reference_parameters();
    p.laser_power = std::pow(10.0, u(rng));
    const DerivedParams a = derive(p);
    p.laser_power *= 4.0;
    const DerivedParams b = derive(p);
    CHECK(rel(b.alpha, 2.0 * a.alpha) < 1e-14);
    CHECK(b.chi == a.chi);
    CHECK(rel(b.q_ss, 4.0 * a.q_ss) < 1e-14);
  }
}

TEST_CASE("parameter file round trip") {
  const PhysicalParams p = reference_parameters();
  const PhysicalParams q = parse_params(format_params(p));
  const DerivedParams a = derive(p), b = derive(q);
  CHECK(a.gamma == b.gamma);
  CHECK(a.omega0 == b.omega0);
  CHECK(a.damping == b.damping);
  CHECK(a.scaled_temperature == b.scaled_temperature);
}

TEST_CASE("parameter file errors") {
  CHECK_THROWS_WITH_AS(parse_params("laser_power_W = 1\nbogus = 2\n"), doctest::Contains("unknown key"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_params("laser_power_W = 1\nlaser_power_W = 2\n"), doctest::Contains("duplicate"),
                       std::runtime_error);
  CHECK_THROWS_AS(parse_params("laser_power_W = abc\n"), std::runtime_error);
  const PhysicalParams p = parse_params("# comment\n\nlaser_power_W = 2.5e-3  # trailing\n");
  CHECK(p.laser_power == 2.5e-3);
}

TEST_CASE("desk set hits its design ratios") {
  const DerivedParams d = derive(desk_parameters());
  CHECK(d.gamma / d.nu == doctest::Approx(50.0));
  CHECK(d.q_factor == doctest::Approx(100.0));
  CHECK(d.mu == d.gamma);
  CHECK(d.scaled_temperature > 100.0);
  CHECK(d.coupling() / d.nu == doctest::Approx(1.5).epsilon(0.1));
}
