#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cavnoise/noise_model.hpp"
#include "cavnoise/params.hpp"
#include "cavnoise/welch.hpp"

namespace cavnoise {

// Time-domain oracle for the linearized system. Operator-valued inputs are
// replaced by independent real white noises carrying their symmetrized
// correlations. The antisymmetric (imaginary) cross-correlations between
// xi and eta, and between the amplitude and phase vacuum quadratures,
// symmetrize to zero and are not generated, so the simulated spectra are the
// even part of the quantum spectra. That is the corrected-model spectrum; the
// odd standard-model term has no counterpart here.

enum class Source : int {
  XIn,         // input vacuum, amplitude quadrature
  YIn,         // input vacuum, phase quadrature
  XbIn,        // internal-loss vacuum, amplitude quadrature
  YbIn,        // internal-loss vacuum, phase quadrature
  Eta,         // position noise of the corrected Brownian motion model
  Xi,          // momentum (thermal force) noise
  ClassicalX,  // laser amplitude noise
  ClassicalY,  // laser phase noise
  Q1,          // demodulation pickup at Delta
  Q2,          // demodulation pickup at 2 Delta
};
inline constexpr std::size_t kSourceCount = 10;

std::string_view source_name(Source s);
std::optional<Source> source_from_name(std::string_view name);

struct SourceSwitches {
  std::array<bool, kSourceCount> on{};

  [[nodiscard]] bool operator[](Source s) const { return on[static_cast<std::size_t>(s)]; }
  void set(Source s, bool value) { on[static_cast<std::size_t>(s)] = value; }
  [[nodiscard]] bool any() const;

  static SourceSwitches none();
  /// Every quantum vacuum input plus the demodulation channels.
  static SourceSwitches vacuum();
  static SourceSwitches thermal();
  static SourceSwitches all();
};

enum class Readout { PhaseModulation, Homodyne };

/// Recorded channels, each the average over one sample interval.
enum class Channel : int {
  OutputPhase,  // delta Y_out = sqrt(gamma) delta Y - delta Y_in
  Signal,       // readout signal normalized by its gain
  Position,     // delta Q
};

struct SimConfig {
  double dt = 0.0;               // s, spectral runs need dt < 0.1 / kappa_c
  double duration = 0.0;         // s, stored trace length for integrate()
  double burn_in = -1.0;         // s, negative selects 10 / Gamma
  std::uint64_t seed = 1;
  std::size_t segment_length = 0;  // Welch samples per segment (even)
  std::size_t n_segments = 0;      // total Welch segments, >= 16
  std::size_t n_trajectories = 1;  // independent runs sharing the segments
  SourceSwitches sources = SourceSwitches::vacuum();
  NoiseShape classical_x = ZeroNoise{};
  NoiseShape classical_y = ZeroNoise{};
  Readout readout = Readout::PhaseModulation;
  std::optional<std::array<double, 4>> initial_state;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure during integration (non-finite state).
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double effective_burn_in(const DerivedParams& d, const SimConfig& cfg);

/// Throws ConfigError. `for_psd` additionally checks the Welch geometry.
void check_config(const DerivedParams& d, const SimConfig& cfg, bool for_psd);

/// Seed of the independent stream `stream` derived from `master` (SplitMix64).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream);

using Engine = std::mt19937_64;

/// Exact one-step discretization of dz = Z z dt + B dW over a fixed step,
/// where the trailing `integrators` rows of z are reset to zero at the
/// start of every step (they accumulate integrals of the leading states).
class ExactDiscretization {
 public:
  ExactDiscretization(const Eigen::MatrixXd& drift, const Eigen::MatrixXd& noise, double dt,
                      std::size_t integrators);

  /// exp(Z dt), restricted to the persistent-state columns.
  [[nodiscard]] const Eigen::MatrixXd& transition() const { return transition_; }
  /// Full exp(Z dt).
  [[nodiscard]] const Eigen::MatrixXd& transition_full() const { return transition_full_; }
  /// Integral of exp(Zs) B B^T exp(Z^T s) over [0, dt].
  [[nodiscard]] const Eigen::MatrixXd& covariance() const { return covariance_; }
  /// G with G G^T = covariance.
  [[nodiscard]] const Eigen::MatrixXd& noise_factor() const { return factor_; }
  [[nodiscard]] std::size_t states() const { return static_cast<std::size_t>(transition_.cols()); }
  [[nodiscard]] std::size_t dimension() const { return static_cast<std::size_t>(transition_.rows()); }
  [[nodiscard]] double dt() const { return dt_; }

 private:
  double dt_;
  Eigen::MatrixXd transition_full_;
  Eigen::MatrixXd transition_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd factor_;
};

/// The optomechanical system (plus Ornstein-Uhlenbeck states for Lorentzian
/// classical noise) with the selected output channels, stepped exactly.
class ExactStepper {
 public:
  ExactStepper(const DerivedParams& d, const SimConfig& cfg, std::vector<Channel> channels);

  void step(Engine& rng);
  /// Noise-free step (used for the decay and exactness checks).
  void step_deterministic();

  /// (delta X, delta Y, delta Q, delta P).
  [[nodiscard]] std::array<double, 4> state() const;
  void set_state(const std::array<double, 4>& s);
  /// Average of channel `i` over the last step.
  [[nodiscard]] double output(std::size_t i) const { return z_(static_cast<Eigen::Index>(n_state_ + i)) / dt_; }
  [[nodiscard]] bool finite() const { return z_.allFinite(); }

  [[nodiscard]] const ExactDiscretization& discretization() const { return disc_; }
  [[nodiscard]] const Eigen::MatrixXd& drift() const { return drift_; }
  [[nodiscard]] const Eigen::MatrixXd& input() const { return input_; }
  [[nodiscard]] std::size_t persistent_states() const { return n_state_; }
  [[nodiscard]] const std::vector<Channel>& channels() const { return channels_; }

 private:
  static ExactDiscretization build(const DerivedParams& d, const SimConfig& cfg,
                                   const std::vector<Channel>& channels, Eigen::MatrixXd& drift,
                                   Eigen::MatrixXd& input, std::size_t& n_state);

  std::vector<Channel> channels_;
  Eigen::MatrixXd drift_;
  Eigen::MatrixXd input_;
  std::size_t n_state_ = 4;
  ExactDiscretization disc_;
  double dt_;
  Eigen::VectorXd s_;      // persistent state
  Eigen::VectorXd z_;      // state after the last step, including integrators
  Eigen::VectorXd zeta_;
};

/// Stored realization after burn-in. Channel samples average over
/// (t_{k-1}, t_k]; states are instantaneous values at t_k = t0 + k dt.
struct SimTrace {
  double t0 = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::array<double, 4>> states;
  std::vector<double> output_phase;
  std::vector<double> signal;
  std::vector<double> position;

  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] const std::vector<double>& channel(Channel c) const;
  [[nodiscard]] std::vector<double> state_column(int index) const;
};

/// White (unit two-sided density, variance 1/dt per sample) for quantum,
/// thermal and demodulation sources; classical sources follow their shape.
/// Length round(cfg.duration / cfg.dt); seeded per source.
std::vector<double> synthesize_noise(const SimConfig& cfg, Source source);

/// Single trajectory of cfg.duration after the burn-in, all channels stored.
SimTrace integrate(const DerivedParams& d, const SimConfig& cfg);

/// Welch estimate of a stored channel using cfg.segment_length.
PsdEstimate output_psd(const SimTrace& trace, const SimConfig& cfg, Channel channel = Channel::Signal);

/// Streams cfg.n_segments Welch segments across cfg.n_trajectories
/// independent trajectories without storing them.
PsdEstimate simulate_psd(const DerivedParams& d, const SimConfig& cfg, Channel channel);

struct StateMoments {
  Eigen::Matrix4d second_moment;  // <s s^T>
  Eigen::Vector4d mean;
  std::size_t samples = 0;
};

/// Stationary moments from `samples_per_trajectory` post-burn-in samples of
/// each trajectory. The step is exact at any dt, so the resolution limit
/// on dt applies only to spectral runs.
StateMoments simulate_moments(const DerivedParams& d, const SimConfig& cfg,
                              std::size_t samples_per_trajectory);

/// Steps a streaming PSD run takes, burn-in included.
std::size_t planned_steps(const DerivedParams& d, const SimConfig& cfg);

/// Rough wall-clock estimate for planned_steps on this machine.
double estimated_runtime_seconds(const DerivedParams& d, const SimConfig& cfg);

/// Analytic two-sided PSD of `channel` (Signal or Position) restricted to
/// the sources enabled in cfg, in the same normalized units as the
/// simulated channel. Signal terms come from the spectrum evaluator with the
/// shot floor split per source; Position uses the mechanical susceptibility.
double expected_psd(const DerivedParams& d, const SimConfig& cfg, Channel channel, double omega);

}  // namespace cavnoise
