#include "cavnoise/stochastic.hpp"

#include <boost/random/normal_distribution.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "cavnoise/dynamics.hpp"
#include "cavnoise/spectrum.hpp"

namespace cavnoise {

namespace {

constexpr std::array<std::string_view, kSourceCount> kSourceNames = {
    "x_in", "y_in", "xb_in", "yb_in", "eta", "xi", "classical_x", "classical_y", "q1", "q2"};

// Stored traces above this size are refused; streaming runs store nothing.
constexpr double kMaxTraceBytes = 4.0 * 1024 * 1024 * 1024;

std::size_t idx(Source s) { return static_cast<std::size_t>(s); }

bool simulable(const NoiseShape& shape) {
  return std::holds_alternative<ZeroNoise>(shape) || std::holds_alternative<WhiteNoise>(shape) ||
         std::holds_alternative<LorentzianNoise>(shape);
}

double direct_phase_weight(const DerivedParams& d, Readout r) {
  // sqrt(gamma) alpha / beta = 2 gamma / (gamma + mu) after normalizing by epsilon beta.
  return r == Readout::PhaseModulation ? 4.0 * d.gamma / (d.gamma + d.mu) : 2.0;
}

std::size_t steps_for(double seconds, double dt) {
  return static_cast<std::size_t>(std::llround(seconds / dt));
}

std::size_t unsigned_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::string step_diagnostic(std::size_t step, double t, const std::array<double, 4>& s) {
  std::ostringstream os;
  os << "non-finite state at step " << step << " (t = " << t << " s): dX=" << s[0] << " dY=" << s[1]
     << " dQ=" << s[2] << " dP=" << s[3];
  return os.str();
}

}  // namespace

std::string_view source_name(Source s) { return kSourceNames[idx(s)]; }

std::optional<Source> source_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSourceCount; ++i) {
    if (kSourceNames[i] == name) return static_cast<Source>(i);
  }
  return std::nullopt;
}

bool SourceSwitches::any() const {
  return std::any_of(on.begin(), on.end(), [](bool b) { return b; });
}

SourceSwitches SourceSwitches::none() { return {}; }

SourceSwitches SourceSwitches::vacuum() {
  SourceSwitches s;
  for (Source src : {Source::XIn, Source::YIn, Source::XbIn, Source::YbIn, Source::Q1, Source::Q2}) {
    s.set(src, true);
  }
  return s;
}

SourceSwitches SourceSwitches::thermal() {
  SourceSwitches s;
  s.set(Source::Xi, true);
  s.set(Source::Eta, true);
  return s;
}

SourceSwitches SourceSwitches::all() {
  SourceSwitches s;
  s.on.fill(true);
  return s;
}

double effective_burn_in(const DerivedParams& d, const SimConfig& cfg) {
  return cfg.burn_in >= 0.0 ? cfg.burn_in : 10.0 / d.damping;
}

void check_config(const DerivedParams& d, const SimConfig& cfg, bool for_psd) {
  std::vector<std::string> problems;
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) problems.emplace_back("dt must be positive");
  if (for_psd && cfg.dt > 0.0 && !(cfg.dt < 0.1 / d.kappa_c)) {
    std::ostringstream os;
    os << "dt = " << cfg.dt << " s does not resolve the cavity pole; need dt < 0.1/kappa_c = "
       << 0.1 / d.kappa_c << " s";
    problems.push_back(os.str());
  }
  if (!std::isfinite(cfg.burn_in)) problems.emplace_back("burn_in must be finite");
  if (cfg.n_trajectories == 0) problems.emplace_back("n_trajectories must be at least 1");
  if (for_psd) {
    if (cfg.segment_length < 8 || cfg.segment_length % 2 != 0) {
      problems.emplace_back("segment_length must be even and at least 8");
    }
    if (cfg.n_segments < 16) problems.emplace_back("n_segments must be at least 16");
    if (cfg.n_trajectories > cfg.n_segments) {
      problems.emplace_back("n_trajectories cannot exceed n_segments");
    }
  }
  for (auto [src, shape] : {std::pair{Source::ClassicalX, &cfg.classical_x},
                            std::pair{Source::ClassicalY, &cfg.classical_y}}) {
    if (!cfg.sources[src]) continue;
    try {
      check_shape(*shape);
    } catch (const std::exception& e) {
      problems.emplace_back(std::string(source_name(src)) + ": " + e.what());
      continue;
    }
    if (!simulable(*shape)) {
      problems.emplace_back(std::string(source_name(src)) + ": shape " + describe(*shape) +
                            " has no time-domain synthesis (use zero, white or lorentzian)");
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid simulation config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  // SplitMix64 applied to master + (stream + 1) * golden gamma.
  std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ExactDiscretization::ExactDiscretization(const Eigen::MatrixXd& drift, const Eigen::MatrixXd& noise,
                                         double dt, std::size_t integrators)
    : dt_(dt) {
  const Eigen::Index n = drift.rows();
  const Eigen::MatrixXd qc = noise * noise.transpose();

  // Van Loan on a step short enough for a well-conditioned exponential, then
  // exact doubling: Q(2h) = Q(h) + Phi(h) Q(h) Phi(h)^T, Phi(2h) = Phi(h)^2.
  const double norm = drift.cwiseAbs().colwise().sum().maxCoeff();
  int doublings = 0;
  double h = dt;
  while (norm * h > 0.5 && doublings < 60) {
    h *= 0.5;
    ++doublings;
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = -drift * h;
  m.topRightCorner(n, n) = qc * h;
  m.bottomRightCorner(n, n) = drift.transpose() * h;
  const Eigen::MatrixXd e = m.exp();
  Eigen::MatrixXd phi = e.bottomRightCorner(n, n).transpose();
  Eigen::MatrixXd q = phi * e.topRightCorner(n, n);
  q = 0.5 * (q + q.transpose()).eval();
  for (int k = 0; k < doublings; ++k) {
    q = (q + phi * q * phi.transpose()).eval();
    q = 0.5 * (q + q.transpose()).eval();
    phi = (phi * phi).eval();
  }

  transition_full_ = phi;
  transition_ = phi.leftCols(n - static_cast<Eigen::Index>(integrators));
  covariance_ = q;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(q);
  Eigen::VectorXd dvec = ldlt.vectorD();
  const double scale = std::max(dvec.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < dvec.size(); ++i) {
    if (dvec(i) < -1e-10 * scale) throw std::logic_error("process-noise covariance is not positive semidefinite");
    dvec(i) = std::sqrt(std::max(dvec(i), 0.0));
  }
  const Eigen::MatrixXd l = ldlt.matrixL();
  factor_ = ldlt.transpositionsP().transpose() * (l * dvec.asDiagonal());
}

ExactDiscretization ExactStepper::build(const DerivedParams& d, const SimConfig& cfg,
                                        const std::vector<Channel>& channels, Eigen::MatrixXd& drift,
                                        Eigen::MatrixXd& input, std::size_t& n_state) {
  const bool ou_x = cfg.sources[Source::ClassicalX] && std::holds_alternative<LorentzianNoise>(cfg.classical_x);
  const bool ou_y = cfg.sources[Source::ClassicalY] && std::holds_alternative<LorentzianNoise>(cfg.classical_y);
  n_state = 4 + (ou_x ? 1 : 0) + (ou_y ? 1 : 0);
  const Eigen::Index ix = 4;
  const Eigen::Index iy = ou_x ? 5 : 4;
  const auto n = static_cast<Eigen::Index>(n_state + channels.size());

  drift = Eigen::MatrixXd::Zero(n, n);
  input = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(kSourceCount));
  drift.topLeftCorner(4, 4) = drift_matrix(d).a;

  const double sg = std::sqrt(d.gamma);
  const double cy = direct_phase_weight(d, cfg.readout);
  auto col = [](Source s) { return static_cast<Eigen::Index>(idx(s)); };
  const auto& on = cfg.sources;

  if (on[Source::XIn]) input(kX, col(Source::XIn)) = sg;
  if (on[Source::YIn]) input(kY, col(Source::YIn)) = sg;
  if (on[Source::XbIn]) input(kX, col(Source::XbIn)) = std::sqrt(d.mu);
  if (on[Source::YbIn]) input(kY, col(Source::YbIn)) = std::sqrt(d.mu);
  if (on[Source::Eta]) input(kQ, col(Source::Eta)) = std::sqrt(d.damping / (3.0 * d.scaled_temperature));
  if (on[Source::Xi]) input(kP, col(Source::Xi)) = std::sqrt(4.0 * d.damping * d.scaled_temperature);

  // Classical noise: white enters directly, Lorentzian through an OU state u
  // with du = -wc u dt + wc sqrt(level) dW.
  if (on[Source::ClassicalX]) {
    if (const auto* w = std::get_if<WhiteNoise>(&cfg.classical_x)) {
      input(kX, col(Source::ClassicalX)) = 2.0 * sg * std::sqrt(w->level);
    } else if (const auto* l = std::get_if<LorentzianNoise>(&cfg.classical_x)) {
      drift(ix, ix) = -l->corner;
      input(ix, col(Source::ClassicalX)) = l->corner * std::sqrt(l->level);
      drift(kX, ix) = 2.0 * sg;
    }
  }
  double white_y = 0.0;
  if (on[Source::ClassicalY]) {
    if (const auto* w = std::get_if<WhiteNoise>(&cfg.classical_y)) {
      white_y = std::sqrt(w->level);
      input(kY, col(Source::ClassicalY)) = 2.0 * sg * white_y;
    } else if (const auto* l = std::get_if<LorentzianNoise>(&cfg.classical_y)) {
      drift(iy, iy) = -l->corner;
      input(iy, col(Source::ClassicalY)) = l->corner * std::sqrt(l->level);
      drift(kY, iy) = 2.0 * sg;
    }
  }

  const ShotFloor floor = cfg.readout == Readout::PhaseModulation
                              ? shot_floor_components(d, phase_modulation(d))
                              : ShotFloor{};
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const auto r = static_cast<Eigen::Index>(n_state + c);
    switch (channels[c]) {
      case Channel::Position:
        drift(r, kQ) = 1.0;
        break;
      case Channel::OutputPhase:
        drift(r, kY) = sg;
        if (on[Source::YIn]) input(r, col(Source::YIn)) = -1.0;
        break;
      case Channel::Signal:
        drift(r, kY) = sg;
        if (on[Source::YIn]) input(r, col(Source::YIn)) = -1.0;
        if (on[Source::ClassicalY]) {
          if (ou_y) {
            drift(r, iy) = -cy;
          } else {
            input(r, col(Source::ClassicalY)) = -cy * white_y;
          }
        }
        if (cfg.readout == Readout::PhaseModulation) {
          if (on[Source::Q1]) input(r, col(Source::Q1)) = std::sqrt(floor.carrier_sideband);
          if (on[Source::Q2]) input(r, col(Source::Q2)) = std::sqrt(floor.double_sideband);
        }
        break;
    }
  }
  return ExactDiscretization(drift, input, cfg.dt, channels.size());
}

ExactStepper::ExactStepper(const DerivedParams& d, const SimConfig& cfg, std::vector<Channel> channels)
    : channels_(std::move(channels)),
      disc_(build(d, cfg, channels_, drift_, input_, n_state_)),
      dt_(cfg.dt),
      s_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_state_))),
      z_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc_.dimension()))),
      zeta_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc_.dimension()))) {
  if (cfg.initial_state) set_state(*cfg.initial_state);
}

void ExactStepper::step(Engine& rng) {
  boost::random::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < zeta_.size(); ++i) zeta_(i) = normal(rng);
  z_.noalias() = disc_.transition() * s_;
  z_.noalias() += disc_.noise_factor() * zeta_;
  s_ = z_.head(s_.size());
}

void ExactStepper::step_deterministic() {
  z_.noalias() = disc_.transition() * s_;
  s_ = z_.head(s_.size());
}

std::array<double, 4> ExactStepper::state() const { return {s_(0), s_(1), s_(2), s_(3)}; }

void ExactStepper::set_state(const std::array<double, 4>& s) {
  for (int i = 0; i < 4; ++i) s_(i) = s[static_cast<std::size_t>(i)];
}

const std::vector<double>& SimTrace::channel(Channel c) const {
  switch (c) {
    case Channel::OutputPhase:
      return output_phase;
    case Channel::Signal:
      return signal;
    case Channel::Position:
      return position;
  }
  throw std::logic_error("unknown channel");
}

std::vector<double> SimTrace::state_column(int index) const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s[static_cast<std::size_t>(index)]);
  return out;
}

std::vector<double> synthesize_noise(const SimConfig& cfg, Source source) {
  if (!(cfg.dt > 0.0) || !(cfg.duration > 0.0)) throw ConfigError("synthesize_noise needs dt > 0 and duration > 0");
  const std::size_t n = steps_for(cfg.duration, cfg.dt);
  std::vector<double> out(n, 0.0);
  Engine rng(stream_seed(cfg.seed, 1000 + idx(source)));
  boost::random::normal_distribution<double> normal;

  auto white = [&](double density) {
    const double sd = std::sqrt(density / cfg.dt);
    for (double& x : out) x = sd * normal(rng);
  };

  if (source != Source::ClassicalX && source != Source::ClassicalY) {
    white(1.0);
    return out;
  }
  const NoiseShape& shape = source == Source::ClassicalX ? cfg.classical_x : cfg.classical_y;
  check_shape(shape);
  if (std::holds_alternative<ZeroNoise>(shape)) return out;
  if (const auto* w = std::get_if<WhiteNoise>(&shape)) {
    white(w->level);
    return out;
  }
  if (const auto* l = std::get_if<LorentzianNoise>(&shape)) {
    // Exact OU recursion started from its stationary law.
    const double decay = std::exp(-l->corner * cfg.dt);
    const double var = 0.5 * l->level * l->corner;
    const double innov = std::sqrt(var * (1.0 - decay * decay));
    double u = std::sqrt(var) * normal(rng);
    for (double& x : out) {
      u = decay * u + innov * normal(rng);
      x = u;
    }
    return out;
  }
  throw ConfigError("shape " + describe(shape) + " has no time-domain synthesis");
}

SimTrace integrate(const DerivedParams& d, const SimConfig& cfg) {
  check_config(d, cfg, false);
  if (!(cfg.duration > 0.0)) throw ConfigError("duration must be positive");
  const double n_real = cfg.duration / cfg.dt;
  const double bytes = n_real * (4 + 3) * sizeof(double);
  if (bytes > kMaxTraceBytes) {
    std::ostringstream os;
    os << "stored trace would need " << bytes / (1024.0 * 1024.0 * 1024.0)
       << " GiB; shorten duration or use the streaming PSD path";
    throw ConfigError(os.str());
  }
  const std::size_t n = steps_for(cfg.duration, cfg.dt);
  const std::size_t burn = steps_for(effective_burn_in(d, cfg), cfg.dt);

  ExactStepper stepper(d, cfg, {Channel::OutputPhase, Channel::Signal, Channel::Position});
  Engine rng(stream_seed(cfg.seed, 0));

  SimTrace trace;
  trace.dt = cfg.dt;
  trace.seed = cfg.seed;
  trace.t0 = static_cast<double>(burn) * cfg.dt;
  trace.states.reserve(n);
  trace.output_phase.reserve(n);
  trace.signal.reserve(n);
  trace.position.reserve(n);

  for (std::size_t k = 0; k < burn + n; ++k) {
    stepper.step(rng);
    if (!stepper.finite()) {
      throw IntegrationError(step_diagnostic(k + 1, static_cast<double>(k + 1) * cfg.dt, stepper.state()));
    }
    if (k < burn) continue;
    trace.states.push_back(stepper.state());
    trace.output_phase.push_back(stepper.output(0));
    trace.signal.push_back(stepper.output(1));
    trace.position.push_back(stepper.output(2));
  }
  return trace;
}

PsdEstimate output_psd(const SimTrace& trace, const SimConfig& cfg, Channel channel) {
  if (cfg.segment_length < 8 || cfg.segment_length % 2 != 0) {
    throw ConfigError("segment_length must be even and at least 8");
  }
  const std::size_t need = WelchEstimator::samples_for(std::max<std::size_t>(cfg.n_segments, 1), cfg.segment_length);
  if (trace.size() < need) {
    std::ostringstream os;
    os << "trace too short for " << cfg.n_segments << " segments of " << cfg.segment_length
       << " samples: need a duration of at least " << static_cast<double>(need) * trace.dt << " s after burn-in, have "
       << static_cast<double>(trace.size()) * trace.dt << " s";
    throw ConfigError(os.str());
  }
  return welch_psd(trace.channel(channel), trace.dt, cfg.segment_length);
}

namespace {

std::vector<std::size_t> segment_split(const SimConfig& cfg) {
  std::vector<std::size_t> per(cfg.n_trajectories, cfg.n_segments / cfg.n_trajectories);
  for (std::size_t i = 0; i < cfg.n_segments % cfg.n_trajectories; ++i) ++per[i];
  return per;
}

// Runs body(i) for i in [0, count) on a small pool; the first exception wins.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
  const std::size_t workers = std::min(count, unsigned_threads());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

PsdEstimate simulate_psd(const DerivedParams& d, const SimConfig& cfg, Channel channel) {
  check_config(d, cfg, true);
  const auto split = segment_split(cfg);
  const std::size_t burn = steps_for(effective_burn_in(d, cfg), cfg.dt);
  std::vector<std::optional<WelchEstimator>> partial(cfg.n_trajectories);

  parallel_for(cfg.n_trajectories, [&](std::size_t traj) {
    ExactStepper stepper(d, cfg, {channel});
    Engine rng(stream_seed(cfg.seed, traj));
    WelchEstimator welch(cfg.segment_length, cfg.dt);
    const std::size_t steps = WelchEstimator::samples_for(split[traj], cfg.segment_length);
    for (std::size_t k = 0; k < burn + steps; ++k) {
      stepper.step(rng);
      if (!stepper.finite()) {
        throw IntegrationError("trajectory " + std::to_string(traj) + ": " +
                               step_diagnostic(k + 1, static_cast<double>(k + 1) * cfg.dt, stepper.state()));
      }
      if (k >= burn) welch.push(stepper.output(0));
    }
    partial[traj].emplace(std::move(welch));
  });

  WelchEstimator total(cfg.segment_length, cfg.dt);
  for (const auto& p : partial) total.merge(*p);
  return total.estimate();
}

StateMoments simulate_moments(const DerivedParams& d, const SimConfig& cfg, std::size_t samples_per_trajectory) {
  check_config(d, cfg, false);
  if (samples_per_trajectory == 0) throw ConfigError("samples_per_trajectory must be positive");
  const std::size_t burn = steps_for(effective_burn_in(d, cfg), cfg.dt);
  std::vector<StateMoments> partial(cfg.n_trajectories);

  parallel_for(cfg.n_trajectories, [&](std::size_t traj) {
    ExactStepper stepper(d, cfg, {});
    Engine rng(stream_seed(cfg.seed, traj));
    Eigen::Matrix4d m2 = Eigen::Matrix4d::Zero();
    Eigen::Vector4d m1 = Eigen::Vector4d::Zero();
    for (std::size_t k = 0; k < burn + samples_per_trajectory; ++k) {
      stepper.step(rng);
      if (!stepper.finite()) {
        throw IntegrationError("trajectory " + std::to_string(traj) + ": " +
                               step_diagnostic(k + 1, static_cast<double>(k + 1) * cfg.dt, stepper.state()));
      }
      if (k < burn) continue;
      const auto s = stepper.state();
      const Eigen::Vector4d v(s[0], s[1], s[2], s[3]);
      m1 += v;
      m2.noalias() += v * v.transpose();
    }
    partial[traj] = {m2, m1, samples_per_trajectory};
  });

  StateMoments out{Eigen::Matrix4d::Zero(), Eigen::Vector4d::Zero(), 0};
  for (const auto& p : partial) {
    out.second_moment += p.second_moment;
    out.mean += p.mean;
    out.samples += p.samples;
  }
  out.second_moment /= static_cast<double>(out.samples);
  out.mean /= static_cast<double>(out.samples);
  return out;
}

std::size_t planned_steps(const DerivedParams& d, const SimConfig& cfg) {
  check_config(d, cfg, true);
  const std::size_t burn = steps_for(effective_burn_in(d, cfg), cfg.dt);
  std::size_t total = 0;
  for (std::size_t k : segment_split(cfg)) total += burn + WelchEstimator::samples_for(k, cfg.segment_length);
  return total;
}

double estimated_runtime_seconds(const DerivedParams& d, const SimConfig& cfg) {
  const std::size_t steps = planned_steps(d, cfg);
  ExactStepper stepper(d, cfg, {Channel::Signal});
  Engine rng(1);
  constexpr std::size_t probe = 1 << 15;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < probe; ++k) stepper.step(rng);
  const double per_step = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / probe;
  // Welch cost: roughly one windowed FFT per half segment of samples.
  const double n = static_cast<double>(cfg.segment_length);
  const double fft = 5e-9 * n * std::log2(n) * static_cast<double>(cfg.n_segments);
  const double workers = static_cast<double>(std::min(cfg.n_trajectories, unsigned_threads()));
  return (per_step * static_cast<double>(steps) + fft) / workers;
}

double expected_psd(const DerivedParams& d, const SimConfig& cfg, Channel channel, double omega) {
  const auto& on = cfg.sources;
  NoiseModel noise;
  if (on[Source::ClassicalX]) noise.amplitude = cfg.classical_x;
  if (on[Source::ClassicalY]) noise.phase = cfg.classical_y;
  const double w2 = omega * omega;
  const double k2 = d.kappa_c * d.kappa_c;

  if (channel == Channel::Position) {
    // dQ = nu P + n_Q, dP = -nu Q - Gamma P + F  =>  Q = (nu F + (Gamma - i w) n_Q) / (nu^2 - w^2 - i Gamma w).
    const double ca2 = d.coupling() * d.coupling();
    double force = 0.0;
    if (on[Source::XIn]) force += ca2 * d.gamma / (k2 + w2);
    if (on[Source::XbIn]) force += ca2 * d.mu / (k2 + w2);
    if (on[Source::ClassicalX]) force += ca2 * 4.0 * d.gamma * noise.amplitude_density(omega) / (k2 + w2);
    if (on[Source::Xi]) force += 4.0 * d.damping * d.scaled_temperature;
    const double pos = on[Source::Eta] ? d.damping / (3.0 * d.scaled_temperature) : 0.0;
    const double mech = (d.nu * d.nu - w2) * (d.nu * d.nu - w2) + d.damping * d.damping * w2;
    return (d.nu * d.nu * force + (d.damping * d.damping + w2) * pos) / mech;
  }
  if (channel != Channel::Signal) throw std::invalid_argument("expected_psd covers the signal and position channels");

  const DetectionScheme scheme = cfg.readout == Readout::PhaseModulation
                                     ? DetectionScheme{phase_modulation(d)}
                                     : DetectionScheme{Homodyne{1.0, 0.5}};
  const SpectrumBreakdown b = evaluate(d, noise, scheme, ThermalModel::Corrected, omega);
  double total = 0.0;
  const double half_imbalance = 0.5 * (d.gamma - d.mu);
  if (on[Source::YIn]) total += (half_imbalance * half_imbalance + w2) / (k2 + w2);
  if (on[Source::YbIn]) total += d.gamma * d.mu / (k2 + w2);
  if (cfg.readout == Readout::PhaseModulation) {
    const ShotFloor f = shot_floor_components(d, scheme);
    if (on[Source::Q1]) total += f.carrier_sideband;
    if (on[Source::Q2]) total += f.double_sideband;
  }
  if (on[Source::XIn]) total += b.back_action;
  if (on[Source::XbIn]) total += b.internal_loss;
  if (on[Source::ClassicalX]) total += b.amplitude_noise;
  if (on[Source::ClassicalY]) total += b.phase_noise;
  if (on[Source::Xi]) total += b.thermal_t;
  if (on[Source::Eta]) total += b.thermal_correction;
  return total;
}

}  // namespace cavnoise
