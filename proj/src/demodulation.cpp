#include "cavnoise/demodulation.hpp"

#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <sstream>

#include "cavnoise/constants.hpp"
#include "cavnoise/stochastic.hpp"

namespace cavnoise {

namespace {

struct LagStats {
  std::vector<double> mean;
  std::vector<double> se;
  double integral = 0.0;
  double integral_se = 0.0;
};

// Autocorrelation of a zero-mean path at lags 0..max_lag (in path samples),
// with batch-means standard errors for every lag and for the two-sided
// trapezoidal integral.
LagStats autocorrelation(const std::vector<double>& x, std::size_t max_lag, int batches, double h) {
  const std::size_t usable = x.size() - max_lag;
  const std::size_t per_batch = usable / static_cast<std::size_t>(batches);
  std::vector<std::vector<double>> batch(static_cast<std::size_t>(batches), std::vector<double>(max_lag + 1, 0.0));
  for (int b = 0; b < batches; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * per_batch;
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
      double acc = 0.0;
      for (std::size_t i = lo; i < lo + per_batch; ++i) acc += x[i] * x[i + lag];
      batch[static_cast<std::size_t>(b)][lag] = acc / static_cast<double>(per_batch);
    }
  }
  auto integral_of = [&](const std::vector<double>& ac) {
    double s = ac[0];
    for (std::size_t lag = 1; lag <= max_lag; ++lag) s += 2.0 * ac[lag];
    return s * h;
  };

  LagStats out;
  out.mean.assign(max_lag + 1, 0.0);
  out.se.assign(max_lag + 1, 0.0);
  const auto nb = static_cast<double>(batches);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double m = 0.0;
    for (const auto& b : batch) m += b[lag];
    m /= nb;
    double v = 0.0;
    for (const auto& b : batch) v += (b[lag] - m) * (b[lag] - m);
    out.mean[lag] = m;
    out.se[lag] = std::sqrt(v / (nb - 1.0) / nb);
  }
  std::vector<double> ints;
  for (const auto& b : batch) ints.push_back(integral_of(b));
  out.integral = integral_of(out.mean);
  double v = 0.0;
  for (double s : ints) v += (s - out.integral) * (s - out.integral);
  out.integral_se = std::sqrt(v / (nb - 1.0) / nb);
  return out;
}

}  // namespace

double DemodResult::q2_triangle(double tau, double epsilon_beta, double averaging_time) const {
  const double a = std::abs(tau);
  if (a > averaging_time) return 0.0;
  return 0.5 * epsilon_beta * epsilon_beta * (averaging_time - a) / (averaging_time * averaging_time);
}

DemodResult demodulation_floor_sim(const DerivedParams& d, const DemodConfig& cfg) {
  const double two_pi = 2.0 * constants::pi;
  std::vector<std::string> problems;
  if (!(cfg.carrier > 0.0) || !(cfg.averaging_time > 0.0) || !(cfg.duration > 0.0)) {
    problems.emplace_back("carrier, averaging_time and duration must be positive");
  } else if (cfg.carrier * cfg.averaging_time < 10.0 * two_pi) {
    problems.emplace_back("Delta T must be large compared with 2 pi (need at least 10 carrier periods per window)");
  }
  if (cfg.samples_per_period < 8) {
    problems.emplace_back("aliasing: need at least 8 samples per period of 2 Delta");
  }
  if (cfg.batches < 2) problems.emplace_back("batches must be at least 2");
  if (!problems.empty()) {
    std::string msg = "invalid demodulation config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }

  const double period2 = two_pi / (2.0 * cfg.carrier);
  const double dt = period2 / cfg.samples_per_period;
  const auto window = static_cast<std::size_t>(std::llround(cfg.averaging_time / dt));
  const std::size_t stride = cfg.lag_stride > 0 ? static_cast<std::size_t>(cfg.lag_stride)
                                                 : std::max<std::size_t>(1, window / 16);
  const double max_lag_s = cfg.max_lag > 0.0 ? cfg.max_lag : 1.5 * cfg.averaging_time;
  const auto max_lag = static_cast<std::size_t>(std::ceil(max_lag_s / (static_cast<double>(stride) * dt)));
  const auto n_path = static_cast<std::size_t>(cfg.duration / (static_cast<double>(stride) * dt));
  if (n_path < (max_lag + 1) * static_cast<std::size_t>(cfg.batches) * 4) {
    throw ConfigError("demodulation duration too short for the requested lags and batches");
  }
  const double t_avg = static_cast<double>(window) * dt;

  const double beta = d.beta;
  const double carrier_amp = beta - std::sqrt(d.gamma) * d.alpha;
  const double eb = d.epsilon * beta;

  // Prefix sums of the modulated increments, so each window integral is O(1).
  const std::size_t n_fine = n_path * stride + window;
  std::vector<double> c1(n_fine + 1, 0.0), c2(n_fine + 1, 0.0);
  Engine rx(stream_seed(cfg.seed, 2000)), ry(stream_seed(cfg.seed, 2001));
  boost::random::normal_distribution<double> normal;
  const double sd = std::sqrt(dt);  // increment of unit-density white noise over dt
  for (std::size_t k = 0; k < n_fine; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt;
    c1[k + 1] = c1[k] + std::sin(cfg.carrier * t) * sd * normal(rx);
    c2[k + 1] = c2[k] + std::cos(2.0 * cfg.carrier * t) * sd * normal(ry);
  }

  DemodResult r;
  r.dt = dt;
  r.lag_step = static_cast<double>(stride) * dt;
  r.q1_path.resize(n_path);
  r.q2_path.resize(n_path);
  for (std::size_t j = 0; j < n_path; ++j) {
    const std::size_t lo = j * stride;
    r.q1_path[j] = -(carrier_amp / t_avg) * (c1[lo + window] - c1[lo]);
    r.q2_path[j] = (eb / t_avg) * (c2[lo + window] - c2[lo]);
  }

  const LagStats s1 = autocorrelation(r.q1_path, max_lag, cfg.batches, r.lag_step);
  const LagStats s2 = autocorrelation(r.q2_path, max_lag, cfg.batches, r.lag_step);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) r.lags.push_back(static_cast<double>(lag) * r.lag_step);
  r.q1_autocorrelation = s1.mean;
  r.q1_standard_error = s1.se;
  r.q2_autocorrelation = s2.mean;
  r.q2_standard_error = s2.se;
  r.q1_density = s1.integral;
  r.q1_density_error = s1.integral_se;
  r.q2_density = s2.integral;
  r.q2_density_error = s2.integral_se;
  r.q1_density_expected = 0.5 * carrier_amp * carrier_amp;
  r.q2_density_expected = 0.5 * eb * eb;
  return r;
}

}  // namespace cavnoise
