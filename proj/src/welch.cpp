#include "cavnoise/welch.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "cavnoise/constants.hpp"

namespace cavnoise {

namespace {
// Planner calls are not thread-safe in FFTW; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct WelchEstimator::Fft {
  explicit Fft(std::size_t n)
      : in(fftw_alloc_real(n)), out(fftw_alloc_complex(n / 2 + 1)) {
    if (!in || !out) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    // FFTW_ESTIMATE keeps the chosen algorithm, and hence the bits, run-to-run stable.
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  ~Fft() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  double* in;
  fftw_complex* out;
  fftw_plan plan;
};

double PsdEstimate::resolution() const {
  return 2.0 * constants::pi / (static_cast<double>(segment_length) * dt);
}

double PsdEstimate::at(double w) const {
  const auto it = std::lower_bound(omega.begin(), omega.end(), w);
  if (it == omega.end()) return psd.back();
  auto idx = static_cast<std::size_t>(it - omega.begin());
  if (idx > 0 && std::abs(omega[idx - 1] - w) < std::abs(omega[idx] - w)) --idx;
  return psd[idx];
}

WelchEstimator::WelchEstimator(std::size_t segment_length, double dt)
    : n_(segment_length), dt_(dt), window_(segment_length), sum_(segment_length / 2 + 1, 0.0) {
  if (n_ < 8 || n_ % 2 != 0) throw std::invalid_argument("Welch segment length must be even and >= 8");
  if (!(dt > 0.0)) throw std::invalid_argument("Welch sample interval must be positive");
  window_power_ = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    window_[k] = 0.5 * (1.0 - std::cos(2.0 * constants::pi * static_cast<double>(k) / static_cast<double>(n_)));
    window_power_ += window_[k] * window_[k];
  }
  buffer_.reserve(n_);
  fft_ = std::make_unique<Fft>(n_);
}

WelchEstimator::~WelchEstimator() = default;
WelchEstimator::WelchEstimator(WelchEstimator&&) noexcept = default;
WelchEstimator& WelchEstimator::operator=(WelchEstimator&&) noexcept = default;

std::size_t WelchEstimator::samples_for(std::size_t segments, std::size_t n) {
  return segments == 0 ? 0 : n + (segments - 1) * (n / 2);
}

void WelchEstimator::push(double x) {
  buffer_.push_back(x);
  if (buffer_.size() == n_) {
    process_segment();
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(n_ / 2));
  }
}

void WelchEstimator::push(std::span<const double> xs) {
  for (double x : xs) push(x);
}

void WelchEstimator::process_segment() {
  for (std::size_t k = 0; k < n_; ++k) fft_->in[k] = window_[k] * buffer_[k];
  fftw_execute_dft_r2c(fft_->plan, fft_->in, fft_->out);
  for (std::size_t k = 0; k <= n_ / 2; ++k) {
    const double re = fft_->out[k][0], im = fft_->out[k][1];
    sum_[k] += re * re + im * im;
  }
  ++segments_;
}

void WelchEstimator::merge(const WelchEstimator& other) {
  if (other.n_ != n_ || other.dt_ != dt_) throw std::invalid_argument("Welch merge: geometry mismatch");
  for (std::size_t k = 0; k < sum_.size(); ++k) sum_[k] += other.sum_[k];
  segments_ += other.segments_;
}

PsdEstimate WelchEstimator::estimate() const {
  if (segments_ == 0) throw std::runtime_error("Welch estimate requested before any full segment");
  PsdEstimate e;
  e.segments = segments_;
  e.segment_length = n_;
  e.dt = dt_;
  const double norm = dt_ / (window_power_ * static_cast<double>(segments_));
  const double dw = e.resolution();
  const std::size_t half = n_ / 2;
  e.omega.reserve(n_);
  e.psd.reserve(n_);
  for (std::size_t k = half - 1; k >= 1; --k) {
    e.omega.push_back(-dw * static_cast<double>(k));
    e.psd.push_back(norm * sum_[k]);
  }
  for (std::size_t k = 0; k <= half; ++k) {
    e.omega.push_back(dw * static_cast<double>(k));
    e.psd.push_back(norm * sum_[k]);
  }
  return e;
}

PsdEstimate welch_psd(std::span<const double> x, double dt, std::size_t segment_length) {
  WelchEstimator w(segment_length, dt);
  w.push(x);
  return w.estimate();
}

BandComparison compare_band(const PsdEstimate& est, const std::function<double(double)>& reference,
                            double omega_lo, double omega_hi) {
  BandComparison c;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < est.omega.size(); ++i) {
    const double w = est.omega[i];
    if (w <= 0.0 || w < omega_lo || w > omega_hi) continue;
    const double rel = est.psd[i] / reference(w) - 1.0;
    sum += rel;
    sum2 += rel * rel;
    c.max_abs_relative = std::max(c.max_abs_relative, std::abs(rel));
    ++c.bins;
  }
  if (c.bins == 0) throw std::runtime_error("compare_band: no estimator bins inside the band");
  c.mean_relative = sum / static_cast<double>(c.bins);
  c.rms_relative = std::sqrt(sum2 / static_cast<double>(c.bins));
  return c;
}

}  // namespace cavnoise
