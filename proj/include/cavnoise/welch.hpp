#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace cavnoise {

/// Two-sided PSD estimate on an ascending angular-frequency grid [rad/s].
/// Normalized so that white noise of two-sided density s2 estimates s2.
struct PsdEstimate {
  std::vector<double> omega;
  std::vector<double> psd;
  std::size_t segments = 0;
  std::size_t segment_length = 0;
  double dt = 0.0;

  [[nodiscard]] double resolution() const;
  /// Value at the bin nearest to `omega`.
  [[nodiscard]] double at(double omega) const;
};

/// Streaming Welch estimator: periodic Hann window, 50% overlap, no detrend.
class WelchEstimator {
 public:
  WelchEstimator(std::size_t segment_length, double dt);
  ~WelchEstimator();
  WelchEstimator(WelchEstimator&&) noexcept;
  WelchEstimator& operator=(WelchEstimator&&) noexcept;
  WelchEstimator(const WelchEstimator&) = delete;
  WelchEstimator& operator=(const WelchEstimator&) = delete;

  void push(double x);
  void push(std::span<const double> xs);

  [[nodiscard]] std::size_t segments() const { return segments_; }
  [[nodiscard]] std::size_t segment_length() const { return n_; }

  /// Adds another estimator's accumulated periodograms (same geometry).
  void merge(const WelchEstimator& other);

  [[nodiscard]] PsdEstimate estimate() const;

  /// Samples needed for `segments` overlapping segments of length n.
  static std::size_t samples_for(std::size_t segments, std::size_t n);

 private:
  void process_segment();

  struct Fft;
  std::size_t n_;
  double dt_;
  std::vector<double> window_;
  double window_power_;
  std::vector<double> buffer_;
  std::vector<double> sum_;  // one-sided accumulated |X_k|^2, k = 0..n/2
  std::size_t segments_ = 0;
  std::unique_ptr<Fft> fft_;
};

/// Welch estimate of a stored series.
PsdEstimate welch_psd(std::span<const double> x, double dt, std::size_t segment_length);

struct BandComparison {
  double rms_relative = 0.0;   // sqrt(mean((est/ref - 1)^2))
  double mean_relative = 0.0;  // mean(est/ref - 1)
  double max_abs_relative = 0.0;
  std::size_t bins = 0;
};

/// Compares positive-frequency bins with omega_lo <= omega <= omega_hi.
BandComparison compare_band(const PsdEstimate& est, const std::function<double(double)>& reference,
                            double omega_lo, double omega_hi);

}  // namespace cavnoise
