#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bic/series.hpp"

namespace bic {

enum class BandwidthSource { UserSet, SilvermanRule };

class KernelBandwidth {
 public:
  // Throws InvalidArgument unless sigma is positive and finite.
  explicit KernelBandwidth(double sigma, BandwidthSource source = BandwidthSource::UserSet);

  double sigma() const noexcept { return sigma_; }
  BandwidthSource source() const noexcept { return source_; }
  // 1 / (sqrt(2 pi) sigma), the kernel value at zero distance.
  double peak() const noexcept;

 private:
  double sigma_;
  BandwidthSource source_;
};

class WindowSpec {
 public:
  // Non-overlapping windows when stride is omitted.
  explicit WindowSpec(std::size_t length, std::size_t stride = 0);

  std::size_t length() const noexcept { return length_; }
  std::size_t stride() const noexcept { return stride_; }
  // Number of complete windows that fit in n observations (0 if none).
  std::size_t window_count(std::size_t n) const noexcept;

 private:
  std::size_t length_;
  std::size_t stride_;
};

struct CorrentropyEntry {
  std::size_t pair_index = 0;
  std::int64_t left_start = 0;
  std::int64_t right_start = 0;
  double v = 0.0;
};

struct CorrentropySeries {
  KernelBandwidth bandwidth;
  WindowSpec window;
  std::vector<CorrentropyEntry> entries;
};

enum class SignalDirection { BadNews, GoodNews };

struct AmbiguitySignal {
  std::size_t pair_index = 0;
  double delta = 0.0;  // v_k - v_{k-1}
  SignalDirection direction = SignalDirection::GoodNews;
  double magnitude = 0.0;
};

std::string_view to_string(BandwidthSource source) noexcept;
std::string_view to_string(SignalDirection direction) noexcept;

double gaussian_kernel(double d, const KernelBandwidth& bw) noexcept;

// Sample correntropy: mean of gaussian_kernel(a_i - b_i). The result is
// exactly bw.peak() when a == b, and never rounds to zero: if every kernel
// term underflows the mean is recovered in log space and, failing that,
// rounded up to the smallest positive double.
double correntropy(std::span<const double> a, std::span<const double> b,
                   const KernelBandwidth& bw);

// sigma = 1.06 * s * n^(-1/5) with the population std s.
KernelBandwidth silverman_bandwidth(std::span<const double> samples);

// Correntropy of each adjacent pair of windows (w_k, w_{k+1}); windows start
// at offsets 0, stride, 2*stride, ... and trailing partial windows are dropped.
CorrentropySeries windowed_correntropy(const ReturnSeries& series, const WindowSpec& spec,
                                       const KernelBandwidth& bw);

// Flags jumps in the correntropy series. Each first difference d_k is scored
// against the other differences (leave-one-out): it is flagged when
// |d_k - median| exceeds threshold_k * 1.4826 * MAD of those others. A steady
// trend therefore raises nothing, and identical differences never flag.
std::vector<AmbiguitySignal> detect_bias(const CorrentropySeries& cs, double threshold_k = 3.0);

}  // namespace bic
