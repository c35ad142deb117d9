#include "bic/correntropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bic {

namespace {

constexpr const char* kModule = "correntropy_core";
constexpr double kMadToSigma = 1.4826;

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, kModule, what);
}

}  // namespace

KernelBandwidth::KernelBandwidth(double sigma, BandwidthSource source)
    : sigma_(sigma), source_(source) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    fail(ErrorCode::InvalidArgument, "kernel bandwidth must be positive and finite");
}

double KernelBandwidth::peak() const noexcept {
  return 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma_);
}

WindowSpec::WindowSpec(std::size_t length, std::size_t stride)
    : length_(length), stride_(stride == 0 ? length : stride) {
  if (length_ < 2) fail(ErrorCode::InvalidArgument, "window length must be at least 2");
}

std::size_t WindowSpec::window_count(std::size_t n) const noexcept {
  if (n < length_) return 0;
  return (n - length_) / stride_ + 1;
}

std::string_view to_string(BandwidthSource source) noexcept {
  return source == BandwidthSource::UserSet ? "UserSet" : "SilvermanRule";
}

std::string_view to_string(SignalDirection direction) noexcept {
  return direction == SignalDirection::BadNews ? "BadNews" : "GoodNews";
}

double gaussian_kernel(double d, const KernelBandwidth& bw) noexcept {
  const double s = bw.sigma();
  return bw.peak() * std::exp(-(d * d) / (2.0 * s * s));
}

double correntropy(std::span<const double> a, std::span<const double> b,
                   const KernelBandwidth& bw) {
  if (a.empty() || b.empty()) fail(ErrorCode::EmptyInput, "correntropy of empty vectors");
  if (a.size() != b.size())
    fail(ErrorCode::LengthMismatch, "correntropy needs equal lengths (" +
                                        std::to_string(a.size()) + " vs " +
                                        std::to_string(b.size()) + ")");
  const double two_var = 2.0 * bw.sigma() * bw.sigma();
  const double m = static_cast<double>(a.size());

  // Unit-peak kernel terms; exp(0) == 1 keeps identical inputs exact.
  // Neumaier summation makes the result (nearly) independent of term order.
  double sum = 0.0;
  double carry = 0.0;
  double min_q = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    const double q = (d * d) / two_var;
    min_q = std::min(min_q, q);
    const double term = std::exp(-q);
    const double t = sum + term;
    carry += std::abs(sum) >= term ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  // Every term is <= 1, so the true sum is <= m.
  sum = std::min(sum + carry, m);
  double v = bw.peak() * (sum / m);
  if (v > 0.0) return v;

  // Every term underflowed: log V = log peak - q_min + log sum exp(q_min - q_i) - log M.
  double shifted = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    shifted += std::exp(min_q - (d * d) / two_var);
  }
  v = std::exp(std::log(bw.peak()) - min_q + std::log(shifted) - std::log(m));
  return std::max(v, std::numeric_limits<double>::denorm_min());
}

KernelBandwidth silverman_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) fail(ErrorCode::TooShort, "bandwidth rule needs at least 2 samples");
  const double s = stats::population_std(samples);
  if (!(s > 0.0)) fail(ErrorCode::DegenerateSample, "bandwidth rule on zero-variance samples");
  const double n = static_cast<double>(samples.size());
  return KernelBandwidth(1.06 * s * std::pow(n, -0.2), BandwidthSource::SilvermanRule);
}

CorrentropySeries windowed_correntropy(const ReturnSeries& series, const WindowSpec& spec,
                                       const KernelBandwidth& bw) {
  const auto windows = spec.window_count(series.size());
  if (windows < 2)
    fail(ErrorCode::TooShort, "series of length " + std::to_string(series.size()) +
                                  " holds fewer than two windows of length " +
                                  std::to_string(spec.length()));
  const auto values = series.values();
  const auto pts = series.points();
  const std::span<const double> all(values);

  CorrentropySeries out{bw, spec, {}};
  out.entries.reserve(windows - 1);
  for (std::size_t k = 0; k + 1 < windows; ++k) {
    const std::size_t left = k * spec.stride();
    const std::size_t right = left + spec.stride();
    out.entries.push_back({k, pts[left].period, pts[right].period,
                           correntropy(all.subspan(left, spec.length()),
                                       all.subspan(right, spec.length()), bw)});
  }
  return out;
}

std::vector<AmbiguitySignal> detect_bias(const CorrentropySeries& cs, double threshold_k) {
  if (!(threshold_k > 0.0) || !std::isfinite(threshold_k))
    fail(ErrorCode::InvalidArgument, "threshold must be positive and finite");
  const auto& e = cs.entries;
  if (e.size() < 3) fail(ErrorCode::TooShort, "detect_bias needs at least 3 correntropy entries");

  std::vector<double> diffs;
  diffs.reserve(e.size() - 1);
  for (std::size_t k = 1; k < e.size(); ++k) diffs.push_back(e[k].v - e[k - 1].v);

  std::vector<AmbiguitySignal> signals;
  if (std::all_of(diffs.begin(), diffs.end(), [&](double d) { return d == diffs.front(); }))
    return signals;

  std::vector<double> others;
  std::vector<double> deviations;
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    others.clear();
    for (std::size_t j = 0; j < diffs.size(); ++j)
      if (j != k) others.push_back(diffs[j]);
    const double center = stats::median(others);
    deviations.clear();
    for (double d : others) deviations.push_back(std::abs(d - center));
    const double scale = kMadToSigma * stats::median(deviations);

    const double delta = diffs[k];
    if (std::abs(delta - center) > threshold_k * scale) {
      signals.push_back({e[k + 1].pair_index, delta,
                         delta < 0.0 ? SignalDirection::BadNews : SignalDirection::GoodNews,
                         std::abs(delta)});
    }
  }
  return signals;
}

}  // namespace bic
