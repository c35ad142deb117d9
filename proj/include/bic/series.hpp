#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bic/error.hpp"

namespace bic {

enum class SeriesKind { NominalLog, RealLog, Excess, Demeaned, Posterior };

std::string_view to_string(SeriesKind kind) noexcept;

struct SeriesPoint {
  std::int64_t period = 0;
  double value = 0.0;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

// One row of the ingest CSV. All value fields are per-period log quantities.
struct RawMarketRecord {
  std::int64_t period = 0;
  double nominal_log_return = 0.0;
  double riskfree_nominal_return = 0.0;
  double inflation_log = 0.0;
};

// Ordered (period, value) sequence tagged with what it represents.
// Construction validates: nonempty, finite values, strictly increasing
// periods, and [0, 1] values for Posterior series.
class ReturnSeries {
 public:
  ReturnSeries(SeriesKind kind, std::vector<SeriesPoint> points);

  SeriesKind kind() const noexcept { return kind_; }
  std::span<const SeriesPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::vector<double> values() const;
  std::vector<std::int64_t> periods() const;

  friend bool operator==(const ReturnSeries&, const ReturnSeries&) = default;

 private:
  SeriesKind kind_;
  std::vector<SeriesPoint> points_;
};

struct SeriesStats {
  double mean = 0.0;
  double std = 0.0;  // population (1/n)
  double ar1 = 0.0;
  std::size_t n = 0;
};

// Parses `period,nominal_log_return,riskfree_nominal_return,inflation_log`
// CSV (LF or CRLF). Periods are integer years; ISO dates (YYYY-MM-DD) are
// reduced to their year.
std::vector<RawMarketRecord> parse_market_csv(std::string_view bytes);

// Column extractors for parsed records.
ReturnSeries nominal_market_series(std::span<const RawMarketRecord> records);
ReturnSeries nominal_riskfree_series(std::span<const RawMarketRecord> records);
std::vector<SeriesPoint> inflation_points(std::span<const RawMarketRecord> records);

// real_t = nominal_t - inflation_log_t (log-return convention).
ReturnSeries deflate_to_real(const ReturnSeries& nominal,
                             std::span<const SeriesPoint> inflation_log);

ReturnSeries excess_returns(const ReturnSeries& market_real,
                            const ReturnSeries& riskfree_real);

// Subtracts the full-sample mean. A second correction pass removes the
// rounding residue of the first so the output mean is ~1 ulp from zero.
ReturnSeries demean(const ReturnSeries& series);

SeriesStats summary_stats(const ReturnSeries& series);

// Demeaned real excess returns: parse -> deflate -> excess -> demean.
struct IngestResult {
  std::vector<RawMarketRecord> records;
  ReturnSeries real_market;
  ReturnSeries real_riskfree;
  ReturnSeries excess;
  ReturnSeries demeaned;
};

IngestResult ingest_market_csv(std::string_view bytes);

namespace stats {

double mean(std::span<const double> xs);
double population_std(std::span<const double> xs);
// Lag-1 sample autocorrelation around the full-sample mean, clamped to
// [-1, 1]; 0 for a zero-variance input.
double lag1_autocorrelation(std::span<const double> xs);
double median(std::vector<double> xs);

}  // namespace stats

}  // namespace bic
