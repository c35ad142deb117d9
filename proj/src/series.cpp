#include "bic/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace bic {

namespace {

constexpr const char* kModule = "series_ingest";
constexpr std::string_view kHeader =
    "period,nominal_log_return,riskfree_nominal_return,inflation_log";

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, kModule, what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Integer year, or an ISO date YYYY-MM[-DD] reduced to its year.
bool parse_period(std::string_view s, std::int64_t& out) {
  if (parse_int(s, out)) return true;
  if (s.size() != 7 && s.size() != 10) return false;
  if (s[4] != '-') return false;
  std::int64_t year = 0, month = 0, day = 1;
  if (!parse_int(s.substr(0, 4), year) || !parse_int(s.substr(5, 2), month)) return false;
  if (s.size() == 10) {
    if (s[7] != '-' || !parse_int(s.substr(8, 2), day)) return false;
  }
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  out = year;
  return true;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

void require_aligned(std::span<const SeriesPoint> a, std::span<const SeriesPoint> b,
                     const char* what) {
  if (a.size() != b.size())
    fail(ErrorCode::PeriodMismatch, std::string(what) + ": series lengths differ (" +
                                        std::to_string(a.size()) + " vs " +
                                        std::to_string(b.size()) + ")");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].period != b[i].period)
      fail(ErrorCode::PeriodMismatch, std::string(what) + ": period " +
                                          std::to_string(a[i].period) + " vs " +
                                          std::to_string(b[i].period) + " at index " +
                                          std::to_string(i));
  }
}

template <class Column>
ReturnSeries column_series(std::span<const RawMarketRecord> records, SeriesKind kind,
                           Column column) {
  std::vector<SeriesPoint> pts;
  pts.reserve(records.size());
  for (const auto& r : records) pts.push_back({r.period, column(r)});
  return ReturnSeries(kind, std::move(pts));
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonMonotonicPeriod: return "NonMonotonicPeriod";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::ZeroEvidence: return "ZeroEvidence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

std::string_view to_string(SeriesKind kind) noexcept {
  switch (kind) {
    case SeriesKind::NominalLog: return "NominalLog";
    case SeriesKind::RealLog: return "RealLog";
    case SeriesKind::Excess: return "Excess";
    case SeriesKind::Demeaned: return "Demeaned";
    case SeriesKind::Posterior: return "Posterior";
  }
  return "Unknown";
}

ReturnSeries::ReturnSeries(SeriesKind kind, std::vector<SeriesPoint> points)
    : kind_(kind), points_(std::move(points)) {
  if (points_.empty()) fail(ErrorCode::EmptyInput, "return series must be nonempty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double v = points_[i].value;
    if (!std::isfinite(v))
      fail(ErrorCode::InvalidArgument, "non-finite value at index " + std::to_string(i));
    if (kind_ == SeriesKind::Posterior && (v < 0.0 || v > 1.0))
      fail(ErrorCode::InvalidArgument, "posterior value outside [0, 1] at index " +
                                           std::to_string(i));
    if (i > 0 && points_[i].period <= points_[i - 1].period)
      fail(ErrorCode::NonMonotonicPeriod,
           "periods must be strictly increasing (" + std::to_string(points_[i - 1].period) +
               " then " + std::to_string(points_[i].period) + ")");
  }
}

std::vector<double> ReturnSeries::values() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.value);
  return out;
}

std::vector<std::int64_t> ReturnSeries::periods() const {
  std::vector<std::int64_t> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.period);
  return out;
}

std::vector<RawMarketRecord> parse_market_csv(std::string_view bytes) {
  if (bytes.starts_with("\xEF\xBB\xBF")) bytes.remove_prefix(3);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= bytes.size()) {
    auto nl = bytes.find('\n', start);
    auto line = bytes.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                 : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

  if (lines.empty()) fail(ErrorCode::EmptyInput, "input is empty");
  if (trim(lines.front()) != kHeader)
    fail(ErrorCode::MalformedRow, "unexpected header, expected `" + std::string(kHeader) + "`");

  std::vector<RawMarketRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line_no = std::to_string(i + 1);
    auto fields = split_fields(lines[i]);
    if (fields.size() != 4)
      fail(ErrorCode::MalformedRow, "line " + line_no + ": expected 4 columns, got " +
                                        std::to_string(fields.size()));
    RawMarketRecord rec;
    if (!parse_period(fields[0], rec.period))
      fail(ErrorCode::MalformedRow, "line " + line_no + ": bad period `" +
                                        std::string(fields[0]) + "`");
    if (!parse_double(fields[1], rec.nominal_log_return) ||
        !parse_double(fields[2], rec.riskfree_nominal_return) ||
        !parse_double(fields[3], rec.inflation_log))
      fail(ErrorCode::MalformedRow, "line " + line_no + ": non-numeric or non-finite value");
    if (!records.empty() && rec.period <= records.back().period)
      fail(ErrorCode::NonMonotonicPeriod,
           "line " + line_no + ": period " + std::to_string(rec.period) +
               " does not follow " + std::to_string(records.back().period));
    records.push_back(rec);
  }
  if (records.empty()) fail(ErrorCode::EmptyInput, "no data rows after header");
  return records;
}

ReturnSeries nominal_market_series(std::span<const RawMarketRecord> records) {
  return column_series(records, SeriesKind::NominalLog,
                       [](const RawMarketRecord& r) { return r.nominal_log_return; });
}

ReturnSeries nominal_riskfree_series(std::span<const RawMarketRecord> records) {
  return column_series(records, SeriesKind::NominalLog,
                       [](const RawMarketRecord& r) { return r.riskfree_nominal_return; });
}

std::vector<SeriesPoint> inflation_points(std::span<const RawMarketRecord> records) {
  std::vector<SeriesPoint> pts;
  pts.reserve(records.size());
  for (const auto& r : records) pts.push_back({r.period, r.inflation_log});
  return pts;
}

ReturnSeries deflate_to_real(const ReturnSeries& nominal,
                             std::span<const SeriesPoint> inflation_log) {
  if (nominal.kind() != SeriesKind::NominalLog)
    fail(ErrorCode::InvalidArgument, "deflate_to_real expects a NominalLog series");
  require_aligned(nominal.points(), inflation_log, "deflate_to_real");
  std::vector<SeriesPoint> out;
  out.reserve(nominal.size());
  auto pts = nominal.points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    out.push_back({pts[i].period, pts[i].value - inflation_log[i].value});
  return ReturnSeries(SeriesKind::RealLog, std::move(out));
}

ReturnSeries excess_returns(const ReturnSeries& market_real, const ReturnSeries& riskfree_real) {
  if (market_real.kind() != SeriesKind::RealLog || riskfree_real.kind() != SeriesKind::RealLog)
    fail(ErrorCode::InvalidArgument, "excess_returns expects two RealLog series");
  require_aligned(market_real.points(), riskfree_real.points(), "excess_returns");
  auto m = market_real.points();
  auto r = riskfree_real.points();
  std::vector<SeriesPoint> out;
  out.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out.push_back({m[i].period, m[i].value - r[i].value});
  return ReturnSeries(SeriesKind::Excess, std::move(out));
}

ReturnSeries demean(const ReturnSeries& series) {
  std::vector<SeriesPoint> out(series.points().begin(), series.points().end());
  for (int pass = 0; pass < 2; ++pass) {
    double sum = 0.0;
    for (const auto& p : out) sum += p.value;
    const double m = sum / static_cast<double>(out.size());
    for (auto& p : out) p.value -= m;
  }
  return ReturnSeries(SeriesKind::Demeaned, std::move(out));
}

SeriesStats summary_stats(const ReturnSeries& series) {
  if (series.size() < 2)
    fail(ErrorCode::TooShort, "summary_stats needs at least 2 observations");
  const auto xs = series.values();
  return {stats::mean(xs), stats::population_std(xs), stats::lag1_autocorrelation(xs),
          xs.size()};
}

IngestResult ingest_market_csv(std::string_view bytes) {
  auto records = parse_market_csv(bytes);
  const auto inflation = inflation_points(records);
  auto real_market = deflate_to_real(nominal_market_series(records), inflation);
  auto real_riskfree = deflate_to_real(nominal_riskfree_series(records), inflation);
  auto excess = excess_returns(real_market, real_riskfree);
  auto demeaned = demean(excess);
  return {std::move(records), std::move(real_market), std::move(real_riskfree),
          std::move(excess), std::move(demeaned)};
}

namespace stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::EmptyInput, kModule, "mean of empty input");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
  const double m = mean(xs);
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

double lag1_autocorrelation(std::span<const double> xs) {
  if (xs.size() < 2) throw Error(ErrorCode::TooShort, kModule, "ar1 needs at least 2 values");
  const double m = mean(xs);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - m;
    den += d * d;
    if (i > 0) num += d * (xs[i - 1] - m);
  }
  if (den == 0.0) return 0.0;
  return std::clamp(num / den, -1.0, 1.0);
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw Error(ErrorCode::EmptyInput, kModule, "median of empty input");
  const auto n = xs.size();
  auto mid = xs.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), mid);
  return (lower + upper) / 2.0;
}

}  // namespace stats

}  // namespace bic
