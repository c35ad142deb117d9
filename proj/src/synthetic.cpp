#include "bic/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace bic {

namespace {

constexpr const char* kModule = "synthetic_and_diagnostics";
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

std::uint64_t NormalStream::next_word() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double NormalStream::next_uniform_open_closed() noexcept {
  return static_cast<double>((next_word() >> 11) + 1) * kTwoPow53Inv;
}

double NormalStream::next_uniform_closed_open() noexcept {
  return static_cast<double>(next_word() >> 11) * kTwoPow53Inv;
}

double NormalStream::next_standard() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform_open_closed();
  const double u2 = next_uniform_closed_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

void GeneratorSpec::validate() const {
  if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, kModule, "mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::InvalidArgument, kModule, "sigma must be positive and finite");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, kModule, "n must be at least 1");
}

ReturnSeries generate_normal_series(const GeneratorSpec& spec) {
  spec.validate();
  NormalStream stream(spec.seed);
  std::vector<SeriesPoint> pts;
  pts.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double z = stream.next_standard();
    pts.push_back({static_cast<std::int64_t>(i + 1), spec.mu + spec.sigma * z});
  }
  return ReturnSeries(SeriesKind::RealLog, std::move(pts));
}

StylizedFactsReport stylized_facts(const ReturnSeries& excess) {
  if (excess.size() < 3)
    throw Error(ErrorCode::TooShort, kModule, "stylized facts need at least 3 observations");
  const auto xs = excess.values();
  const double m = stats::mean(xs);
  const double s = stats::population_std(xs);
  if (!(s > 0.0)) throw Error(ErrorCode::DegenerateSample, kModule, "series has zero variance");
  double m3 = 0.0;
  for (double x : xs) {
    const double z = (x - m) / s;
    m3 += z * z * z;
  }
  return {stats::lag1_autocorrelation(xs), s, m3 / static_cast<double>(xs.size()), xs.size()};
}

std::vector<RawMarketRecord> generate_fixture(const FixtureSpec& spec) {
  NormalStream stream(spec.seed);
  std::vector<RawMarketRecord> rows;
  rows.reserve(spec.years);
  for (std::size_t i = 0; i < spec.years; ++i) {
    const double z_market = stream.next_standard();
    const double z_riskfree = stream.next_standard();
    const double z_inflation = stream.next_standard();
    RawMarketRecord r;
    r.period = spec.first_year + static_cast<std::int64_t>(i);
    r.nominal_log_return = spec.market_mu + spec.market_sigma * z_market;
    r.inflation_log = spec.inflation_mu + spec.inflation_sigma * z_inflation;
    r.riskfree_nominal_return =
        (spec.riskfree_real_mu + spec.riskfree_real_sigma * z_riskfree) + r.inflation_log;
    rows.push_back(r);
  }
  return rows;
}

std::string format_market_csv(const std::vector<RawMarketRecord>& records) {
  std::string out = "period,nominal_log_return,riskfree_nominal_return,inflation_log\n";
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(r.period),
                  r.nominal_log_return, r.riskfree_nominal_return, r.inflation_log);
    out += buf;
  }
  return out;
}

}  // namespace bic
