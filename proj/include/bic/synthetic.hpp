#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bic/series.hpp"

namespace bic {

// Deterministic standard-normal stream.
//
// Uniforms come from SplitMix64 (state += 0x9E3779B97F4A7C15, then the
// Stafford "mix13" finalizer), so the k-th raw word depends only on the seed
// and k. Each pair of words (w1, w2) maps to
//   u1 = ((w1 >> 11) + 1) * 2^-53  in (0, 1]
//   u2 =  (w2 >> 11)      * 2^-53  in [0, 1)
// and the Box-Muller transform yields
//   z1 = sqrt(-2 ln u1) * cos(2 pi u2),  z2 = sqrt(-2 ln u1) * sin(2 pi u2),
// emitted in that order. Integer arithmetic is fixed-width; the floating
// transform relies only on std::log/sqrt/cos/sin.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_word() noexcept;
  double next_uniform_open_closed() noexcept;
  double next_uniform_closed_open() noexcept;
  double next_standard() noexcept;

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct GeneratorSpec {
  double mu = 0.0;
  double sigma = 1.0;
  std::size_t n = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

// mu + sigma * z_i over the standardized stream; RealLog, periods 1..n.
ReturnSeries generate_normal_series(const GeneratorSpec& spec);

struct StylizedFactsReport {
  double ar1_excess = 0.0;
  double annualized_vol = 0.0;
  double skewness = 0.0;
  std::size_t n = 0;
};

StylizedFactsReport stylized_facts(const ReturnSeries& excess);

// Parameters of the bundled annual fixture. The risk-free parameters
// describe the real rate; the nominal column is real rate + inflation.
struct FixtureSpec {
  std::uint64_t seed = 19272010;
  std::int64_t first_year = 1927;
  std::size_t years = 84;
  double market_mu = 0.06;
  double market_sigma = 0.20;
  double riskfree_real_mu = 0.008;
  double riskfree_real_sigma = 0.002;
  double inflation_mu = 0.03;
  double inflation_sigma = 0.04;
};

// Rows draw three consecutive standard normals from one stream, in the
// order market, real risk-free, inflation.
std::vector<RawMarketRecord> generate_fixture(const FixtureSpec& spec = {});

// Ingest-format CSV with %.17g values.
std::string format_market_csv(const std::vector<RawMarketRecord>& records);

}  // namespace bic
