#include <cmath>
#include <random>

#include "bic/bayes.hpp"
#include "bic/synthetic.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bic;

namespace {

ReturnSeries series_of(const std::vector<double>& xs) {
  std::vector<SeriesPoint> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back({static_cast<std::int64_t>(i), xs[i]});
  return ReturnSeries(SeriesKind::Demeaned, std::move(pts));
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected bic::Error");
  return ErrorCode::InvalidArgument;
}

const TwoRegimeModel kUnitModel(GaussianParams(-1.0, 1.0), GaussianParams(1.0, 1.0));

}  // namespace

TEST_CASE("bayes_update examples") {
  for (double lik : {1e-300, 0.3, 1.0, 7.5, 1e300}) CHECK(bayes_update(0.5, lik, lik) == 0.5);
  CHECK(bayes_update(0.0, 3.0, 2.0) == 0.0);
  CHECK(bayes_update(0.0, 0.0, 2.0) == 0.0);
  CHECK(bayes_update(0.25, 2.0, 1.0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(bayes_update(1.0, 2.0, 0.0) == 1.0);
}

TEST_CASE("bayes_update errors") {
  CHECK(code_of([] { bayes_update(0.0, 1.0, 0.0); }) == ErrorCode::ZeroEvidence);
  CHECK(code_of([] { bayes_update(0.5, 0.0, 0.0); }) == ErrorCode::ZeroEvidence);
  CHECK(code_of([] { bayes_update(1.2, 1.0, 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { bayes_update(0.5, -1.0, 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { bayes_update_log(0.5, -INFINITY, -INFINITY); }) == ErrorCode::ZeroEvidence);
}

TEST_CASE("bayes_update normalization and scale invariance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> lik(1e-3, 10.0);
  std::uniform_real_distribution<double> log_c(-20.0, 20.0);
  for (int i = 0; i < 2000; ++i) {
    const double prior = u(rng), lh = lik(rng), lnh = lik(rng);
    const double p = bayes_update(prior, lh, lnh);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    const double c = std::exp(log_c(rng));
    CHECK(std::abs(bayes_update(prior, c * lh, c * lnh) - p) <= 1e-15);
    CHECK(bayes_update_log(prior, std::log(lh), std::log(lnh)) ==
          doctest::Approx(p).epsilon(1e-13));
  }
}

TEST_CASE("gaussian_logpdf") {
  const GaussianParams std_normal(0.0, 1.0);
  CHECK(gaussian_logpdf(0.0, std_normal) == doctest::Approx(-0.918938533204672742).epsilon(1e-15));
  CHECK(gaussian_logpdf(1.0, std_normal) == doctest::Approx(-1.418938533204672742).epsilon(1e-15));
  const GaussianParams p(0.3, 2.0);
  for (double x : {-5.0, -0.1, 0.29, 0.31, 4.0}) CHECK(gaussian_logpdf(x, p) < gaussian_logpdf(0.3, p));
  CHECK(code_of([] { GaussianParams(0.0, 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("posterior_path examples") {
  const auto obs = series_of({0.7, -2.0, 0.1, 3.0});
  for (double p : posterior_path(obs, kUnitModel, 0.0).series.values()) CHECK(p == 0.0);
  for (double p : posterior_path(obs, kUnitModel, 1.0).series.values()) CHECK(p == 1.0);

  const auto zeros = series_of({0.0, 0.0, 0.0, 0.0, 0.0});
  for (double p : posterior_path(zeros, kUnitModel, 0.5).series.values()) CHECK(p == 0.5);

  // Likelihood ratio e^2 per observation: e^2/(e^2+1), e^4/(e^4+1).
  const auto path = posterior_path(series_of({-1.0, -1.0}), kUnitModel, 0.5);
  CHECK(path.series.points()[0].value == doctest::Approx(0.880797077977882444).epsilon(1e-14));
  CHECK(path.series.points()[1].value == doctest::Approx(0.982013790037908442).epsilon(1e-14));
  CHECK(path.series.kind() == SeriesKind::Posterior);
  CHECK(path.series.size() == 2);
  CHECK(path.prior == 0.5);
}

TEST_CASE("posterior_path recursion matches chained bayes_update") {
  const auto obs = series_of({-0.4, 0.2, 1.3, -0.9, 0.05});
  const auto path = posterior_path(obs, kUnitModel, 0.3);
  double p = 0.3;
  for (std::size_t t = 0; t < obs.size(); ++t) {
    const double x = obs.points()[t].value;
    p = bayes_update(p, std::exp(gaussian_logpdf(x, kUnitModel.bad())),
                     std::exp(gaussian_logpdf(x, kUnitModel.good())));
    CHECK(path.series.points()[t].value == doctest::Approx(p).epsilon(1e-13));
  }
}

TEST_CASE("posterior_path equals the batch posterior and is monotone in the prior") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> xs_dist(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs(1 + trial % 40);
    for (auto& x : xs) x = xs_dist(rng);
    const double prior = u(rng);
    const auto path = posterior_path(series_of(xs), kUnitModel, prior);
    const double seq = std::log(path.series.points().back().value);
    const auto batch = oracle::batch_log_posterior(xs, prior, -1.0L, 1.0L, 1.0L);
    CHECK(std::abs(seq - static_cast<double>(batch)) <= 1e-10);

    const double lower = prior * u(rng);
    const auto low_path = posterior_path(series_of(xs), kUnitModel, lower);
    for (std::size_t t = 0; t < xs.size(); ++t)
      CHECK(path.series.points()[t].value >= low_path.series.points()[t].value);
  }
}

TEST_CASE("fit_two_regime") {
  const auto m = fit_two_regime(series_of({-1.0, 1.0}), 0.5);
  CHECK(m.bad().mu() == -0.5);
  CHECK(m.good().mu() == 0.5);
  CHECK(m.bad().sigma() == 1.0);
  CHECK(m.good().sigma() == 1.0);

  const auto m2 = fit_two_regime(series_of({0.0, 2.0}), 1.0);
  CHECK(m2.bad().mu() == 0.0);
  CHECK(m2.good().mu() == 2.0);
  CHECK(m2.bad().sigma() == 1.0);

  CHECK(code_of([] { fit_two_regime(series_of({0.3, 0.3, 0.3})); }) == ErrorCode::DegenerateSample);
  CHECK(code_of([] { fit_two_regime(series_of({0.3})); }) == ErrorCode::TooShort);
  CHECK(code_of([] { fit_two_regime(series_of({0.3, 1.0}), 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mle_normal") {
  const auto p = mle_normal(std::vector<double>{0.0, 2.0});
  CHECK(p.mu() == 1.0);
  CHECK(p.sigma() == 1.0);
  CHECK(code_of([] { mle_normal(std::vector<double>{1.0, 1.0, 1.0}); }) == ErrorCode::DegenerateSample);
  CHECK(code_of([] { mle_normal(std::vector<double>{1.0}); }) == ErrorCode::TooShort);

  const auto draws = generate_normal_series({3.0, 2.0, 10000, 42});
  const auto fit = mle_normal(draws);
  CHECK(std::abs(fit.mu() - 3.0) <= 0.08);
  CHECK(fit.mu() == doctest::Approx(static_cast<double>(oracle::mean(draws.values()))).epsilon(1e-12));
  CHECK(fit.sigma() ==
        doctest::Approx(static_cast<double>(oracle::population_std(draws.values()))).epsilon(1e-12));
}

namespace {

std::vector<double> standardized(std::vector<double> xs) {
  const double m = static_cast<double>(oracle::mean(xs));
  const double s = static_cast<double>(oracle::population_std(xs));
  for (double& x : xs) x = (x - m) / s;
  return xs;
}

}  // namespace

TEST_CASE("mle_normal is a stationary point of the log-likelihood") {
  const double h = 1e-4;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto xs = standardized(generate_normal_series({0.0, 1.0, 50, seed}).values());
    const auto fit = mle_normal(xs);
    const double g_mu = (normal_loglik(xs, fit.mu() + h, fit.sigma()) -
                         normal_loglik(xs, fit.mu() - h, fit.sigma())) / (2 * h);
    const double g_sigma = (normal_loglik(xs, fit.mu(), fit.sigma() + h) -
                            normal_loglik(xs, fit.mu(), fit.sigma() - h)) / (2 * h);
    CHECK(std::abs(g_mu) < 1e-6);
    CHECK(std::abs(g_sigma) < 1e-6);
  }
  // Larger n: the sigma difference quotient is dominated by the truncation
  // term h^2/6 * d3/dsigma3 = h^2 * 10n / (6 sigma^3).
  const auto xs = standardized(generate_normal_series({0.0, 1.0, 200, 99}).values());
  const auto fit = mle_normal(xs);
  const double g_sigma = (normal_loglik(xs, fit.mu(), fit.sigma() + h) -
                          normal_loglik(xs, fit.mu(), fit.sigma() - h)) / (2 * h);
  const double predicted = h * h * 10.0 * 200.0 / (6.0 * std::pow(fit.sigma(), 3));
  CHECK(std::abs(g_sigma - predicted) < 1e-8);
}

TEST_CASE("nig_update examples") {
  NIGParams prior{0.7, 1.0, 2.0, 0.5};
  auto post = nig_update(prior, std::vector<double>{0.7});
  CHECK(post.mu0 == 0.7);
  CHECK(post.kappa0 == 2.0);
  CHECK(post.alpha0 == 2.5);
  CHECK(post.beta0 == 0.5);

  post = nig_update({0.0, 1.0, 1.0, 1.0}, std::vector<double>{2.0});
  CHECK(post.mu0 == 1.0);
  CHECK(post.kappa0 == 2.0);
  CHECK(post.alpha0 == 1.5);
  CHECK(post.beta0 == 2.0);

  CHECK(code_of([] { nig_update({0.0, 0.0, 1.0, 1.0}, std::vector<double>{1.0}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { nig_update({}, std::vector<double>{}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("nig_update sequential equals batch") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const NIGParams prior{u(rng), 0.5 + std::abs(u(rng)), 0.5 + std::abs(u(rng)), 0.5 + std::abs(u(rng))};
    const double x1 = u(rng), x2 = u(rng);
    const auto seq = nig_update(nig_update(prior, std::vector<double>{x1}), std::vector<double>{x2});
    const auto batch = nig_update(prior, std::vector<double>{x1, x2});
    CHECK(seq.mu0 == doctest::Approx(batch.mu0).epsilon(1e-12));
    CHECK(seq.kappa0 == batch.kappa0);
    CHECK(seq.alpha0 == batch.alpha0);
    CHECK(seq.beta0 == doctest::Approx(batch.beta0).epsilon(1e-12));
  }
}

TEST_CASE("grid_posterior normalization and degenerate grid") {
  const std::vector<double> obs{0.3, -0.2, 0.5, 0.1};
  const NIGParams prior{0.0, 1.0, 2.0, 1.0};
  const auto g = grid_posterior(obs, {-2.0, 2.0, 41}, {0.1, 3.0, 37}, prior);
  double total = 0.0;
  for (double m : g.mass) total += m;
  CHECK(std::abs(total - 1.0) <= 1e-12);

  const auto single = grid_posterior(obs, {0.25, 0.25, 1}, {0.8, 0.8, 1}, prior);
  REQUIRE(single.mass.size() == 1);
  CHECK(single.mass[0] == 1.0);

  // Far-out observations would underflow a direct product of densities.
  const std::vector<double> far(50, 40.0);
  const auto g2 = grid_posterior(far, {-1.0, 1.0, 11}, {0.01, 0.02, 11}, prior);
  total = 0.0;
  for (double m : g2.mass) total += m;
  CHECK(std::abs(total - 1.0) <= 1e-12);

  CHECK(code_of([&] { grid_posterior(obs, {0, 1, 3}, {0.0, 1.0, 3}, prior); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { grid_posterior(obs, {0, 1, 0}, {0.1, 1.0, 3}, prior); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("grid_posterior agrees with the conjugate update") {
  const NIGParams prior{0.0, 1.0, 1.0, 1.0};
  const auto xs = generate_normal_series({0.4, 1.3, 50, 77}).values();
  const auto post = nig_update(prior, xs);
  const auto [mu_range, sigma_range] = nig_grid_ranges(post, 400, 6.0);
  const auto g = grid_posterior(xs, mu_range, sigma_range, prior);
  CHECK(std::abs(g.mean_of_mu() - post.mean_of_mu()) <= 1e-3 * std::abs(post.mean_of_mu()));
  CHECK(std::abs(g.variance_of_mu() - post.variance_of_mu()) <= 1e-3 * post.variance_of_mu());
}
