#include "bic/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bic {

namespace {

constexpr const char* kModule = "bayes_engine";

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, kModule, what);
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidArgument, std::string(what) + " must lie in [0, 1]");
}

double log_odds(double p) {
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return std::log(p) - std::log1p(-p);
}

// Monotone non-decreasing in x; exact 0 and 1 at -inf and +inf.
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Moments {
  double mean;
  double ss;  // sum of squared deviations
};

Moments moments(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double m = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return {m, ss};
}

}  // namespace

GaussianParams::GaussianParams(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!std::isfinite(mu)) fail(ErrorCode::InvalidArgument, "gaussian mean must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    fail(ErrorCode::InvalidArgument, "gaussian sigma must be positive and finite");
}

TwoRegimeModel::TwoRegimeModel(GaussianParams bad, GaussianParams good)
    : bad_(bad), good_(good) {
  if (!(bad_.mu() < good_.mu()))
    fail(ErrorCode::InvalidArgument, "bad-news regime mean must be below the good-news mean");
}

PriorConfig::PriorConfig(std::vector<double> priors) : priors_(std::move(priors)) {
  if (priors_.empty()) fail(ErrorCode::InvalidArgument, "prior list must be nonempty");
  for (double p : priors_) require_probability(p, "prior");
}

void NIGParams::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!std::isfinite(mu0) || !positive(kappa0) || !positive(alpha0) || !positive(beta0))
    fail(ErrorCode::InvalidArgument, "NIG parameters need finite mu0 and positive kappa0, alpha0, beta0");
}

double NIGParams::variance_of_mu() const {
  if (!(alpha0 > 1.0)) fail(ErrorCode::InvalidArgument, "variance of mu needs alpha > 1");
  return beta0 / (kappa0 * (alpha0 - 1.0));
}

double NIGParams::mean_of_variance() const {
  if (!(alpha0 > 1.0)) fail(ErrorCode::InvalidArgument, "mean of sigma^2 needs alpha > 1");
  return beta0 / (alpha0 - 1.0);
}

double NIGParams::variance_of_variance() const {
  if (!(alpha0 > 2.0)) fail(ErrorCode::InvalidArgument, "variance of sigma^2 needs alpha > 2");
  const double m = mean_of_variance();
  return m * m / (alpha0 - 2.0);
}

double bayes_update(double prior, double lik_h, double lik_not_h) {
  require_probability(prior, "prior");
  if (!(lik_h >= 0.0) || !(lik_not_h >= 0.0) || !std::isfinite(lik_h) || !std::isfinite(lik_not_h))
    fail(ErrorCode::InvalidArgument, "likelihoods must be finite and non-negative");
  const double num = prior * lik_h;
  const double den = num + (1.0 - prior) * lik_not_h;
  if (den == 0.0) fail(ErrorCode::ZeroEvidence, "evidence P(Y) is zero");
  return num / den;
}

double bayes_update_log(double prior, double log_lik_h, double log_lik_not_h) {
  if (std::isnan(log_lik_h) || std::isnan(log_lik_not_h))
    fail(ErrorCode::InvalidArgument, "log-likelihoods must not be NaN");
  const double shift = std::max(log_lik_h, log_lik_not_h);
  if (shift == -std::numeric_limits<double>::infinity())
    fail(ErrorCode::ZeroEvidence, "both likelihoods are zero");
  if (shift == std::numeric_limits<double>::infinity())
    fail(ErrorCode::InvalidArgument, "log-likelihoods must be finite or -inf");
  return bayes_update(prior, std::exp(log_lik_h - shift), std::exp(log_lik_not_h - shift));
}

double gaussian_logpdf(double x, const GaussianParams& params) noexcept {
  static const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
  const double z = (x - params.mu()) / params.sigma();
  return -kHalfLog2Pi - std::log(params.sigma()) - 0.5 * z * z;
}

PosteriorPath posterior_path(const ReturnSeries& obs, const TwoRegimeModel& model,
                             double prior) {
  require_probability(prior, "prior");
  double lo = log_odds(prior);
  std::vector<SeriesPoint> points;
  points.reserve(obs.size());
  for (const auto& pt : obs.points()) {
    const double llr =
        gaussian_logpdf(pt.value, model.bad()) - gaussian_logpdf(pt.value, model.good());
    // inf + finite stays inf: priors 0 and 1 are absorbing.
    lo += llr;
    if (std::isnan(lo)) fail(ErrorCode::ZeroEvidence, "posterior undefined at period " + std::to_string(pt.period));
    points.push_back({pt.period, logistic(lo)});
  }
  return {prior, ReturnSeries(SeriesKind::Posterior, std::move(points))};
}

TwoRegimeModel fit_two_regime(const ReturnSeries& obs, double separation) {
  if (!(separation > 0.0) || !std::isfinite(separation))
    fail(ErrorCode::InvalidArgument, "separation must be positive and finite");
  const auto fit = mle_normal(obs);
  const double offset = separation * fit.sigma();
  return TwoRegimeModel(GaussianParams(fit.mu() - offset, fit.sigma()),
                        GaussianParams(fit.mu() + offset, fit.sigma()));
}

GaussianParams mle_normal(std::span<const double> obs) {
  if (obs.size() < 2) fail(ErrorCode::TooShort, "normal MLE needs at least 2 observations");
  const auto [m, ss] = moments(obs);
  const double s = std::sqrt(ss / static_cast<double>(obs.size()));
  if (!(s > 0.0)) fail(ErrorCode::DegenerateSample, "sample has zero variance");
  return GaussianParams(m, s);
}

double normal_loglik(std::span<const double> obs, double mu, double sigma) {
  const GaussianParams params(mu, sigma);
  double total = 0.0;
  for (double x : obs) total += gaussian_logpdf(x, params);
  return total;
}

NIGParams nig_update(const NIGParams& prior, std::span<const double> obs) {
  prior.validate();
  if (obs.empty()) fail(ErrorCode::EmptyInput, "nig_update needs at least one observation");
  const double n = static_cast<double>(obs.size());
  const auto [xbar, ss] = moments(obs);
  NIGParams post;
  post.kappa0 = prior.kappa0 + n;
  post.mu0 = (prior.kappa0 * prior.mu0 + n * xbar) / post.kappa0;
  post.alpha0 = prior.alpha0 + n / 2.0;
  const double shift = xbar - prior.mu0;
  post.beta0 = prior.beta0 + 0.5 * ss + prior.kappa0 * n * shift * shift / (2.0 * post.kappa0);
  return post;
}

double GridRange::at(std::size_t i) const noexcept {
  if (count <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

double GridPosterior::mean_of_mu() const {
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) row += at(i, j);
    total += row * mu[i];
  }
  return total;
}

double GridPosterior::variance_of_mu() const {
  const double m = mean_of_mu();
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) row += at(i, j);
    total += row * (mu[i] - m) * (mu[i] - m);
  }
  return total;
}

GridPosterior grid_posterior(std::span<const double> obs, const GridRange& mu_grid,
                             const GridRange& sigma_grid, const NIGParams& prior) {
  prior.validate();
  if (obs.empty()) fail(ErrorCode::EmptyInput, "grid_posterior needs observations");
  if (mu_grid.count == 0 || sigma_grid.count == 0)
    fail(ErrorCode::InvalidArgument, "grids must be nonempty");
  if (!(mu_grid.hi >= mu_grid.lo) || !(sigma_grid.hi >= sigma_grid.lo))
    fail(ErrorCode::InvalidArgument, "grid ranges need hi >= lo");
  if (!(sigma_grid.lo > 0.0)) fail(ErrorCode::InvalidArgument, "sigma grid must be strictly positive");

  GridPosterior out;
  out.mu.resize(mu_grid.count);
  out.sigma.resize(sigma_grid.count);
  for (std::size_t i = 0; i < mu_grid.count; ++i) out.mu[i] = mu_grid.at(i);
  for (std::size_t j = 0; j < sigma_grid.count; ++j) out.sigma[j] = sigma_grid.at(j);

  out.mass.resize(mu_grid.count * sigma_grid.count);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.mu.size(); ++i) {
    const double mu = out.mu[i];
    for (std::size_t j = 0; j < out.sigma.size(); ++j) {
      const double sigma = out.sigma[j];
      const double var = sigma * sigma;
      // log NIG(mu, sigma^2) up to a constant, plus log|d sigma^2 / d sigma|.
      const double log_prior = -(prior.alpha0 + 1.0) * std::log(var) - prior.beta0 / var
                               - 0.5 * std::log(var)
                               - prior.kappa0 * (mu - prior.mu0) * (mu - prior.mu0) / (2.0 * var)
                               + std::log(2.0 * sigma);
      const GaussianParams lik(mu, sigma);
      double log_lik = 0.0;
      for (double x : obs) log_lik += gaussian_logpdf(x, lik);
      const double lp = log_prior + log_lik;
      out.mass[i * out.sigma.size() + j] = lp;
      peak = std::max(peak, lp);
    }
  }
  double total = 0.0;
  for (double& v : out.mass) {
    v = std::exp(v - peak);
    total += v;
  }
  for (double& v : out.mass) v /= total;
  return out;
}

std::pair<GridRange, GridRange> nig_grid_ranges(const NIGParams& posterior, std::size_t points,
                                                double width_sd) {
  const double mu_sd = std::sqrt(posterior.variance_of_mu());
  const double var_mean = posterior.mean_of_variance();
  const double var_sd = std::sqrt(posterior.variance_of_variance());
  const double var_lo = std::max(var_mean - width_sd * var_sd, 0.02 * var_mean);
  const double var_hi = var_mean + width_sd * var_sd;
  return {GridRange{posterior.mu0 - width_sd * mu_sd, posterior.mu0 + width_sd * mu_sd, points},
          GridRange{std::sqrt(var_lo), std::sqrt(var_hi), points}};
}

}  // namespace bic
