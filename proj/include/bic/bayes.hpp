#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bic/series.hpp"

namespace bic {

class GaussianParams {
 public:
  // Throws InvalidArgument unless sigma is positive and finite.
  GaussianParams(double mu, double sigma);

  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }

  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;

 private:
  double mu_;
  double sigma_;
};

// Likelihoods for the bad-news hypothesis and its complement.
class TwoRegimeModel {
 public:
  // Requires bad.mu < good.mu.
  TwoRegimeModel(GaussianParams bad, GaussianParams good);

  const GaussianParams& bad() const noexcept { return bad_; }
  const GaussianParams& good() const noexcept { return good_; }

 private:
  GaussianParams bad_;
  GaussianParams good_;
};

class PriorConfig {
 public:
  explicit PriorConfig(std::vector<double> priors);
  static PriorConfig default_sweep() { return PriorConfig({0.0, 0.25, 0.5, 0.75}); }

  std::span<const double> priors() const noexcept { return priors_; }

 private:
  std::vector<double> priors_;
};

struct PosteriorPath {
  double prior = 0.0;
  ReturnSeries series;  // kind Posterior, one point per observation
};

struct NIGParams {
  double mu0 = 0.0;
  double kappa0 = 1.0;
  double alpha0 = 1.0;
  double beta0 = 1.0;

  // Throws InvalidArgument unless kappa0, alpha0, beta0 are positive and finite.
  void validate() const;

  // Marginal posterior moments of the mean (Student-t with 2*alpha0 dof).
  // variance requires alpha0 > 1.
  double mean_of_mu() const noexcept { return mu0; }
  double variance_of_mu() const;
  // Moments of sigma^2 ~ InvGamma(alpha0, beta0); variance requires alpha0 > 2.
  double mean_of_variance() const;
  double variance_of_variance() const;
};

// Bayes' rule for a binary hypothesis: prior*lik_h / (prior*lik_h + (1-prior)*lik_not_h).
double bayes_update(double prior, double lik_h, double lik_not_h);

// Same update with log-likelihoods, evaluated after shifting by their maximum.
double bayes_update_log(double prior, double log_lik_h, double log_lik_not_h);

double gaussian_logpdf(double x, const GaussianParams& params) noexcept;

// Recursive bad-news posterior. The recursion is carried in log-odds form,
// which is algebraically identical to chaining bayes_update and keeps the
// priors 0 and 1 exactly absorbing.
PosteriorPath posterior_path(const ReturnSeries& obs, const TwoRegimeModel& model,
                             double prior);

// bad = N(m - separation*s, s), good = N(m + separation*s, s) with the sample
// mean m and population std s.
TwoRegimeModel fit_two_regime(const ReturnSeries& obs, double separation = 0.5);

GaussianParams mle_normal(std::span<const double> obs);
inline GaussianParams mle_normal(const ReturnSeries& obs) { return mle_normal(obs.values()); }

double normal_loglik(std::span<const double> obs, double mu, double sigma);

NIGParams nig_update(const NIGParams& prior, std::span<const double> obs);

struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  // Evenly spaced points including both ends; a single point sits at lo.
  double at(std::size_t i) const noexcept;
};

struct GridPosterior {
  std::vector<double> mu;
  std::vector<double> sigma;
  // Row-major [mu index][sigma index], sums to 1.
  std::vector<double> mass;

  double at(std::size_t i_mu, std::size_t j_sigma) const {
    return mass[i_mu * sigma.size() + j_sigma];
  }
  double mean_of_mu() const;
  double variance_of_mu() const;
};

// Brute-force posterior over a (mu, sigma) grid: NIG log-prior (with the
// d sigma^2 = 2 sigma d sigma Jacobian) plus the summed gaussian_logpdf of the
// observations, normalized by log-sum-exp. Cells are reduced in fixed order.
GridPosterior grid_posterior(std::span<const double> obs, const GridRange& mu_grid,
                             const GridRange& sigma_grid, const NIGParams& prior);

// Grid spanning +/- width_sd marginal standard deviations of mu around the
// NIG posterior mean, and the matching range of sigma from the inverse-gamma
// moments of sigma^2 (lower end floored at a small fraction of its mean).
std::pair<GridRange, GridRange> nig_grid_ranges(const NIGParams& posterior,
                                                std::size_t points, double width_sd);

}  // namespace bic
