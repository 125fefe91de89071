#pragma once

#include <random>
#include <span>

namespace agora::num {

/// Normal(mu, sigma^2) restricted and renormalized to [lower, upper].
struct TruncGaussParams {
  double mu = 0.0;
  double sigma = 1.0;
  double lower = 0.0;
  double upper = 1.0;

  void validate() const;  // throws std::invalid_argument on sigma<=0 or lower>=upper
};

double tg_pdf(double x, const TruncGaussParams& p);
double tg_log_pdf(double x, const TruncGaussParams& p);
double tg_cdf(double x, const TruncGaussParams& p);

/// Inverse CDF; u in [0,1], result in [lower, upper].
double tg_quantile(double u, const TruncGaussParams& p);

/// Inverse-CDF sampling from a 53-bit uniform draw.
double tg_sample(const TruncGaussParams& p, std::mt19937_64& rng);

/// Mean of the truncated distribution (closed form).
double tg_mean(const TruncGaussParams& p);

/// Gradient of log density w.r.t. (mu, log sigma), truncation-normalizer
/// terms included. Throws if x lies outside [lower, upper].
struct TgGrad {
  double d_mu = 0.0;
  double d_log_sigma = 0.0;
};
TgGrad tg_logpdf_grad(double x, const TruncGaussParams& p);

inline constexpr double kTgSigmaMin = 1e-3;

/// Maximum-likelihood fit on [lower, upper] by gradient ascent through
/// (mu, log sigma). Initialized at the sample moments; stops when the
/// parameter step drops below 1e-6 or after 500 iterations. sigma is
/// clamped at kTgSigmaMin (degenerate all-equal samples land there).
/// Throws if fewer than 10 samples or any sample is outside the bounds.
TruncGaussParams tg_mle(std::span<const double> samples, double lower, double upper);

}  // namespace agora::num
