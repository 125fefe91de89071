#include "agora/num/trunc_gauss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agora/num/special.hpp"

namespace agora::num {

namespace {

struct Frame {
  double alpha;    // (lower - mu) / sigma
  double beta;     // (upper - mu) / sigma
  double z;        // Phi(beta) - Phi(alpha), clamped away from zero
  double phi_a;    // pdf at alpha
  double phi_b;    // pdf at beta
  double cdf_a;    // Phi(alpha)
};

Frame make_frame(const TruncGaussParams& p) {
  Frame f;
  f.alpha = (p.lower - p.mu) / p.sigma;
  f.beta = (p.upper - p.mu) / p.sigma;
  f.cdf_a = normal_cdf(f.alpha);
  f.z = std::max(normal_cdf(f.beta) - f.cdf_a, 1e-300);
  f.phi_a = normal_pdf(f.alpha);
  f.phi_b = normal_pdf(f.beta);
  return f;
}

}  // namespace

void TruncGaussParams::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("TruncGaussParams: sigma must be positive");
  if (!(lower < upper)) throw std::invalid_argument("TruncGaussParams: lower must be below upper");
}

double tg_pdf(double x, const TruncGaussParams& p) {
  p.validate();
  if (x < p.lower || x > p.upper) return 0.0;
  const Frame f = make_frame(p);
  return normal_pdf((x - p.mu) / p.sigma) / (p.sigma * f.z);
}

double tg_log_pdf(double x, const TruncGaussParams& p) {
  p.validate();
  if (x < p.lower || x > p.upper) return -std::numeric_limits<double>::infinity();
  const Frame f = make_frame(p);
  const double z = (x - p.mu) / p.sigma;
  return -0.5 * z * z - 0.5 * std::log(2.0 * M_PI) - std::log(p.sigma) - std::log(f.z);
}

double tg_cdf(double x, const TruncGaussParams& p) {
  p.validate();
  if (x <= p.lower) return 0.0;
  if (x >= p.upper) return 1.0;
  const Frame f = make_frame(p);
  const double c = (normal_cdf((x - p.mu) / p.sigma) - f.cdf_a) / f.z;
  return std::clamp(c, 0.0, 1.0);
}

double tg_quantile(double u, const TruncGaussParams& p) {
  p.validate();
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("tg_quantile: u outside [0,1]");
  const Frame f = make_frame(p);
  double inner = f.cdf_a + u * f.z;
  inner = std::clamp(inner, 1e-300, 1.0 - 1e-16);
  const double x = p.mu + p.sigma * normal_quantile(inner);
  return std::clamp(x, p.lower, p.upper);
}

double tg_sample(const TruncGaussParams& p, std::mt19937_64& rng) {
  return tg_quantile(uniform_unit(rng), p);
}

double tg_mean(const TruncGaussParams& p) {
  p.validate();
  const Frame f = make_frame(p);
  return p.mu + p.sigma * (f.phi_a - f.phi_b) / f.z;
}

TgGrad tg_logpdf_grad(double x, const TruncGaussParams& p) {
  p.validate();
  if (x < p.lower || x > p.upper) {
    throw std::invalid_argument("tg_logpdf_grad: x outside support");
  }
  const Frame f = make_frame(p);
  const double z = (x - p.mu) / p.sigma;
  TgGrad g;
  g.d_mu = z / p.sigma - (f.phi_a - f.phi_b) / (p.sigma * f.z);
  g.d_log_sigma = z * z - 1.0 - (f.alpha * f.phi_a - f.beta * f.phi_b) / f.z;
  return g;
}

TruncGaussParams tg_mle(std::span<const double> samples, double lower, double upper) {
  if (!(lower < upper)) throw std::invalid_argument("tg_mle: lower must be below upper");
  if (samples.size() < 10) throw std::invalid_argument("tg_mle: need at least 10 samples");
  for (double x : samples) {
    if (x < lower || x > upper) throw std::invalid_argument("tg_mle: sample outside [lower, upper]");
  }

  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= n;

  double mu = mean;
  double log_sigma = std::log(std::max(std::sqrt(var), kTgSigmaMin));
  const double log_sigma_min = std::log(kTgSigmaMin);

  auto mean_loglik = [&](double m, double ls) {
    TruncGaussParams q{m, std::exp(ls), lower, upper};
    double acc = 0.0;
    for (double x : samples) acc += tg_log_pdf(x, q);
    return acc / n;
  };

  // Ascent with a multiplicative step-size schedule: grow on improvement,
  // shrink and retry otherwise.
  double step = 0.1;
  double best = mean_loglik(mu, log_sigma);
  for (int iter = 0; iter < 500; ++iter) {
    TruncGaussParams q{mu, std::exp(log_sigma), lower, upper};
    double g_mu = 0.0;
    double g_ls = 0.0;
    for (double x : samples) {
      const TgGrad g = tg_logpdf_grad(x, q);
      g_mu += g.d_mu;
      g_ls += g.d_log_sigma;
    }
    g_mu /= n;
    g_ls /= n;

    const double norm = std::hypot(g_mu, g_ls);
    if (norm < 1e-12) break;

    double new_mu = mu;
    double new_ls = log_sigma;
    bool moved = false;
    while (step > 1e-12) {
      new_mu = mu + step * g_mu;
      new_ls = std::max(log_sigma + step * g_ls, log_sigma_min);
      const double cand = mean_loglik(new_mu, new_ls);
      if (cand > best) {
        best = cand;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;

    const double delta = std::max(std::fabs(new_mu - mu), std::fabs(new_ls - log_sigma));
    mu = new_mu;
    log_sigma = new_ls;
    step = std::min(step * 1.5, 1.0);
    if (delta < 1e-6) break;
  }

  TruncGaussParams out{mu, std::max(std::exp(log_sigma), kTgSigmaMin), lower, upper};
  out.validate();
  return out;
}

}  // namespace agora::num
