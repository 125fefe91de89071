#pragma once

#include <cstdint>
#include <random>

namespace agora::num {

/// Standard normal density.
double normal_pdf(double z);

/// Standard normal CDF, computed through erfc for full double accuracy.
double normal_cdf(double z);

/// Inverse standard normal CDF (Wichura's AS241 rational approximation,
/// absolute error below 1e-15 over (0,1)). Throws for p outside (0,1).
double normal_quantile(double p);

/// Uniform draw in [0,1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Stable child seed for an independent RNG stream (splitmix64 mix).
std::uint64_t child_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace agora::num
