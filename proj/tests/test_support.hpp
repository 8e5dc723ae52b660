#pragma once

#include <random>

#include "optret/model.hpp"

namespace optret::test {

/// Table-1 style calibration used across the suites.
inline ModelParams table1() {
  ModelParams p;
  p.mu = 0.08;
  p.sigma = 0.2;
  p.r = 0.04;
  p.beta = 0.01;
  p.gamma = 3.0;
  p.mu_y = 0.01;
  p.sigma_y = 0.05;
  p.a = 1.0 / 10.5;
  p.T_horizon = 10.0;
  p.K = 2.0;
  p.m0 = 0.004;
  return p;
}

/// Low-risk-aversion variant (gamma < 1); beta raised to keep the discount
/// rate bound satisfied.
inline ModelParams low_gamma() {
  ModelParams p = table1();
  p.gamma = 0.5;
  p.beta = 0.05;
  return p;
}

/// Random valid parameter draws for property-style tests. Both regimes.
inline ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ModelParams p = table1();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    p.sigma = 0.15 + 0.25 * u01(rng);
    p.mu = p.r + (0.02 + 0.08 * u01(rng));
    p.gamma = u01(rng) < 0.5 ? 0.3 + 0.6 * u01(rng) : 1.5 + 2.0 * u01(rng);
    p.sigma_y = 0.01 + 0.05 * u01(rng);
    p.mu_y = 0.005 + 0.02 * u01(rng);
    p.K = 1.2 + 2.0 * u01(rng);
    p.a = 0.05 + 0.15 * u01(rng);
    p.m0 = 0.002 + 0.01 * u01(rng);
    p.T_horizon = 5.0 + 10.0 * u01(rng);
    const double theta = (p.mu - p.r) / p.sigma;
    const double bound = (1.0 - p.gamma) * (p.r + 0.5 * theta * theta) +
                         (p.gamma - 1.0) * (p.gamma - 1.0) * theta * theta /
                             (2.0 * p.gamma);
    p.beta = std::max(0.01, bound + 0.01);
    if (p.sigma_y * p.gamma < theta &&
        p.r - p.mu_y + p.sigma_y * theta > 0)
      return p;
  }
  return table1();
}

}  // namespace optret::test
