#include "optret/model.hpp"

#include <cmath>

#include "optret/errors.hpp"
#include "optret/numeric.hpp"

namespace optret {

double q_factor(double t, double T, double kappa) {
  const double tau = T - t;
  if (kappa == 0.0) return tau;
  return -std::expm1(-kappa * tau) / kappa;
}

Model::Model(const ModelParams& params, bool override_assumptions)
    : params_(params),
      constants_(derive_constants(params, override_assumptions)),
      overridden_(override_assumptions && !check_assumptions(params).all_passed()),
      fingerprint_(params.fingerprint()) {
  const double g = params_.gamma;
  k_pow_ = std::pow(params_.K, (1.0 - g) / g);
  reward_coef_ = (1.0 - k_pow_) * constants_.rho;
  const double s1 = constants_.sigma1;
  const double gm = (g - 1.0) / g;
  growth_rate_ = -(params_.beta - params_.r) / g +
                 gm * (constants_.mu1 - 0.5 * s1 * s1) +
                 0.5 * gm * gm * s1 * s1;
}

double Model::mortality_at(double m, double s) const {
  return m * std::exp(params_.a * s);
}

double Model::mortality_integral(double m, double s) const {
  if (params_.a == 0.0) return m * s;
  return m * std::expm1(params_.a * s) / params_.a;
}

double Model::q_factor(double t) const {
  return optret::q_factor(t, params_.T_horizon, constants_.kappa);
}

double Model::dual_utility(double x, UtilitySide side) const {
  if (x <= 0)
    throw NonPositiveArgument("dual_utility: x must be > 0, got " +
                              num::format_double(x));
  const double g = params_.gamma;
  const double u1 = g / (1.0 - g) * std::pow(x, (g - 1.0) / g);
  return side == UtilitySide::PRE ? u1 : k_pow_ * u1;
}

double Model::growth_factor(double s, double m) const {
  return std::exp(growth_rate_ * s - mortality_integral(m, s) / params_.gamma);
}

double Model::running_reward(double x) const {
  return reward_coef_ * std::pow(x, (params_.gamma - 1.0) / params_.gamma) + 1.0;
}

}  // namespace optret
