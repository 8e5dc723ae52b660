#pragma once

#include "optret/params.hpp"

namespace optret {

enum class UtilitySide { PRE, POST };

/// Discount-weighted remaining income horizon
/// (1 - e^{-kappa (T - t)}) / kappa, with the kappa = 0 limit T - t.
double q_factor(double t, double T, double kappa);

/// Validated parameter set plus the closed-form building blocks every solver
/// consumes. All methods are pure; instances are immutable and cheap to copy.
class Model {
 public:
  explicit Model(const ModelParams& params, bool override_assumptions = false);

  const ModelParams& params() const { return params_; }
  const DerivedConstants& constants() const { return constants_; }
  bool assumptions_overridden() const { return overridden_; }
  const std::string& fingerprint() const { return fingerprint_; }

  /// Mortality force after `s` years starting from level `m`: m * e^{a s}.
  double mortality_at(double m, double s) const;

  /// Integrated mortality int_0^s m e^{a u} du = m (e^{a s} - 1) / a,
  /// continuous at a = 0 where it equals m * s.
  double mortality_integral(double m, double s) const;

  /// Discount-weighted remaining income horizon
  /// q(t) = (1 - e^{-kappa (T - t)}) / kappa (T - t when kappa = 0).
  /// Human capital is g(t, y) = q(t) * y.
  double q_factor(double t) const;

  /// Convex dual of the utility functions:
  /// PRE  -> gamma/(1-gamma) x^{(gamma-1)/gamma},
  /// POST -> K^{(1-gamma)/gamma} times the PRE value.
  double dual_utility(double x, UtilitySide side) const;

  /// Deterministic growth factor of the power-transformed reduced process,
  /// N(s, m) = exp(rate1 * s - mortality_integral(m, s) / gamma).
  double growth_factor(double s, double m) const;

  /// Running reward of the reduced stopping problem,
  /// (1 - K^{(1-gamma)/gamma}) U1*(x) + 1. Its unique positive root is
  /// L_terminal.
  double running_reward(double x) const;

  // Frequently used combinations, precomputed once.
  double k_pow() const { return k_pow_; }              ///< K^{(1-gamma)/gamma}
  double reward_coef() const { return reward_coef_; }  ///< (1-k_pow)*rho
  double growth_rate() const { return growth_rate_; }  ///< rate1 in N(s,m)

 private:
  ModelParams params_;
  DerivedConstants constants_;
  bool overridden_ = false;
  std::string fingerprint_;
  double k_pow_;
  double reward_coef_;
  double growth_rate_;
};

}  // namespace optret
