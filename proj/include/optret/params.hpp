#pragma once

#include <map>
#include <string>
#include <vector>

namespace optret {

/// Market, preference, income and mortality inputs. Rates are per year,
/// volatilities per sqrt(year), times in years.
struct ModelParams {
  double mu = 0.08;        ///< stock drift
  double sigma = 0.2;      ///< stock volatility
  double r = 0.04;         ///< risk-free rate
  double beta = 0.01;      ///< subjective discount rate
  double gamma = 3.0;      ///< relative risk aversion (!= 1)
  double mu_y = 0.01;      ///< labor income growth
  double sigma_y = 0.05;   ///< labor income volatility
  double a = 1.0 / 10.5;   ///< Gompertz growth rate of the mortality force
  double T_horizon = 10.0; ///< years until mandatory retirement
  double K = 2.0;          ///< post-retirement utility weight (> 1)
  double m0 = 0.004;       ///< force of mortality at the evaluation date

  /// Field names in canonical order, matching the config-file keys.
  static const std::vector<std::string>& field_names();

  double get(const std::string& field) const;
  void set(const std::string& field, double value);

  /// Parse from flat `key = value` text. Unknown or duplicate keys are
  /// ConfigParse errors; all fields must be present.
  static ModelParams from_kv_text(const std::string& text);
  std::string to_kv_text() const;

  /// Stable hash of the canonical serialization, embedded in every output.
  std::string fingerprint() const;
};

enum class GammaRegime { LOW, HIGH };  // gamma < 1 vs gamma > 1

/// Constants consumed by the kernels, all derived from ModelParams.
struct DerivedConstants {
  double theta;       ///< market price of risk (mu - r) / sigma
  double kappa;       ///< effective income discount r - mu_y + sigma_y * theta
  double rho;         ///< gamma / (1 - gamma)
  double mu1;         ///< drift constant of the reduced process
  double sigma1;      ///< volatility of the reduced process
  double L_terminal;  ///< terminal boundary level in reduced-x units
  GammaRegime gamma_regime;
};

/// One standing-assumption check with its evaluated sides.
struct AssumptionCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_passed() const;
};

/// Positivity-style field checks; throws InvalidParams / GammaIsOne.
void validate_fields(const ModelParams& p);

/// Evaluates kappa > 0, the discount-rate lower bound and the income
/// volatility cap without throwing.
AssumptionReport check_assumptions(const ModelParams& p);

/// Derives all constants. Throws KappaNonPositive / Assumption2Violated /
/// Assumption41Violated unless `override_assumptions` is set (validation of
/// field-level invariants is never skipped).
DerivedConstants derive_constants(const ModelParams& p,
                                  bool override_assumptions = false);

/// Initial mortality from the common actuarial parameterization
/// (age, modal value, dispersion): exp((age - modal) / dispersion) / dispersion.
double initial_mortality_from_age(double age, double modal_value,
                                  double dispersion);

}  // namespace optret
