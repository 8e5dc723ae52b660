#pragma once

#include <mutex>
#include <unordered_map>

#include "optret/model.hpp"

namespace optret {

/// Value and minimizer of the dual representation of the post-retirement
/// problem, V(w, m) = inf_{z>0} [ Q(z, m) + z w ].
struct PostRetirementValue {
  double value;
  double minimizer;  ///< the optimal dual variable z*
};

/// Post-retirement dual value Q(x, m) = x^{(gamma-1)/gamma} C(m) and its
/// primal counterpart. C(m) is the single expensive primitive: a scalar
/// integral over the remaining lifetime, memoized per evolved mortality
/// level (exact-key cache, safe for concurrent readers and writers).
class PostRetirement {
 public:
  explicit PostRetirement(const Model& model, double quadrature_tol = 1e-10);

  const Model& model() const { return model_; }
  double quadrature_tol() const { return tol_; }

  /// Lifetime integral I(m); strictly positive, strictly decreasing in m.
  double lifetime_integral(double m) const;

  /// Truncation point used for I(m): beyond it the integrand's analytic tail
  /// bound is below tolerance.
  double truncation_horizon(double m) const;

  /// C(m) = gamma/(1-gamma) * K^{(1-gamma)/gamma} * I(m); memoized.
  double c_of_m(double m) const;

  // Q(x, m) and its x-derivatives, all analytic given C(m).
  double q(double x, double m) const;
  double q_x(double x, double m) const;
  double q_xx(double x, double m) const;

  /// Primal post-retirement value by convex duality; the minimizer solves
  /// Q_z(z, m) + w = 0 in closed form.
  PostRetirementValue value(double w, double m) const;

  /// Optimal post-retirement consumption rate, w / I(m).
  double consumption(double w, double m) const;

 private:
  double integrand_rate() const;  // linear decay rate in the exponent
  void require_positive(double v, const char* what) const;

  Model model_;
  double tol_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<double, double> i_cache_;
};

}  // namespace optret
