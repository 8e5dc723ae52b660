#pragma once

#include "optret/boundary.hpp"
#include "optret/post_retirement.hpp"

namespace optret {

/// Evaluation point in economic coordinates. Admissibility requires wealth
/// above the negative of human capital, w > -q(t) y.
struct PrimalState {
  double t;  ///< years since the evaluation date, in [0, T]
  double w;  ///< wealth
  double m;  ///< force of mortality at date t
  double y;  ///< labor income rate (> 0)
};

struct PolicyOutput {
  double z_star;    ///< marginal utility of wealth at the state
  double c_star;    ///< consumption rate
  double pi_star;   ///< amount invested in the stock
  bool retire_now;  ///< wealth at or above the retirement boundary
  double b_hat;     ///< retirement wealth boundary at (t, m, y)
};

/// Full dual value in reduced coordinates together with x-derivatives:
/// value = j_hat + Q(x, m) - q(t). Derivatives are analytic on the stopping
/// side; on the continuation side the j_hat part uses central differences
/// (one-sided from the continuation side next to the boundary).
struct JTilde {
  double value;
  double dx;
  double dxx;
};

class PrimalTransform {
 public:
  PrimalTransform(const Model& model, const BoundarySolution& sol,
                  double quadrature_tol = 1e-10);

  const Model& model() const { return model_; }
  const PostRetirement& post() const { return post_; }
  const BoundarySolution& solution() const { return sol_; }

  JTilde j_tilde(double t, double x, double m) const;

  /// Dual value J = z y jtilde(t, x(z,y), m) and its z-derivative, with
  /// x = z^{1/(1-gamma)} y^{gamma/(1-gamma)}.
  struct DualValue {
    double value;
    double dz;
    double x;
  };
  DualValue dual_value(double t, double z, double m, double y) const;

  /// Unique root of J_z(t, z, m, y) = -(w + q(t) y), by bisection in log z.
  double invert_multiplier(double t, double w, double m, double y,
                           double rel_tol = 1e-10) const;

  /// Retirement wealth boundary in closed form from the dual boundary; the
  /// wealth-to-wage ratio is b_hat / y.
  double wealth_boundary(double t, double m, double y) const;
  double wealth_to_wage_ratio(double t, double m) const;

  /// Feedback policies at a state. Pre-retirement consumption inverts the
  /// working-life marginal utility; at states past the boundary the reported
  /// consumption is the post-retirement optimum at the same wealth.
  PolicyOutput feedback_policies(const PrimalState& state) const;

  /// Primal value V = J(t, z*, m, y) + z* (w + q(t) y).
  double primal_value(const PrimalState& state) const;

 private:
  void check_state(const PrimalState& s) const;

  Model model_;
  PostRetirement post_;
  BoundarySolution sol_;
};

}  // namespace optret
