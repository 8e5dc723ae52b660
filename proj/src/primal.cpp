#include "optret/primal.hpp"

#include <cmath>

#include "optret/errors.hpp"
#include "optret/numeric.hpp"

namespace optret {

PrimalTransform::PrimalTransform(const Model& model,
                                 const BoundarySolution& sol,
                                 double quadrature_tol)
    : model_(model), post_(model, quadrature_tol), sol_(sol) {}

void PrimalTransform::check_state(const PrimalState& s) const {
  if (s.y <= 0)
    throw NonPositiveArgument("primal state: y must be > 0, got " +
                              num::format_double(s.y));
  if (s.m <= 0)
    throw NonPositiveArgument("primal state: m must be > 0, got " +
                              num::format_double(s.m));
  if (s.t < 0 || s.t > model_.params().T_horizon)
    throw NonPositiveArgument("primal state: t must lie in [0, T]");
  const double g = model_.q_factor(s.t) * s.y;
  if (s.w <= -g)
    throw InadmissibleWealth("wealth " + num::format_double(s.w) +
                             " is not above -human capital " +
                             num::format_double(-g));
}

JTilde PrimalTransform::j_tilde(double t, double x, double m) const {
  const double xi = model_.params().T_horizon - t;
  const double q_t = model_.q_factor(t);
  const bool high_gamma = sol_.regime == GammaRegime::HIGH;
  const double b_here = sol_.boundary_at(xi);

  JTilde out;
  const bool stopped = xi == 0.0 || (high_gamma ? (x >= b_here) : (x <= b_here));
  if (stopped) {
    out.value = post_.q(x, m) - q_t;
    out.dx = post_.q_x(x, m);
    out.dxx = post_.q_xx(x, m);
    return out;
  }
  const double jh = j_hat(model_, sol_, xi, x, m);
  out.value = jh + post_.q(x, m) - q_t;
  const double h = 1e-4 * x;
  const bool crosses =
      high_gamma ? (x + h >= b_here) : (x - h <= b_here);
  double jh_x, jh_xx;
  if (!crosses) {
    const double jp = j_hat(model_, sol_, xi, x + h, m);
    const double jm = j_hat(model_, sol_, xi, x - h, m);
    jh_x = (jp - jm) / (2.0 * h);
    jh_xx = (jp - 2.0 * jh + jm) / (h * h);
  } else {
    // One-sided stencil from the continuation side.
    const double dir = high_gamma ? -1.0 : 1.0;
    const double j1 = j_hat(model_, sol_, xi, x + dir * h, m);
    const double j2 = j_hat(model_, sol_, xi, x + 2.0 * dir * h, m);
    jh_x = -dir * (3.0 * jh - 4.0 * j1 + j2) / (2.0 * h);
    jh_xx = (jh - 2.0 * j1 + j2) / (h * h);
  }
  out.dx = jh_x + post_.q_x(x, m);
  out.dxx = jh_xx + post_.q_xx(x, m);
  return out;
}

PrimalTransform::DualValue PrimalTransform::dual_value(double t, double z,
                                                       double m, double y) const {
  if (z <= 0)
    throw NonPositiveArgument("dual_value: z must be > 0, got " +
                              num::format_double(z));
  if (y <= 0)
    throw NonPositiveArgument("dual_value: y must be > 0, got " +
                              num::format_double(y));
  const double g = model_.params().gamma;
  const double x = std::pow(z, 1.0 / (1.0 - g)) * std::pow(y, g / (1.0 - g));
  const JTilde jt = j_tilde(t, x, m);
  DualValue out;
  out.x = x;
  out.value = z * y * jt.value;
  out.dz = y * jt.value + x * y / (1.0 - g) * jt.dx;
  return out;
}

double PrimalTransform::invert_multiplier(double t, double w, double m,
                                          double y, double rel_tol) const {
  check_state({t, w, m, y});
  const double target = -(w + model_.q_factor(t) * y);
  auto excess = [&](double z) { return dual_value(t, z, m, y).dz - target; };
  // J_z is strictly increasing in z from -inf to 0^-; expand a log bracket
  // around 1 until the target is straddled.
  double lo = 1.0, hi = 1.0;
  double f_lo = excess(lo), f_hi = f_lo;
  int grow = 0;
  while (f_lo > 0 && grow < 120) {
    lo *= 0.25;
    f_lo = excess(lo);
    ++grow;
  }
  while (f_hi < 0 && grow < 240) {
    hi *= 4.0;
    f_hi = excess(hi);
    ++grow;
  }
  if (f_lo > 0 || f_hi < 0)
    throw BracketNotFound("invert_multiplier: could not bracket z* in [" +
                          num::format_double(lo) + ", " +
                          num::format_double(hi) + "]");
  while (hi / lo - 1.0 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (excess(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

double PrimalTransform::wealth_boundary(double t, double m, double y) const {
  return y * wealth_to_wage_ratio(t, m);
}

double PrimalTransform::wealth_to_wage_ratio(double t, double m) const {
  const double g = model_.params().gamma;
  const double b = sol_.boundary_at(model_.params().T_horizon - t);
  return -post_.q(b, m) - b / (1.0 - g) * post_.q_x(b, m);
}

PolicyOutput PrimalTransform::feedback_policies(const PrimalState& state) const {
  check_state(state);
  const auto& p = model_.params();
  const auto& c = model_.constants();
  const double g = p.gamma;

  PolicyOutput out;
  out.b_hat = wealth_boundary(state.t, state.m, state.y);
  out.retire_now = state.w >= out.b_hat;
  out.z_star = invert_multiplier(state.t, state.w, state.m, state.y);

  if (out.retire_now) {
    // Post-retirement optimum at the same wealth, reported so the
    // consumption discontinuity at the boundary is visible.
    out.c_star = post_.consumption(state.w, state.m);
  } else {
    out.c_star = std::pow(out.z_star, -1.0 / g);
  }

  const double x = std::pow(out.z_star, 1.0 / (1.0 - g)) *
                   std::pow(state.y, g / (1.0 - g));
  const JTilde jt = j_tilde(state.t, x, state.m);
  const double one_minus_g2 = (1.0 - g) * (1.0 - g);
  const double z_jzz = x * state.y * (2.0 - g) / one_minus_g2 * jt.dx +
                       x * x * state.y / one_minus_g2 * jt.dxx;
  const double j_zy = jt.value + x * (g - g * g + 1.0) / one_minus_g2 * jt.dx +
                      x * x * g / one_minus_g2 * jt.dxx;
  out.pi_star = c.theta / p.sigma * z_jzz -
                p.sigma_y * state.y * (model_.q_factor(state.t) + j_zy);
  return out;
}

double PrimalTransform::primal_value(const PrimalState& state) const {
  check_state(state);
  const double z = invert_multiplier(state.t, state.w, state.m, state.y);
  const DualValue dv = dual_value(state.t, z, state.m, state.y);
  return dv.value + z * (state.w + model_.q_factor(state.t) * state.y);
}

}  // namespace optret
