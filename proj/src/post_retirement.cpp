#include "optret/post_retirement.hpp"

#include <cmath>

#include "optret/errors.hpp"
#include "optret/numeric.hpp"

namespace optret {

PostRetirement::PostRetirement(const Model& model, double quadrature_tol)
    : model_(model), tol_(quadrature_tol) {}

void PostRetirement::require_positive(double v, const char* what) const {
  if (v <= 0)
    throw NonPositiveArgument(std::string(what) + " must be > 0, got " +
                              num::format_double(v));
}

double PostRetirement::integrand_rate() const {
  const auto& p = model_.params();
  const auto& c = model_.constants();
  const double g = p.gamma;
  return -p.beta / g - (g - 1.0) / g * (p.r + 0.5 * c.theta * c.theta) +
         (g - 1.0) * (g - 1.0) * c.theta * c.theta / (2.0 * g * g);
}

double PostRetirement::truncation_horizon(double m) const {
  // Integrand exp(psi(s)) with psi(s) = c1*s - mortality_integral(m, s)/gamma.
  // psi is concave, so the tail beyond S is bounded by e^{psi(S)}/|psi'(S)|.
  const double c1 = integrand_rate();
  const double g = model_.params().gamma;
  auto psi = [&](double s) {
    return c1 * s - model_.mortality_integral(m, s) / g;
  };
  auto dpsi = [&](double s) { return c1 - model_.mortality_at(m, s) / g; };
  double S = 1.0;
  // Rough scale of the integral for the relative tail test.
  double scale = 0.0;
  for (int i = 0; i < 64; ++i) scale += std::exp(psi(S * (i + 0.5) / 64.0)) * S / 64.0;
  scale = std::max(scale, 1e-300);
  for (int iter = 0; iter < 200; ++iter) {
    const double slope = dpsi(S);
    if (slope < 0.0) {
      const double tail = std::exp(psi(S)) / (-slope);
      if (tail <= 0.25 * tol_ * scale) return S;
    }
    S *= 1.5;
    if (S > 1e7)
      throw QuadratureNotConverged(
          "lifetime integral: no usable truncation horizon below 1e7 years "
          "(decay rate too weak for tolerance " + num::format_double(tol_) + ")");
  }
  return S;
}

double PostRetirement::lifetime_integral(double m) const {
  require_positive(m, "mortality");
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = i_cache_.find(m);
    if (it != i_cache_.end()) return it->second;
  }
  const double c1 = integrand_rate();
  const double g = model_.params().gamma;
  const double S = truncation_horizon(m);
  auto f = [&](double s) {
    return std::exp(c1 * s - model_.mortality_integral(m, s) / g);
  };
  const double value = num::integrate_adaptive(f, 0.0, S, 0.5 * tol_);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  i_cache_.emplace(m, value);
  return value;
}

double PostRetirement::c_of_m(double m) const {
  const auto& p = model_.params();
  return p.gamma / (1.0 - p.gamma) * model_.k_pow() * lifetime_integral(m);
}

double PostRetirement::q(double x, double m) const {
  require_positive(x, "dual variable");
  const double g = model_.params().gamma;
  return std::pow(x, (g - 1.0) / g) * c_of_m(m);
}

double PostRetirement::q_x(double x, double m) const {
  require_positive(x, "dual variable");
  const double g = model_.params().gamma;
  return (g - 1.0) / g * std::pow(x, -1.0 / g) * c_of_m(m);
}

double PostRetirement::q_xx(double x, double m) const {
  require_positive(x, "dual variable");
  const double g = model_.params().gamma;
  return -(g - 1.0) / (g * g) * std::pow(x, -1.0 / g - 1.0) * c_of_m(m);
}

PostRetirementValue PostRetirement::value(double w, double m) const {
  if (w <= 0)
    throw NonPositiveWealth("post-retirement wealth must be > 0, got " +
                            num::format_double(w));
  require_positive(m, "mortality");
  const double g = model_.params().gamma;
  // With Q(z, m) = z^{(g-1)/g} C(m), the stationarity condition
  // Q_z(z, m) + w = 0 gives z* = (K^{(1-g)/g} I(m) / w)^g in closed form.
  const double A = model_.k_pow() * lifetime_integral(m);
  const double z_star = std::pow(A / w, g);
  PostRetirementValue out;
  out.minimizer = z_star;
  out.value = std::pow(w, 1.0 - g) / (1.0 - g) * std::pow(A, g);
  return out;
}

double PostRetirement::consumption(double w, double m) const {
  if (w <= 0)
    throw NonPositiveWealth("post-retirement wealth must be > 0, got " +
                            num::format_double(w));
  return w / lifetime_integral(m);
}

}  // namespace optret
