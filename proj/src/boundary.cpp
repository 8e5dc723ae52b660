#include "optret/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optret/errors.hpp"
#include "optret/numeric.hpp"

namespace optret {

namespace {

double phi_limit_at_zero_lag(double ratio, double sigma1) {
  if (ratio == 1.0) return 0.5;
  return (ratio > 1.0) == (sigma1 > 0.0) ? 1.0 : 0.0;
}

// Lag-dependent pieces of the kernel for one anchor (xi, m). Only the anchor
// value x changes during a bisection, so everything else is computed once.
struct KernelLag {
  double s;
  double discount;     // e^{-kappa s}
  double growth;       // N(s, m)
  double drift1;       // integrated drift in d^1's numerator
  double drift2;       // integrated drift in d^2's numerator
  double sig_sqrt_s;   // sigma1 * sqrt(s)
  double b_lag;        // boundary value at xi - s
};

class KernelSlice {
 public:
  KernelSlice(const Model& model, double m_anchor)
      : model_(model), m_(m_anchor) {
    const auto& p = model.params();
    const auto& c = model.constants();
    gamma_exp_ = (p.gamma - 1.0) / p.gamma;
    reward_coef_ = model.reward_coef();
    sigma1_ = c.sigma1;
    kappa_ = c.kappa;
    rho1_ = c.rho + 1.0;
    beta_minus_r_ = p.beta - p.r;
    mu1_ = c.mu1;
    drift1_rate_ = c.mu1 - 0.5 * c.sigma1 * c.sigma1;
    drift2_rate_ = c.mu1 + (p.gamma - 2.0) * c.sigma1 * c.sigma1 / (2.0 * p.gamma);
  }

  void add_lag(double s, double b_lag) {
    KernelLag lag;
    lag.s = s;
    lag.b_lag = b_lag;
    lag.discount = std::exp(-kappa_ * s);
    lag.growth = model_.growth_factor(s, m_);
    const double base = rho1_ * (beta_minus_r_ * s + model_.mortality_integral(m_, s));
    lag.drift1 = base + drift1_rate_ * s;
    lag.drift2 = base + drift2_rate_ * s;
    lag.sig_sqrt_s = sigma1_ * std::sqrt(s);
    lags_.push_back(lag);
  }

  // Kernel value at one lag for anchor value x; weight-free.
  double eval_lag(const KernelLag& lag, double x, double b_lag) const {
    double phi1, phi2;
    if (lag.s == 0.0) {
      phi1 = phi2 = phi_limit_at_zero_lag(b_lag / x, sigma1_);
    } else {
      const double log_ratio = std::log(b_lag / x);
      phi1 = num::norm_cdf((log_ratio - lag.drift1) / lag.sig_sqrt_s);
      phi2 = num::norm_cdf((log_ratio - lag.drift2) / lag.sig_sqrt_s);
    }
    return lag.discount *
           (reward_coef_ * std::pow(x, gamma_exp_) * lag.growth * phi2 + phi1);
  }

  // Trapezoid sum over all lags; the zero-lag entry pairs x with itself when
  // its stored b_lag is negative (sentinel used by the boundary equation).
  double trapezoid(double x, double delta) const {
    double sum = 0.0;
    const std::size_t last = lags_.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
      const auto& lag = lags_[i];
      const double b_lag = lag.b_lag < 0.0 ? x : lag.b_lag;
      const double weight = (i == 0 || i == last) ? 0.5 : 1.0;
      sum += weight * eval_lag(lag, x, b_lag);
    }
    return sum * delta;
  }

 private:
  const Model& model_;
  double m_;
  double gamma_exp_, reward_coef_, sigma1_, kappa_, rho1_, beta_minus_r_, mu1_;
  double drift1_rate_, drift2_rate_;
  std::vector<KernelLag> lags_;
};

}  // namespace

DArguments d_arguments(const Model& model, double s, double y, double m) {
  if (s <= 0)
    throw NonPositiveArgument("d_arguments: s must be > 0, got " +
                              num::format_double(s));
  if (y <= 0)
    throw NonPositiveArgument("d_arguments: boundary ratio must be > 0, got " +
                              num::format_double(y));
  const auto& p = model.params();
  const auto& c = model.constants();
  const double base =
      (c.rho + 1.0) * ((p.beta - p.r) * s + model.mortality_integral(m, s));
  const double drift1 = base + (c.mu1 - 0.5 * c.sigma1 * c.sigma1) * s;
  const double drift2 =
      base + (c.mu1 + (p.gamma - 2.0) * c.sigma1 * c.sigma1 / (2.0 * p.gamma)) * s;
  const double denom = c.sigma1 * std::sqrt(s);
  return {(std::log(y) - drift1) / denom, (std::log(y) - drift2) / denom};
}

double g_kernel(const Model& model, double xi, double s, double b_at_xi,
                double b_at_xi_minus_s, double m) {
  if (s < 0 || s > xi)
    throw NonPositiveArgument("g_kernel: lag s must lie in [0, xi]");
  if (b_at_xi <= 0 || b_at_xi_minus_s <= 0)
    throw NonPositiveArgument("g_kernel: boundary values must be > 0");
  const auto& p = model.params();
  const auto& c = model.constants();
  double phi1, phi2;
  const double ratio = b_at_xi_minus_s / b_at_xi;
  if (s == 0.0) {
    phi1 = phi2 = phi_limit_at_zero_lag(ratio, c.sigma1);
  } else {
    const DArguments d = d_arguments(model, s, ratio, m);
    phi1 = num::norm_cdf(d.d1);
    phi2 = num::norm_cdf(d.d2);
  }
  return std::exp(-c.kappa * s) *
         (model.reward_coef() * std::pow(b_at_xi, (p.gamma - 1.0) / p.gamma) *
              model.growth_factor(s, m) * phi2 +
          phi1);
}

namespace {

struct BisectionResult {
  double root;
  double residual;
};

// Bisection on [lo, hi] with f(lo), f(hi) of opposite sign.
template <typename F>
BisectionResult bisect(F&& f, double lo, double hi, double f_lo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return {mid, 0.0};
    if ((f_lo < 0) != (f_mid < 0)) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  return {root, f(root)};
}

}  // namespace

BoundarySolution solve_boundary(const Model& model, double m_initial,
                                const SolverOptions& options) {
  if (m_initial <= 0)
    throw NonPositiveArgument("solve_boundary: m_initial must be > 0, got " +
                              num::format_double(m_initial));
  if (options.n_steps < 2)
    throw NonPositiveArgument("solve_boundary: n_steps must be >= 2");

  const auto& p = model.params();
  const auto& c = model.constants();
  const double T = p.T_horizon;
  const int n = options.n_steps;
  const double dxi = T / n;
  const double L = c.L_terminal;
  const bool high_gamma = c.gamma_regime == GammaRegime::HIGH;

  BoundarySolution sol;
  sol.m_initial = m_initial;
  sol.n_steps = n;
  sol.root_tol = options.root_tol;
  sol.horizon = T;
  sol.gompertz_rate = p.a;
  sol.regime = c.gamma_regime;
  sol.fingerprint = model.fingerprint();
  sol.assumption_override = model.assumptions_overridden();
  sol.xi.resize(n + 1);
  sol.b_star.resize(n + 1);
  sol.residual.resize(n + 1);
  for (int j = 0; j <= n; ++j) sol.xi[j] = j * dxi;
  sol.b_star[0] = L;
  sol.residual[0] = 0.0;

  for (int k = 1; k <= n; ++k) {
    const double xi_k = sol.xi[k];
    const double m_k = m_initial * std::exp(p.a * (T - xi_k));
    KernelSlice slice(model, m_k);
    slice.add_lag(0.0, -1.0);  // zero lag pairs the candidate with itself
    for (int j = k - 1; j >= 1; --j) slice.add_lag(sol.xi[k - j], sol.b_star[j]);
    slice.add_lag(xi_k, sol.b_star[0]);
    auto equation = [&](double b) { return slice.trapezoid(b, dxi); };

    double lo, hi, f_lo, f_hi;
    if (high_gamma) {
      lo = L;
      hi = std::max(2.0 * L, 2.0 * sol.b_star[k - 1]);
      f_lo = equation(lo);
      f_hi = equation(hi);
      int grow = 0;
      while ((f_lo < 0) == (f_hi < 0) && grow < options.max_bracket_growth) {
        hi *= 2.0;
        f_hi = equation(hi);
        ++grow;
      }
      if ((f_lo < 0) == (f_hi < 0))
        throw BracketNotFound(
            "solve_boundary: no sign change on [" + num::format_double(lo) +
            ", " + num::format_double(hi) + "] at step " + std::to_string(k) +
            " (residuals " + num::format_double(f_lo) + ", " +
            num::format_double(f_hi) + ")");
    } else {
      hi = L;
      lo = 0.5 * sol.b_star[k - 1];
      f_hi = equation(hi);
      f_lo = equation(lo);
      int grow = 0;
      while ((f_lo < 0) == (f_hi < 0) && grow < options.max_bracket_growth) {
        lo *= 0.5;
        f_lo = equation(lo);
        ++grow;
      }
      if ((f_lo < 0) == (f_hi < 0))
        throw BracketNotFound(
            "solve_boundary: no sign change on [" + num::format_double(lo) +
            ", " + num::format_double(hi) + "] at step " + std::to_string(k) +
            " (residuals " + num::format_double(f_lo) + ", " +
            num::format_double(f_hi) + ")");
    }
    const BisectionResult res = bisect(equation, lo, hi, f_lo, options.root_tol);
    if (!(std::isfinite(res.root)))
      throw RootToleranceNotMet("solve_boundary: non-finite root at step " +
                                std::to_string(k));
    sol.b_star[k] = res.root;
    sol.residual[k] = res.residual;
  }
  return sol;
}

double boundary_residual(const Model& model, const BoundarySolution& sol,
                         int k) {
  if (k <= 0 || k > sol.n_steps) return 0.0;
  const double T = sol.horizon;
  const double dxi = sol.delta_xi();
  const double m_k = sol.m_initial * std::exp(sol.gompertz_rate * (T - sol.xi[k]));
  KernelSlice slice(model, m_k);
  slice.add_lag(0.0, -1.0);
  for (int j = k - 1; j >= 1; --j) slice.add_lag(sol.xi[k - j], sol.b_star[j]);
  slice.add_lag(sol.xi[k], sol.b_star[0]);
  return slice.trapezoid(sol.b_star[k], dxi);
}

double BoundarySolution::boundary_at(double xi_value) const {
  if (xi_value <= xi.front()) return b_star.front();
  if (xi_value >= xi.back()) return b_star.back();
  const double dxi = delta_xi();
  const int j = std::min<int>(static_cast<int>(xi_value / dxi), n_steps - 1);
  const double w = (xi_value - xi[j]) / dxi;
  return b_star[j] * (1.0 - w) + b_star[j + 1] * w;
}

double BoundarySolution::mortality_at_xi(double xi_value) const {
  return m_initial * std::exp(gompertz_rate * (horizon - xi_value));
}

double j_hat(const Model& model, const BoundarySolution& sol, double xi,
             double x, double m) {
  if (x <= 0)
    throw NonPositiveArgument("j_hat: x must be > 0, got " +
                              num::format_double(x));
  if (xi < 0 || xi > sol.horizon * (1.0 + 1e-12))
    throw NonPositiveArgument("j_hat: xi must lie in [0, T]");
  if (xi == 0.0) return 0.0;

  const bool high_gamma = sol.regime == GammaRegime::HIGH;
  const double b_here = sol.boundary_at(xi);
  if (high_gamma ? (x > b_here) : (x < b_here)) return 0.0;  // stopped: value 0

  const int k = std::max(1, static_cast<int>(std::lround(xi / sol.delta_xi())));
  const double delta = xi / k;
  KernelSlice slice(model, m);
  slice.add_lag(0.0, b_here);
  for (int i = 1; i < k; ++i)
    slice.add_lag(i * delta, sol.boundary_at(xi - i * delta));
  slice.add_lag(xi, sol.b_star[0]);
  const double raw = slice.trapezoid(x, delta);
  if (raw >= 0.0) return raw;

  // Trapezoid undershoot near the boundary scales with the local reward and
  // the step; anything below that window means the boundary is inconsistent
  // with the kernel (wrong regime, wrong mortality path, corrupted grid).
  const double floor = 10.0 * sol.root_tol +
                       std::abs(model.running_reward(x)) * delta;
  if (raw < -floor)
    throw NegativeValueBeyondTolerance(
        "j_hat: value " + num::format_double(raw) + " below -" +
        num::format_double(floor) + " at xi=" + num::format_double(xi) +
        ", x=" + num::format_double(x));
  return 0.0;
}

std::string BoundarySolution::to_csv() const {
  std::ostringstream out;
  out << "# params_fingerprint = " << fingerprint << "\n";
  out << "# m_initial = " << num::format_double(m_initial)
      << ", n_steps = " << n_steps
      << ", root_tol = " << num::format_double(root_tol)
      << ", horizon = " << num::format_double(horizon)
      << ", gompertz_rate = " << num::format_double(gompertz_rate)
      << ", regime = " << (regime == GammaRegime::HIGH ? "HIGH" : "LOW") << "\n";
  if (assumption_override) out << "# assumption_override = true\n";
  out << "xi,t,b_star,residual\n";
  for (int j = 0; j <= n_steps; ++j) {
    out << num::format_double(xi[j]) << ',' << num::format_double(horizon - xi[j])
        << ',' << num::format_double(b_star[j]) << ','
        << num::format_double(residual[j]) << "\n";
  }
  return out.str();
}

BoundarySolution BoundarySolution::from_csv(const std::string& text) {
  BoundarySolution sol;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string token;
      while (std::getline(meta, token, ',')) {
        auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
          auto b = s.find_first_not_of(" \t");
          auto e = s.find_last_not_of(" \t");
          return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(token.substr(0, eq));
        const std::string val = trim(token.substr(eq + 1));
        if (key == "params_fingerprint") sol.fingerprint = val;
        else if (key == "m_initial") sol.m_initial = std::stod(val);
        else if (key == "n_steps") sol.n_steps = std::stoi(val);
        else if (key == "root_tol") sol.root_tol = std::stod(val);
        else if (key == "horizon") sol.horizon = std::stod(val);
        else if (key == "gompertz_rate") sol.gompertz_rate = std::stod(val);
        else if (key == "regime")
          sol.regime = val == "HIGH" ? GammaRegime::HIGH : GammaRegime::LOW;
        else if (key == "assumption_override") sol.assumption_override = val == "true";
      }
      continue;
    }
    if (!header_seen) {
      if (line != "xi,t,b_star,residual")
        throw ConfigParse("boundary CSV: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
    if (cells.size() != 4)
      throw ConfigParse("boundary CSV: expected 4 columns, got " +
                        std::to_string(cells.size()));
    sol.xi.push_back(cells[0]);
    sol.b_star.push_back(cells[2]);
    sol.residual.push_back(cells[3]);
  }
  if (static_cast<int>(sol.xi.size()) != sol.n_steps + 1)
    throw ConfigParse("boundary CSV: row count does not match n_steps");
  return sol;
}

}  // namespace optret
