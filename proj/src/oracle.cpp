#include "optret/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "optret/errors.hpp"
#include "optret/numeric.hpp"

namespace optret {

void LatticeSpec::validate(const Model& model) const {
  if (n_time < 16 || n_space < 16)
    throw NonPositiveArgument("lattice: n_time and n_space must be >= 16");
  if (m_initial <= 0)
    throw NonPositiveArgument("lattice: m_initial must be > 0");
  if (stencil < 3)
    throw NonPositiveArgument("lattice: stencil must have >= 3 points");
  if (x_lo != 0.0 || x_hi != 0.0) {
    if (!(x_lo > 0) || !(x_hi > x_lo))
      throw NonPositiveArgument("lattice: need 0 < x_lo < x_hi");
    const double L = model.constants().L_terminal;
    if (x_lo > L / 4.0 || x_hi < 4.0 * L)
      throw NonPositiveArgument(
          "lattice: x_range must bracket [L/4, 4L] around the terminal level");
  }
}

OracleReport lattice_solve(const Model& model, const LatticeSpec& spec) {
  spec.validate(model);
  const auto& p = model.params();
  const auto& c = model.constants();
  const bool high_gamma = c.gamma_regime == GammaRegime::HIGH;
  const double L = c.L_terminal;

  double x_lo = spec.x_lo, x_hi = spec.x_hi;
  if (x_lo == 0.0 && x_hi == 0.0) {
    // Default bracket; the stopping side needs head-room beyond 4L for the
    // boundary of the high-gamma regime, the mirrored side for low gamma.
    x_lo = high_gamma ? L / 8.0 : L / 64.0;
    x_hi = high_gamma ? 8.0 * L : 8.0 * L;
  }

  const int nt = spec.n_time;
  const int nx = spec.n_space;
  const double dt = p.T_horizon / nt;
  const double lx_lo = std::log(x_lo);
  const double dlx = (std::log(x_hi) - lx_lo) / (nx - 1);

  std::vector<double> x_grid(nx), reward(nx);
  for (int i = 0; i < nx; ++i) {
    x_grid[i] = std::exp(lx_lo + i * dlx);
    reward[i] = model.running_reward(x_grid[i]);
  }

  const num::NormalStencil st = num::gauss_hermite_normal(spec.stencil);
  const double disc = std::exp(-c.kappa * dt);
  const double vol_step = c.sigma1 * std::sqrt(dt);

  OracleReport rep;
  rep.fingerprint = model.fingerprint();
  rep.assumption_override = model.assumptions_overridden();
  rep.x_grid = x_grid;
  rep.t.resize(nt + 1);
  rep.xi.resize(nt + 1);
  rep.boundary_lattice.assign(nt + 1, L);
  for (int i = 0; i <= nt; ++i) {
    rep.t[i] = i * dt;
    rep.xi[i] = p.T_horizon - rep.t[i];
  }

  std::vector<double> value(nx, 0.0), next(nx), cont(nx);
  for (int i = nt - 1; i >= 0; --i) {
    const double t_i = i * dt;
    const double m_i = spec.m_initial * std::exp(p.a * t_i);
    const double drift = (c.rho + 1.0) * ((p.beta - p.r) * dt +
                                          model.mortality_integral(m_i, dt)) +
                         (c.mu1 - 0.5 * c.sigma1 * c.sigma1) * dt;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t q = 0; q < st.nodes.size(); ++q) {
      const double shift = (drift + vol_step * st.nodes[q]) / dlx;
      const double w_q = st.weights[q];
      for (int j = 0; j < nx; ++j) {
        double pos = j + shift;
        if (pos <= 0.0) pos = 0.0;
        if (pos >= nx - 1) pos = nx - 1 - 1e-9;
        const int j0 = static_cast<int>(pos);
        const double fr = pos - j0;
        next[j] += w_q * (value[j0] * (1.0 - fr) + value[j0 + 1] * fr);
      }
    }
    for (int j = 0; j < nx; ++j) {
      cont[j] = dt * reward[j] + disc * next[j];
      value[j] = std::max(cont[j], 0.0);
    }
    // Zero level of the continuation value: last positive node for gamma > 1,
    // first positive node for gamma < 1, refined by linear interpolation.
    int edge = -1;
    if (high_gamma) {
      for (int j = nx - 1; j >= 0; --j)
        if (cont[j] > 0) { edge = j; break; }
      if (edge < 0 || edge == nx - 1)
        throw GridTooCoarse("lattice: boundary leaves x_range at t = " +
                            num::format_double(t_i));
      const double w = cont[edge] / (cont[edge] - cont[edge + 1]);
      rep.boundary_lattice[i] = std::exp(lx_lo + (edge + w) * dlx);
    } else {
      for (int j = 0; j < nx; ++j)
        if (cont[j] > 0) { edge = j; break; }
      if (edge <= 0)
        throw GridTooCoarse("lattice: boundary leaves x_range at t = " +
                            num::format_double(t_i));
      const double w = cont[edge] / (cont[edge] - cont[edge - 1]);
      rep.boundary_lattice[i] = std::exp(lx_lo + (edge - w) * dlx);
    }
    if (i == 0) rep.value_at_t0 = value;
  }
  return rep;
}

McResult mc_evaluate(const Model& model, const BoundarySolution& boundary,
                     double xi, double x, double m, std::uint64_t n_paths,
                     std::uint64_t seed) {
  if (n_paths < 1000)
    throw NonPositiveArgument("mc_evaluate: need at least 1000 paths");
  if (x <= 0 || m <= 0)
    throw NonPositiveArgument("mc_evaluate: x and m must be > 0");
  const auto& p = model.params();
  const auto& c = model.constants();
  const bool high_gamma = boundary.regime == GammaRegime::HIGH;
  const double dxi = boundary.delta_xi();
  const int k = std::max(0, static_cast<int>(std::lround(xi / dxi)));
  if (k > boundary.n_steps)
    throw NonPositiveArgument("mc_evaluate: xi exceeds the boundary horizon");

  McResult out;
  out.n_paths = n_paths;
  if (k == 0) return out;

  auto stopped = [&](double xv, int lag_steps) {
    const double b = boundary.b_star[k - lag_steps];
    return high_gamma ? xv >= b : xv <= b;
  };
  if (stopped(x, 0)) return out;  // started on the stopping side: value 0

  // Per-step drift of log X over [s_{j-1}, s_j]; exact because the mortality
  // term integrates in closed form.
  std::vector<double> step_drift(k + 1, 0.0), discount(k + 1, 1.0);
  for (int j = 1; j <= k; ++j) {
    const double s_a = (j - 1) * dxi, s_b = j * dxi;
    step_drift[j] =
        (c.rho + 1.0) * ((p.beta - p.r) * dxi +
                         (model.mortality_integral(m, s_b) -
                          model.mortality_integral(m, s_a))) +
        (c.mu1 - 0.5 * c.sigma1 * c.sigma1) * dxi;
    discount[j] = std::exp(-c.kappa * s_b);
  }
  const double vol_step = c.sigma1 * std::sqrt(dxi);
  const double lnx0 = std::log(x);
  const double f0 = model.running_reward(x);

  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t path = 0; path < n_paths; ++path) {
    std::uint64_t stream = seed ^ (0x9e3779b97f4a7c15ull * (path + 1));
    std::mt19937_64 rng(num::splitmix64(stream));
    std::normal_distribution<double> normal(0.0, 1.0);
    double lnx = lnx0;
    double acc = 0.0;
    double f_prev = f0;
    for (int j = 1; j <= k; ++j) {
      lnx += step_drift[j] + vol_step * normal(rng);
      const double xv = std::exp(lnx);
      const double f_j = discount[j] * model.running_reward(xv);
      acc += 0.5 * dxi * (f_prev + f_j);
      if (stopped(xv, j)) break;
      f_prev = f_j;
    }
    sum += acc;
    sum_sq += acc * acc;
  }
  const double n = static_cast<double>(n_paths);
  out.mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
  out.stderr_ = std::sqrt(var / n);
  return out;
}

std::string OracleReport::to_csv() const {
  std::ostringstream out;
  out << "# params_fingerprint = " << fingerprint << "\n";
  if (assumption_override) out << "# assumption_override = true\n";
  if (mc_value) {
    out << "# mc_mean = " << num::format_double(mc_value->mean)
        << ", mc_stderr = " << num::format_double(mc_value->stderr_)
        << ", mc_paths = " << mc_value->n_paths << "\n";
  }
  out << "t,xi,boundary_lattice\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    out << num::format_double(t[i]) << ',' << num::format_double(xi[i]) << ','
        << num::format_double(boundary_lattice[i]) << "\n";
  return out.str();
}

}  // namespace optret
