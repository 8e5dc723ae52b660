#pragma once

#include <string>
#include <vector>

#include "optret/model.hpp"

namespace optret {

/// Arguments of the two normal CDFs inside the hitting-probability kernel.
struct DArguments {
  double d1;
  double d2;
};

/// d^1 and d^2 for lag s, boundary ratio y and mortality m at the anchor
/// date. The integrated mortality term uses the closed form m(e^{as}-1)/a.
DArguments d_arguments(const Model& model, double s, double y, double m);

/// Kernel of the boundary integral equation:
///   e^{-kappa s} [ reward_coef * x^{(g-1)/g} N(s,m) Phi(d2) + Phi(d1) ]
/// with x = b_at_xi the anchor value and ratio = b_at_xi_minus_s / x.
/// At s = 0 the CDFs take their limit values (1/2 at equal arguments, the
/// one-sided indicator otherwise). The formula covers both gamma regimes
/// because the sign of sigma1 flips together with the indicator direction.
double g_kernel(const Model& model, double xi, double s, double b_at_xi,
                double b_at_xi_minus_s, double m);

/// Free boundary on the reversed-time grid xi = T - t, solved along the
/// deterministic mortality path anchored at m_initial on the evaluation date
/// t = 0. b_star[j] approximates the boundary at date T - xi[j], where the
/// mortality force is m_initial * e^{a (T - xi[j])}.
struct BoundarySolution {
  double m_initial = 0.0;
  int n_steps = 0;
  double root_tol = 0.0;
  double horizon = 0.0;       ///< T; the grid spans [0, T]
  double gompertz_rate = 0.0; ///< copy of params.a, for the mortality map
  GammaRegime regime = GammaRegime::HIGH;
  std::string fingerprint;
  bool assumption_override = false;
  std::vector<double> xi;
  std::vector<double> b_star;
  std::vector<double> residual;  ///< equation residual at the solved b_star

  double delta_xi() const { return horizon / n_steps; }

  /// Linear interpolation of the boundary at any xi in [0, T].
  double boundary_at(double xi_value) const;

  /// Mortality at the date T - xi along the solution's own path.
  double mortality_at_xi(double xi_value) const;

  /// CSV with columns xi,t,b_star,residual and a fingerprint header line.
  std::string to_csv() const;
  static BoundarySolution from_csv(const std::string& text);
};

struct SolverOptions {
  int n_steps = 200;
  double root_tol = 1e-8;
  int max_bracket_growth = 20;
};

/// Solves the discretized boundary equation step by step: b_star[0] is the
/// closed-form terminal level L, and each later value is the bisection root
/// of the trapezoidal equation given all previous values.
BoundarySolution solve_boundary(const Model& model, double m_initial,
                                const SolverOptions& options = {});

/// Re-evaluates the discretized equation at grid step k with the stored
/// boundary values (a residual diagnostic; small for a consistent solution).
double boundary_residual(const Model& model, const BoundarySolution& sol,
                         int k);

/// Value approximation on the reversed-time grid: the trapezoid sum with the
/// anchor boundary value replaced by x. Off-grid xi uses a uniform sub-grid
/// of the same resolution with linearly interpolated boundary values. On the
/// stopping side of the boundary the value is identically zero. Small
/// negative sums (trapezoid undershoot near the boundary) are clamped to
/// zero; a sum below the clamp window signals an inconsistent boundary and
/// raises NegativeValueBeyondTolerance.
double j_hat(const Model& model, const BoundarySolution& sol, double xi,
             double x, double m);

}  // namespace optret
