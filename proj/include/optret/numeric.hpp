#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace optret::num {

/// Standard normal cumulative distribution function.
double norm_cdf(double x);

/// Nodes and weights for an n-point Gauss-Hermite rule rewritten for N(0,1):
/// E[g(Z)] ~ sum w_i g(z_i) with Z standard normal.
struct NormalStencil {
  std::vector<double> nodes;
  std::vector<double> weights;
};
NormalStencil gauss_hermite_normal(int n);

/// Adaptive Gauss-Kronrod (G7K15) quadrature on [a, b] to a relative
/// tolerance. Throws QuadratureNotConverged when the interval budget is
/// exhausted before the tolerance is met.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol = 1e-300,
                          int max_intervals = 4000);

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

/// Shortest text that round-trips a double exactly (printf %.17g trimmed).
std::string format_double(double v);

/// SplitMix64 step, used to derive independent per-path RNG substreams.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace optret::num
