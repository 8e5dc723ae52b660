#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optret/boundary.hpp"
#include "optret/model.hpp"

namespace optret {

/// Grid specification for the lattice dynamic-programming solver of the
/// reduced stopping problem.
struct LatticeSpec {
  int n_time = 500;
  int n_space = 800;
  double x_lo = 0.0;  ///< 0 selects the default bracket around [L/4, 4 L]
  double x_hi = 0.0;
  double m_initial = 0.004;
  int stencil = 7;  ///< Gauss-Hermite points for the normal increment

  void validate(const Model& model) const;
};

struct McResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_paths = 0;
};

/// Independent verification output: the lattice zero-level boundary per time
/// slice, the value slice at the evaluation date, and optionally a
/// Monte-Carlo estimate under a given stopping rule.
struct OracleReport {
  std::vector<double> t;                ///< time slices
  std::vector<double> xi;               ///< T - t
  std::vector<double> boundary_lattice; ///< zero-level x per slice
  std::vector<double> x_grid;           ///< lattice nodes
  std::vector<double> value_at_t0;      ///< value on x_grid at the first slice
  std::optional<McResult> mc_value;
  std::string fingerprint;
  bool assumption_override = false;

  /// CSV with columns t,xi,boundary_lattice and a fingerprint header.
  std::string to_csv() const;
};

/// Backward induction on a log-spaced grid. The state follows the reduced
/// dynamics with the deterministic mortality path m_initial e^{a t}; one
/// step takes expectation over a Gauss-Hermite stencil with linear
/// interpolation in log x. Throws GridTooCoarse when the boundary leaves the
/// grid interior.
OracleReport lattice_solve(const Model& model, const LatticeSpec& spec);

/// Stopped-policy Monte-Carlo evaluation of the reduced problem, starting at
/// (x, m) with horizon xi (rounded to the boundary's own grid). Paths use the
/// exact lognormal transition per grid step (mortality drift integrated in
/// closed form) and stop at the first grid time on the stopping side of the
/// boundary. Reward accrues with trapezoid weights. Deterministic for a
/// fixed seed: every path derives its own RNG substream from (seed, index).
McResult mc_evaluate(const Model& model, const BoundarySolution& boundary,
                     double xi, double x, double m, std::uint64_t n_paths,
                     std::uint64_t seed);

}  // namespace optret
