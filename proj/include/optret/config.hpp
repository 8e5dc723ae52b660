#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optret/boundary.hpp"
#include "optret/oracle.hpp"
#include "optret/params.hpp"

namespace optret {

/// Flat `key = value` file with optional dotted section prefixes
/// (solver.n_steps). `#` starts a comment. Order-preserving.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text);
  static KeyValueFile load(const std::string& path);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_list(const std::string& key) const;

  /// Keys never read through the getters; non-empty means a config typo.
  std::vector<std::string> unused_keys() const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  mutable std::map<std::string, bool> used_;
};

/// Sweep axis: a ModelParams field name or one of the evaluation-point axes
/// m (initial mortality), y (income), w (wealth), t (time).
struct SweepSpec {
  std::string param;
  std::vector<double> values;
};

struct PrimalSweepSpec {
  double t = 0.0;
  double y = 1.0;
  double w_lo = 0.0;   ///< 0 selects a default range around the boundary
  double w_hi = 0.0;
  int n_w = 41;
};

struct OracleSpec {
  LatticeSpec lattice;
  std::uint64_t mc_paths = 100000;
  int mc_states = 5;
};

struct RunConfig {
  ModelParams params;
  SolverOptions solver;
  PrimalSweepSpec primal;
  OracleSpec oracle;
  std::optional<SweepSpec> sweep;
  std::uint64_t seed = 42;

  /// Parses and validates; unknown keys raise ConfigParse.
  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text);
};

}  // namespace optret
