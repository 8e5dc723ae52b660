#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "optret/config.hpp"
#include "optret/errors.hpp"
#include "optret/numeric.hpp"
#include "optret/oracle.hpp"
#include "optret/post_retirement.hpp"
#include "optret/primal.hpp"

namespace fs = std::filesystem;
using namespace optret;

namespace {

std::string fmt(double v) { return num::format_double(v); }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

struct CsvBuilder {
  std::ostringstream out;
  CsvBuilder(const Model& model) {
    out << "# params_fingerprint = " << model.fingerprint() << "\n";
    if (model.assumptions_overridden()) out << "# assumption_override = true\n";
  }
  void header(const std::string& h) { out << h << "\n"; }
  void row(const std::vector<double>& cells, const std::string& tail = "") {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << fmt(cells[i]);
    }
    if (!tail.empty()) out << ',' << tail;
    out << "\n";
  }
};

Model make_model(const RunConfig& cfg, bool allow_override) {
  const AssumptionReport rep = check_assumptions(cfg.params);
  if (!rep.all_passed() && !allow_override) {
    std::string msg = "standing assumptions violated:";
    for (const auto& c : rep.checks)
      if (!c.passed) msg += "\n  " + c.detail;
    msg += "\nuse --allow-assumption-override to run anyway (outputs will be "
           "watermarked)";
    throw AssumptionViolated(msg);
  }
  if (!rep.all_passed())
    std::cerr << "warning: assumptions overridden; outputs watermarked\n";
  return Model(cfg.params, allow_override);
}

int cmd_validate(const RunConfig& cfg) {
  validate_fields(cfg.params);
  const AssumptionReport rep = check_assumptions(cfg.params);
  const bool ok = rep.all_passed();
  // Derived constants are printable even when an assumption fails.
  const DerivedConstants d = derive_constants(cfg.params, true);
  std::cout << "parameter fingerprint: " << cfg.params.fingerprint() << "\n";
  std::cout << "theta   = " << fmt(d.theta) << "\n";
  std::cout << "kappa   = " << fmt(d.kappa) << "\n";
  std::cout << "rho     = " << fmt(d.rho) << "\n";
  std::cout << "sigma1  = " << fmt(d.sigma1) << "\n";
  std::cout << "mu1     = " << fmt(d.mu1) << "\n";
  std::cout << "L       = " << fmt(d.L_terminal) << "\n";
  std::cout << "regime  = " << (d.gamma_regime == GammaRegime::HIGH ? "HIGH (gamma>1)"
                                                                    : "LOW (gamma<1)")
            << "\n";
  for (const auto& c : rep.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail
              << "\n";
  std::cout << (ok ? "all assumptions PASS\n" : "assumption violations found\n");
  return ok ? 0 : 1;
}

int cmd_boundary(const RunConfig& cfg, const fs::path& out_dir,
                 bool allow_override) {
  const Model model = make_model(cfg, allow_override);
  const BoundarySolution sol =
      solve_boundary(model, cfg.params.m0, cfg.solver);
  write_file(out_dir / "boundary.csv", sol.to_csv());

  // Invariant audit: terminal level, monotone direction, residual sizes.
  int violations = 0;
  if (sol.b_star[0] != model.constants().L_terminal) ++violations;
  const bool high = sol.regime == GammaRegime::HIGH;
  for (int j = 1; j <= sol.n_steps; ++j) {
    const double step = sol.b_star[j] - sol.b_star[j - 1];
    if (high ? step < -1e-9 : step > 1e-9) ++violations;
    if (std::abs(sol.residual[j]) > 10.0 * cfg.solver.root_tol) ++violations;
  }
  std::cout << "boundary.csv written; terminal level " << fmt(sol.b_star[0])
            << ", far end " << fmt(sol.b_star[sol.n_steps]) << ", "
            << violations << " invariant violations\n";
  return violations == 0 ? 0 : 2;
}

int cmd_primal(const RunConfig& cfg, const fs::path& out_dir,
               bool allow_override) {
  const Model model = make_model(cfg, allow_override);
  const BoundarySolution sol = solve_boundary(model, cfg.params.m0, cfg.solver);
  const PrimalTransform primal(model, sol);

  const double t = cfg.primal.t;
  const double y = cfg.primal.y;
  const double m_t = model.mortality_at(cfg.params.m0, t);
  const double b_hat = primal.wealth_boundary(t, m_t, y);
  double w_lo = cfg.primal.w_lo, w_hi = cfg.primal.w_hi;
  if (w_lo == 0.0 && w_hi == 0.0) {
    w_lo = 0.1 * b_hat;
    w_hi = 1.6 * b_hat;
  }

  CsvBuilder csv(model);
  csv.header("t,w,m,y,z_star,c_star,pi_star,b_hat,retire_now,V");
  for (int i = 0; i < cfg.primal.n_w; ++i) {
    const double w =
        w_lo + (w_hi - w_lo) * i / std::max(1, cfg.primal.n_w - 1);
    const PrimalState state{t, w, m_t, y};
    const PolicyOutput pol = primal.feedback_policies(state);
    const double V = primal.primal_value(state);
    csv.row({t, w, m_t, y, pol.z_star, pol.c_star, pol.pi_star, pol.b_hat},
            std::string(pol.retire_now ? "1" : "0") + "," + fmt(V));
  }
  write_file(out_dir / "policies.csv", csv.out.str());
  std::cout << "policies.csv written; wealth boundary b_hat(t=" << fmt(t)
            << ") = " << fmt(b_hat) << "\n";
  return 0;
}

int cmd_oracle(const RunConfig& cfg, const fs::path& out_dir,
               bool allow_override) {
  const Model model = make_model(cfg, allow_override);
  const BoundarySolution sol = solve_boundary(model, cfg.params.m0, cfg.solver);
  LatticeSpec spec = cfg.oracle.lattice;
  spec.m_initial = cfg.params.m0;
  const OracleReport rep = lattice_solve(model, spec);
  write_file(out_dir / "oracle_boundary.csv", rep.to_csv());

  // Boundary agreement at a few probe points.
  CsvBuilder agree(model);
  agree.header("xi,b_integral,b_lattice,rel_gap");
  double worst = 0.0;
  const double T = cfg.params.T_horizon;
  for (double frac : {0.25, 0.5, 1.0}) {
    const double xi = frac * T;
    const double b_int = sol.boundary_at(xi);
    // Nearest lattice slice to t = T - xi.
    const int i = static_cast<int>(std::lround((T - xi) / T * spec.n_time));
    const double b_lat = rep.boundary_lattice[i];
    const double gap = std::abs(b_lat - b_int) / b_int;
    worst = std::max(worst, gap);
    agree.row({xi, b_int, b_lat, gap});
  }
  write_file(out_dir / "oracle_agreement.csv", agree.out.str());

  // Monte-Carlo value probes against the trapezoid value at interior states.
  CsvBuilder mc_csv(model);
  mc_csv.header("xi,x,mc_mean,mc_stderr,j_hat,gap_over_stderr");
  int mc_fail = 0;
  for (int i = 0; i < cfg.oracle.mc_states; ++i) {
    const double xi = T * (0.4 + 0.6 * i / std::max(1, cfg.oracle.mc_states - 1));
    const double xi_grid = std::lround(xi / sol.delta_xi()) * sol.delta_xi();
    const double b = sol.boundary_at(xi_grid);
    const double x = sol.regime == GammaRegime::HIGH ? 0.55 * b : 1.8 * b;
    const double m = sol.mortality_at_xi(xi_grid);
    const McResult mc =
        mc_evaluate(model, sol, xi_grid, x, m, cfg.oracle.mc_paths,
                    cfg.seed + static_cast<std::uint64_t>(i));
    const double jn = j_hat(model, sol, xi_grid, x, m);
    const double ratio = mc.stderr_ > 0 ? (mc.mean - jn) / mc.stderr_ : 0.0;
    if (std::abs(ratio) > 3.0) ++mc_fail;
    mc_csv.row({xi_grid, x, mc.mean, mc.stderr_, jn, ratio});
  }
  write_file(out_dir / "oracle_mc.csv", mc_csv.out.str());

  std::cout << "oracle reports written; worst boundary gap " << fmt(worst)
            << ", " << mc_fail << " MC probes beyond 3 stderr\n";
  return (worst <= 0.02 && mc_fail == 0) ? 0 : 2;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out_dir,
              bool allow_override) {
  if (!cfg.sweep) throw ConfigParse("sweep requires sweep.param and sweep.values");
  const SweepSpec& sweep = *cfg.sweep;
  const std::size_t n = sweep.values.size();

  struct SweepRow {
    double value = 0.0;
    double b_hat = 0.0;
    double c_star = 0.0;
    double pi_star = 0.0;
    double V = 0.0;
    bool retire_now = false;
    std::string error;
  };
  std::vector<SweepRow> rows(n);

  const auto& fields = ModelParams::field_names();
  const bool is_field =
      std::find(fields.begin(), fields.end(), sweep.param) != fields.end();

  auto run_one = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.value = sweep.values[i];
    try {
      RunConfig local = cfg;
      double t_eval = cfg.primal.t;
      double y_eval = cfg.primal.y;
      double w_eval = 0.0;  // resolved after the boundary is known
      if (is_field) {
        local.params.set(sweep.param, row.value);
      } else if (sweep.param == "m") {
        local.params.m0 = row.value;
      } else if (sweep.param == "y") {
        y_eval = row.value;
      } else if (sweep.param == "t") {
        t_eval = row.value;
      }
      const Model model = make_model(local, allow_override);
      const BoundarySolution sol =
          solve_boundary(model, local.params.m0, local.solver);
      const PrimalTransform primal(model, sol);
      const double m_t = model.mortality_at(local.params.m0, t_eval);
      row.b_hat = primal.wealth_boundary(t_eval, m_t, y_eval);
      w_eval = sweep.param == "w" ? row.value : 0.5 * row.b_hat;
      const PrimalState state{t_eval, w_eval, m_t, y_eval};
      const PolicyOutput pol = primal.feedback_policies(state);
      row.c_star = pol.c_star;
      row.pi_star = pol.pi_star;
      row.retire_now = pol.retire_now;
      row.V = primal.primal_value(state);

      std::ostringstream tag;
      tag << sweep.param << "_" << fmt(row.value);
      write_file(out_dir / ("boundary_" + tag.str() + ".csv"), sol.to_csv());

      CsvBuilder pol_csv(model);
      pol_csv.header("t,w,m,y,z_star,c_star,pi_star,b_hat,retire_now,V");
      for (int j = 0; j < cfg.primal.n_w; ++j) {
        const double w = (0.1 + 1.5 * j / std::max(1, cfg.primal.n_w - 1)) *
                         row.b_hat;
        const PrimalState s{t_eval, w, m_t, y_eval};
        const PolicyOutput p = primal.feedback_policies(s);
        pol_csv.row({t_eval, w, m_t, y_eval, p.z_star, p.c_star, p.pi_star,
                     p.b_hat},
                    std::string(p.retire_now ? "1" : "0") + "," +
                        fmt(primal.primal_value(s)));
      }
      write_file(out_dir / ("policies_" + tag.str() + ".csv"), pol_csv.out.str());
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  // Axis values are independent solves; run them on a small worker pool.
  const unsigned pool =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(n)));
  std::vector<std::thread> workers;
  std::size_t next_index = 0;
  std::mutex mu;
  for (unsigned wkr = 0; wkr < pool; ++wkr) {
    workers.emplace_back([&]() {
      while (true) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next_index >= n) return;
          i = next_index++;
        }
        run_one(i);
      }
    });
  }
  for (auto& w : workers) w.join();

  std::ostringstream summary;
  summary << "# params_fingerprint = " << cfg.params.fingerprint() << "\n";
  summary << "param,value,b_hat,c_star,pi_star,retire_now,V\n";
  int failures = 0;
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      ++failures;
      std::cerr << "sweep value " << fmt(row.value) << " failed: " << row.error
                << "\n";
      continue;
    }
    summary << sweep.param << ',' << fmt(row.value) << ',' << fmt(row.b_hat)
            << ',' << fmt(row.c_star) << ',' << fmt(row.pi_star) << ','
            << (row.retire_now ? 1 : 0) << ',' << fmt(row.V) << "\n";
  }
  write_file(out_dir / "sweep_summary.csv", summary.str());
  std::cout << "sweep_summary.csv written for " << n - failures << "/" << n
            << " axis values\n";
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retirement-boundary solver: free-boundary, policies, oracles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir_str = "out";
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  bool allow_override = false;

  app.add_option("--config", config_path, "run configuration file")
      ->required();
  app.add_option("--out", out_dir_str, "output directory");
  app.add_option("--seed", seed_override, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_flag("--allow-assumption-override", allow_override,
               "run despite violated standing assumptions (watermarked)");

  auto* validate = app.add_subcommand("validate", "assumption report");
  auto* boundary = app.add_subcommand("boundary", "solve the free boundary");
  auto* primal = app.add_subcommand("primal", "policy sweep in wealth");
  auto* oracle = app.add_subcommand("oracle", "lattice and MC verification");
  auto* sweep = app.add_subcommand("sweep", "parameter sensitivity runs");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = RunConfig::from_file(config_path);
    if (seed_set) cfg.seed = seed_override;
    const fs::path out_dir(out_dir_str);
    if (!validate->parsed()) fs::create_directories(out_dir);

    if (validate->parsed()) return cmd_validate(cfg);
    if (boundary->parsed()) return cmd_boundary(cfg, out_dir, allow_override);
    if (primal->parsed()) return cmd_primal(cfg, out_dir, allow_override);
    if (oracle->parsed()) return cmd_oracle(cfg, out_dir, allow_override);
    if (sweep->parsed()) return cmd_sweep(cfg, out_dir, allow_override);
  } catch (const ConfigParse& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 64;
  } catch (const AssumptionViolated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
  return 0;
}
