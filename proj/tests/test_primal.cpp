#include <cmath>
#include <random>

#include <doctest.h>

#include "optret/errors.hpp"
#include "optret/primal.hpp"
#include "test_support.hpp"

using namespace optret;

namespace {

struct Fixture {
  Model model{test::table1()};
  BoundarySolution sol;
  PrimalTransform primal;

  Fixture()
      : sol([this] {
          SolverOptions opt;
          opt.n_steps = 100;
          return solve_boundary(model, 0.004, opt);
        }()),
        primal(model, sol) {}
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_SUITE("primal-transform") {

TEST_CASE("dual value in the stopping region is purely analytic") {
  auto& f = fixture();
  const double t = 0.0, m = 0.004;
  const double x = 4.0;  // well past the boundary (~2.5)
  const JTilde jt = f.primal.j_tilde(t, x, m);
  CHECK(jt.value == f.primal.post().q(x, m) - f.model.q_factor(t));
  CHECK(jt.dx == f.primal.post().q_x(x, m));
  CHECK(jt.dxx == f.primal.post().q_xx(x, m));
}

TEST_CASE("dual value is convex in x") {
  auto& f = fixture();
  const double t = 2.0;
  const double m = f.sol.mortality_at_xi(f.model.params().T_horizon - t);
  double prev = 0.0, prev2 = 0.0;
  int i = 0;
  for (double x = 0.4; x < 3.4; x += 0.05, ++i) {
    const double v = f.primal.j_tilde(t, x, m).value;
    if (i >= 2) CHECK(prev2 - 2 * prev + v >= -1e-6);
    prev2 = prev;
    prev = v;
  }
}

TEST_CASE("dual value homogeneity in (z, y)") {
  auto& f = fixture();
  const double t = 1.0, m = f.sol.mortality_at_xi(9.0);
  const double z = 0.7, y = 1.3, mu_scale = 2.0;
  const double g = f.model.params().gamma;
  const auto base = f.primal.dual_value(t, z, m, y);
  const auto scaled = f.primal.dual_value(
      t, z * std::pow(mu_scale, g - 1.0), m, y * mu_scale);
  CHECK(scaled.x == doctest::Approx(base.x).epsilon(1e-12));
  CHECK(scaled.value ==
        doctest::Approx(base.value * std::pow(mu_scale, g)).epsilon(1e-12));
}

TEST_CASE("z-derivative matches finite differences and is negative") {
  auto& f = fixture();
  const double t = 0.0, m = 0.004, y = 1.0;
  for (double z : {0.3, 1.0, 2.5}) {
    const auto dv = f.primal.dual_value(t, z, m, y);
    CHECK(dv.dz < 0.0);
    const double h = 1e-5 * z;
    const double fd = (f.primal.dual_value(t, z + h, m, y).value -
                       f.primal.dual_value(t, z - h, m, y).value) /
                      (2 * h);
    CHECK(dv.dz == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("multiplier inversion round trip") {
  auto& f = fixture();
  const double t = 0.0, m = 0.004, y = 1.0;
  const double q_t = f.model.q_factor(t);
  double prev_z = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const double w = -0.5 * q_t + (i + 1) * 2.7;  // spans debt to rich
    const double z = f.primal.invert_multiplier(t, w, m, y);
    CHECK(z < prev_z);  // strictly decreasing in wealth
    prev_z = z;
    const double w_back = -f.primal.dual_value(t, z, m, y).dz - q_t * y;
    CHECK(w_back == doctest::Approx(w).epsilon(1e-8));
  }
  CHECK_THROWS_AS(f.primal.invert_multiplier(t, -q_t * y, m, y),
                  InadmissibleWealth);
}

TEST_CASE("boundary consistency between coordinates") {
  auto& f = fixture();
  const double y = 1.0;
  const double g = f.model.params().gamma;
  for (double t : {0.0, 2.5, 5.0}) {
    const double m = f.sol.mortality_at_xi(f.model.params().T_horizon - t);
    const double b_dual = f.sol.boundary_at(f.model.params().T_horizon - t);
    const double b_hat = f.primal.wealth_boundary(t, m, y);
    const double z_at_boundary = f.primal.invert_multiplier(t, b_hat, m, y);
    const double expected = std::pow(b_dual, 1.0 - g) * std::pow(y, -g);
    CHECK(z_at_boundary == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("wealth boundary closed form") {
  auto& f = fixture();
  const double t = 0.0, m = 0.004;
  const double base = f.primal.wealth_boundary(t, m, 1.0);
  CHECK(base > 0.0);
  CHECK(f.primal.wealth_boundary(t, m, 2.0) ==
        doctest::Approx(2.0 * base).epsilon(1e-14));
  CHECK(f.primal.wealth_to_wage_ratio(t, m) ==
        doctest::Approx(base).epsilon(1e-14));

  // Doubling the mortality growth rate lowers the wealth boundary.
  ModelParams fast = test::table1();
  fast.a *= 2.0;
  const Model fast_model(fast);
  SolverOptions opt;
  opt.n_steps = 100;
  const BoundarySolution fast_sol = solve_boundary(fast_model, 0.004, opt);
  const PrimalTransform fast_primal(fast_model, fast_sol);
  CHECK(fast_primal.wealth_boundary(t, m, 1.0) < base);
}

TEST_CASE("feedback policies") {
  auto& f = fixture();
  const double t = 0.0, m = 0.004, y = 1.0;
  const double b_hat = f.primal.wealth_boundary(t, m, y);
  const auto& c = f.model.constants();
  const auto& p = f.model.params();

  SUBCASE("marginal utility identity before retirement") {
    for (double w : {2.0, 8.0, 0.6 * b_hat}) {
      const PolicyOutput pol = f.primal.feedback_policies({t, w, m, y});
      CHECK(!pol.retire_now);
      CHECK(std::pow(pol.c_star, -p.gamma) ==
            doctest::Approx(pol.z_star).epsilon(1e-10));
      CHECK(pol.c_star > 0.0);
    }
  }

  SUBCASE("consumption drops at the boundary") {
    const PolicyOutput before =
        f.primal.feedback_policies({t, b_hat * (1 - 1e-9), m, y});
    const PolicyOutput after =
        f.primal.feedback_policies({t, b_hat * (1 + 1e-9), m, y});
    CHECK(!before.retire_now);
    CHECK(after.retire_now);
    CHECK(after.c_star < before.c_star);
    CHECK(after.c_star / before.c_star ==
          doctest::Approx(f.model.k_pow()).epsilon(1e-6));
  }

  SUBCASE("stock position matches the fixed-fraction rule after retirement") {
    for (double w : {1.5 * b_hat, 3.0 * b_hat}) {
      const PolicyOutput pol = f.primal.feedback_policies({t, w, m, y});
      CHECK(pol.retire_now);
      CHECK(pol.pi_star ==
            doctest::Approx(c.theta / (p.sigma * p.gamma) * w).epsilon(1e-9));
    }
  }

  SUBCASE("stock position is finite and continuous off the boundary") {
    double prev = 0.0;
    bool first = true;
    for (double w = 0.2 * b_hat; w < 0.95 * b_hat; w += 0.05 * b_hat) {
      const PolicyOutput pol = f.primal.feedback_policies({t, w, m, y});
      CHECK(std::isfinite(pol.pi_star));
      if (!first) CHECK(std::abs(pol.pi_star - prev) < 0.25 * b_hat);
      prev = pol.pi_star;
      first = false;
    }
  }

  SUBCASE("retirement flag matches the wealth comparison") {
    CHECK(f.primal.feedback_policies({t, b_hat * 1.01, m, y}).retire_now);
    CHECK(!f.primal.feedback_policies({t, b_hat * 0.99, m, y}).retire_now);
  }
}

TEST_CASE("primal value") {
  auto& f = fixture();
  const double t = 0.0, m = 0.004, y = 1.0;
  const double b_hat = f.primal.wealth_boundary(t, m, y);

  SUBCASE("collapses to the retired value in the stopping region") {
    for (double w : {b_hat * 1.001, b_hat * 1.4, b_hat * 3.0}) {
      const double V = f.primal.primal_value({t, w, m, y});
      const double V_hat = f.primal.post().value(w, m).value;
      CHECK(V == doctest::Approx(V_hat).epsilon(1e-6));
    }
  }

  SUBCASE("wealth derivative equals the multiplier") {
    for (double w : {4.0, 12.0, 20.0}) {
      const double z = f.primal.invert_multiplier(t, w, m, y);
      const double h = 1e-5 * w;
      const double fd = (f.primal.primal_value({t, w + h, m, y}) -
                         f.primal.primal_value({t, w - h, m, y})) /
                        (2 * h);
      CHECK(fd == doctest::Approx(z).epsilon(1e-4));
    }
  }

  SUBCASE("strictly increasing in wealth") {
    double prev = -std::numeric_limits<double>::infinity();
    for (double w = 1.0; w < 40.0; w += 2.0) {
      const double V = f.primal.primal_value({t, w, m, y});
      CHECK(V > prev);
      prev = V;
    }
  }

  SUBCASE("duality sandwich") {
    std::mt19937_64 rng(2027);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double w = 10.0;
    const double V = f.primal.primal_value({t, w, m, y});
    const double z_star = f.primal.invert_multiplier(t, w, m, y);
    const double g_t = f.model.q_factor(t) * y;
    for (int i = 0; i < 20; ++i) {
      const double z = z_star * std::exp(u(rng));
      const double upper = f.primal.dual_value(t, z, m, y).value + z * (w + g_t);
      CHECK(V <= upper + 1e-6 * std::abs(V));
    }
    const double at_star =
        f.primal.dual_value(t, z_star, m, y).value + z_star * (w + g_t);
    CHECK(V == doctest::Approx(at_star).epsilon(1e-9));
  }
}

}  // TEST_SUITE
