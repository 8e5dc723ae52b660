#include "optret/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "optret/errors.hpp"

namespace optret::num {

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

NormalStencil gauss_hermite_normal(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_normal: n must be >= 1");
  // Golub-Welsch via Newton refinement on physicists' Hermite polynomials.
  // Initial guesses follow the usual interlacing recurrences.
  std::vector<double> x(n), w(n);
  const double pi_quarter = 0.7511255444649425;  // pi^{-1/4}
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z;
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z = x[0] - 1.14 * std::pow(n, 0.426) / x[0];
    } else if (i == 2) {
      z = 1.86 * x[1] - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * x[2] - 0.91 * x[1];
    } else {
      z = 2.0 * x[i - 1] - x[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pi_quarter;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  // Map from weight e^{-t^2} to the standard normal: z = sqrt(2) t, w /= sqrt(pi).
  NormalStencil st;
  st.nodes.resize(n);
  st.weights.resize(n);
  const double inv_sqrt_pi = 0.5641895835477563;
  for (int i = 0; i < n; ++i) {
    st.nodes[i] = -M_SQRT2 * x[i];  // ascending order
    st.weights[i] = w[i] * inv_sqrt_pi;
  }
  return st;
}

namespace {

// 15-point Kronrod nodes/weights with embedded 7-point Gauss rule on [-1,1].
const double kKronrodNode[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
const double kKronrodWeight[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
// Gauss weights attach to Kronrod nodes 0,2,4,6.
const double kGaussWeight[4] = {0.417959183673469, 0.381830050505119,
                                0.279705391489277, 0.129484966168870};

struct Panel {
  double a, b;
};

void g7k15(const std::function<double(double)>& f, double a, double b,
           double& value, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double k15 = kKronrodWeight[0] * f0;
  double g7 = kGaussWeight[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kKronrodNode[i];
    const double fi = f(mid + dx) + f(mid - dx);
    k15 += kKronrodWeight[i] * fi;
    if (i % 2 == 0) g7 += kGaussWeight[i / 2] * fi;
  }
  value = k15 * half;
  err = std::abs(k15 - g7) * half;
  err = std::min(err, std::abs(value));
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol,
                          int max_intervals) {
  std::vector<Panel> stack{{a, b}};
  double sum = 0.0;
  double err_sum = 0.0;
  int used = 1;
  // First pass estimate for the relative test.
  double whole, whole_err;
  g7k15(f, a, b, whole, whole_err);
  double scale = std::abs(whole);
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    double v, e;
    g7k15(f, p.a, p.b, v, e);
    const double tol_here =
        std::max(abs_tol, rel_tol * std::max(scale, std::abs(sum))) *
        (p.b - p.a) / (b - a);
    if (e <= tol_here || (p.b - p.a) < 1e-14 * (b - a)) {
      sum += v;
      err_sum += e;
      continue;
    }
    if (used + 2 > max_intervals) {
      throw QuadratureNotConverged(
          "integrate_adaptive: interval budget exhausted; last panel error " +
          std::to_string(e) + " over [" + std::to_string(p.a) + ", " +
          std::to_string(p.b) + "]");
    }
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({p.a, mid});
    stack.push_back({mid, p.b});
    used += 2;
  }
  if (err_sum > std::max(abs_tol, rel_tol * std::abs(sum)) * 4.0 &&
      std::abs(sum) > 0.0) {
    throw QuadratureNotConverged(
        "integrate_adaptive: accumulated error " + std::to_string(err_sum) +
        " exceeds tolerance for integral " + std::to_string(sum));
  }
  return sum;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // %.17g always round-trips; shorten when fewer digits already do.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    double back;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace optret::num
