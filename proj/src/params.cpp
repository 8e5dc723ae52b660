#include "optret/params.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "optret/errors.hpp"
#include "optret/numeric.hpp"

namespace optret {

namespace {

std::string fmt(double v) { return num::format_double(v); }

}  // namespace

const std::vector<std::string>& ModelParams::field_names() {
  static const std::vector<std::string> names = {
      "mu", "sigma", "r", "beta", "gamma", "mu_y",
      "sigma_y", "a", "T_horizon", "K", "m0"};
  return names;
}

double ModelParams::get(const std::string& field) const {
  if (field == "mu") return mu;
  if (field == "sigma") return sigma;
  if (field == "r") return r;
  if (field == "beta") return beta;
  if (field == "gamma") return gamma;
  if (field == "mu_y") return mu_y;
  if (field == "sigma_y") return sigma_y;
  if (field == "a") return a;
  if (field == "T_horizon") return T_horizon;
  if (field == "K") return K;
  if (field == "m0") return m0;
  throw ConfigParse("unknown ModelParams field: " + field);
}

void ModelParams::set(const std::string& field, double value) {
  if (field == "mu") mu = value;
  else if (field == "sigma") sigma = value;
  else if (field == "r") r = value;
  else if (field == "beta") beta = value;
  else if (field == "gamma") gamma = value;
  else if (field == "mu_y") mu_y = value;
  else if (field == "sigma_y") sigma_y = value;
  else if (field == "a") a = value;
  else if (field == "T_horizon") T_horizon = value;
  else if (field == "K") K = value;
  else if (field == "m0") m0 = value;
  else throw ConfigParse("unknown ModelParams field: " + field);
}

ModelParams ModelParams::from_kv_text(const std::string& text) {
  ModelParams p;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigParse("line " + std::to_string(line_no) + ": expected key = value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (seen.count(key))
      throw ConfigParse("duplicate key: " + key);
    seen.insert(key);
    char* end = nullptr;
    double v = std::strtod(val.c_str(), &end);
    if (end == val.c_str() || *end != '\0')
      throw ConfigParse("key " + key + ": cannot parse value '" + val + "'");
    p.set(key, v);  // throws ConfigParse on unknown keys
  }
  for (const auto& name : field_names())
    if (!seen.count(name)) throw ConfigParse("missing key: " + name);
  return p;
}

std::string ModelParams::to_kv_text() const {
  std::ostringstream out;
  for (const auto& name : field_names())
    out << name << " = " << fmt(get(name)) << "\n";
  return out.str();
}

std::string ModelParams::fingerprint() const {
  std::uint64_t h = num::fnv1a64(to_kv_text());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool AssumptionReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void validate_fields(const ModelParams& p) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw InvalidParams("invalid parameters: " + msg);
  };
  require(p.sigma > 0, "sigma must be > 0, got " + fmt(p.sigma));
  require(p.sigma_y > 0, "sigma_y must be > 0, got " + fmt(p.sigma_y));
  // a = 0 (constant mortality force) is accepted as the degenerate limit; it
  // is needed for the constant-vs-age-dependent comparison runs.
  require(p.a >= 0, "a must be >= 0, got " + fmt(p.a));
  require(p.T_horizon > 0, "T_horizon must be > 0, got " + fmt(p.T_horizon));
  require(p.m0 > 0, "m0 must be > 0, got " + fmt(p.m0));
  require(p.K > 1, "K must be > 1, got " + fmt(p.K));
  require(p.gamma > 0, "gamma must be > 0, got " + fmt(p.gamma));
  if (p.gamma == 1.0)
    throw GammaIsOne("gamma = 1 (log utility) is outside the model family; "
                     "use gamma != 1");
}

AssumptionReport check_assumptions(const ModelParams& p) {
  AssumptionReport rep;
  const double theta = (p.mu - p.r) / p.sigma;
  const double kappa = p.r - p.mu_y + p.sigma_y * theta;
  {
    AssumptionCheck c;
    c.name = "kappa_positive";
    c.lhs = kappa;
    c.rhs = 0.0;
    c.passed = kappa > 0.0;
    c.detail = "kappa = r - mu_y + sigma_y*theta = " + fmt(kappa) + " must be > 0";
    rep.checks.push_back(c);
  }
  {
    const double bound = (1.0 - p.gamma) * (p.r + 0.5 * theta * theta) +
                         (p.gamma - 1.0) * (p.gamma - 1.0) * theta * theta /
                             (2.0 * p.gamma);
    AssumptionCheck c;
    c.name = "discount_rate_bound";
    c.lhs = p.beta;
    c.rhs = bound;
    c.passed = p.beta >= bound;
    c.detail = "beta = " + fmt(p.beta) + " must be >= " + fmt(bound);
    rep.checks.push_back(c);
  }
  {
    AssumptionCheck c;
    c.name = "income_volatility_cap";
    c.lhs = p.sigma_y * p.gamma;
    c.rhs = theta;
    c.passed = p.sigma_y * p.gamma < theta;
    c.detail = "sigma_y*gamma = " + fmt(p.sigma_y * p.gamma) +
               " must be < theta = " + fmt(theta);
    rep.checks.push_back(c);
  }
  return rep;
}

DerivedConstants derive_constants(const ModelParams& p,
                                  bool override_assumptions) {
  validate_fields(p);
  const AssumptionReport rep = check_assumptions(p);
  if (!override_assumptions) {
    for (const auto& c : rep.checks) {
      if (c.passed) continue;
      if (c.name == "kappa_positive") throw KappaNonPositive(c.detail);
      if (c.name == "discount_rate_bound") throw Assumption2Violated(c.detail);
      if (c.name == "income_volatility_cap") throw Assumption41Violated(c.detail);
    }
  }

  DerivedConstants d;
  d.theta = (p.mu - p.r) / p.sigma;
  d.kappa = p.r - p.mu_y + p.sigma_y * d.theta;
  d.rho = p.gamma / (1.0 - p.gamma);
  d.sigma1 = d.rho * p.sigma_y - (d.rho + 1.0) * d.theta;
  d.mu1 = 0.5 * (d.rho + 1.0) * d.rho * d.theta * d.theta + d.rho * p.mu_y +
          0.5 * (d.rho - 1.0) * d.rho * p.sigma_y * p.sigma_y -
          (d.rho + 1.0) * d.rho * d.theta * p.sigma_y +
          d.sigma1 * (p.sigma_y - d.theta);
  const double k_pow = std::pow(p.K, (1.0 - p.gamma) / p.gamma);
  d.L_terminal = std::pow((k_pow - 1.0) * p.gamma / (1.0 - p.gamma),
                          p.gamma / (1.0 - p.gamma));
  d.gamma_regime = p.gamma < 1.0 ? GammaRegime::LOW : GammaRegime::HIGH;
  return d;
}

double initial_mortality_from_age(double age, double modal_value,
                                  double dispersion) {
  if (dispersion <= 0)
    throw NonPositiveArgument("dispersion must be > 0, got " +
                              fmt(dispersion));
  return std::exp((age - modal_value) / dispersion) / dispersion;
}

}  // namespace optret
