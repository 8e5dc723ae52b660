#include "optret/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "optret/errors.hpp"

namespace optret {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& val) {
  char* end = nullptr;
  const double v = std::strtod(val.c_str(), &end);
  if (end == val.c_str() || *end != '\0')
    throw ConfigParse("key " + key + ": cannot parse number '" + val + "'");
  return v;
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigParse("line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigParse("line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second) throw ConfigParse("duplicate key: " + key);
    kv.entries_.emplace_back(key, val);
    kv.used_[key] = false;
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool KeyValueFile::has(const std::string& key) const {
  auto it = used_.find(key);
  if (it == used_.end()) return false;
  it->second = true;
  return true;
}

std::string KeyValueFile::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) {
      used_[key] = true;
      return v;
    }
  throw ConfigParse("missing key: " + key);
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return parse_double(key, get(key));
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = parse_double(key, get(key));
  return static_cast<int>(v);
}

std::vector<double> KeyValueFile::get_list(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(get(key));
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(parse_double(key, trim(cell)));
  if (out.empty()) throw ConfigParse("key " + key + ": empty list");
  return out;
}

std::vector<std::string> KeyValueFile::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, used] : used_)
    if (!used) out.push_back(k);
  return out;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

RunConfig RunConfig::from_text(const std::string& text) {
  const KeyValueFile kv = KeyValueFile::parse(text);
  RunConfig cfg;
  for (const auto& name : ModelParams::field_names())
    cfg.params.set(name, parse_double(name, kv.get(name)));

  cfg.solver.n_steps = kv.get_int("solver.n_steps", cfg.solver.n_steps);
  cfg.solver.root_tol = kv.get_double("solver.root_tol", cfg.solver.root_tol);

  cfg.primal.t = kv.get_double("primal.t", cfg.primal.t);
  cfg.primal.y = kv.get_double("primal.y", cfg.primal.y);
  cfg.primal.w_lo = kv.get_double("primal.w_lo", cfg.primal.w_lo);
  cfg.primal.w_hi = kv.get_double("primal.w_hi", cfg.primal.w_hi);
  cfg.primal.n_w = kv.get_int("primal.n_w", cfg.primal.n_w);

  cfg.oracle.lattice.n_time = kv.get_int("oracle.n_time", cfg.oracle.lattice.n_time);
  cfg.oracle.lattice.n_space = kv.get_int("oracle.n_space", cfg.oracle.lattice.n_space);
  cfg.oracle.lattice.x_lo = kv.get_double("oracle.x_lo", 0.0);
  cfg.oracle.lattice.x_hi = kv.get_double("oracle.x_hi", 0.0);
  cfg.oracle.lattice.stencil = kv.get_int("oracle.stencil", cfg.oracle.lattice.stencil);
  cfg.oracle.mc_paths = static_cast<std::uint64_t>(
      kv.get_double("oracle.mc_paths", static_cast<double>(cfg.oracle.mc_paths)));
  cfg.oracle.mc_states = kv.get_int("oracle.mc_states", cfg.oracle.mc_states);

  cfg.seed = static_cast<std::uint64_t>(
      kv.get_double("seed", static_cast<double>(cfg.seed)));

  if (kv.has("sweep.param")) {
    SweepSpec sweep;
    sweep.param = kv.get("sweep.param");
    sweep.values = kv.get_list("sweep.values");
    static const std::set<std::string> eval_axes = {"m", "y", "w", "t"};
    const auto& fields = ModelParams::field_names();
    const bool is_field =
        std::find(fields.begin(), fields.end(), sweep.param) != fields.end();
    if (!is_field && !eval_axes.count(sweep.param))
      throw ConfigParse("sweep.param must name a model parameter or one of "
                        "m, y, w, t; got '" + sweep.param + "'");
    cfg.sweep = sweep;
  }

  const auto leftovers = kv.unused_keys();
  if (!leftovers.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : leftovers) msg += " " + k;
    throw ConfigParse(msg);
  }
  cfg.oracle.lattice.m_initial = cfg.params.m0;
  return cfg;
}

}  // namespace optret
