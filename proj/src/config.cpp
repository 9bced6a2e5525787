#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bessel_like/csv.hpp"
#include "bessel_like/error.hpp"
#include "bessel_like/harness.hpp"

namespace bessel_like {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>> kKeys = {
    {"spec", {"family", "rho", "eps", "alpha", "beta", "cutoff", "indicator"}},
    {"time", {"t_grid", "t_min", "t_max", "per_decade"}},
    {"solver", {"n", "c", "stretch", "scheme", "dt0", "growth"}},
    {"krein", {"s"}},
    {"mc", {"n_paths", "dt", "t", "seed", "bandwidth", "y"}},
    {"checks", {"ratio", "krein", "mc", "ratio_tol", "ratio_floor", "identity_tol", "dual_tol", "mc_sigmas"}},
    {"run", {"out", "seed", "tol"}},
};

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line << ": " << msg;
  throw ConfigError(os.str());
}

class Reader {
 public:
  Reader(const std::map<std::string, Section>& s) : sections_(s) {}

  const Entry* find(const std::string& sec, const std::string& key) const {
    auto it = sections_.find(sec);
    if (it == sections_.end()) return nullptr;
    auto k = it->second.find(key);
    return k == it->second.end() ? nullptr : &k->second;
  }

  double num(const std::string& sec, const std::string& key, double def) const {
    const Entry* e = find(sec, key);
    return e ? parse_num(*e, sec + "." + key) : def;
  }

  std::uint64_t uint(const std::string& sec, const std::string& key, std::uint64_t def) const {
    const Entry* e = find(sec, key);
    if (!e) return def;
    std::uint64_t v = 0;
    const char* b = e->value.data();
    const char* end = b + e->value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end) fail(e->line, sec + "." + key + " must be a non-negative integer");
    return v;
  }

  bool flag(const std::string& sec, const std::string& key, bool def) const {
    const Entry* e = find(sec, key);
    if (!e) return def;
    if (e->value == "true" || e->value == "1") return true;
    if (e->value == "false" || e->value == "0") return false;
    fail(e->line, sec + "." + key + " must be true or false");
  }

  std::vector<double> list(const std::string& sec, const std::string& key, std::vector<double> def) const {
    const Entry* e = find(sec, key);
    if (!e) return def;
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_num({trim(item), e->line}, sec + "." + key));
    if (out.empty()) fail(e->line, sec + "." + key + " is an empty list");
    return out;
  }

  static double parse_num(const Entry& e, const std::string& what) {
    double v = 0.0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) fail(e.line, what + " must be a finite number, got '" + e.value + "'");
    return v;
  }

 private:
  const std::map<std::string, Section>& sections_;
};

void require(bool ok, const Reader& r, const std::string& sec, const std::string& key, const std::string& msg) {
  if (ok) return;
  const Entry* e = r.find(sec, key);
  if (e) fail(e->line, sec + "." + key + " " + msg);
  throw ConfigError("config: default of " + sec + "." + key + " " + msg);
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::implicit_euler: return "implicit_euler";
    case Scheme::crank_nicolson: return "crank_nicolson";
    case Scheme::tr_bdf2: return "tr_bdf2";
  }
  return "implicit_euler";
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + csv::num(v[i]);
  return s;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, Section> sections;
  std::string current;
  int first_spec_line = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    std::string s = raw;
    if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
      current = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!kKeys.count(current)) fail(line, "unknown section [" + current + "]");
      if (sections.count(current)) fail(line, "duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    if (current.empty()) fail(line, "key outside of a section");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (!kKeys.at(current).count(key)) fail(line, "unknown key '" + key + "' in [" + current + "]");
    if (value.empty()) fail(line, "empty value for '" + key + "'");
    if (!sections[current].emplace(key, Entry{value, line}).second)
      fail(line, "duplicate key '" + key + "' in [" + current + "]");
    if (current == "spec" && first_spec_line == 0) first_spec_line = line;
  }

  const Reader r(sections);
  ExperimentConfig c;

  if (!r.find("spec", "family")) throw ConfigError("config: [spec] needs a family key");
  for (const auto& [k, e] : sections["spec"]) c.spec_pairs.emplace_back(k, e.value);
  try {
    c.spec = spec_from_pairs(c.spec_pairs);
  } catch (const ValidationError& e) {
    fail(first_spec_line, std::string("[spec] rejected by the drift model: ") + e.what());
  }

  if (const Entry* g = r.find("time", "t_grid")) {
    if (r.find("time", "t_min") || r.find("time", "t_max") || r.find("time", "per_decade"))
      fail(g->line, "t_grid excludes t_min, t_max and per_decade");
    c.t_grid = r.list("time", "t_grid", {});
  } else {
    const double lo = r.num("time", "t_min", 1e2), hi = r.num("time", "t_max", 1e6);
    const double per = r.num("time", "per_decade", 1.0);
    require(lo > 0.0 && hi >= lo, r, "time", "t_max", "needs 0 < t_min <= t_max");
    require(per >= 1.0 && per == std::floor(per), r, "time", "per_decade", "must be a positive integer");
    const double decades = std::log10(hi / lo);
    const auto k = static_cast<int>(std::llround(decades * per));
    require(std::abs(decades * per - k) < 1e-9, r, "time", "t_max", "must be t_min times a whole number of steps");
    for (int j = 0; j <= k; ++j) c.t_grid.push_back(j == k ? hi : lo * std::pow(10.0, j / per));
  }
  for (std::size_t i = 0; i < c.t_grid.size(); ++i)
    require(c.t_grid[i] > 0.0 && (i == 0 || c.t_grid[i] > c.t_grid[i - 1]), r, "time", "t_grid",
            "must be positive and increasing");

  auto& s = c.solver;
  s.n = r.uint("solver", "n", s.n);
  s.c = r.num("solver", "c", s.c);
  s.stretch = r.num("solver", "stretch", s.stretch);
  s.dt0 = r.num("solver", "dt0", s.dt0);
  s.growth = r.num("solver", "growth", s.growth);
  if (const Entry* e = r.find("solver", "scheme")) {
    if (e->value == "implicit_euler") s.scheme = Scheme::implicit_euler;
    else if (e->value == "crank_nicolson") s.scheme = Scheme::crank_nicolson;
    else if (e->value == "tr_bdf2") s.scheme = Scheme::tr_bdf2;
    else fail(e->line, "solver.scheme must be implicit_euler, crank_nicolson or tr_bdf2");
  }
  require(s.n >= 16, r, "solver", "n", "must be at least 16");
  require(s.c > 0.0, r, "solver", "c", "must be positive");
  require(s.dt0 >= 0.0, r, "solver", "dt0", "must be >= 0");
  require(s.growth >= 1.0, r, "solver", "growth", "must be >= 1");

  c.krein_s = r.list("krein", "s", c.krein_s);
  for (double v : c.krein_s) require(v > 0.0, r, "krein", "s", "entries must be positive");

  auto& m = c.mc;
  m.n_paths = r.uint("mc", "n_paths", m.n_paths);
  m.dt = r.num("mc", "dt", m.dt);
  m.t = r.num("mc", "t", m.t);
  m.bandwidth = r.num("mc", "bandwidth", m.bandwidth);
  m.y = r.list("mc", "y", m.y);
  require(m.t > 0.0, r, "mc", "t", "must be positive");
  require(m.dt > 0.0 && m.dt <= m.t / 10.0, r, "mc", "dt", "must satisfy 0 < dt <= t/10");
  require(m.bandwidth >= 0.0, r, "mc", "bandwidth", "must be >= 0");
  for (double v : m.y) require(v >= 0.0, r, "mc", "y", "entries must be >= 0");

  auto& k = c.checks;
  k.ratio = r.flag("checks", "ratio", k.ratio);
  k.krein = r.flag("checks", "krein", k.krein);
  k.mc = r.flag("checks", "mc", k.mc);
  k.ratio_tol = r.num("checks", "ratio_tol", k.ratio_tol);
  k.ratio_floor = r.num("checks", "ratio_floor", k.ratio_floor);
  k.identity_tol = r.num("checks", "identity_tol", k.identity_tol);
  k.dual_tol = r.num("checks", "dual_tol", k.dual_tol);
  k.mc_sigmas = r.num("checks", "mc_sigmas", k.mc_sigmas);
  for (const char* key : {"ratio_tol", "ratio_floor", "identity_tol", "dual_tol", "mc_sigmas"})
    require(r.num("checks", key, 1.0) > 0.0, r, "checks", key, "must be positive");
  if (k.mc) require(m.n_paths >= 2, r, "mc", "n_paths", "must be at least 2 when the mc check runs");

  if (const Entry* e = r.find("run", "out")) c.out = e->value;
  c.seed = r.uint("run", "seed", c.seed);
  m.seed = r.uint("mc", "seed", c.seed);
  c.tol = r.num("run", "tol", c.tol);
  require(c.tol > 0.0 && c.tol <= 1e-3, r, "run", "tol", "must lie in (0, 1e-3]");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string echo_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[spec]\n";
  for (const auto& [k, v] : c.spec_pairs) os << k << " = " << v << '\n';
  os << "\n[time]\nt_grid = " << join(c.t_grid) << '\n';
  const auto& s = c.solver;
  os << "\n[solver]\nn = " << s.n << "\nc = " << csv::num(s.c) << "\nstretch = " << csv::num(s.stretch)
     << "\nscheme = " << scheme_name(s.scheme) << "\ndt0 = " << csv::num(s.dt0)
     << "\ngrowth = " << csv::num(s.growth) << '\n';
  os << "\n[krein]\ns = " << join(c.krein_s) << '\n';
  const auto& m = c.mc;
  os << "\n[mc]\nn_paths = " << m.n_paths << "\ndt = " << csv::num(m.dt) << "\nt = " << csv::num(m.t)
     << "\nseed = " << m.seed << "\nbandwidth = " << csv::num(m.bandwidth) << "\ny = " << join(m.y) << '\n';
  const auto& k = c.checks;
  os << "\n[checks]\nratio = " << (k.ratio ? "true" : "false") << "\nkrein = " << (k.krein ? "true" : "false")
     << "\nmc = " << (k.mc ? "true" : "false") << "\nratio_tol = " << csv::num(k.ratio_tol)
     << "\nratio_floor = " << csv::num(k.ratio_floor) << "\nidentity_tol = " << csv::num(k.identity_tol)
     << "\ndual_tol = " << csv::num(k.dual_tol) << "\nmc_sigmas = " << csv::num(k.mc_sigmas) << '\n';
  os << "\n[run]\nout = " << c.out.string() << "\nseed = " << c.seed << "\ntol = " << csv::num(c.tol) << '\n';
  return os.str();
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace bessel_like
