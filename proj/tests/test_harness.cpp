#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bessel_like/error.hpp"
#include "bessel_like/harness.hpp"

using namespace bessel_like;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bessel_like_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    std::vector<double> r;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  const ExperimentConfig c = parse_config("[spec]\nfamily = ex1\n");
  CHECK(c.spec.family() == Family::ex1);
  CHECK(c.solver.n == 2000);
  CHECK(c.solver.c == 8.0);
  CHECK(c.solver.scheme == Scheme::implicit_euler);
  REQUIRE(c.t_grid.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(c.t_grid[k] == doctest::Approx(std::pow(10.0, 2.0 + k)).epsilon(1e-14));
  CHECK(c.krein_s == std::vector<double>{1e-3, 1e-2, 1e-1, 1.0});
  CHECK(c.checks.ratio);
  CHECK(c.checks.krein);
  CHECK_FALSE(c.checks.mc);
  CHECK(c.seed == 1);
  CHECK(c.mc.seed == 1);
  CHECK(c.tol == 1e-10);
}

TEST_CASE("config sections and overrides") {
  const ExperimentConfig c = parse_config(
      "# comment\n[spec]\nfamily = ex3\nalpha = -2\n\n[time]\nt_min = 10\nt_max = 1000\nper_decade = 2\n"
      "[solver]\nn = 500  # trailing comment\nscheme = tr_bdf2\n[mc]\ny = 0, 0.5\n[run]\nseed = 9\n");
  CHECK(c.spec.family() == Family::ex3);
  CHECK(c.spec.alpha() == -2.0);
  REQUIRE(c.t_grid.size() == 5);
  CHECK(c.t_grid[1] == doctest::Approx(std::sqrt(1000.0)).epsilon(1e-14));
  CHECK(c.solver.n == 500);
  CHECK(c.solver.scheme == Scheme::tr_bdf2);
  CHECK(c.mc.y == std::vector<double>{0.0, 0.5});
  CHECK(c.seed == 9);
  CHECK(c.mc.seed == 9);
  CHECK(parse_config("[spec]\nfamily=ex1\n[time]\nt_grid = 1, 5, 25\n").t_grid == std::vector<double>{1, 5, 25});
}

TEST_CASE("config errors quote the line") {
  const std::string bad_alpha = error_of("[spec]\nfamily = ex2\nalpha = 0\nbeta = 0.5\n");
  CHECK(bad_alpha.find("config line 2") != std::string::npos);
  CHECK(bad_alpha.find("rejected by the drift model") != std::string::npos);
  CHECK(bad_alpha.find("alpha != 0") != std::string::npos);
  CHECK(error_of("[spec]\nfamily = ex2\nalpha = 1\nbeta = 1.5\n").find("0 < beta < 1") != std::string::npos);

  const std::string dup = error_of("[spec]\nfamily = ex1\n[solver]\nn = 10\nn = 20\n");
  CHECK(dup.find("config line 5") != std::string::npos);
  CHECK(dup.find("duplicate key 'n'") != std::string::npos);
  CHECK(error_of("[spec]\nfamily = ex1\n[spec]\n").find("duplicate section") != std::string::npos);
  const std::string unknown = error_of("[spec]\nfamily = ex1\n[solver]\ncells = 4\n");
  CHECK(unknown == "config line 4: unknown key 'cells' in [solver]");
  CHECK(error_of("[spec]\nfamily = ex1\n[plot]\n").find("unknown section [plot]") != std::string::npos);
  CHECK(error_of("family = ex1\n").find("outside of a section") != std::string::npos);
  CHECK(error_of("[spec]\nfamily\n").find("expected key = value") != std::string::npos);
  CHECK(error_of("[solver]\nn = 100\n").find("needs a family") != std::string::npos);
  CHECK(error_of("[spec]\nfamily = ex1\n[solver]\nn = ten\n").find("config line 4") != std::string::npos);
  CHECK(error_of("[spec]\nfamily = ex1\n[solver]\nn = 8\n").find("at least 16") != std::string::npos);
  CHECK(error_of("[spec]\nfamily = ex1\n[time]\nt_grid = 10, 5\n").find("config line 4") != std::string::npos);
  CHECK(error_of("[spec]\nfamily = ex1\n[time]\nt_grid = 1\nt_min = 1\n").find("config line") != std::string::npos);
  CHECK(error_of("[spec]\nfamily = ex1\n[mc]\nt = 1\ndt = 0.5\n").find("config line 5") != std::string::npos);
  CHECK(error_of("[spec]\nfamily = ex1\n[checks]\nmc = maybe\n").find("true or false") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
}

TEST_CASE("echo round trips") {
  const ExperimentConfig c = parse_config(
      "[spec]\nfamily = ex2\nalpha = 0.7\nbeta = 0.3\n[time]\nt_grid = 10, 100\n[solver]\nscheme = crank_nicolson\n"
      "growth = 1.02\n[krein]\ns = 0.5\n[mc]\nn_paths = 77\nseed = 3\n[checks]\nmc = true\nratio_tol = 0.125\n"
      "[run]\nout = somewhere\nseed = 4\ntol = 1e-9\n");
  const std::string echo = echo_config(c);
  const ExperimentConfig d = parse_config(echo);
  CHECK(echo_config(d) == echo);
  CHECK(d.t_grid == c.t_grid);
  CHECK(d.solver.scheme == Scheme::crank_nicolson);
  CHECK(d.mc.seed == 3);
  CHECK(d.seed == 4);
  CHECK(d.out == fs::path("somewhere"));
  CHECK(d.checks.ratio_tol == 0.125);
  CHECK(d.spec.alpha() == 0.7);
  CHECK(fnv1a(echo) == fnv1a(echo_config(d)));
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("compare on the exact rho = 2 Bessel case") {
  const fs::path out = scratch("bessel2");
  ExperimentConfig c = parse_config("[spec]\nfamily = bessel\nrho = 2\n[time]\nt_grid = 1, 10\n[solver]\n"
                                    "scheme = tr_bdf2\ndt0 = 1e-5\n[checks]\nkrein = false\n");
  c.out = out;
  const CompareReport r = run_compare(c);
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].name == "ratio");
  CHECK(r.passed());
  const std::string text = slurp(out / "ratio.csv");
  CHECK(text.rfind("t,p_pde,predict,ratio\n", 0) == 0);
  const auto rows = csv_rows(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == 10.0);
  CHECK(rows[1][2] == doctest::Approx(1.0 / 20).epsilon(1e-12));
  CHECK(std::abs(rows[1][3] - 1) <= 1e-3);
  CHECK(fs::exists(out / "stamp.txt"));
  CHECK_FALSE(fs::exists(out / "krein.csv"));
}

TEST_CASE("compare writes the excess table for a finite mass") {
  const fs::path out = scratch("ex3");
  ExperimentConfig c = parse_config("[spec]\nfamily = ex3\nalpha = -2\n[time]\nt_grid = 100, 1000, 10000\n"
                                    "[krein]\ns = 0.01, 1\n");
  c.out = out;
  const CompareReport r = run_compare(c);
  CHECK(slurp(out / "ratio.csv").rfind("t,excess_pde,predict,ratio\n", 0) == 0);
  const std::string k = slurp(out / "krein.csv");
  CHECK(k.rfind("s,h,h_star,identity_check\n", 0) == 0);
  CHECK(csv_rows(k).size() == 2);
  for (const auto& row : csv_rows(k)) CHECK(row[3] <= 1e-4);
  CHECK(r.files.size() == 3);
  CHECK(r.passed());
}

TEST_CASE("failing checks are reported") {
  const fs::path out = scratch("tight");
  ExperimentConfig c = parse_config("[spec]\nfamily = ex1\n[time]\nt_grid = 100, 1000\n[checks]\n"
                                    "krein = false\nratio_tol = 1e-6\n");
  c.out = out;
  const CompareReport r = run_compare(c);
  CHECK_FALSE(r.passed());
  CHECK(r.checks[0].detail.find("t_max") != std::string::npos);
}

TEST_CASE("reruns are byte identical") {
  const std::string text = "[spec]\nfamily = ex1\n[time]\nt_grid = 10, 100\n[krein]\ns = 0.1, 1\n[mc]\n"
                           "n_paths = 2000\nt = 1\ndt = 0.01\ny = 0, 1\n[checks]\nmc = true\n[run]\nseed = 5\n";
  std::vector<std::string> names{"ratio.csv", "krein.csv", "mc.csv", "stamp.txt"};
  std::vector<std::string> first;
  for (int run = 0; run < 2; ++run) {
    ExperimentConfig c = parse_config(text);
    c.out = run == 0 ? scratch("rerun") : fs::temp_directory_path() / "bessel_like_harness_rerun";
    const CompareReport r = run_compare(c);
    CHECK(r.files.size() == 4);
    for (std::size_t k = 0; k < names.size(); ++k) {
      const std::string s = slurp(c.out / names[k]);
      CHECK_FALSE(s.empty());
      if (run == 0) {
        first.push_back(s);
        fs::remove(c.out / names[k]);
      } else {
        CHECK(s == first[k]);
      }
    }
  }
  CHECK(first[2].rfind("y,p_hat,std_err\n", 0) == 0);
  CHECK(first[3].find("seed") != std::string::npos);
  const ExperimentConfig other = [&] {
    ExperimentConfig c = parse_config(text + "");
    c.mc.seed = 6;
    c.out = scratch("rerun_seed");
    return c;
  }();
  run_compare(other);
  CHECK(slurp(other.out / "mc.csv") != first[2]);
  CHECK(slurp(other.out / "ratio.csv") == first[0]);
}
