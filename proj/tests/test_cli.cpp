#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "orrw/cli.hpp"

using namespace orrw;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

csv::Table parse_out(const CliResult& r) {
  std::istringstream is(r.out);
  return csv::parse(is);
}

}  // namespace

TEST_CASE("jconst emits the documented row") {
  const auto r = run_cli({"jconst", "--c", "1", "--ell", "2"});
  REQUIRE(r.code == 0);
  const auto table = parse_out(r);
  CHECK(table.header ==
        std::vector<std::string>{"c", "ell", "method", "value", "abs_error_bound"});
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][0] == "1");
  CHECK(table.rows[0][1] == "2");
  CHECK(table.rows[0][2] == "quadrature");
  CHECK(std::stod(table.rows[0][3]) ==
        doctest::Approx(4.0 * std::numbers::ln2).epsilon(1e-10));
  CHECK(std::stod(table.rows[0][4]) <= 1e-9);
  CHECK(table.rng == "splitmix64");
}

TEST_CASE("sk summary row carries the classical mean and variance") {
  const auto r = run_cli({"sk", "--c", "1", "--k", "3"});
  REQUIRE(r.code == 0);
  const auto table = parse_out(r);
  REQUIRE(table.rows.size() == 1);
  CHECK(std::stod(table.rows[0][2]) == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(std::stod(table.rows[0][3]) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("simulate with zero steps emits the origin row") {
  const auto r = run_cli({"simulate", "--c", "2", "--n", "0", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto table = parse_out(r);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0] == std::vector<std::string>{"0", "0", "0", "0", "0"});
}

TEST_CASE("identical invocations produce identical bytes") {
  const std::vector<std::string> args{"simulate", "--c", "2", "--n", "64", "--seed", "3"};
  CHECK(run_cli(args).out == run_cli(args).out);
}

TEST_CASE("--gamma 0 is --c 1") {
  const auto a = run_cli({"simulate", "--gamma", "0", "--n", "50", "--seed", "3"});
  const auto b = run_cli({"simulate", "--c", "1", "--n", "50", "--seed", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("metadata echo reproduces every subcommand bit-exactly") {
  const std::vector<std::vector<std::string>> invocations{
      {"jconst", "--c", "1", "--ell", "2"},
      {"jconst", "--c", "3", "--ell", "1", "--method", "closed"},
      {"sk", "--c", "1", "--k", "3"},
      {"sk", "--c", "2", "--k", "2", "--dist", "--nmax", "128"},
      {"tau", "--k", "3", "--nmax", "64"},
      {"simulate", "--gamma", "0.25", "--n", "25", "--seed", "9"},
      {"exact-range", "--c", "1.5", "--n", "40"},
      {"exact-range", "--c", "1.5", "--n", "40", "--ell", "3"},
      {"genfun", "--fn", "d", "--s", "0.5"},
      {"genfun", "--fn", "g", "--k", "3", "--s", "0.3,0.7"},
      {"genfun", "--fn", "gstable", "--x", "40", "--s", "0.99"},
      {"genfun", "--fn", "G", "--c", "2", "--x", "3", "--s", "0.3,0.7"},
      {"genfun", "--fn", "sk", "--c", "2", "--k", "4", "--s", "0.95"},
      {"genfun", "--fn", "h", "--c", "1", "--ell", "1", "--s", "0.9"},
      {"moments", "--c", "2", "--ell", "3"},
      {"mc", "--c", "1", "--n", "50", "--reps", "600", "--ell", "2", "--seed", "4"},
      {"figure1", "--c-grid", "0.5:1.5:0.5", "--n", "100", "--reps", "256", "--seed", "5"},
      {"tauber", "--c", "1", "--ell", "0", "--s", "0.9,0.99"},
  };
  for (const auto& args : invocations) {
    CAPTURE(args[0]);
    const auto first = run_cli(args);
    REQUIRE(first.code == 0);
    const auto echoed = csv::split(parse_out(first).argv_echo, ' ');
    const auto second = run_cli(echoed);
    REQUIRE(second.code == 0);
    REQUIRE(first.out == second.out);
  }
}

TEST_CASE("figure1 column order is frozen and worker-count independent") {
  const std::vector<std::string> base{"figure1", "--c-grid", "0.5,2",  "--n", "200",
                                      "--reps",  "512",      "--seed", "6"};
  auto with_threads = [&](const std::string& t) {
    auto args = base;
    args.push_back("--threads");
    args.push_back(t);
    return run_cli(args);
  };
  const auto one = with_threads("1");
  const auto three = with_threads("3");
  REQUIRE(one.code == 0);
  CHECK(one.out == three.out);
  CHECK(parse_out(one).header ==
        std::vector<std::string>{"c", "n", "reps", "var_hat", "stderr", "lhs", "rhs"});
}

TEST_CASE("genfun evaluates what the library evaluates") {
  const auto r = run_cli({"genfun", "--fn", "g", "--x", "3", "--s", "0.3,0.7"});
  REQUIRE(r.code == 0);
  const auto table = parse_out(r);
  REQUIRE(table.rows.size() == 2);
  CHECK(std::stod(table.rows[0][2]) == g(3.0, 0.3));
  CHECK(std::stod(table.rows[1][2]) == g(3.0, 0.7));
}

TEST_CASE("exact-range moment mode") {
  const auto r = run_cli({"exact-range", "--c", "2", "--n", "1", "--ell", "1"});
  REQUIRE(r.code == 0);
  const auto table = parse_out(r);
  CHECK(table.header == std::vector<std::string>{"ell", "factorial_moment"});
  REQUIRE(table.rows.size() == 2);
  CHECK(std::stod(table.rows[0][1]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::stod(table.rows[1][1]) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("usage errors exit with status 2 and name the offender") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);

  const auto unknown = run_cli({"simulate", "--c", "1", "--n", "5", "--bogus"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("--bogus") != std::string::npos);

  CHECK(run_cli({"simulate", "--c", "1"}).code == 2);                 // missing --n
  CHECK(run_cli({"jconst"}).code == 2);                               // missing c/gamma
  CHECK(run_cli({"jconst", "--c", "1", "--gamma", "0"}).code == 2);   // both given
  CHECK(run_cli({"genfun", "--fn", "zzz", "--s", "0.5"}).code == 2);  // unknown fn
  CHECK(run_cli({"tauber", "--c", "1"}).code == 2);                   // missing --s
}

TEST_CASE("runtime failures exit with status 1") {
  CHECK(run_cli({"simulate", "--c", "0", "--n", "1"}).code == 1);
  CHECK(run_cli({"jconst", "--c", "2.5", "--method", "closed"}).code == 1);
  CHECK(run_cli({"sk", "--c", "1", "--k", "3", "--out", "/nonexistent/dir/x.csv"}).code == 1);
}

TEST_CASE("--out writes the same bytes to a file") {
  const std::string path = "orrw_cli_out_test.csv";
  const auto direct = run_cli({"tau", "--k", "4", "--nmax", "32"});
  const auto to_file = run_cli({"tau", "--k", "4", "--nmax", "32", "--out", path});
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(path, std::ios::binary);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == direct.out);
  std::remove(path.c_str());
}

TEST_CASE("seed defaults: flag, then environment, then constant") {
  unsetenv("ORRW_SEED");
  const auto fixed = run_cli({"simulate", "--c", "1", "--n", "3"});
  CHECK(parse_out(fixed).argv_echo.find("--seed 42") != std::string::npos);

  setenv("ORRW_SEED", "777", 1);
  const auto env = run_cli({"simulate", "--c", "1", "--n", "3"});
  CHECK(parse_out(env).argv_echo.find("--seed 777") != std::string::npos);

  const auto flag = run_cli({"simulate", "--c", "1", "--n", "3", "--seed", "5"});
  CHECK(parse_out(flag).argv_echo.find("--seed 5") != std::string::npos);
  unsetenv("ORRW_SEED");
}

TEST_CASE("help is exit 0") {
  const auto r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("simulate") != std::string::npos);
}
