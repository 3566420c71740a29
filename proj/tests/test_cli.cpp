#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

using json = nlohmann::json;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(FUZZY_DIRAC_BIN) + " " + args +
                    " > cli_stdout.txt 2> cli_stderr.txt";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

json load(const std::string& path) { return json::parse(slurp(path)); }

}  // namespace

TEST_CASE("spectrum subcommand emits the closed-form CSV") {
  REQUIRE(run("spectrum --metric round --lambda-p 0.25 --L 3 --format csv "
              "--output spec.csv") == 0);
  std::string csv = slurp("spec.csv");
  CHECK(csv.find("l,eigenvalue,multiplicity") == 0);
  CHECK(csv.find("0,-0.75,2") != std::string::npos);
  CHECK(csv.find("1,1.25,2") != std::string::npos);
  CHECK(csv.find("1,-1.75,4") != std::string::npos);
  CHECK(csv.find("3,3.25,6") != std::string::npos);
}

TEST_CASE("spectrum subcommand emits schema-tagged JSON") {
  REQUIRE(run("spectrum --metric round --lambda-p 0.25 --L 2 "
              "--output spec.json") == 0);
  json rep = load("spec.json");
  CHECK(rep["schema"] == "fuzzy-dirac/1");
  CHECK(rep["pass"] == true);
  CHECK(rep["blocks"].size() == 3);
}

TEST_CASE("verify subcommand reports signs and grading") {
  SUBCASE("Lorentzian-signature example") {
    REQUIRE(run("verify --metric diag:-1,1,1 --output ver.json") == 0);
    json rep = load("ver.json");
    CHECK(rep["eps"] == 1);
    CHECK(rep["eps_prime"] == 1);
    CHECK(rep["grading_present"] == false);
    CHECK(rep["pass"] == true);
  }
  SUBCASE("round metric has KO dimension 3") {
    REQUIRE(run("verify --metric round --output ver2.json") == 0);
    json rep = load("ver2.json");
    CHECK(rep["eps"] == -1);
    CHECK(rep["eps_prime_iD"] == 1);
    CHECK(rep["ko_dimension"] == 3);
    CHECK(rep["moduli"]["connection_kernel_dimension"] == 3);
  }
}

TEST_CASE("verify output is byte-identical across runs") {
  REQUIRE(run("verify --metric round --output det1.json") == 0);
  REQUIRE(run("verify --metric round --output det2.json") == 0);
  CHECK(slurp("det1.json") == slurp("det2.json"));
}

TEST_CASE("reduce subcommand checks model consistency") {
  REQUIRE(run("reduce --n 2 --metric round --output red.json") == 0);
  json rep = load("red.json");
  CHECK(rep["pass"] == true);
  CHECK(rep["spectrum_deviation"].get<double>() < 1e-8);
  CHECK(rep["homomorphism_residual"].get<double>() < 1e-8);
}

TEST_CASE("distance subcommand matches the antipodal value") {
  REQUIRE(run("distance --n 2 --state-a 0,0 --state-b 3.14159,0 "
              "--output dist.json") == 0);
  json rep = load("dist.json");
  CHECK(std::abs(rep["value"].get<double>() - 1.0) < 1e-4);
  CHECK(std::abs(rep["analytic"].get<double>() - 1.0) < 1e-4);
  CHECK(rep["pass"] == true);
}

TEST_CASE("lichnerowicz subcommand") {
  REQUIRE(run("lichnerowicz --metric round --lambda-p 0.25 --L 2 "
              "--output lich.json") == 0);
  json rep = load("lich.json");
  CHECK(rep["pass"] == true);
  CHECK(rep["max_residual"].get<double>() < 1e-8);
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run("no-such-command") == 2);
  CHECK(run("spectrum --metric bogus") == 2);
  CHECK(run("spectrum --metric diag:1,2") == 2);
  CHECK(run("reduce --metric round") == 2);  // missing --n
}

TEST_CASE("config file merges under explicit flags") {
  {
    std::ofstream cfg("cfg.json");
    cfg << R"({"metric": "round", "lambda_p": 0.25, "L": 2})" << "\n";
  }
  REQUIRE(run("spectrum --config cfg.json --output cfgd.json") == 0);
  json rep = load("cfgd.json");
  CHECK(rep["L"] == 2);
  CHECK(rep["lambda_p"].get<double>() == 0.25);
  // explicit flag wins over the config value
  REQUIRE(run("spectrum --config cfg.json --L 1 --output cfgd2.json") == 0);
  CHECK(load("cfgd2.json")["L"] == 1);
}

TEST_CASE("environment variable overrides the default tolerance") {
  std::string cmd = std::string("FUZZY_DIRAC_TOL=1e-6 ") + FUZZY_DIRAC_BIN +
                    " spectrum --metric round --lambda-p 0.25 --L 1 "
                    "--output envd.json > cli_stdout.txt 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(load("envd.json")["pass"] == true);
}
