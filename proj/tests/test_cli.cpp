#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() { return PANDORA_MARKET_BIN_PATH; }

int run(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = bin() + " " + args;
  if (!stdout_file.empty()) {
    cmd += " > " + stdout_file + " 2>cli_stderr.txt";
  } else {
    cmd += " >/dev/null 2>cli_stderr.txt";
  }
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  REQUIRE(file.good());
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("invalid parameters exit with code 2") {
  CHECK(run("equilibrium --n 1 --mu 0.5 --c 0.1") == 2);
  CHECK(run("equilibrium --n 2 --mu 0.5 --c 0.5") == 2);
  CHECK(run("simulate --n 2 --mu 1.5 --c 0.1") == 2);
  CHECK(run("equilibrium --regime sideways") == 2);
}

TEST_CASE("posted equilibrium report carries the analytic objects") {
  CHECK(run("equilibrium --regime posted --n 2 --mu 0.5 --c 0.1 --out eq.csv") == 0);
  const std::string csv = slurp("eq.csv");
  CHECK(contains(csv, "# pandora-market-csv-v1 command=equilibrium"));
  CHECK(contains(csv, "firm_profit"));
  CHECK(contains(csv, ",0.2,0.2,"));  // profit and welfare columns
  CHECK(contains(csv, ",0.4,0.8,"));  // price support
}

TEST_CASE("hidden equilibrium report") {
  CHECK(run("equilibrium --regime hidden --n 2 --mu 0.5 --c 0.1 --out eqh.csv") == 0);
  const std::string csv = slurp("eqh.csv");
  CHECK(contains(csv, "hidden,2,0.5,0.1"));
  CHECK(contains(csv, ",0,0.4,"));  // zero profit, welfare mu - c
}

TEST_CASE("simulate is byte-identical across reruns and worker counts") {
  const std::string args =
      "simulate --regime posted --n 2 --mu 0.5 --c 0.1 --reps 50000 --seed 42";
  CHECK(run(args + " --workers 1 --out sim_a.csv") == 0);
  CHECK(run(args + " --workers 1 --out sim_b.csv") == 0);
  CHECK(run(args + " --workers 4 --out sim_c.csv") == 0);
  CHECK(run(args + " --workers 8 --out sim_d.json --format json") == 0);
  CHECK(run(args + " --workers 2 --out sim_e.json --format json") == 0);
  CHECK(slurp("sim_a.csv") == slurp("sim_b.csv"));
  CHECK(slurp("sim_a.csv") == slurp("sim_c.csv"));
  CHECK(slurp("sim_d.json") == slurp("sim_e.json"));
}

TEST_CASE("csv and json mirror the same columns") {
  CHECK(run("welfare --mu 0.5 --c 0.1 --n-min 2 --n-max 4 --out w.csv") == 0);
  CHECK(run("welfare --mu 0.5 --c 0.1 --n-min 2 --n-max 4 --format json --out w.json") == 0);
  const std::string csv = slurp("w.csv");
  const std::string json = slurp("w.json");
  std::istringstream lines(csv);
  std::string comment;
  std::string header;
  std::getline(lines, comment);
  std::getline(lines, header);
  std::istringstream cols(header);
  std::string col;
  while (std::getline(cols, col, ',')) {
    CHECK(contains(json, "\"" + col + "\""));
  }
}

TEST_CASE("welfare sweep flags the crossover at the posting threshold") {
  CHECK(run("welfare --mu 0.5 --c 0.1 --n-min 2 --n-max 6 --out w2.csv") == 0);
  const std::string csv = slurp("w2.csv");
  CHECK(contains(csv, "\n3,0.5,0.1,0.4,0.4,0.1,0,4"));
  CHECK(contains(csv, "\n4,0.5,0.1,0.4,0.55,0.05,1,4"));
}

TEST_CASE("hidden simulation has a zero-variance surplus column") {
  CHECK(run("simulate --regime hidden --n 2 --mu 0.5 --c 0.1 --reps 5000 "
            "--seed 7 --out hid.csv") == 0);
  const std::string csv = slurp("hid.csv");
  CHECK(contains(csv, "hidden,2,0.5,0.1,5000,7,0.4,0,"));
}

TEST_CASE("config file fills unset flags; flags win on conflict") {
  {
    std::ofstream cfg("run.cfg");
    cfg << "# sweep configuration\n"
        << "mu = 0.4\n"
        << "c = 0.05\n"
        << "n = 3\n"
        << "format = json\n";
  }
  CHECK(run("equilibrium --config run.cfg --mu 0.5 --out cfg_out.json") == 0);
  const std::string json = slurp("cfg_out.json");
  CHECK(contains(json, "\"mu\": 0.5"));  // flag overrode the file
  CHECK(contains(json, "\"c\": 0.05"));  // file overrode the default
  CHECK(contains(json, "\"n\": 3"));
  CHECK(run("equilibrium --config missing.cfg") == 2);
  {
    std::ofstream cfg("bad.cfg");
    cfg << "mystery_key = 1\n";
  }
  CHECK(run("equilibrium --config bad.cfg") == 2);
}

TEST_CASE("environment seed is the default, flags override it") {
  CHECK(run("simulate --n 2 --mu 0.5 --c 0.1 --reps 2000 --seed 99 --out s1.csv") == 0);
  const int status = std::system(
      (std::string("PANDORA_MARKET_SEED=99 ") + bin() +
       " simulate --n 2 --mu 0.5 --c 0.1 --reps 2000 --out s2.csv >/dev/null 2>&1")
          .c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(slurp("s1.csv") == slurp("s2.csv"));
}

TEST_CASE("verify certifies at modest grids and honors the sabotage hook") {
  CHECK(run("verify --n 2 --mu 0.5 --c 0.1 --price-grid 50 --support-grid 50 "
            "--out v.csv") == 0);
  const std::string csv = slurp("v.csv");
  CHECK(contains(csv, ",1,binary"));  // certified flag set
  CHECK(run("verify --n 2 --mu 0.5 --c 0.1 --price-grid 50 --support-grid 50 "
            "--test-corrupt-profit 0.05") == 1);
  const std::string err = slurp("cli_stderr.txt");
  CHECK(contains(err, "certification FAILED"));
  CHECK(contains(err, "best deviation"));
}
