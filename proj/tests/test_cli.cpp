#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlebound/cli.hpp"
#include "mlebound/error.hpp"
#include "mlebound/montecarlo.hpp"
#include "mlebound/report.hpp"

using namespace mlebound;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, sep)) fields.push_back(f);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("bound command examples") {
  auto r = run({"bound", "--formula", "exp-noncanonical", "--n", "10", "--h", "paper",
                "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["total"].get<double>() == doctest::Approx(0.321).epsilon(2e-3));
  CHECK(report::three_dp(j["total"].get<double>()) == "0.321");

  r = run({"bound", "--formula", "gg", "--d", "1", "--p", "1", "--n", "100", "--h", "paper",
           "--format", "json"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["total"].get<double>() == doctest::Approx(0.1653).epsilon(1e-3));

  r = run({"bound", "--formula", "exp-canonical", "--n", "2", "--h", "paper"});
  CHECK(r.code == 2);
  CHECK(r.err.find("n must be >= 3") != std::string::npos);
  CHECK(lines(r.err).size() == 1);
  CHECK(r.out.empty());
}

TEST_CASE("bound human output lists the three terms") {
  const auto r = run({"bound", "--formula", "exp-canonical", "--n", "100"});
  REQUIRE(r.code == 0);
  for (const char* key : {"stein_term", "tail_term", "taylor_term", "total"}) {
    CHECK(r.out.find(key) != std::string::npos);
  }
  CHECK(r.out.find("0.33657") != std::string::npos);
}

TEST_CASE("bound formulas through the general path") {
  auto r = run({"bound", "--formula", "theorem", "--n", "100", "--theta0", "1", "--fisher", "1",
                "--q-prime", "1", "--third-moment", "0.41455329438046", "--mse",
                "0.0105132", "--sup-q-second", "16", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["formula"] == "theorem");

  r = run({"bound", "--formula", "theorem", "--n", "100", "--fisher", "1", "--q-prime", "1",
           "--third-moment", "1", "--q-identity", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["tail_term"].get<double>() == 0.0);
  CHECK(j["taylor_term"].get<double>() == 0.0);

  r = run({"bound", "--formula", "theorem", "--n", "100", "--fisher", "1"});
  CHECK(r.code == 2);

  r = run({"bound", "--formula", "expfam", "--model", "gg:d=2,p=1.5", "--theta0", "1", "--n",
           "50", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["formula"] == "expfam");

  r = run({"bound", "--formula", "ar-canonical", "--model", "exp-canonical", "--theta0", "2",
           "--n", "100", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["total"].get<double>() ==
        doctest::Approx(exp_canonical_bound(100, paper_test_function()).total).epsilon(1e-12));

  r = run({"bound", "--formula", "ar-canonical", "--model", "exp-noncanonical", "--n", "10"});
  CHECK(r.code == 2);

  r = run({"bound", "--formula", "ar-exp-noncanonical", "--n", "100", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[0] == report::kBoundCsvHeader);
}

TEST_CASE("custom h needs norm certificates") {
  auto r = run({"bound", "--formula", "exp-noncanonical", "--n", "4", "--h", "norms"});
  CHECK(r.code == 2);
  r = run({"bound", "--formula", "exp-noncanonical", "--n", "4", "--h", "norms", "--h-sup", "1",
           "--h-prime-sup", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["total"].get<double>() ==
        doctest::Approx(12.0 / std::exp(1.0) * 2.0 / 2.0).epsilon(1e-14));
  r = run({"bound", "--formula", "exp-noncanonical", "--n", "4", "--h", "cosine"});
  CHECK(r.code == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"bound"}).code == 2);
  CHECK(run({"bound", "--formula", "nope"}).code == 2);
  CHECK(run({"bound", "--formula", "gg", "--n", "ten"}).code == 2);
  CHECK(run({"bound", "--formula", "gg", "--format", "xml"}).code == 2);
  CHECK(run({"simulate", "--trials", "0"}).code == 2);
  CHECK(run({"simulate", "--model", "poisson"}).code == 2);
  CHECK(run({"simulate", "--model", "gg:d=2,q=1"}).code == 2);
  CHECK(run({"table1", "--trials", "10"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("simulate output and determinism") {
  const std::vector<std::string> args = {"simulate", "--model", "exp-noncanonical", "--theta0",
                                         "2", "--n", "100", "--trials", "10000", "--seed", "42",
                                         "--format", "csv"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto ls = lines(a.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "n,empirical_distance,standard_error,new_bound,ar_bound,seed,trials");
  const auto f = split(ls[1], ',');
  REQUIRE(f.size() == 7);
  CHECK(report::three_dp(std::stod(f[3])) == "0.101");
  CHECK(report::three_dp(std::stod(f[4])) == "3.401");
  CHECK(f[5] == "42");
  CHECK(f[6] == "10000");

  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  CHECK(run(threaded).out == a.out);
}

TEST_CASE("CSV round-trips the in-memory values") {
  SimulationConfig cfg;
  cfg.model.id = "gg";
  cfg.model.d = 2.0;
  cfg.model.p = 1.5;
  cfg.theta0 = 1.3;
  cfg.n = 25;
  cfg.trials = 5000;
  cfg.seed = 11;
  const auto r = run_simulation(cfg);
  const auto text = report::render_simulations({r}, report::Format::Csv);
  const auto f = split(lines(text)[1], ',');
  CHECK(std::stol(f[0]) == cfg.n);
  CHECK(std::stod(f[1]) == r.empirical_distance);
  CHECK(std::stod(f[2]) == r.standard_error);
  CHECK(std::stod(f[3]) == *r.bound_new);
  CHECK(f[4].empty());
  CHECK(std::stoull(f[5]) == cfg.seed);
  CHECK(std::stol(f[6]) == cfg.trials);

  const auto j = nlohmann::json::parse(report::render_simulations({r}, report::Format::Json));
  CHECK(j[0]["empirical_distance"].get<double>() == r.empirical_distance);
  CHECK(j[0]["ar_bound"].is_null());
}

TEST_CASE("shortest formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 2.414553294380460, 1e-300, 123456789.125, 0.0}) {
    CHECK(std::stod(report::shortest(v)) == v);
  }
  CHECK(report::shortest(0.5) == "0.5");
  CHECK(report::six_sig(0.32057796354) == "0.320578");
  CHECK(report::three_dp(11.8885186815) == "11.889");
}

TEST_CASE("table1 bounds-only report") {
  auto r = run({"table1", "--bounds-only", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 6);
  const char* want_new[] = {"0.321", "0.101", "0.032", "0.010", "0.003"};
  for (int i = 0; i < 5; ++i) {
    const auto f = split(ls[i + 1], ',');
    CHECK(report::three_dp(std::stod(f[1])) == want_new[i]);
  }
  r = run({"table1", "--bounds-only"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("0.321") != std::string::npos);
}

TEST_CASE("table1 json is an array of simulation rows with stable fields") {
  const auto r = run({"table1", "--trials", "1000", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 5);
  for (const auto& row : j) {
    for (const char* key : {"n", "empirical_distance", "standard_error", "new_bound",
                            "ar_bound", "seed", "trials"}) {
      CHECK(row.contains(key));
    }
    CHECK(row.size() == 7);
  }
  const auto more = nlohmann::json::parse(run({"table1", "--trials", "2000", "--format", "json"}).out);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(more[i]["new_bound"] == j[i]["new_bound"]);
    CHECK(more[i]["ar_bound"] == j[i]["ar_bound"]);
    CHECK(more[i]["empirical_distance"] != j[i]["empirical_distance"]);
  }
}

TEST_CASE("--out writes the report to a file") {
  const auto path = std::filesystem::temp_directory_path() / "mlebound_cli_out_test.csv";
  std::filesystem::remove(path);
  const auto r = run({"bound", "--formula", "exp-noncanonical", "--n", "10", "--format", "csv",
                      "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().rfind(report::kBoundCsvHeader, 0) == 0);
  std::filesystem::remove(path);
  const auto bad = run({"bound", "--formula", "exp-noncanonical", "--n", "10", "--out",
                        "/nonexistent-dir/x.csv"});
  CHECK(bad.code == 3);
}

TEST_CASE("parse_model_spec grammar") {
  const auto s = cli::parse_model_spec("gg:d=2,p=1.5");
  CHECK(s.id == "gg");
  CHECK(s.d == 2.0);
  CHECK(s.p == 1.5);
  ModelSpec base;
  base.sigma = 3.0;
  const auto t = cli::parse_model_spec("normal-mean", base);
  CHECK(t.sigma == 3.0);
  CHECK_THROWS_AS(cli::parse_model_spec("gg:d"), DomainError);
  CHECK_THROWS_AS(cli::parse_model_spec("gg:d=x"), DomainError);
  CHECK_THROWS_AS(cli::parse_model_spec(":d=1"), DomainError);
}
