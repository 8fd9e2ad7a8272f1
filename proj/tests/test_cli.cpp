#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <fstream>

#include "zetalab/experiments.hpp"
#include "zetalab/report.hpp"

using namespace zetalab;

TEST_SUITE("cli_runner") {

TEST_CASE("unknown experiment tag is rejected before any work") {
  ExperimentConfig cfg;
  cfg.experiment = "does-not-exist";
  auto problems = validate_config(cfg);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("unknown experiment tag") != std::string::npos);
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("all schema violations are listed at once") {
  ExperimentConfig cfg;
  cfg.experiment = "levelset";
  cfg.params = {{"n", "not-a-number"}, {"bogus", 1}};
  auto problems = validate_config(cfg);
  // missing v_list, mistyped n, unknown key
  CHECK(problems.size() == 3);
}

TEST_CASE("no file is written when the config is rejected") {
  ExperimentConfig cfg;
  cfg.experiment = "levelset";
  cfg.out_path = "/tmp/zetalab_reject_test.json";
  std::remove(cfg.out_path.c_str());
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  std::ifstream probe(cfg.out_path);
  CHECK_FALSE(probe.good());
}

TEST_CASE("grid experiment reproduces the reference capital L") {
  ExperimentConfig cfg;
  cfg.experiment = "grid";
  cfg.params = {{"log_t", 1e4}, {"cutoff", 2.0}, {"k", 2.0}};
  ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.passed);
  CHECK(rep.results.at("capital_l") == 4);
}

TEST_CASE("identical configs byte-reproduce the results section") {
  ExperimentConfig cfg;
  cfg.experiment = "levelset";
  cfg.params = {{"log_t_big", 15.0}, {"n", 1200}, {"v_list", {0.0, 0.5, 1.0}}};
  cfg.seed = 99;
  cfg.threads = 1;
  ExperimentReport a = run_experiment(cfg);
  cfg.threads = 2;  // thread count must not change the bytes
  ExperimentReport b = run_experiment(cfg);
  CHECK(a.results_bytes() == b.results_bytes());
  CHECK(a.passed);
}

TEST_CASE("canonical json sorts keys and round-trips doubles") {
  nlohmann::json j;
  j["zulu"] = 0.1;
  j["alpha"] = 3;
  std::string text = canonical_json(j);
  CHECK(text.find("alpha") < text.find("zulu"));
  auto back = nlohmann::json::parse(text);
  CHECK(back.at("zulu").get<double>() == 0.1);
  nlohmann::json empty = nlohmann::json::object();
  empty["results"] = nlohmann::json::object();
  CHECK(canonical_json(empty).find("{}") != std::string::npos);
}

TEST_CASE("csv quoting follows rfc 4180") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("with,comma") == "\"with,comma\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  nlohmann::json j;
  j["field"] = "a,b";
  std::string csv = report_to_csv(j);
  CHECK(csv.find("\"a,b\"") != std::string::npos);
}

TEST_CASE("atomic write leaves a complete file") {
  std::string path = "/tmp/zetalab_atomic_test.json";
  atomic_write(path, "payload\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "payload");
  std::remove(path.c_str());
}

TEST_CASE("sieve experiment exercises the cache interface") {
  ExperimentConfig cfg;
  cfg.experiment = "sieve";
  cfg.params = {{"limit", 50000}, {"cache_out", "/tmp/zetalab_cache_exp.bin"}};
  ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.passed);
  CHECK(rep.results.at("cache_roundtrip_ok") == true);
  CHECK(rep.results.at("count") == 5133);
  std::remove("/tmp/zetalab_cache_exp.bin");
}

TEST_CASE("report envelope carries provenance and csv renders tables") {
  ExperimentConfig cfg;
  cfg.experiment = "zeta-points";
  cfg.params = {{"t_values", {0.0, 14.134725}}};
  ExperimentReport rep = run_experiment(cfg);
  std::string json_text = rep.to_string("json");
  CHECK(json_text.find("\"experiment\"") != std::string::npos);
  CHECK(json_text.find("\"seed\"") != std::string::npos);
  std::string csv_text = rep.to_string("csv");
  CHECK(csv_text.find("est_error") != std::string::npos);
}

}  // TEST_SUITE

TEST_SUITE("cli_runner_guards") {

TEST_CASE("grid scales past the sieve cap are refused cleanly") {
  ExperimentConfig cfg;
  cfg.experiment = "barriers";
  cfg.params = {{"log_t", 1e4}, {"cutoff", 2.0}, {"k", 2.0}, {"n", 100}};
  CHECK_THROWS_WITH_AS(run_experiment(cfg), doctest::Contains("too large to sieve"),
                       std::invalid_argument);
}

}  // TEST_SUITE
