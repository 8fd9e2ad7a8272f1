#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "zetalab/experiments.hpp"
#include "zetalab/report.hpp"

namespace {

// flag overrides: KEY=VALUE with VALUE parsed as JSON when possible
void apply_override(nlohmann::json& params, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos)
    throw CLI::ValidationError("--param expects KEY=VALUE, got: " + kv);
  std::string key = kv.substr(0, eq);
  std::string value = kv.substr(eq + 1);
  try {
    params[key] = nlohmann::json::parse(value);
  } catch (const nlohmann::json::parse_error&) {
    params[key] = value;  // bare string
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for critical-line level sets and multiscale barriers"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "json";
  uint64_t seed = 1;
  unsigned threads = 0;
  std::vector<std::string> overrides;

  for (const std::string& name : zetalab::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--threads", threads, "worker threads (0 = all cores)");
    sub->add_option("--out", out_path, "report output path (atomic write)");
    sub->add_option("--format", format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--param", overrides, "KEY=VALUE override, repeatable");
  }

  CLI11_PARSE(app, argc, argv);

  zetalab::ExperimentConfig config;
  config.experiment = app.get_subcommands().front()->get_name();
  config.seed = seed;
  config.threads = threads;
  config.out_path = out_path;
  config.format = format;

  CLI::App* active = app.get_subcommands().front();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::fprintf(stderr, "cannot open config: %s\n", config_path.c_str());
        return 2;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      auto doc = nlohmann::json::parse(buf.str());
      config.params = doc.is_object() && doc.contains("params") ? doc.at("params") : doc;
      // a seed in the file applies unless --seed overrides it on the command line
      if (doc.is_object() && doc.contains("seed") && active->count("--seed") == 0)
        config.seed = doc.at("seed").get<uint64_t>();
    }
    for (auto& kv : overrides) apply_override(config.params, kv);

    auto problems = zetalab::validate_config(config);
    if (!problems.empty()) {
      std::fprintf(stderr, "config rejected:\n");
      for (auto& p : problems) std::fprintf(stderr, "  - %s\n", p.c_str());
      return 2;
    }

    zetalab::ExperimentReport report = zetalab::run_experiment(config);
    std::fputs(report.to_string(config.format).c_str(), stdout);
    if (!config.out_path.empty())
      std::fprintf(stderr, "report written to %s\n", config.out_path.c_str());
    return report.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
