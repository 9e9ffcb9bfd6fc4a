#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wsnsteg/harness.hpp"
#include "wsnsteg/rng.hpp"

namespace {

// One master seed fans out to every seeded component so a single flag
// reproduces a whole experiment.
void apply_master_seed(wsn::harness::ExperimentConfig& config, std::uint64_t seed) {
  config.field.seed = seed;
  config.noise_seed = wsn::rng::seed_combine(seed, wsn::rng::tag("noise.seed"));
  config.classifier.seed = wsn::rng::seed_combine(seed, wsn::rng::tag("classifier.seed"));
  config.attack.key = wsn::rng::seed_combine(seed, wsn::rng::tag("attack.key"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensor-field steganography experiment driver"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int workers = -1;
  bool resume = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "flat key = value configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (field, noise, classifier, key)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker threads (0 = hardware concurrency)");
  app.add_flag("--resume", resume, "skip stages whose output files already exist");
  app.add_option("--set", overrides, "override a config key, e.g. --set attack.rate_bpac=0.2")
      ->take_all();

  CLI::App* sim = app.add_subcommand("simulate", "render field snapshots");
  CLI::App* atk = app.add_subcommand("attack", "embed a payload into each snapshot");
  CLI::App* trn = app.add_subcommand("train-eval", "build the dataset, train and evaluate");
  CLI::App* exp = app.add_subcommand("experiment", "simulate + attack + train-eval + summary");
  for (CLI::App* sub : {sim, atk, trn, exp}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    wsn::harness::ExperimentConfig config;
    if (!config_path.empty()) config = wsn::harness::load_config(config_path);
    if (seed_opt->count() > 0) apply_master_seed(config, seed);
    for (const std::string& kv : overrides) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      wsn::harness::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (workers >= 0) config.workers = workers;
    config.resume = resume;

    if (sim->parsed())
      wsn::harness::cmd_simulate(config);
    else if (atk->parsed())
      wsn::harness::cmd_attack(config);
    else if (trn->parsed())
      wsn::harness::cmd_train_eval(config);
    else
      wsn::harness::cmd_experiment(config);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
