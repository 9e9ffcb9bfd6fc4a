#ifndef WSNSTEG_HARNESS_HPP
#define WSNSTEG_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "wsnsteg/fieldsim.hpp"

namespace wsn::harness {

struct AttackConfig {
  std::string algorithm = "nsf5";  // nsf5 | f5 | lsb
  double rate_bpac = 0.1;          // payload per nonzero AC coefficient (nsf5, f5)
  double rate_bpp = 1.0;           // payload per pixel (lsb)
  int f5_p = 3;                    // Hamming parameter for the f5 algorithm
  std::uint64_t key = 0x77;
  // Whole-attack retries with a redrawn message when a wet-paper block has no
  // solution (astronomically rare at the default rates).
  int retry_budget = 16;
};

struct ClassifierConfig {
  int learners = 100;
  int d_sub = 0;  // 0: ceil(d/4)
  std::uint64_t seed = 9000;
  double train_fraction = 0.5;
};

struct ExperimentConfig {
  fieldsim::FieldConfig field;
  std::vector<int> ticks = {50, 75, 90, 100};
  std::uint64_t noise_seed = 7;
  int jpeg_quality = 80;
  AttackConfig attack;
  ClassifierConfig classifier;
  int dataset_pairs = 400;  // cover/stego pairs fed to the classifier
  std::filesystem::path out_dir = "out";
  int workers = 0;  // 0: hardware concurrency
  bool resume = false;

  void validate() const;  // throws std::invalid_argument
};

// Flat `key = value` config file; '#' starts a comment. Unknown keys are
// errors. See README for the key list.
ExperimentConfig load_config(const std::filesystem::path& path);
// Apply one `key=value` pair (CLI override); same key set as the file.
void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value);

// Canonical serialization (sorted key=value lines) and its FNV-1a hash; the
// hash lands in every metrics/summary JSON so results are traceable to the
// exact configuration.
std::string config_canonical(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

// Runs fn(0..count-1) on `workers` threads (capped at count; 0 = hardware
// concurrency). Work items must write only to their own slots; results are
// then independent of the worker count. The first exception is rethrown.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

// Renders one gray PGM + sensor CSV per tick (snapshot_t{t}.pgm/.csv).
void cmd_simulate(const ExperimentConfig& config);

// Per tick: embed a keyed random message into the snapshot's coefficient
// plane, map the pixel difference back to sensor edits, and write the
// attacked field (attacked_t{t}.pgm), the edits (deltas_t{t}.csv) and an
// embedding report (attack_t{t}.json).
void cmd_attack(const ExperimentConfig& config);

// Builds dataset_pairs cover/stego pairs from varied field seeds and ticks,
// extracts features, trains the ensemble on the first train_fraction of the
// pairs and writes features.csv, roc.csv, roc_ccp.csv, roc_rqp.csv,
// oob_vs_learners.csv, dsub_sweep.csv and metrics.json.
void cmd_train_eval(const ExperimentConfig& config);

// simulate + attack + train_eval + summary.json.
void cmd_experiment(const ExperimentConfig& config);

}  // namespace wsn::harness

#endif
