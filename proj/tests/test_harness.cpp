#include "doctest.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wsnsteg/harness.hpp"

using namespace wsn::harness;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A configuration small enough for single-second experiment runs.
ExperimentConfig tiny_config(const fs::path& out) {
  ExperimentConfig c;
  c.field.side_length = 64;
  c.field.seed = 11;
  c.ticks = {50, 100};
  c.noise_seed = 13;
  c.dataset_pairs = 12;
  c.classifier.learners = 6;
  c.classifier.seed = 17;
  c.attack.key = 19;
  c.out_dir = out;
  c.workers = 1;
  return c;
}

std::set<std::string> dir_files(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.insert(e.path().filename().string());
  return names;
}

}  // namespace

// --- config -----------------------------------------------------------------

TEST_CASE("config files load, override and reject unknown keys") {
  fs::path dir = fresh_dir("wsnsteg_test_config");
  fs::path file = dir / "run.cfg";
  {
    std::ofstream out(file);
    out << "# experiment setup\n";
    out << "field.side = 128\n";
    out << "ticks = 10, 20, 30\n";
    out << "attack.algorithm = f5   # comment after the value\n";
    out << "attack.rate_bpac = 0.05\n";
    out << "classifier.learners = 40\n";
    out << "attack.key = 0xFF\n";
  }
  ExperimentConfig c = load_config(file);
  CHECK(c.field.side_length == 128);
  CHECK(c.ticks == std::vector<int>{10, 20, 30});
  CHECK(c.attack.algorithm == "f5");
  CHECK(c.attack.rate_bpac == doctest::Approx(0.05));
  CHECK(c.classifier.learners == 40);
  CHECK(c.attack.key == 0xFF);
  CHECK(c.dataset_pairs == 400);  // untouched default

  apply_override(c, "dataset.pairs", "50");
  CHECK(c.dataset_pairs == 50);
  CHECK_THROWS_WITH_AS(apply_override(c, "no.such.key", "1"),
                       "unknown config key: no.such.key", std::invalid_argument);
  CHECK_THROWS_AS(apply_override(c, "field.side", "not-a-number"), std::invalid_argument);

  {
    std::ofstream out(file);
    out << "field.side 128\n";  // missing '='
  }
  CHECK_THROWS(load_config(file));
  CHECK_THROWS(load_config(dir / "missing.cfg"));
  fs::remove_all(dir);
}

TEST_CASE("config validation catches out-of-range settings") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());

  ExperimentConfig bad = c;
  bad.attack.algorithm = "jsteg";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.attack.rate_bpac = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.dataset_pairs = 5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.classifier.train_fraction = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.jpeg_quality = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.ticks = {50, -1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("canonical form round-trips through a config file") {
  ExperimentConfig c;
  c.field.side_length = 100;
  c.attack.rate_bpac = 0.125;
  c.ticks = {1, 2, 3};

  fs::path dir = fresh_dir("wsnsteg_test_canon");
  fs::path file = dir / "canon.cfg";
  {
    std::ofstream out(file);
    out << config_canonical(c);
  }
  ExperimentConfig back = load_config(file);
  CHECK(config_canonical(back) == config_canonical(c));
  CHECK(config_hash(back) == config_hash(c));
  fs::remove_all(dir);
}

TEST_CASE("config hash tracks semantic settings only") {
  ExperimentConfig a;
  ExperimentConfig b = a;
  CHECK(config_hash(a) == config_hash(b));

  b.attack.rate_bpac = 0.2;
  CHECK(config_hash(a) != config_hash(b));

  // Where results are written and how many threads compute them does not
  // change what is computed.
  ExperimentConfig c = a;
  c.out_dir = "/somewhere/else";
  c.workers = 32;
  c.resume = true;
  CHECK(config_hash(c) == config_hash(a));
}

// --- parallel_for -----------------------------------------------------------

TEST_CASE("parallel_for covers every index exactly once for any worker count") {
  for (int workers : {1, 4, 13}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
    CHECK(*std::min_element(hits.begin(), hits.end()) == 1);
  }
  parallel_for(0, 4, [&](std::size_t) { FAIL("called for empty range"); });
}

TEST_CASE("parallel_for propagates the worker exception") {
  auto boom = [](std::size_t i) {
    if (i == 37) throw std::runtime_error("item 37 failed");
  };
  CHECK_THROWS_WITH_AS(parallel_for(100, 4, boom), "item 37 failed", std::runtime_error);
  CHECK_THROWS_AS(parallel_for(100, 1, boom), std::runtime_error);
}

// --- simulate ---------------------------------------------------------------

TEST_CASE("simulate writes one image and one csv per tick, reproducibly") {
  fs::path dir1 = fresh_dir("wsnsteg_test_sim1");
  ExperimentConfig c = tiny_config(dir1);
  cmd_simulate(c);
  for (int t : {50, 100}) {
    CHECK(fs::exists(dir1 / ("snapshot_t" + std::to_string(t) + ".pgm")));
    CHECK(fs::exists(dir1 / ("snapshot_t" + std::to_string(t) + ".csv")));
  }

  fs::path dir2 = fresh_dir("wsnsteg_test_sim2");
  c.out_dir = dir2;
  cmd_simulate(c);
  CHECK(slurp(dir1 / "snapshot_t50.pgm") == slurp(dir2 / "snapshot_t50.pgm"));
  CHECK(slurp(dir1 / "snapshot_t100.csv") == slurp(dir2 / "snapshot_t100.csv"));

  // Resume trusts existing outputs instead of recomputing them.
  fs::path marker = dir2 / "snapshot_t50.pgm";
  {
    std::ofstream out(marker, std::ios::binary);
    out << "sentinel";
  }
  c.resume = true;
  cmd_simulate(c);
  CHECK(slurp(marker) == "sentinel");
  c.resume = false;
  cmd_simulate(c);
  CHECK(slurp(marker) != "sentinel");

  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("simulate with an empty tick list writes nothing") {
  fs::path dir = fresh_dir("wsnsteg_test_sim_empty");
  ExperimentConfig c = tiny_config(dir);
  c.ticks.clear();
  cmd_simulate(c);
  CHECK(dir_files(dir).empty());
  fs::remove_all(dir);
}

// --- attack -----------------------------------------------------------------

TEST_CASE("attack reports are internally consistent") {
  fs::path dir = fresh_dir("wsnsteg_test_attack");
  ExperimentConfig c = tiny_config(dir);
  c.ticks = {75};
  cmd_simulate(c);
  cmd_attack(c);

  REQUIRE(fs::exists(dir / "attack_t75.json"));
  nlohmann::json j = nlohmann::json::parse(std::ifstream(dir / "attack_t75.json"));
  CHECK(j.at("algorithm") == "nsf5");
  CHECK(j.at("tick") == 75);
  CHECK(j.at("bits_embedded").get<std::int64_t>() > 0);
  CHECK(j.at("coefficients_changed").get<std::int64_t>() > 0);
  CHECK(j.at("attempts") == 1);
  CHECK(std::abs(j.at("achieved_rate").get<double>() - 0.1) < 0.01);

  // Every sensor edit moves exactly one rendered pixel, so the edit count,
  // the pixel difference count and the delta rows all agree.
  auto sensor_edits = j.at("sensor_edits").get<std::int64_t>();
  CHECK(j.at("pixels_changed").get<std::int64_t>() == sensor_edits);
  std::string deltas = slurp(dir / "deltas_t75.csv");
  std::int64_t rows = std::count(deltas.begin(), deltas.end(), '\n') - 1;  // header
  CHECK(rows == sensor_edits);

  CHECK(fs::exists(dir / "attacked_t75.pgm"));
  fs::remove_all(dir);
}

TEST_CASE("lsb attack at rate zero leaves the field untouched") {
  fs::path dir = fresh_dir("wsnsteg_test_attack0");
  ExperimentConfig c = tiny_config(dir);
  c.ticks = {50};
  c.attack.algorithm = "lsb";
  c.attack.rate_bpp = 0.0;
  cmd_simulate(c);
  cmd_attack(c);

  CHECK(slurp(dir / "attacked_t50.pgm") == slurp(dir / "snapshot_t50.pgm"));
  nlohmann::json j = nlohmann::json::parse(std::ifstream(dir / "attack_t50.json"));
  CHECK(j.at("pixels_changed") == 0);
  CHECK(j.at("sensor_edits") == 0);
  CHECK(j.at("bits_embedded") == 0);
  fs::remove_all(dir);
}

TEST_CASE("coefficient-domain attack at rate zero changes no coefficients") {
  fs::path dir = fresh_dir("wsnsteg_test_attack0c");
  ExperimentConfig c = tiny_config(dir);
  c.ticks = {50};
  c.attack.rate_bpac = 0.0;
  cmd_attack(c);

  nlohmann::json j = nlohmann::json::parse(std::ifstream(dir / "attack_t50.json"));
  CHECK(j.at("bits_embedded") == 0);
  CHECK(j.at("coefficients_changed") == 0);
  CHECK(j.at("achieved_rate") == 0.0);
  // The attacked field still renders the decompressed plane, so lossy-step
  // pixel differences remain even with nothing embedded.
  CHECK(j.at("pixels_changed").get<std::int64_t>() >= 0);
  fs::remove_all(dir);
}

// --- train-eval and experiment ----------------------------------------------

TEST_CASE("experiment produces a complete, deterministic output set") {
  fs::path dir1 = fresh_dir("wsnsteg_test_exp1");
  ExperimentConfig c = tiny_config(dir1);
  cmd_experiment(c);

  for (const char* name :
       {"summary.json", "metrics.json", "dataset.csv", "features.csv", "roc.csv", "roc_ccp.csv",
        "roc_rqp.csv", "oob_vs_learners.csv", "dsub_sweep.csv", "attacked_t50.pgm",
        "attack_t100.json", "snapshot_t50.pgm"})
    CHECK(fs::exists(dir1 / name));

  nlohmann::json summary = nlohmann::json::parse(std::ifstream(dir1 / "summary.json"));
  for (const char* key : {"config_hash", "achieved_rate", "coefficients_changed",
                          "pixels_changed", "auc", "oob", "auc_ccp", "auc_rqp"})
    CHECK(summary.contains(key));
  CHECK(summary.at("auc").get<double>() >= 0.0);
  CHECK(summary.at("auc").get<double>() <= 1.0);
  CHECK(summary.at("oob").get<double>() >= 0.0);
  CHECK(summary.at("oob").get<double>() <= 1.0);

  // A second run with another worker count and directory is byte-identical.
  fs::path dir2 = fresh_dir("wsnsteg_test_exp2");
  ExperimentConfig c2 = c;
  c2.out_dir = dir2;
  c2.workers = 4;
  cmd_experiment(c2);

  auto files1 = dir_files(dir1), files2 = dir_files(dir2);
  CHECK(files1 == files2);
  for (const std::string& name : files1) CHECK(slurp(dir1 / name) == slurp(dir2 / name));

  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("train-eval resume reuses finished metrics") {
  fs::path dir = fresh_dir("wsnsteg_test_resume");
  ExperimentConfig c = tiny_config(dir);
  cmd_train_eval(c);
  std::string metrics = slurp(dir / "metrics.json");

  // With resume set, existing metrics win even over changed inputs.
  c.resume = true;
  fs::remove(dir / "features.csv");
  cmd_train_eval(c);
  CHECK(slurp(dir / "metrics.json") == metrics);
  CHECK(!fs::exists(dir / "features.csv"));  // nothing was recomputed
  fs::remove_all(dir);
}

TEST_CASE("experiment with the lsb attack still reports every metric") {
  fs::path dir = fresh_dir("wsnsteg_test_lsb_exp");
  ExperimentConfig c = tiny_config(dir);
  c.attack.algorithm = "lsb";
  c.attack.rate_bpp = 1.0;
  cmd_experiment(c);

  nlohmann::json summary = nlohmann::json::parse(std::ifstream(dir / "summary.json"));
  CHECK(summary.contains("auc"));
  CHECK(summary.contains("oob"));
  // Full-rate LSB replacement is what the classic detectors were built for.
  CHECK(summary.at("auc_ccp").get<double>() > 0.8);
  fs::remove_all(dir);
}

TEST_CASE("train-eval refuses an empty tick list") {
  fs::path dir = fresh_dir("wsnsteg_test_noticks");
  ExperimentConfig c = tiny_config(dir);
  c.ticks.clear();
  CHECK_THROWS_AS(cmd_train_eval(c), std::invalid_argument);
  fs::remove_all(dir);
}
