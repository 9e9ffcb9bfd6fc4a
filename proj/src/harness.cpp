#include "wsnsteg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "wsnsteg/dctmodel.hpp"
#include "wsnsteg/imageio.hpp"
#include "wsnsteg/mathutil.hpp"
#include "wsnsteg/rng.hpp"
#include "wsnsteg/steganalysis.hpp"
#include "wsnsteg/stegocodec.hpp"

namespace wsn::harness {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDatasetFieldTag = rng::tag("dataset.field");
constexpr std::uint64_t kDatasetNoiseTag = rng::tag("dataset.noise");
constexpr std::uint64_t kDatasetMessageTag = rng::tag("dataset.message");
constexpr std::uint64_t kDatasetKeyTag = rng::tag("dataset.key");
constexpr std::uint64_t kDatasetRqpTag = rng::tag("dataset.rqp");
constexpr std::uint64_t kTickMessageTag = rng::tag("tick.message");
constexpr std::uint64_t kTickKeyTag = rng::tag("tick.key");
constexpr std::uint64_t kDsubSweepTag = rng::tag("dsub.sweep");

// ---------------------------------------------------------------------------
// Config parsing

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(value, &used, 0);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad unsigned integer '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
  }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<int>(parse_int(key, item)));
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  field.validate();
  for (int t : ticks)
    if (t < 0) throw std::invalid_argument("ticks must be nonnegative");
  if (jpeg_quality < 1 || jpeg_quality > 100)
    throw std::invalid_argument("jpeg.quality must be in [1,100]");
  if (attack.algorithm != "nsf5" && attack.algorithm != "f5" && attack.algorithm != "lsb")
    throw std::invalid_argument("attack.algorithm must be nsf5, f5 or lsb");
  if (attack.rate_bpac < 0.0 || attack.rate_bpac > 1.0)
    throw std::invalid_argument("attack.rate_bpac must be in [0,1]");
  if (attack.rate_bpp < 0.0 || attack.rate_bpp > 1.0)
    throw std::invalid_argument("attack.rate_bpp must be in [0,1]");
  if (attack.f5_p < 1 || attack.f5_p > 16)
    throw std::invalid_argument("attack.f5_p must be in [1,16]");
  if (attack.retry_budget < 1) throw std::invalid_argument("attack.retry_budget must be >= 1");
  if (classifier.learners < 1) throw std::invalid_argument("classifier.learners must be >= 1");
  if (classifier.d_sub < 0) throw std::invalid_argument("classifier.d_sub must be >= 0");
  if (!(classifier.train_fraction > 0.0 && classifier.train_fraction < 1.0))
    throw std::invalid_argument("classifier.train_fraction must be in (0,1)");
  if (dataset_pairs < 10) throw std::invalid_argument("dataset.pairs must be >= 10");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
}

void apply_override(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "field.side")
    c.field.side_length = static_cast<int>(parse_int(key, value));
  else if (key == "field.zones.temperature")
    c.field.zone_counts[0] = static_cast<int>(parse_int(key, value));
  else if (key == "field.zones.pressure")
    c.field.zone_counts[1] = static_cast<int>(parse_int(key, value));
  else if (key == "field.zones.humidity")
    c.field.zone_counts[2] = static_cast<int>(parse_int(key, value));
  else if (key == "field.fraction.temperature")
    c.field.modality_fractions[0] = parse_double(key, value);
  else if (key == "field.fraction.pressure")
    c.field.modality_fractions[1] = parse_double(key, value);
  else if (key == "field.fraction.humidity")
    c.field.modality_fractions[2] = parse_double(key, value);
  else if (key == "field.drift.temperature")
    c.field.drift_rates[0] = parse_double(key, value);
  else if (key == "field.drift.pressure")
    c.field.drift_rates[1] = parse_double(key, value);
  else if (key == "field.drift.humidity")
    c.field.drift_rates[2] = parse_double(key, value);
  else if (key == "field.base_mean")
    c.field.base_mean = parse_double(key, value);
  else if (key == "field.std_dev")
    c.field.std_dev = parse_double(key, value);
  else if (key == "field.seed")
    c.field.seed = parse_u64(key, value);
  else if (key == "ticks")
    c.ticks = parse_int_list(key, value);
  else if (key == "noise.seed")
    c.noise_seed = parse_u64(key, value);
  else if (key == "jpeg.quality")
    c.jpeg_quality = static_cast<int>(parse_int(key, value));
  else if (key == "attack.algorithm")
    c.attack.algorithm = value;
  else if (key == "attack.rate_bpac")
    c.attack.rate_bpac = parse_double(key, value);
  else if (key == "attack.rate_bpp")
    c.attack.rate_bpp = parse_double(key, value);
  else if (key == "attack.f5_p")
    c.attack.f5_p = static_cast<int>(parse_int(key, value));
  else if (key == "attack.key")
    c.attack.key = parse_u64(key, value);
  else if (key == "attack.retry_budget")
    c.attack.retry_budget = static_cast<int>(parse_int(key, value));
  else if (key == "classifier.learners")
    c.classifier.learners = static_cast<int>(parse_int(key, value));
  else if (key == "classifier.d_sub")
    c.classifier.d_sub = static_cast<int>(parse_int(key, value));
  else if (key == "classifier.seed")
    c.classifier.seed = parse_u64(key, value);
  else if (key == "classifier.train_fraction")
    c.classifier.train_fraction = parse_double(key, value);
  else if (key == "dataset.pairs")
    c.dataset_pairs = static_cast<int>(parse_int(key, value));
  else
    throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected key = value");
    apply_override(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

std::string config_canonical(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "attack.algorithm=" << c.attack.algorithm << "\n";
  out << "attack.f5_p=" << c.attack.f5_p << "\n";
  out << "attack.key=" << c.attack.key << "\n";
  out << "attack.rate_bpac=" << format_double(c.attack.rate_bpac) << "\n";
  out << "attack.rate_bpp=" << format_double(c.attack.rate_bpp) << "\n";
  out << "attack.retry_budget=" << c.attack.retry_budget << "\n";
  out << "classifier.d_sub=" << c.classifier.d_sub << "\n";
  out << "classifier.learners=" << c.classifier.learners << "\n";
  out << "classifier.seed=" << c.classifier.seed << "\n";
  out << "classifier.train_fraction=" << format_double(c.classifier.train_fraction) << "\n";
  out << "dataset.pairs=" << c.dataset_pairs << "\n";
  out << "field.base_mean=" << format_double(c.field.base_mean) << "\n";
  out << "field.drift.humidity=" << format_double(c.field.drift_rates[2]) << "\n";
  out << "field.drift.pressure=" << format_double(c.field.drift_rates[1]) << "\n";
  out << "field.drift.temperature=" << format_double(c.field.drift_rates[0]) << "\n";
  out << "field.fraction.humidity=" << format_double(c.field.modality_fractions[2]) << "\n";
  out << "field.fraction.pressure=" << format_double(c.field.modality_fractions[1]) << "\n";
  out << "field.fraction.temperature=" << format_double(c.field.modality_fractions[0]) << "\n";
  out << "field.seed=" << c.field.seed << "\n";
  out << "field.side=" << c.field.side_length << "\n";
  out << "field.std_dev=" << format_double(c.field.std_dev) << "\n";
  out << "field.zones.humidity=" << c.field.zone_counts[2] << "\n";
  out << "field.zones.pressure=" << c.field.zone_counts[1] << "\n";
  out << "field.zones.temperature=" << c.field.zone_counts[0] << "\n";
  out << "jpeg.quality=" << c.jpeg_quality << "\n";
  out << "noise.seed=" << c.noise_seed << "\n";
  out << "ticks=";
  for (std::size_t i = 0; i < c.ticks.size(); ++i) out << (i ? "," : "") << c.ticks[i];
  out << "\n";
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  std::string canon = config_canonical(c);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char ch : canon) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ULL;
  }
  return rng::mix64(h);
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t n = workers > 0 ? static_cast<std::size_t>(workers)
                              : std::max(1u, std::thread::hardware_concurrency());
  n = std::min(n, count);
  if (n == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto work = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Shared pipeline pieces

namespace {

struct StegoOutcome {
  dctmodel::DctPlane plane;
  stegocodec::EmbedReport report;
  stegocodec::BitVec message;
  int attempts = 0;
};

stegocodec::BitVec random_bits(std::uint64_t seed, std::size_t count) {
  rng::SplitMix64 gen(seed);
  stegocodec::BitVec bits(count);
  for (auto& b : bits) b = static_cast<std::uint8_t>(gen.next() & 1);
  return bits;
}

// Embed floor(rate * nonzero-AC) random keyed bits; on an unsolvable
// wet-paper block, redraw the message (new attempt salt) and retry.
StegoOutcome embed_plane(const dctmodel::DctPlane& cover, const AttackConfig& attack,
                         std::uint64_t message_seed, std::uint64_t key) {
  StegoOutcome out;
  const std::int64_t usable = dctmodel::nonzero_ac_count(cover);
  const auto bits = static_cast<std::size_t>(
      std::max<double>(0.0, std::floor(attack.rate_bpac * static_cast<double>(usable))));
  if (bits == 0) {
    out.plane = cover;
    out.report = stegocodec::EmbedReport{};
    return out;
  }
  std::exception_ptr last;
  for (int attempt = 0; attempt < attack.retry_budget; ++attempt) {
    stegocodec::BitVec message = random_bits(rng::seed_combine(message_seed, attempt), bits);
    try {
      stegocodec::EmbedResult result =
          attack.algorithm == "f5"
              ? stegocodec::f5_embed(cover, message, stegocodec::StegoKey{key}, attack.f5_p)
              : stegocodec::nsf5_embed(cover, message, stegocodec::StegoKey{key},
                                       attack.rate_bpac);
      out.plane = std::move(result.plane);
      out.report = result.report;
      out.message = std::move(message);
      out.attempts = attempt + 1;
      return out;
    } catch (const stegocodec::UnsolvableSystem&) {
      last = std::current_exception();
    }
  }
  std::rethrow_exception(last);
}

imageio::GrayImage lsb_attack_image(const imageio::GrayImage& cover, const AttackConfig& attack,
                                    std::uint64_t message_seed, std::uint64_t key,
                                    std::size_t* bits_out) {
  const auto bits = static_cast<std::size_t>(std::min<double>(
      static_cast<double>(cover.pixels.size()),
      std::max<double>(0.0, round_half_away(attack.rate_bpp *
                                            static_cast<double>(cover.pixels.size())))));
  if (bits_out) *bits_out = bits;
  if (bits == 0) return cover;
  return stegocodec::lsb_replace_embed(cover, random_bits(message_seed, bits),
                                       stegocodec::StegoKey{key});
}

void write_roc_csv(const steganalysis::RocCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "threshold,fpr,tpr\n";
  for (const auto& p : curve.points)
    out << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
        << format_double(p.tpr) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::int64_t count_pixel_diffs(const imageio::GrayImage& a, const imageio::GrayImage& b) {
  std::int64_t n = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i)
    if (a.pixels[i] != b.pixels[i]) ++n;
  return n;
}

struct TickAttack {
  int tick = 0;
  std::size_t bits = 0;
  std::int64_t coefficients_changed = 0;
  std::int64_t shrinkage_events = 0;
  std::int64_t pixels_changed = 0;
  std::size_t sensor_edits = 0;
  double achieved_rate = 0.0;
  int attempts = 0;
};

TickAttack attack_one_tick(const ExperimentConfig& config, const fieldsim::SensorField& field,
                           int t, bool resume_existing) {
  namespace fs = std::filesystem;
  const fs::path attacked_path = config.out_dir / ("attacked_t" + std::to_string(t) + ".pgm");
  const fs::path deltas_path = config.out_dir / ("deltas_t" + std::to_string(t) + ".csv");
  const fs::path report_path = config.out_dir / ("attack_t" + std::to_string(t) + ".json");
  TickAttack result;
  result.tick = t;
  if (resume_existing && fs::exists(attacked_path) && fs::exists(deltas_path) &&
      fs::exists(report_path)) {
    json j = json::parse(std::ifstream(report_path));
    result.bits = j.at("bits_embedded").get<std::size_t>();
    result.coefficients_changed = j.at("coefficients_changed").get<std::int64_t>();
    result.shrinkage_events = j.at("shrinkage_events").get<std::int64_t>();
    result.pixels_changed = j.at("pixels_changed").get<std::int64_t>();
    result.sensor_edits = j.at("sensor_edits").get<std::size_t>();
    result.achieved_rate = j.at("achieved_rate").get<double>();
    result.attempts = j.at("attempts").get<int>();
    return result;
  }

  fieldsim::Snapshot snapshot = fieldsim::sense_snapshot(field, t, config.noise_seed);
  imageio::GrayImage cover = imageio::render_gray(snapshot, field);
  const std::uint64_t message_seed =
      rng::seed_combine(rng::seed_combine(config.attack.key, kTickMessageTag),
                        static_cast<std::uint64_t>(t));
  const std::uint64_t key = rng::seed_combine(
      rng::seed_combine(config.attack.key, kTickKeyTag), static_cast<std::uint64_t>(t));

  imageio::GrayImage embedded;
  if (config.attack.algorithm == "lsb") {
    std::size_t bits = 0;
    embedded = lsb_attack_image(cover, config.attack, message_seed, key, &bits);
    result.bits = bits;
    result.coefficients_changed = count_pixel_diffs(cover, embedded);
    result.achieved_rate =
        cover.pixels.empty() ? 0.0
                             : static_cast<double>(bits) / static_cast<double>(cover.pixels.size());
    result.attempts = 1;
  } else {
    dctmodel::DctPlane plane = dctmodel::forward(cover, config.jpeg_quality);
    StegoOutcome outcome = embed_plane(plane, config.attack, message_seed, key);
    embedded = dctmodel::inverse(outcome.plane);
    result.bits = static_cast<std::size_t>(outcome.report.bits_embedded);
    result.coefficients_changed = outcome.report.coefficients_changed;
    result.shrinkage_events = outcome.report.shrinkage_events;
    result.achieved_rate = outcome.report.achieved_rate;
    result.attempts = outcome.attempts;
  }

  std::vector<fieldsim::SensorDelta> deltas =
      imageio::gray_delta_to_sensor_deltas(cover, embedded, field, snapshot);
  fieldsim::Snapshot attacked = fieldsim::apply_attack(snapshot, deltas);
  imageio::GrayImage attacked_gray = imageio::render_gray(attacked, field);
  result.pixels_changed = count_pixel_diffs(cover, attacked_gray);
  result.sensor_edits = deltas.size();

  imageio::write_pgm(attacked_gray, attacked_path);
  {
    std::ofstream out(deltas_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + deltas_path.string());
    out << "x,y,new_value\n";
    for (const auto& d : deltas)
      out << d.x << ',' << d.y << ',' << format_double(d.new_value) << "\n";
    if (!out) throw std::runtime_error("write failed: " + deltas_path.string());
  }
  json j{{"algorithm", config.attack.algorithm},
         {"tick", t},
         {"bits_embedded", result.bits},
         {"coefficients_changed", result.coefficients_changed},
         {"shrinkage_events", result.shrinkage_events},
         {"pixels_changed", result.pixels_changed},
         {"sensor_edits", result.sensor_edits},
         {"achieved_rate", result.achieved_rate},
         {"attempts", result.attempts},
         {"config_hash", hash_hex(config_hash(config))}};
  write_json(j, report_path);
  return result;
}

// One classifier exemplar: an independent field/noise draw at a cycling tick.
struct Exemplar {
  std::vector<double> cover_features, stego_features;  // empty in lsb mode
  double cover_ccp = 0.0, stego_ccp = 0.0;
  double cover_rqp = 0.0, stego_rqp = 0.0;
  double achieved_rate = 0.0;
  std::int64_t changed = 0;
};

Exemplar build_exemplar(const ExperimentConfig& config, std::size_t i) {
  fieldsim::FieldConfig fc = config.field;
  fc.seed = rng::seed_combine(rng::seed_combine(config.field.seed, kDatasetFieldTag), i);
  fieldsim::SensorField field = fieldsim::build_field(fc);
  const int t = config.ticks[i % config.ticks.size()];
  fieldsim::Snapshot snapshot = fieldsim::sense_snapshot(
      field, t, rng::seed_combine(rng::seed_combine(config.noise_seed, kDatasetNoiseTag), i));
  imageio::GrayImage cover = imageio::render_gray(snapshot, field);

  const std::uint64_t message_seed =
      rng::seed_combine(rng::seed_combine(config.attack.key, kDatasetMessageTag), i);
  const std::uint64_t key =
      rng::seed_combine(rng::seed_combine(config.attack.key, kDatasetKeyTag), i);
  const stegocodec::StegoKey rqp_key{
      rng::seed_combine(rng::seed_combine(config.attack.key, kDatasetRqpTag), i)};

  Exemplar ex;
  if (config.attack.algorithm == "lsb") {
    std::size_t bits = 0;
    imageio::GrayImage stego = lsb_attack_image(cover, config.attack, message_seed, key, &bits);
    ex.achieved_rate =
        cover.pixels.empty() ? 0.0
                             : static_cast<double>(bits) / static_cast<double>(cover.pixels.size());
    ex.changed = count_pixel_diffs(cover, stego);
    // Spatial-domain detectors work on the raw images; the ensemble gets the
    // coefficient statistics of both sides compressed the same way.
    ex.cover_ccp = steganalysis::close_color_pairs_score(cover);
    ex.stego_ccp = steganalysis::close_color_pairs_score(stego);
    ex.cover_rqp = steganalysis::rqp_score(cover, rqp_key);
    ex.stego_rqp = steganalysis::rqp_score(stego, rqp_key);
    ex.cover_features =
        steganalysis::extract_features(dctmodel::forward(cover, config.jpeg_quality));
    ex.stego_features =
        steganalysis::extract_features(dctmodel::forward(stego, config.jpeg_quality));
    return ex;
  }

  dctmodel::DctPlane cover_plane = dctmodel::forward(cover, config.jpeg_quality);
  StegoOutcome outcome = embed_plane(cover_plane, config.attack, message_seed, key);
  ex.achieved_rate = outcome.report.achieved_rate;
  ex.changed = outcome.report.coefficients_changed;
  ex.cover_features = steganalysis::extract_features(cover_plane);
  ex.stego_features = steganalysis::extract_features(outcome.plane);
  // Classic detectors see the decompressed images; both classes go through
  // the same decompression so the detectors react to the embedding only.
  imageio::GrayImage cover_pixels = dctmodel::inverse(cover_plane);
  imageio::GrayImage stego_pixels = dctmodel::inverse(outcome.plane);
  ex.cover_ccp = steganalysis::close_color_pairs_score(cover_pixels);
  ex.stego_ccp = steganalysis::close_color_pairs_score(stego_pixels);
  ex.cover_rqp = steganalysis::rqp_score(cover_pixels, rqp_key);
  ex.stego_rqp = steganalysis::rqp_score(stego_pixels, rqp_key);
  return ex;
}

void write_dataset_csv(const std::vector<Exemplar>& exemplars,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "pair,cover_ccp_score,stego_ccp_score,cover_rqp_score,stego_rqp_score,"
         "achieved_rate,coefficients_changed\n";
  for (std::size_t i = 0; i < exemplars.size(); ++i) {
    const Exemplar& e = exemplars[i];
    out << i << ',' << format_double(e.cover_ccp) << ',' << format_double(e.stego_ccp) << ','
        << format_double(e.cover_rqp) << ',' << format_double(e.stego_rqp) << ','
        << format_double(e.achieved_rate) << ',' << e.changed << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

struct TrainEvalResult {
  double auc = 0.0;
  double oob = 0.0;
  double auc_ccp = 0.0;
  double auc_rqp = 0.0;
  double mean_achieved_rate = 0.0;
  std::int64_t total_changed = 0;
};

TrainEvalResult train_eval(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  if (config.ticks.empty())
    throw std::invalid_argument("train-eval needs a nonempty tick list");
  const std::size_t n = static_cast<std::size_t>(config.dataset_pairs);

  const fs::path metrics_path = config.out_dir / "metrics.json";
  if (config.resume && fs::exists(metrics_path)) {
    json j = json::parse(std::ifstream(metrics_path));
    TrainEvalResult result;
    result.auc = j.at("auc").get<double>();
    result.oob = j.at("oob").get<double>();
    result.auc_ccp = j.at("auc_ccp").get<double>();
    result.auc_rqp = j.at("auc_rqp").get<double>();
    result.mean_achieved_rate = j.at("mean_achieved_rate").get<double>();
    result.total_changed = j.at("total_coefficients_changed").get<std::int64_t>();
    return result;
  }

  std::vector<Exemplar> exemplars(n);
  parallel_for(n, config.workers,
               [&](std::size_t i) { exemplars[i] = build_exemplar(config, i); });

  TrainEvalResult result;
  for (const Exemplar& e : exemplars) {
    result.mean_achieved_rate += e.achieved_rate;
    result.total_changed += e.changed;
  }
  result.mean_achieved_rate /= static_cast<double>(n);
  write_dataset_csv(exemplars, config.out_dir / "dataset.csv");

  // Classic-detector ROCs over the whole dataset.
  std::vector<double> cover_ccp(n), stego_ccp(n), cover_rqp(n), stego_rqp(n);
  for (std::size_t i = 0; i < n; ++i) {
    cover_ccp[i] = exemplars[i].cover_ccp;
    stego_ccp[i] = exemplars[i].stego_ccp;
    cover_rqp[i] = exemplars[i].cover_rqp;
    stego_rqp[i] = exemplars[i].stego_rqp;
  }
  steganalysis::RocCurve roc_ccp = steganalysis::roc_curve(cover_ccp, stego_ccp);
  steganalysis::RocCurve roc_rqp = steganalysis::roc_curve(cover_rqp, stego_rqp);
  result.auc_ccp = roc_ccp.auc;
  result.auc_rqp = roc_rqp.auc;
  write_roc_csv(roc_ccp, config.out_dir / "roc_ccp.csv");
  write_roc_csv(roc_rqp, config.out_dir / "roc_rqp.csv");

  std::vector<std::vector<double>> covers(n), stegos(n);
  for (std::size_t i = 0; i < n; ++i) {
    covers[i] = std::move(exemplars[i].cover_features);
    stegos[i] = std::move(exemplars[i].stego_features);
  }
  steganalysis::write_feature_csv(config.out_dir / "features.csv", covers, stegos);

  const auto n_trn = static_cast<std::size_t>(
      round_half_away(config.classifier.train_fraction * static_cast<double>(n)));
  if (n_trn < 2 || n_trn + 1 > n)
    throw std::invalid_argument("train-eval: split leaves too few pairs on one side");
  std::vector<std::vector<double>> trn_cover(covers.begin(), covers.begin() + n_trn);
  std::vector<std::vector<double>> trn_stego(stegos.begin(), stegos.begin() + n_trn);

  steganalysis::EnsembleParams params;
  params.learners = config.classifier.learners;
  params.d_sub = config.classifier.d_sub;
  params.seed = config.classifier.seed;
  steganalysis::EnsembleModel model = steganalysis::train_ensemble(trn_cover, trn_stego, params);

  std::vector<double> cover_scores, stego_scores;
  for (std::size_t i = n_trn; i < n; ++i) {
    cover_scores.push_back(steganalysis::ensemble_score(model, covers[i]));
    stego_scores.push_back(steganalysis::ensemble_score(model, stegos[i]));
  }
  steganalysis::RocCurve roc = steganalysis::roc_curve(cover_scores, stego_scores);
  result.auc = roc.auc;
  write_roc_csv(roc, config.out_dir / "roc.csv");
  result.oob = steganalysis::oob_error(model, trn_cover, trn_stego);

  // Error as a function of the ensemble size, from the one trained model.
  {
    std::vector<int> sizes;
    for (int l = 1; l <= params.learners; l = l < 10 ? l + 1 : l + 5) sizes.push_back(l);
    if (sizes.back() != params.learners) sizes.push_back(params.learners);
    std::ofstream out(config.out_dir / "oob_vs_learners.csv", std::ios::binary);
    out << "learners,oob_error\n";
    for (int l : sizes)
      out << l << ',' << format_double(steganalysis::oob_error(model, trn_cover, trn_stego, l))
          << "\n";
    if (!out) throw std::runtime_error("write failed: oob_vs_learners.csv");
  }

  // Subspace-size sweep with small throwaway ensembles.
  {
    std::ofstream out(config.out_dir / "dsub_sweep.csv", std::ios::binary);
    out << "d_sub,oob_error\n";
    const int d = model.d;
    const int fractions[] = {16, 8, 4, 2, 1};
    int prev = 0;
    for (int f : fractions) {
      const int d_sub = (d + f - 1) / f;
      if (d_sub == prev) continue;
      prev = d_sub;
      steganalysis::EnsembleParams sweep = params;
      sweep.d_sub = d_sub;
      sweep.learners = std::min(params.learners, 20);
      sweep.seed = rng::seed_combine(rng::seed_combine(params.seed, kDsubSweepTag),
                                     static_cast<std::uint64_t>(d_sub));
      steganalysis::EnsembleModel m = steganalysis::train_ensemble(trn_cover, trn_stego, sweep);
      out << d_sub << ',' << format_double(steganalysis::oob_error(m, trn_cover, trn_stego))
          << "\n";
    }
    if (!out) throw std::runtime_error("write failed: dsub_sweep.csv");
  }

  json metrics{{"config_hash", hash_hex(config_hash(config))},
               {"dataset_pairs", n},
               {"mean_achieved_rate", result.mean_achieved_rate},
               {"total_coefficients_changed", result.total_changed},
               {"auc_ccp", result.auc_ccp},
               {"auc_rqp", result.auc_rqp},
               {"train_pairs", n_trn},
               {"test_pairs", n - n_trn},
               {"feature_dim", model.d},
               {"d_sub", model.d_sub},
               {"learners", params.learners},
               {"auc", result.auc},
               {"oob", result.oob}};
  write_json(metrics, metrics_path);
  return result;
}

}  // namespace

void cmd_simulate(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  config.validate();
  fs::create_directories(config.out_dir);
  if (config.ticks.empty()) return;
  fieldsim::SensorField field = fieldsim::build_field(config.field);
  for (int t : config.ticks) {
    const fs::path pgm = config.out_dir / ("snapshot_t" + std::to_string(t) + ".pgm");
    const fs::path csv = config.out_dir / ("snapshot_t" + std::to_string(t) + ".csv");
    if (config.resume && fs::exists(pgm) && fs::exists(csv)) continue;
    fieldsim::Snapshot snapshot = fieldsim::sense_snapshot(field, t, config.noise_seed);
    imageio::write_pgm(imageio::render_gray(snapshot, field), pgm);
    imageio::write_snapshot_csv(snapshot, field, csv);
  }
}

void cmd_attack(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);
  if (config.ticks.empty()) return;
  fieldsim::SensorField field = fieldsim::build_field(config.field);
  for (int t : config.ticks) attack_one_tick(config, field, t, config.resume);
}

void cmd_train_eval(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);
  train_eval(config);
}

void cmd_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);
  cmd_simulate(config);

  fieldsim::SensorField field = fieldsim::build_field(config.field);
  double achieved = 0.0;
  std::int64_t coeffs_changed = 0, pixels_changed = 0;
  for (int t : config.ticks) {
    TickAttack a = attack_one_tick(config, field, t, config.resume);
    achieved += a.achieved_rate;
    coeffs_changed += a.coefficients_changed;
    pixels_changed += a.pixels_changed;
  }
  if (!config.ticks.empty()) achieved /= static_cast<double>(config.ticks.size());

  TrainEvalResult r = train_eval(config);

  json summary{{"config_hash", hash_hex(config_hash(config))},
               {"achieved_rate", achieved},
               {"coefficients_changed", coeffs_changed},
               {"pixels_changed", pixels_changed},
               {"dataset_mean_achieved_rate", r.mean_achieved_rate},
               {"dataset_coefficients_changed", r.total_changed},
               {"auc", r.auc},
               {"oob", r.oob},
               {"auc_ccp", r.auc_ccp},
               {"auc_rqp", r.auc_rqp}};
  write_json(summary, config.out_dir / "summary.json");
}

}  // namespace wsn::harness
