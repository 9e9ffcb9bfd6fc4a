#include "wsnsteg/fieldsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "wsnsteg/rng.hpp"

namespace wsn::fieldsim {

namespace {

constexpr std::uint64_t kFieldTag = rng::tag("fieldsim.centers");
constexpr std::uint64_t kNoiseTag = rng::tag("fieldsim.noise");

Modality modality_of_zone_slot(const std::array<int, 3>& counts, int slot) {
  if (slot < counts[0]) return Modality::Temperature;
  if (slot < counts[0] + counts[1]) return Modality::Pressure;
  return Modality::Humidity;
}

// Assign zones to modalities so that each modality gets exactly its configured
// zone count and the summed zone sizes track the configured sensor fractions.
// Greedy largest-first fill followed by pairwise swap descent; deterministic.
std::vector<Modality> assign_modalities(const FieldConfig& cfg,
                                        const std::vector<int>& sizes) {
  const int zones = cfg.total_zones();
  const double total = static_cast<double>(cfg.side_length) * cfg.side_length;
  std::array<double, 3> target{};
  for (int m = 0; m < 3; ++m) target[m] = cfg.modality_fractions[m] * total;

  std::vector<int> order(zones);
  for (int z = 0; z < zones; ++z) order[z] = z;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sizes[a] > sizes[b]; });

  std::array<int, 3> quota = cfg.zone_counts;
  std::array<double, 3> got{};
  std::vector<Modality> assign(zones, Modality::Temperature);
  for (int z : order) {
    int best = -1;
    double best_deficit = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < 3; ++m) {
      if (quota[m] == 0) continue;
      double deficit = (target[m] - got[m]) / quota[m];
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = m;
      }
    }
    assign[z] = static_cast<Modality>(best);
    got[best] += sizes[z];
    --quota[best];
  }

  // Swap descent: exchange two zones between modalities while it reduces the
  // total absolute deviation from the targets.
  auto deviation = [&]() {
    double d = 0.0;
    for (int m = 0; m < 3; ++m) d += std::abs(got[m] - target[m]);
    return d;
  };
  for (int pass = 0; pass < 64; ++pass) {
    double cur = deviation();
    int best_a = -1, best_b = -1;
    double best_dev = cur;
    for (int a = 0; a < zones; ++a) {
      for (int b = a + 1; b < zones; ++b) {
        int ma = static_cast<int>(assign[a]);
        int mb = static_cast<int>(assign[b]);
        if (ma == mb || sizes[a] == sizes[b]) continue;
        double diff = sizes[b] - sizes[a];
        std::array<double, 3> g = got;
        g[ma] += diff;
        g[mb] -= diff;
        double d = std::abs(g[0] - target[0]) + std::abs(g[1] - target[1]) +
                   std::abs(g[2] - target[2]);
        if (d + 1e-9 < best_dev) {
          best_dev = d;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best_a < 0) break;
    int ma = static_cast<int>(assign[best_a]);
    int mb = static_cast<int>(assign[best_b]);
    double diff = sizes[best_b] - sizes[best_a];
    got[ma] += diff;
    got[mb] -= diff;
    std::swap(assign[best_a], assign[best_b]);
  }
  return assign;
}

}  // namespace

const char* modality_name(Modality m) noexcept {
  switch (m) {
    case Modality::Temperature: return "temperature";
    case Modality::Pressure: return "pressure";
    case Modality::Humidity: return "humidity";
  }
  return "?";
}

void FieldConfig::validate() const {
  if (side_length < 8)
    throw std::invalid_argument("side_length must be >= 8 (one DCT block), got " +
                                std::to_string(side_length));
  for (int c : zone_counts)
    if (c <= 0) throw std::invalid_argument("zone counts must be positive");
  double sum = modality_fractions[0] + modality_fractions[1] + modality_fractions[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("modality fractions must sum to 1");
  if (std_dev < 0.0) throw std::invalid_argument("std_dev must be nonnegative");
  if (total_zones() > side_length * side_length)
    throw std::invalid_argument("more zones than sensors");
}

SensorField build_field(const FieldConfig& config) {
  config.validate();
  const int side = config.side_length;
  const int zones = config.total_zones();

  // Distinct zone centers; a center always owns at least its own cell.
  rng::SplitMix64 gen(rng::seed_combine(config.seed, kFieldTag));
  std::vector<std::pair<int, int>> centers;
  std::vector<std::uint8_t> taken(static_cast<std::size_t>(side) * side, 0);
  centers.reserve(zones);
  while (static_cast<int>(centers.size()) < zones) {
    int x = static_cast<int>(gen.below(static_cast<std::uint64_t>(side)));
    int y = static_cast<int>(gen.below(static_cast<std::uint64_t>(side)));
    std::size_t idx = static_cast<std::size_t>(y) * side + x;
    if (taken[idx]) continue;
    taken[idx] = 1;
    centers.emplace_back(x, y);
  }

  // Nearest center by exact integer squared distance, ties to the lowest
  // zone id; no floating point, so the partition is platform independent.
  std::vector<int> zone_of(static_cast<std::size_t>(side) * side, 0);
  std::vector<int> sizes(zones, 0);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      long best = std::numeric_limits<long>::max();
      int best_z = 0;
      for (int z = 0; z < zones; ++z) {
        long dx = x - centers[z].first;
        long dy = y - centers[z].second;
        long d = dx * dx + dy * dy;
        if (d < best) {
          best = d;
          best_z = z;
        }
      }
      zone_of[static_cast<std::size_t>(y) * side + x] = best_z;
      ++sizes[best_z];
    }
  }

  std::vector<Modality> modality = assign_modalities(config, sizes);

  SensorField field;
  field.config = config;
  field.zones.reserve(zones);
  const double span = static_cast<double>(side - 1);
  for (int z = 0; z < zones; ++z) {
    double xn = centers[z].first / span;
    double yn = centers[z].second / span;
    field.zones.push_back(Zone{modality[z], centers[z].first, centers[z].second,
                               std::sqrt(xn * xn + yn * yn), sizes[z]});
  }
  field.sensors.resize(zone_of.size());
  for (std::size_t i = 0; i < zone_of.size(); ++i)
    field.sensors[i] = Sensor{modality[zone_of[i]], zone_of[i]};
  return field;
}

double analytic_mean(const FieldConfig& config, Modality m, double radius, int t) {
  double rate = config.drift_rates[static_cast<int>(m)];
  return config.base_mean * (1.0 + rate * (t / 4.0) * radius);
}

Snapshot sense_snapshot(const SensorField& field, int t, std::uint64_t noise_seed) {
  if (t < 0) throw std::invalid_argument("tick must be >= 0");
  const int side = field.side();
  Snapshot snap;
  snap.time = t;
  snap.side = side;
  snap.readings.resize(field.sensors.size());
  const std::uint64_t base =
      rng::seed_combine(rng::seed_combine(noise_seed, kNoiseTag), static_cast<std::uint64_t>(t));
  for (std::size_t i = 0; i < field.sensors.size(); ++i) {
    const Sensor& s = field.sensors[i];
    double mean = analytic_mean(field.config, s.modality, field.zones[s.zone_id].radius, t);
    rng::SplitMix64 gen(rng::seed_combine(base, i));
    snap.readings[i] = mean + field.config.std_dev * gen.normal();
  }
  return snap;
}

Snapshot apply_attack(const Snapshot& snapshot, std::span<const SensorDelta> deltas) {
  for (const SensorDelta& d : deltas) {
    if (d.x < 0 || d.x >= snapshot.side || d.y < 0 || d.y >= snapshot.side)
      throw std::out_of_range("attack delta at (" + std::to_string(d.x) + "," +
                              std::to_string(d.y) + ") is outside the grid");
  }
  Snapshot out = snapshot;
  for (const SensorDelta& d : deltas) out.at(d.x, d.y) = d.new_value;
  return out;
}

}  // namespace wsn::fieldsim
