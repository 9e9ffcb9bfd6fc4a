#ifndef WSNSTEG_FIELDSIM_HPP
#define WSNSTEG_FIELDSIM_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace wsn::fieldsim {

enum class Modality : std::uint8_t { Temperature = 0, Pressure = 1, Humidity = 2 };

constexpr int kModalityCount = 3;

const char* modality_name(Modality m) noexcept;

struct FieldConfig {
  int side_length = 256;
  // temperature, pressure, humidity
  std::array<int, 3> zone_counts{50, 40, 10};
  std::array<double, 3> modality_fractions{0.5, 0.4, 0.1};
  std::array<double, 3> drift_rates{0.005, 0.01, 0.001};
  double base_mean = 40.0;
  double std_dev = 5.0;
  std::uint64_t seed = 1;

  int total_zones() const noexcept { return zone_counts[0] + zone_counts[1] + zone_counts[2]; }
  // Throws std::invalid_argument when an invariant fails (fractions must sum
  // to 1, zone counts positive, side_length >= 8).
  void validate() const;
};

struct Sensor {
  Modality modality;
  int zone_id;
};

struct Zone {
  Modality modality;
  int center_x, center_y;
  double radius;  // sqrt(xn^2 + yn^2) of the center, coordinates scaled to [0,1]
  int size;       // sensors in this zone
};

// Immutable after build_field; sensor (x, y) lives at index y * side + x.
struct SensorField {
  FieldConfig config;
  std::vector<Sensor> sensors;
  std::vector<Zone> zones;

  int side() const noexcept { return config.side_length; }
  const Sensor& at(int x, int y) const { return sensors[static_cast<std::size_t>(y) * side() + x]; }
};

struct Snapshot {
  int time = 0;
  int side = 0;
  std::vector<double> readings;

  double at(int x, int y) const { return readings[static_cast<std::size_t>(y) * side + x]; }
  double& at(int x, int y) { return readings[static_cast<std::size_t>(y) * side + x]; }
};

struct SensorDelta {
  int x = 0, y = 0;
  double new_value = 0.0;
};

// Partitions the grid into config.total_zones() Voronoi cells around seeded
// centers and assigns each modality its configured number of zones, balancing
// zone sizes so sensor proportions track modality_fractions.
SensorField build_field(const FieldConfig& config);

// Noise-free reading mean for a zone at the given normalized center radius:
//   base_mean * (1 + drift * (t/4) * radius)
double analytic_mean(const FieldConfig& config, Modality m, double radius, int t);

// One reading per sensor: analytic mean of its zone plus N(0, std_dev) noise.
// Each sensor's draw is seeded from (noise_seed, t, sensor index), so any
// reading can be recomputed in isolation and generation order is free.
Snapshot sense_snapshot(const SensorField& field, int t, std::uint64_t noise_seed);

// Copy of the snapshot with the listed readings replaced. Throws
// std::out_of_range if any position is outside the grid.
Snapshot apply_attack(const Snapshot& snapshot, std::span<const SensorDelta> deltas);

}  // namespace wsn::fieldsim

#endif
