#ifndef WSNSTEG_IMAGEIO_HPP
#define WSNSTEG_IMAGEIO_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "wsnsteg/fieldsim.hpp"

namespace wsn::imageio {

// Rec. 601 luma weights; the one conversion constant shared by rgb_to_gray
// and the inverse sensor-delta mapping.
inline constexpr double kLumaWeight[3] = {0.299, 0.587, 0.114};

struct RgbImage {
  int width = 0, height = 0;
  std::vector<std::array<std::uint8_t, 3>> pixels;

  const std::array<std::uint8_t, 3>& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::array<std::uint8_t, 3>& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

struct GrayImage {
  int width = 0, height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool operator==(const GrayImage&) const = default;
};

// Each sensor's rounded, clamped reading lands in the channel of its
// modality (temperature red, pressure green, humidity blue); the other two
// channels stay 0.
RgbImage snapshot_to_rgb(const fieldsim::Snapshot& snapshot, const fieldsim::SensorField& field);

GrayImage rgb_to_gray(const RgbImage& image);

// Convenience for the sink view: snapshot_to_rgb followed by rgb_to_gray.
GrayImage render_gray(const fieldsim::Snapshot& snapshot, const fieldsim::SensorField& field);

// For every pixel where after differs from before, the sensor edit whose
// re-rendered gray level reproduces the target. Targets outside the channel's
// producible range (cannot happen for perturbations of in-range snapshots)
// are clamped to the closest producible level.
std::vector<fieldsim::SensorDelta> gray_delta_to_sensor_deltas(const GrayImage& before,
                                                               const GrayImage& after,
                                                               const fieldsim::SensorField& field,
                                                               const fieldsim::Snapshot& snapshot);

// Binary PGM, magic P5, maxval 255.
void write_pgm(const GrayImage& image, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

// One row per sensor: x,y,modality,reading
void write_snapshot_csv(const fieldsim::Snapshot& snapshot, const fieldsim::SensorField& field,
                        const std::filesystem::path& path);

}  // namespace wsn::imageio

#endif
