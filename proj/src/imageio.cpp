#include "wsnsteg/imageio.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "wsnsteg/mathutil.hpp"

namespace wsn::imageio {

namespace {

void require_same_shape(int aw, int ah, int bw, int bh, const char* what) {
  if (aw != bw || ah != bh)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(aw) + "x" + std::to_string(ah) + " vs " +
                                std::to_string(bw) + "x" + std::to_string(bh) + ")");
}

}  // namespace

RgbImage snapshot_to_rgb(const fieldsim::Snapshot& snapshot, const fieldsim::SensorField& field) {
  require_same_shape(snapshot.side, snapshot.side, field.side(), field.side(), "snapshot_to_rgb");
  RgbImage img;
  img.width = img.height = snapshot.side;
  img.pixels.assign(snapshot.readings.size(), {0, 0, 0});
  for (std::size_t i = 0; i < snapshot.readings.size(); ++i) {
    int channel = static_cast<int>(field.sensors[i].modality);
    img.pixels[i][channel] = clamp_u8(round_half_away(snapshot.readings[i]));
  }
  return img;
}

GrayImage rgb_to_gray(const RgbImage& image) {
  GrayImage gray;
  gray.width = image.width;
  gray.height = image.height;
  gray.pixels.resize(image.pixels.size());
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    const auto& p = image.pixels[i];
    double y = kLumaWeight[0] * p[0] + kLumaWeight[1] * p[1] + kLumaWeight[2] * p[2];
    gray.pixels[i] = clamp_u8(round_half_away(y));
  }
  return gray;
}

GrayImage render_gray(const fieldsim::Snapshot& snapshot, const fieldsim::SensorField& field) {
  return rgb_to_gray(snapshot_to_rgb(snapshot, field));
}

std::vector<fieldsim::SensorDelta> gray_delta_to_sensor_deltas(const GrayImage& before,
                                                               const GrayImage& after,
                                                               const fieldsim::SensorField& field,
                                                               const fieldsim::Snapshot& snapshot) {
  require_same_shape(before.width, before.height, after.width, after.height,
                     "gray_delta_to_sensor_deltas");
  require_same_shape(before.width, before.height, field.side(), field.side(),
                     "gray_delta_to_sensor_deltas");
  require_same_shape(snapshot.side, snapshot.side, field.side(), field.side(),
                     "gray_delta_to_sensor_deltas");

  std::vector<fieldsim::SensorDelta> deltas;
  for (int y = 0; y < before.height; ++y) {
    for (int x = 0; x < before.width; ++x) {
      int target = after.at(x, y);
      if (target == before.at(x, y)) continue;
      double w = kLumaWeight[static_cast<int>(field.at(x, y).modality)];
      // Channel value whose weighted, rounded luma hits the target exactly.
      // Adjacent channel values move the gray level by 0 or 1, so a small
      // search around target/w finds the exact preimage whenever one exists.
      long base = round_half_away(target / w);
      long chosen = -1;
      for (long off = 0; off <= 4 && chosen < 0; ++off) {
        for (long cand : {base + off, base - off}) {
          if (cand < 0 || cand > 255) continue;
          if (round_half_away(w * cand) == target) {
            chosen = cand;
            break;
          }
        }
      }
      if (chosen < 0) chosen = std::min(255L, std::max(0L, base));  // out-of-range target
      deltas.push_back(fieldsim::SensorDelta{x, y, static_cast<double>(chosen)});
    }
  }
  return deltas;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  // Header tokens may be separated by whitespace and '#' comments.
  auto next_token = [&]() {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
      if (c == '#') {
        while ((c = in.get()) != EOF && c != '\n') {
        }
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw std::runtime_error(path.string() + ": truncated PGM header");
    return tok;
  };

  if (next_token() != "P5") throw std::runtime_error(path.string() + ": not a binary PGM (P5)");
  long w, h, maxval;
  try {
    w = std::stol(next_token());
    h = std::stol(next_token());
    maxval = std::stol(next_token());
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ": malformed PGM header");
  }
  if (w <= 0 || h <= 0 || maxval != 255)
    throw std::runtime_error(path.string() + ": unsupported PGM geometry/maxval");

  GrayImage img;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.pixels.resize(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw std::runtime_error(path.string() + ": truncated PGM payload");
  return img;
}

void write_snapshot_csv(const fieldsim::Snapshot& snapshot, const fieldsim::SensorField& field,
                        const std::filesystem::path& path) {
  require_same_shape(snapshot.side, snapshot.side, field.side(), field.side(),
                     "write_snapshot_csv");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "x,y,modality,reading\n";
  char buf[64];
  for (int y = 0; y < snapshot.side; ++y) {
    for (int x = 0; x < snapshot.side; ++x) {
      std::snprintf(buf, sizeof buf, "%.6f", snapshot.at(x, y));
      out << x << ',' << y << ',' << fieldsim::modality_name(field.at(x, y).modality) << ','
          << buf << '\n';
    }
  }
  if (!out) throw std::runtime_error("short write to " + path.string());
}

}  // namespace wsn::imageio
