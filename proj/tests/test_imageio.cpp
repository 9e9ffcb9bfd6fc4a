#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <vector>

#include "wsnsteg/fieldsim.hpp"
#include "wsnsteg/imageio.hpp"

using namespace wsn::imageio;
using namespace wsn::fieldsim;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

RgbImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img;
  img.width = w;
  img.height = h;
  img.pixels.assign(static_cast<std::size_t>(w) * h, {r, g, b});
  return img;
}

SensorField tiny_field(std::uint64_t seed = 1) {
  FieldConfig c;
  c.side_length = 32;
  c.seed = seed;
  return build_field(c);
}

}  // namespace

TEST_CASE("rgb_to_gray uses the Rec. 601 weights with half-away rounding") {
  CHECK(rgb_to_gray(solid(1, 1, 255, 0, 0)).at(0, 0) == 76);
  CHECK(rgb_to_gray(solid(1, 1, 0, 255, 0)).at(0, 0) == 150);
  CHECK(rgb_to_gray(solid(1, 1, 0, 0, 255)).at(0, 0) == 29);
  CHECK(rgb_to_gray(solid(1, 1, 255, 255, 255)).at(0, 0) == 255);
  CHECK(rgb_to_gray(solid(1, 1, 0, 0, 0)).at(0, 0) == 0);
  CHECK(rgb_to_gray(solid(1, 1, 10, 20, 30)).at(0, 0) == 18);
}

TEST_CASE("snapshot_to_rgb routes each reading into its modality channel") {
  SensorField field = tiny_field();
  Snapshot snap = sense_snapshot(field, 50, 42);
  RgbImage rgb = snapshot_to_rgb(snap, field);
  REQUIRE(rgb.width == field.side());
  REQUIRE(rgb.height == field.side());

  for (int y = 0; y < field.side(); ++y)
    for (int x = 0; x < field.side(); ++x) {
      const auto& px = rgb.at(x, y);
      int channel = static_cast<int>(field.at(x, y).modality);
      for (int c = 0; c < 3; ++c)
        if (c != channel) CHECK(px[c] == 0);
      // Readings near 40 should produce a nonzero value in the right channel.
      CHECK(px[channel] > 0);
    }
}

TEST_CASE("render_gray equals the two-step conversion") {
  SensorField field = tiny_field(7);
  Snapshot snap = sense_snapshot(field, 100, 3);
  CHECK(render_gray(snap, field) == rgb_to_gray(snapshot_to_rgb(snap, field)));
}

TEST_CASE("PGM round-trips byte-exactly") {
  GrayImage img;
  img.width = 5;
  img.height = 3;
  img.pixels = {0, 1, 2, 3, 4, 250, 251, 252, 253, 254, 10, 20, 30, 40, 255};

  auto path = temp_file("wsnsteg_test_roundtrip.pgm");
  write_pgm(img, path);
  GrayImage back = read_pgm(path);
  CHECK(back == img);
  std::filesystem::remove(path);
}

TEST_CASE("read_pgm accepts comments and rejects malformed files") {
  auto path = temp_file("wsnsteg_test_bad.pgm");

  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n# a comment line\n2 2\n255\n";
    out.write("\x01\x02\x03\x04", 4);
  }
  GrayImage ok = read_pgm(path);
  CHECK(ok.width == 2);
  CHECK(ok.height == 2);
  CHECK(ok.at(1, 1) == 4);

  {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n2 2\n255\n";
    out.write("\x01\x02\x03\x04", 4);
  }
  CHECK_THROWS(read_pgm(path));  // wrong magic

  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n2 2\n255\n";
    out.write("\x01\x02", 2);
  }
  CHECK_THROWS(read_pgm(path));  // truncated pixel data

  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n2 2\n65535\n";
    out.write("\x01\x02\x03\x04", 4);
  }
  CHECK_THROWS(read_pgm(path));  // unsupported maxval

  CHECK_THROWS(read_pgm(temp_file("wsnsteg_test_missing.pgm")));
  std::filesystem::remove(path);
}

TEST_CASE("gray_delta_to_sensor_deltas reproduces the target image exactly") {
  SensorField field = tiny_field(11);
  Snapshot snap = sense_snapshot(field, 90, 5);
  GrayImage before = render_gray(snap, field);

  // Perturb a scatter of pixels by small steps in both directions.
  GrayImage after = before;
  int bumped = 0;
  for (int y = 0; y < after.height; y += 3)
    for (int x = 0; x < after.width; x += 5) {
      int v = after.at(x, y) + ((x + y) % 2 ? 2 : -2);
      if (v < 0 || v > 255) continue;
      after.at(x, y) = static_cast<std::uint8_t>(v);
      ++bumped;
    }
  REQUIRE(bumped > 20);

  auto deltas = gray_delta_to_sensor_deltas(before, after, field, snap);
  // One edit per changed pixel, and re-rendering reproduces the target.
  int changed = 0;
  for (int y = 0; y < after.height; ++y)
    for (int x = 0; x < after.width; ++x)
      if (after.at(x, y) != before.at(x, y)) ++changed;
  CHECK(static_cast<int>(deltas.size()) == changed);

  Snapshot edited = apply_attack(snap, deltas);
  GrayImage rerendered = render_gray(edited, field);
  CHECK(rerendered == after);
}

TEST_CASE("gray_delta_to_sensor_deltas of identical images is empty") {
  SensorField field = tiny_field(13);
  Snapshot snap = sense_snapshot(field, 50, 2);
  GrayImage img = render_gray(snap, field);
  CHECK(gray_delta_to_sensor_deltas(img, img, field, snap).empty());
}

TEST_CASE("snapshot CSV lists every sensor with its modality") {
  SensorField field = tiny_field(17);
  Snapshot snap = sense_snapshot(field, 75, 8);
  auto path = temp_file("wsnsteg_test_snapshot.csv");
  write_snapshot_csv(snap, field, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,modality,reading");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == field.side() * field.side());
  std::filesystem::remove(path);
}
