#include "wsnsteg/dctmodel.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wsnsteg/mathutil.hpp"

namespace wsn::dctmodel {

namespace {

// JPEG Annex-K luminance quantization table.
constexpr int kBaseLuminance[kBlockArea] = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

// Orthonormal DCT-II basis, kBasis[u][x] = a(u) cos((2x+1)u pi/16), frozen as
// correctly rounded doubles so planes do not depend on the platform libm.
constexpr double kBasis[kBlockSize][kBlockSize] = {
    {+3.53553390593273786e-01, +3.53553390593273786e-01, +3.53553390593273786e-01, +3.53553390593273786e-01, +3.53553390593273786e-01, +3.53553390593273786e-01, +3.53553390593273786e-01, +3.53553390593273786e-01},
    {+4.90392640201615215e-01, +4.15734806151272618e-01, +2.77785116509801089e-01, +9.75451610080641379e-02, -9.75451610080641379e-02, -2.77785116509801089e-01, -4.15734806151272618e-01, -4.90392640201615215e-01},
    {+4.61939766255643369e-01, +1.91341716182544891e-01, -1.91341716182544891e-01, -4.61939766255643369e-01, -4.61939766255643369e-01, -1.91341716182544891e-01, +1.91341716182544891e-01, +4.61939766255643369e-01},
    {+4.15734806151272618e-01, -9.75451610080641379e-02, -4.90392640201615215e-01, -2.77785116509801089e-01, +2.77785116509801089e-01, +4.90392640201615215e-01, +9.75451610080641379e-02, -4.15734806151272618e-01},
    {+3.53553390593273786e-01, -3.53553390593273786e-01, -3.53553390593273786e-01, +3.53553390593273786e-01, +3.53553390593273786e-01, -3.53553390593273786e-01, -3.53553390593273786e-01, +3.53553390593273786e-01},
    {+2.77785116509801089e-01, -4.90392640201615215e-01, +9.75451610080641379e-02, +4.15734806151272618e-01, -4.15734806151272618e-01, -9.75451610080641379e-02, +4.90392640201615215e-01, -2.77785116509801089e-01},
    {+1.91341716182544891e-01, -4.61939766255643369e-01, +4.61939766255643369e-01, -1.91341716182544891e-01, -1.91341716182544891e-01, +4.61939766255643369e-01, -4.61939766255643369e-01, +1.91341716182544891e-01},
    {+9.75451610080641379e-02, -2.77785116509801089e-01, +4.15734806151272618e-01, -4.90392640201615215e-01, +4.90392640201615215e-01, -4.15734806151272618e-01, +2.77785116509801089e-01, -9.75451610080641379e-02}};

void check_quality(int quality) {
  if (quality < 1 || quality > 100)
    throw std::invalid_argument("quality must be in [1,100], got " + std::to_string(quality));
}

// out = B * block * B^T when transpose is false, B^T * block * B otherwise.
void transform_block(const double in[kBlockArea], double out[kBlockArea], bool inverse_dir) {
  double tmp[kBlockArea];
  for (int u = 0; u < kBlockSize; ++u) {
    for (int x = 0; x < kBlockSize; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kBlockSize; ++k) {
        double b = inverse_dir ? kBasis[k][u] : kBasis[u][k];
        acc += b * in[k * kBlockSize + x];
      }
      tmp[u * kBlockSize + x] = acc;
    }
  }
  for (int u = 0; u < kBlockSize; ++u) {
    for (int v = 0; v < kBlockSize; ++v) {
      double acc = 0.0;
      for (int k = 0; k < kBlockSize; ++k) {
        double b = inverse_dir ? kBasis[k][v] : kBasis[v][k];
        acc += tmp[u * kBlockSize + k] * b;
      }
      out[u * kBlockSize + v] = acc;
    }
  }
}

}  // namespace

std::array<double, kBlockArea> dct_8x8(const std::array<double, kBlockArea>& block, bool inverse) {
  std::array<double, kBlockArea> out;
  transform_block(block.data(), out.data(), inverse);
  return out;
}

QuantTable QuantTable::jpeg_luminance(int quality) {
  check_quality(quality);
  int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  QuantTable t;
  for (int i = 0; i < kBlockArea; ++i) {
    int v = (kBaseLuminance[i] * scale + 50) / 100;
    if (v < 1) v = 1;
    if (v > 255) v = 255;
    t.q[i] = v;
  }
  return t;
}

DctPlane forward(const imageio::GrayImage& image, int quality) {
  check_quality(quality);
  if (image.width <= 0 || image.height <= 0)
    throw std::invalid_argument("forward: empty image");

  DctPlane plane;
  plane.width = image.width;
  plane.height = image.height;
  plane.block_cols = (image.width + kBlockSize - 1) / kBlockSize;
  plane.block_rows = (image.height + kBlockSize - 1) / kBlockSize;
  plane.quality = quality;
  plane.table = QuantTable::jpeg_luminance(quality);
  plane.coeffs.resize(plane.block_count() * kBlockArea);

  double block[kBlockArea], freq[kBlockArea];
  for (int br = 0; br < plane.block_rows; ++br) {
    for (int bc = 0; bc < plane.block_cols; ++bc) {
      for (int i = 0; i < kBlockSize; ++i) {
        int y = br * kBlockSize + i;
        if (y >= image.height) y = image.height - 1;  // edge replication
        for (int j = 0; j < kBlockSize; ++j) {
          int x = bc * kBlockSize + j;
          if (x >= image.width) x = image.width - 1;
          block[i * kBlockSize + j] = static_cast<double>(image.at(x, y)) - 128.0;
        }
      }
      transform_block(block, freq, false);
      std::int32_t* out = &plane.coeffs[plane.index(br, bc, 0, 0)];
      for (int k = 0; k < kBlockArea; ++k)
        out[k] = static_cast<std::int32_t>(round_half_away(freq[k] / plane.table.q[k]));
    }
  }
  return plane;
}

imageio::GrayImage inverse(const DctPlane& plane) {
  imageio::GrayImage img;
  img.width = plane.width;
  img.height = plane.height;
  img.pixels.resize(static_cast<std::size_t>(plane.width) * plane.height);

  double freq[kBlockArea], block[kBlockArea];
  for (int br = 0; br < plane.block_rows; ++br) {
    for (int bc = 0; bc < plane.block_cols; ++bc) {
      const std::int32_t* in = &plane.coeffs[plane.index(br, bc, 0, 0)];
      for (int k = 0; k < kBlockArea; ++k)
        freq[k] = static_cast<double>(in[k]) * plane.table.q[k];
      transform_block(freq, block, true);
      for (int i = 0; i < kBlockSize; ++i) {
        int y = br * kBlockSize + i;
        if (y >= img.height) continue;  // padding rows are dropped
        for (int j = 0; j < kBlockSize; ++j) {
          int x = bc * kBlockSize + j;
          if (x >= img.width) continue;
          img.at(x, y) = clamp_u8(round_half_away(block[i * kBlockSize + j] + 128.0));
        }
      }
    }
  }
  return img;
}

std::int64_t nonzero_ac_count(const DctPlane& plane) {
  std::int64_t count = 0;
  for (std::size_t b = 0; b < plane.block_count(); ++b) {
    const std::int32_t* blk = &plane.coeffs[b * kBlockArea];
    for (int k = 1; k < kBlockArea; ++k)
      if (blk[k] != 0) ++count;
  }
  return count;
}

void write_plane_csv(const DctPlane& plane, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "block_row,block_col,i,j,coeff\n";
  for (int br = 0; br < plane.block_rows; ++br)
    for (int bc = 0; bc < plane.block_cols; ++bc)
      for (int i = 0; i < kBlockSize; ++i)
        for (int j = 0; j < kBlockSize; ++j)
          out << br << ',' << bc << ',' << i << ',' << j << ',' << plane.at(br, bc, i, j) << '\n';
  if (!out) throw std::runtime_error("short write to " + path.string());
}

DctPlane read_plane_csv(const std::filesystem::path& path, int quality) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "block_row,block_col,i,j,coeff")
    throw std::runtime_error(path.string() + ": bad plane CSV header");

  struct Entry {
    int br, bc, i, j;
    std::int32_t c;
  };
  std::vector<Entry> entries;
  int max_br = -1, max_bc = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Entry e;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%d", &e.br, &e.bc, &e.i, &e.j, &e.c) != 5)
      throw std::runtime_error(path.string() + ": malformed plane CSV line: " + line);
    if (e.br < 0 || e.bc < 0 || e.i < 0 || e.i >= kBlockSize || e.j < 0 || e.j >= kBlockSize)
      throw std::runtime_error(path.string() + ": plane CSV index out of range");
    max_br = std::max(max_br, e.br);
    max_bc = std::max(max_bc, e.bc);
    entries.push_back(e);
  }
  if (entries.empty()) throw std::runtime_error(path.string() + ": empty plane CSV");

  DctPlane plane;
  plane.block_rows = max_br + 1;
  plane.block_cols = max_bc + 1;
  plane.width = plane.block_cols * kBlockSize;
  plane.height = plane.block_rows * kBlockSize;
  plane.quality = quality;
  plane.table = QuantTable::jpeg_luminance(quality);
  plane.coeffs.assign(plane.block_count() * kBlockArea, 0);
  for (const Entry& e : entries) plane.at(e.br, e.bc, e.i, e.j) = e.c;
  return plane;
}

}  // namespace wsn::dctmodel
