#ifndef WSNSTEG_DCTMODEL_HPP
#define WSNSTEG_DCTMODEL_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "wsnsteg/imageio.hpp"

namespace wsn::dctmodel {

constexpr int kBlockSize = 8;
constexpr int kBlockArea = 64;

struct QuantTable {
  std::array<int, kBlockArea> q{};  // row-major, all entries >= 1

  int at(int i, int j) const { return q[i * kBlockSize + j]; }

  // Standard JPEG luminance table scaled with the Annex-K quality convention:
  // quality 50 leaves the table as is, scale = 5000/q below 50 and 200 - 2q
  // above, entries floor((base*scale + 50)/100) clamped to [1, 255].
  static QuantTable jpeg_luminance(int quality);
};

// Quantized blockwise-DCT view of a grayscale image. Images whose sides are
// not multiples of 8 are padded by edge replication before the transform;
// width/height keep the original (cropped) dimensions.
struct DctPlane {
  int width = 0, height = 0;
  int block_rows = 0, block_cols = 0;
  int quality = 0;
  QuantTable table;
  std::vector<std::int32_t> coeffs;  // block-major, 64 per block, (0,0) is DC

  std::int32_t at(int br, int bc, int i, int j) const { return coeffs[index(br, bc, i, j)]; }
  std::int32_t& at(int br, int bc, int i, int j) { return coeffs[index(br, bc, i, j)]; }
  std::size_t index(int br, int bc, int i, int j) const {
    return (static_cast<std::size_t>(br) * block_cols + bc) * kBlockArea + i * kBlockSize + j;
  }
  std::size_t block_count() const { return static_cast<std::size_t>(block_rows) * block_cols; }
  bool same_geometry(const DctPlane& other) const {
    return block_rows == other.block_rows && block_cols == other.block_cols;
  }
};

// Raw orthonormal 8x8 DCT-II of one block (no level shift, no quantization);
// `inverse` applies the transpose. Round-trips to ~1e-15 and is exposed so
// numeric properties can be checked against reference implementations.
std::array<double, kBlockArea> dct_8x8(const std::array<double, kBlockArea>& block, bool inverse);

// Level shift by -128, orthonormal 2-D DCT-II per 8x8 block, divide by the
// quality-scaled luminance table, round half away from zero.
DctPlane forward(const imageio::GrayImage& image, int quality);

// Dequantize, inverse DCT, +128 shift, round, clamp to [0,255], crop padding.
imageio::GrayImage inverse(const DctPlane& plane);

std::int64_t nonzero_ac_count(const DctPlane& plane);

// Flat CSV test-vector format: block_row,block_col,i,j,coeff (zeros included).
void write_plane_csv(const DctPlane& plane, const std::filesystem::path& path);
// Geometry is inferred from the indices; width/height are set to the padded
// grid and the quant table rebuilt from `quality`.
DctPlane read_plane_csv(const std::filesystem::path& path, int quality);

}  // namespace wsn::dctmodel

#endif
