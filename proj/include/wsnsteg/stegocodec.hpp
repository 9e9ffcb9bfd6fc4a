#ifndef WSNSTEG_STEGOCODEC_HPP
#define WSNSTEG_STEGOCODEC_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wsnsteg/dctmodel.hpp"
#include "wsnsteg/imageio.hpp"

namespace wsn::stegocodec {

// Message bits, one per element, values 0/1.
using BitVec = std::vector<std::uint8_t>;

BitVec bytes_to_bits(const std::vector<std::uint8_t>& bytes);  // MSB first
std::vector<std::uint8_t> bits_to_bytes(const BitVec& bits);   // zero padded

struct StegoKey {
  std::uint64_t value = 0;
};

class CapacityExceeded : public std::runtime_error {
 public:
  explicit CapacityExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A wet-paper block whose syndrome equation has no solution over the dry
// carriers. No receiver-transparent retry exists, so embedding surfaces this
// to the caller, who may re-draw the session message and try again.
class UnsolvableSystem : public std::runtime_error {
 public:
  UnsolvableSystem(const std::string& what, std::size_t block) : std::runtime_error(what), block_index(block) {}
  std::size_t block_index;
};

// Skewed LSB used throughout the codec: (1 - c) mod 2 for negative
// coefficients, c mod 2 otherwise. Decrementing the magnitude of any
// coefficient with |c| >= 2 flips this bit.
int f5_lsb(std::int32_t c) noexcept;

// The [2^p - 1, p] Hamming parity matrix whose column j (1-based) is the
// binary expansion of j, most significant bit in row 0.
struct HammingCode {
  int p;
  int block_size;  // 2^p - 1

  explicit HammingCode(int p_);
  // H * x as an integer in [0, 2^p), row 0 contributing the MSB.
  int syndrome(const BitVec& x) const;
  int column(int j) const { return j; }  // column value ≡ its 1-based index
  std::vector<BitVec> matrix() const;    // p rows of 2^p - 1 entries
};

// Modify x in at most one position so that H*y = m. m is read as an integer
// with m[0] the MSB; the flipped position is the column matching m XOR H*x.
BitVec hamming_embed(const BitVec& x, const BitVec& m, const HammingCode& code);

struct EmbedReport {
  std::int64_t bits_embedded = 0;
  std::int64_t coefficients_changed = 0;
  std::int64_t shrinkage_events = 0;
  double achieved_rate = 0.0;  // bits per nonzero AC coefficient of the cover
};

struct EmbedResult {
  dctmodel::DctPlane plane;
  EmbedReport report;
};

// F5: nonzero AC coefficients visited in a key-seeded permutation, p message
// bits per group of 2^p - 1 carriers via hamming_embed; the change operation
// decrements the coefficient magnitude. A change that reaches zero is a
// shrinkage event: the coefficient is dropped, the group refilled from the
// carrier stream, and the same bits embedded again.
EmbedResult f5_embed(const dctmodel::DctPlane& cover, const BitVec& message, StegoKey key, int p);
BitVec f5_extract(const dctmodel::DctPlane& plane, StegoKey key, std::size_t length, int p);

// k x n binary matrix over GF(2) with its dry (modifiable) column set.
struct WetPaperSystem {
  int k = 0, n = 0;
  std::vector<std::uint8_t> d;    // row-major k*n entries, 0/1
  std::vector<std::uint8_t> dry;  // n flags

  std::uint8_t at(int row, int col) const { return d[static_cast<std::size_t>(row) * n + col]; }
  std::uint8_t& at(int row, int col) { return d[static_cast<std::size_t>(row) * n + col]; }
  int dry_count() const;
  // no replicate columns, no zero columns; throws std::invalid_argument
  void validate() const;
};

// Solve D*v = delta over GF(2) with v supported on dry columns only, by
// Gaussian elimination restricted to the dry submatrix. After the pivot
// solution is found, a greedy pass over the nullspace basis reduces the
// weight of v (fewer embedding changes). Returns nullopt when delta is
// outside the span of the dry columns.
std::optional<BitVec> wet_paper_solve(const WetPaperSystem& system, const BitVec& delta);

struct NsF5Params {
  int block_size = 256;  // carriers per wet-paper block
};

// nsF5: the key-seeded permutation of nonzero AC carriers is cut into blocks
// of block_size; each block embeds round(rate * block) message bits by solving
// a wet-paper system whose matrix columns are distinct nonzero k-bit values
// drawn from the keyed generator. Magnitude-1 carriers are wet (a decrement
// would zero them), so embedding never creates zeros and the receiver sees
// the same carrier sequence without knowing the wet set.
EmbedResult nsf5_embed(const dctmodel::DctPlane& cover, const BitVec& message, StegoKey key,
                       double rate_bpac, const NsF5Params& params = {});
BitVec nsf5_extract(const dctmodel::DctPlane& plane, StegoKey key, std::size_t length,
                    double rate_bpac, const NsF5Params& params = {});

// Plain spatial LSB replacement on a key-selected pixel subset; the classic
// detectors' target.
imageio::GrayImage lsb_replace_embed(const imageio::GrayImage& image, const BitVec& message,
                                     StegoKey key);
BitVec lsb_replace_extract(const imageio::GrayImage& image, StegoKey key, std::size_t length);

struct CoeffChange {
  int block_row, block_col, i, j;
  std::int32_t old_value, new_value;
};

// Exact symmetric difference of two planes with identical geometry.
std::vector<CoeffChange> attack_map(const dctmodel::DctPlane& before,
                                    const dctmodel::DctPlane& after);

}  // namespace wsn::stegocodec

#endif
