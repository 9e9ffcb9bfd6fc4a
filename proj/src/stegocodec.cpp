#include "wsnsteg/stegocodec.hpp"

#include <algorithm>
#include <numeric>
#include <cassert>
#include <set>
#include <string>

#include "wsnsteg/mathutil.hpp"
#include "wsnsteg/rng.hpp"

namespace wsn::stegocodec {

namespace {

constexpr std::uint64_t kF5PermTag = rng::tag("f5.permutation");
constexpr std::uint64_t kNsf5PermTag = rng::tag("nsf5.permutation");
constexpr std::uint64_t kNsf5MatrixTag = rng::tag("nsf5.matrix");
constexpr std::uint64_t kLsbPermTag = rng::tag("lsb.permutation");

bool is_ac(std::size_t flat_index) {
  return flat_index % dctmodel::kBlockArea != 0;
}

// Flat indices of all AC slots, shuffled with the keyed generator. Both
// codec sides derive the identical order from the key alone.
std::vector<std::uint32_t> keyed_ac_order(const dctmodel::DctPlane& plane, std::uint64_t seed) {
  std::vector<std::uint32_t> order;
  order.reserve(plane.coeffs.size() / dctmodel::kBlockArea * (dctmodel::kBlockArea - 1));
  for (std::uint32_t i = 0; i < plane.coeffs.size(); ++i)
    if (is_ac(i)) order.push_back(i);
  rng::SplitMix64 gen(seed);
  gen.shuffle(order);
  return order;
}

// Keyed order restricted to carriers that are nonzero in `plane`. For nsF5
// the nonzero set is embedding-invariant, so embedder and extractor agree.
std::vector<std::uint32_t> keyed_nonzero_ac_order(const dctmodel::DctPlane& plane,
                                                  std::uint64_t seed) {
  std::vector<std::uint32_t> order = keyed_ac_order(plane, seed);
  std::erase_if(order, [&](std::uint32_t i) { return plane.coeffs[i] == 0; });
  return order;
}

void decrement_magnitude(std::int32_t& c) {
  c += c > 0 ? -1 : 1;
}

int bits_to_int_msb(const BitVec& bits, std::size_t from, int count) {
  int v = 0;
  for (int b = 0; b < count; ++b) {
    v <<= 1;
    if (from + b < bits.size() && bits[from + b]) v |= 1;
  }
  return v;
}

}  // namespace

BitVec bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
  BitVec bits;
  bits.reserve(bytes.size() * 8);
  for (std::uint8_t byte : bytes)
    for (int b = 7; b >= 0; --b) bits.push_back((byte >> b) & 1);
  return bits;
}

std::vector<std::uint8_t> bits_to_bytes(const BitVec& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
  return bytes;
}

int f5_lsb(std::int32_t c) noexcept {
  if (c < 0) return static_cast<int>((1 - static_cast<std::int64_t>(c)) % 2);
  return c % 2;
}

HammingCode::HammingCode(int p_) : p(p_) {
  if (p < 1 || p > 16) throw std::invalid_argument("Hamming parameter p must be in [1,16]");
  block_size = (1 << p) - 1;
}

int HammingCode::syndrome(const BitVec& x) const {
  if (static_cast<int>(x.size()) != block_size)
    throw std::invalid_argument("Hamming syndrome: carrier length != 2^p - 1");
  int s = 0;
  for (int j = 0; j < block_size; ++j)
    if (x[j]) s ^= (j + 1);
  return s;
}

std::vector<BitVec> HammingCode::matrix() const {
  std::vector<BitVec> rows(p, BitVec(block_size, 0));
  for (int j = 1; j <= block_size; ++j)
    for (int r = 0; r < p; ++r)
      rows[r][j - 1] = static_cast<std::uint8_t>((j >> (p - 1 - r)) & 1);
  return rows;
}

BitVec hamming_embed(const BitVec& x, const BitVec& m, const HammingCode& code) {
  if (static_cast<int>(m.size()) != code.p)
    throw std::invalid_argument("hamming_embed: message length != p");
  int m_val = bits_to_int_msb(m, 0, code.p);
  int delta = m_val ^ code.syndrome(x);
  BitVec y = x;
  if (delta != 0) y[delta - 1] ^= 1;
  return y;
}

// ---------------------------------------------------------------------------
// F5

EmbedResult f5_embed(const dctmodel::DctPlane& cover, const BitVec& message, StegoKey key, int p) {
  HammingCode code(p);
  const std::int64_t usable = dctmodel::nonzero_ac_count(cover);
  const std::int64_t groups_needed = (static_cast<std::int64_t>(message.size()) + p - 1) / p;
  if (groups_needed * code.block_size > usable)
    throw CapacityExceeded("f5: message needs " + std::to_string(groups_needed * code.block_size) +
                           " carriers, cover has " + std::to_string(usable));

  EmbedResult result{cover, {}};
  dctmodel::DctPlane& plane = result.plane;
  std::vector<std::uint32_t> order = keyed_ac_order(plane, rng::seed_combine(key.value, kF5PermTag));

  std::size_t walk = 0;
  auto next_nonzero = [&]() -> std::int64_t {
    while (walk < order.size()) {
      std::uint32_t pos = order[walk++];
      if (plane.coeffs[pos] != 0) return pos;
    }
    return -1;
  };

  std::vector<std::uint32_t> buffer;
  buffer.reserve(code.block_size);
  for (std::size_t chunk = 0; chunk < message.size(); chunk += p) {
    int m_val = bits_to_int_msb(message, chunk, p);  // short final chunk is zero padded
    for (;;) {
      while (static_cast<int>(buffer.size()) < code.block_size) {
        std::int64_t pos = next_nonzero();
        if (pos < 0) throw CapacityExceeded("f5: carriers exhausted (shrinkage)");
        buffer.push_back(static_cast<std::uint32_t>(pos));
      }
      int syn = 0;
      for (int j = 0; j < code.block_size; ++j)
        if (f5_lsb(plane.coeffs[buffer[j]])) syn ^= (j + 1);
      int delta = m_val ^ syn;
      if (delta == 0) break;
      std::int32_t& c = plane.coeffs[buffer[delta - 1]];
      decrement_magnitude(c);
      ++result.report.coefficients_changed;
      if (c == 0) {
        ++result.report.shrinkage_events;
        buffer.erase(buffer.begin() + (delta - 1));
        continue;  // refill and re-embed the same bits
      }
      break;
    }
    buffer.clear();
  }

  result.report.bits_embedded = static_cast<std::int64_t>(message.size());
  result.report.achieved_rate = usable > 0 ? static_cast<double>(message.size()) / usable : 0.0;
  return result;
}

BitVec f5_extract(const dctmodel::DctPlane& plane, StegoKey key, std::size_t length, int p) {
  HammingCode code(p);
  std::vector<std::uint32_t> order = keyed_ac_order(plane, rng::seed_combine(key.value, kF5PermTag));

  BitVec out;
  out.reserve(length);
  std::size_t walk = 0;
  std::vector<std::uint32_t> buffer;
  while (out.size() < length) {
    buffer.clear();
    while (static_cast<int>(buffer.size()) < code.block_size) {
      while (walk < order.size() && plane.coeffs[order[walk]] == 0) ++walk;
      if (walk == order.size())
        throw CapacityExceeded("f5: requested length exceeds available groups");
      buffer.push_back(order[walk++]);
    }
    int syn = 0;
    for (int j = 0; j < code.block_size; ++j)
      if (f5_lsb(plane.coeffs[buffer[j]])) syn ^= (j + 1);
    for (int b = code.p - 1; b >= 0 && out.size() < length; --b)
      out.push_back(static_cast<std::uint8_t>((syn >> b) & 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wet paper codes

int WetPaperSystem::dry_count() const {
  return static_cast<int>(std::count(dry.begin(), dry.end(), std::uint8_t{1}));
}

void WetPaperSystem::validate() const {
  if (k <= 0 || n <= 0) throw std::invalid_argument("wet paper system: empty matrix");
  if (d.size() != static_cast<std::size_t>(k) * n || dry.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("wet paper system: inconsistent sizes");
  std::set<std::vector<std::uint8_t>> seen;
  for (int j = 0; j < n; ++j) {
    std::vector<std::uint8_t> col(k);
    bool zero = true;
    for (int r = 0; r < k; ++r) {
      col[r] = at(r, j);
      zero = zero && col[r] == 0;
    }
    if (zero) throw std::invalid_argument("wet paper system: zero column");
    if (!seen.insert(std::move(col)).second)
      throw std::invalid_argument("wet paper system: replicated column");
  }
}

namespace {

// Row-packed GF(2) matrix with an extra augmented bit per row.
class PackedRows {
 public:
  PackedRows(int rows, int cols) : cols_(cols), words_((cols + 1 + 63) / 64), data_(static_cast<std::size_t>(rows) * words_, 0) {}

  void set(int r, int c) { data_[static_cast<std::size_t>(r) * words_ + c / 64] |= 1ULL << (c % 64); }
  bool get(int r, int c) const {
    return (data_[static_cast<std::size_t>(r) * words_ + c / 64] >> (c % 64)) & 1;
  }
  void set_rhs(int r) { set(r, cols_); }
  bool rhs(int r) const { return get(r, cols_); }
  void xor_row(int dst, int src) {
    std::uint64_t* d = &data_[static_cast<std::size_t>(dst) * words_];
    const std::uint64_t* s = &data_[static_cast<std::size_t>(src) * words_];
    for (int w = 0; w < words_; ++w) d[w] ^= s[w];
  }
  void swap_rows(int a, int b) {
    if (a == b) return;
    std::swap_ranges(data_.begin() + static_cast<std::size_t>(a) * words_,
                     data_.begin() + static_cast<std::size_t>(a + 1) * words_,
                     data_.begin() + static_cast<std::size_t>(b) * words_);
  }

 private:
  int cols_, words_;
  std::vector<std::uint64_t> data_;
};

int weight(const std::vector<std::uint64_t>& v) {
  int w = 0;
  for (std::uint64_t word : v) w += __builtin_popcountll(word);
  return w;
}

}  // namespace

std::optional<BitVec> wet_paper_solve(const WetPaperSystem& system, const BitVec& delta) {
  if (static_cast<int>(delta.size()) != system.k)
    throw std::invalid_argument("wet_paper_solve: delta length != k");
#ifndef NDEBUG
  system.validate();
#endif

  std::vector<int> dry_cols;
  for (int j = 0; j < system.n; ++j)
    if (system.dry[j]) dry_cols.push_back(j);
  const int dc = static_cast<int>(dry_cols.size());

  // Gauss-Jordan on [A | delta] where A is the dry submatrix.
  PackedRows m(system.k, dc);
  for (int r = 0; r < system.k; ++r) {
    for (int c = 0; c < dc; ++c)
      if (system.at(r, dry_cols[c])) m.set(r, c);
    if (delta[r]) m.set_rhs(r);
  }

  std::vector<int> pivot_row_of(dc, -1);
  int rank = 0;
  for (int c = 0; c < dc && rank < system.k; ++c) {
    int pr = -1;
    for (int r = rank; r < system.k; ++r)
      if (m.get(r, c)) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    m.swap_rows(rank, pr);
    for (int r = 0; r < system.k; ++r)
      if (r != rank && m.get(r, c)) m.xor_row(r, rank);
    pivot_row_of[c] = rank;
    ++rank;
  }
  for (int r = rank; r < system.k; ++r)
    if (m.rhs(r)) return std::nullopt;

  // Particular solution in dry coordinates (free columns zero), packed.
  const int vwords = (dc + 63) / 64;
  std::vector<std::uint64_t> v(vwords, 0);
  for (int c = 0; c < dc; ++c)
    if (pivot_row_of[c] >= 0 && m.rhs(pivot_row_of[c])) v[c / 64] |= 1ULL << (c % 64);

  // Nullspace basis: one vector per free column. A greedy descent over the
  // basis trims the solution weight, i.e. the number of embedding changes.
  std::vector<std::vector<std::uint64_t>> basis;
  for (int f = 0; f < dc; ++f) {
    if (pivot_row_of[f] >= 0) continue;
    std::vector<std::uint64_t> b(vwords, 0);
    b[f / 64] |= 1ULL << (f % 64);
    for (int c = 0; c < dc; ++c)
      if (pivot_row_of[c] >= 0 && m.get(pivot_row_of[c], f)) b[c / 64] |= 1ULL << (c % 64);
    basis.push_back(std::move(b));
  }
  std::vector<std::uint64_t> cand(vwords);
  for (int pass = 0; pass < 4; ++pass) {
    bool improved = false;
    for (const auto& b : basis) {
      for (int w = 0; w < vwords; ++w) cand[w] = v[w] ^ b[w];
      if (weight(cand) < weight(v)) {
        v.swap(cand);
        improved = true;
      }
    }
    if (!improved) break;
  }

  BitVec out(system.n, 0);
  for (int c = 0; c < dc; ++c)
    if ((v[c / 64] >> (c % 64)) & 1) out[dry_cols[c]] = 1;

#ifndef NDEBUG
  for (int r = 0; r < system.k; ++r) {
    int acc = 0;
    for (int j = 0; j < system.n; ++j) acc ^= system.at(r, j) & out[j];
    assert(acc == delta[r] && "wet_paper_solve: D*v != delta");
  }
  for (int j = 0; j < system.n; ++j) assert(!(out[j] && !system.dry[j]));
#endif
  return out;
}

// ---------------------------------------------------------------------------
// nsF5

namespace {

struct WpcBlock {
  std::size_t carrier_offset;  // into the keyed carrier order
  int n_eff;                   // carriers used by this block's system
  int k;                       // message bits in this block
  std::size_t message_offset;
};

// A block whose bit share k is tiny can only use 2^k - 1 of its carriers
// (distinct nonzero columns), leaving a fragile, mostly-wet system. Shares
// below this floor are handed to the left neighbour instead.
constexpr std::int64_t kMinBlockBits = 8;

// Shared embed/extract schedule: carriers are cut into consecutive chunks of
// block_size (the final chunk keeps its natural size) and the message is
// split across chunks in proportion to their carrier counts by the
// largest-remainder method, so each chunk carries about rate * chunk bits
// with no leftover concentrated into a degenerate trailing system. Everything
// here depends only on (carriers, message length, block_size), which the
// receiver also knows. n_eff caps the system width at 2^k - 1 so distinct
// nonzero columns exist; with shares of at least kMinBlockBits the cap is
// nearly always the full chunk.
std::vector<WpcBlock> wpc_schedule(std::size_t carriers, double rate, std::size_t message_length,
                                   const NsF5Params& params) {
  std::vector<WpcBlock> blocks;
  if (message_length == 0) return blocks;
  if (static_cast<double>(message_length) > rate * static_cast<double>(carriers))
    throw CapacityExceeded("nsf5: message longer than rate * carrier count");

  std::vector<std::int64_t> sizes;
  for (std::size_t off = 0; off < carriers; off += sizes.back())
    sizes.push_back(static_cast<std::int64_t>(
        std::min<std::size_t>(params.block_size, carriers - off)));
  const std::size_t chunk_count = sizes.size();

  // Integer largest-remainder split of message_length proportional to sizes.
  std::vector<std::int64_t> share(chunk_count), remainder(chunk_count);
  std::int64_t assigned = 0;
  for (std::size_t b = 0; b < chunk_count; ++b) {
    const std::int64_t exact = static_cast<std::int64_t>(message_length) * sizes[b];
    share[b] = exact / static_cast<std::int64_t>(carriers);
    remainder[b] = exact % static_cast<std::int64_t>(carriers);
    assigned += share[b];
  }
  std::vector<std::size_t> order(chunk_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(message_length) - assigned; ++i)
    ++share[order[static_cast<std::size_t>(i)]];

  // Pool sub-floor shares into the left neighbour (cascades right to left);
  // only the very first loaded chunk may keep a share below the floor.
  for (std::size_t b = chunk_count; b-- > 1;)
    if (share[b] > 0 && share[b] < kMinBlockBits) {
      share[b - 1] += share[b];
      share[b] = 0;
    }

  std::size_t offset = 0, msg_off = 0;
  for (std::size_t b = 0; b < chunk_count; ++b) {
    const int n_b = static_cast<int>(sizes[b]);
    const int k_b = static_cast<int>(share[b]);
    if (k_b > 0) {
      int n_eff = k_b >= 31 ? n_b : std::min(n_b, (1 << k_b) - 1);
      blocks.push_back(WpcBlock{offset, n_eff, k_b, msg_off});
      msg_off += static_cast<std::size_t>(k_b);
    }
    offset += static_cast<std::size_t>(n_b);
  }
  return blocks;
}

// Distinct nonzero k-bit column values from the keyed generator, one word
// vector per column, bit r of the value feeding matrix row r.
std::vector<std::vector<std::uint64_t>> wpc_columns(std::uint64_t seed, int k, int n) {
  const int words = (k + 63) / 64;
  const std::uint64_t top_mask = (k % 64) ? ((1ULL << (k % 64)) - 1) : ~0ULL;
  rng::SplitMix64 gen(seed);
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<std::vector<std::uint64_t>> cols;
  cols.reserve(n);
  while (static_cast<int>(cols.size()) < n) {
    std::vector<std::uint64_t> col(words);
    for (int w = 0; w < words; ++w) col[w] = gen.next();
    col[words - 1] &= top_mask;
    bool zero = std::all_of(col.begin(), col.end(), [](std::uint64_t w) { return w == 0; });
    if (zero || !seen.insert(col).second) continue;
    cols.push_back(std::move(col));
  }
  return cols;
}

WetPaperSystem build_system(const std::vector<std::vector<std::uint64_t>>& cols, int k,
                            const std::vector<std::uint8_t>& dry) {
  WetPaperSystem sys;
  sys.k = k;
  sys.n = static_cast<int>(cols.size());
  sys.d.assign(static_cast<std::size_t>(k) * sys.n, 0);
  sys.dry = dry;
  for (int j = 0; j < sys.n; ++j)
    for (int r = 0; r < k; ++r)
      sys.at(r, j) = static_cast<std::uint8_t>((cols[j][r / 64] >> (r % 64)) & 1);
  return sys;
}

}  // namespace

EmbedResult nsf5_embed(const dctmodel::DctPlane& cover, const BitVec& message, StegoKey key,
                       double rate_bpac, const NsF5Params& params) {
  if (rate_bpac <= 0.0 || rate_bpac > 1.0)
    throw std::invalid_argument("nsf5: rate must be in (0,1]");
  if (params.block_size < 2 || params.block_size > 512)
    throw std::invalid_argument("nsf5: block_size must be in [2,512]");
  const std::int64_t usable = dctmodel::nonzero_ac_count(cover);
  if (static_cast<double>(message.size()) > rate_bpac * static_cast<double>(usable))
    throw CapacityExceeded("nsf5: message longer than rate * nonzero AC count");

  EmbedResult result{cover, {}};
  dctmodel::DctPlane& plane = result.plane;
  std::vector<std::uint32_t> carriers =
      keyed_nonzero_ac_order(plane, rng::seed_combine(key.value, kNsf5PermTag));
  std::vector<WpcBlock> blocks = wpc_schedule(carriers.size(), rate_bpac, message.size(), params);
  const std::uint64_t matrix_seed = rng::seed_combine(key.value, kNsf5MatrixTag);

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const WpcBlock& blk = blocks[b];
    auto cols = wpc_columns(rng::seed_combine(matrix_seed, b), blk.k, blk.n_eff);

    std::vector<std::uint8_t> dry(blk.n_eff);
    std::vector<std::uint64_t> syn(cols[0].size(), 0);
    for (int j = 0; j < blk.n_eff; ++j) {
      std::int32_t c = plane.coeffs[carriers[blk.carrier_offset + j]];
      dry[j] = static_cast<std::uint8_t>(std::abs(c) >= 2);  // magnitude 1 is wet
      if (f5_lsb(c))
        for (std::size_t w = 0; w < syn.size(); ++w) syn[w] ^= cols[j][w];
    }
    BitVec delta(blk.k);
    for (int r = 0; r < blk.k; ++r)
      delta[r] = static_cast<std::uint8_t>(message[blk.message_offset + r] ^
                                           ((syn[r / 64] >> (r % 64)) & 1));

    WetPaperSystem sys = build_system(cols, blk.k, dry);
    std::optional<BitVec> v = wet_paper_solve(sys, delta);
    if (!v)
      throw UnsolvableSystem("nsf5: block " + std::to_string(b) + " unsolvable (" +
                                 std::to_string(sys.dry_count()) + " dry of " +
                                 std::to_string(blk.n_eff) + " carriers, k=" +
                                 std::to_string(blk.k) + ")",
                             b);
    for (int j = 0; j < blk.n_eff; ++j) {
      if (!(*v)[j]) continue;
      decrement_magnitude(plane.coeffs[carriers[blk.carrier_offset + j]]);
      ++result.report.coefficients_changed;
    }
  }

  result.report.bits_embedded = static_cast<std::int64_t>(message.size());
  result.report.achieved_rate = usable > 0 ? static_cast<double>(message.size()) / usable : 0.0;
  return result;
}

BitVec nsf5_extract(const dctmodel::DctPlane& plane, StegoKey key, std::size_t length,
                    double rate_bpac, const NsF5Params& params) {
  if (rate_bpac <= 0.0 || rate_bpac > 1.0)
    throw std::invalid_argument("nsf5: rate must be in (0,1]");
  std::vector<std::uint32_t> carriers =
      keyed_nonzero_ac_order(plane, rng::seed_combine(key.value, kNsf5PermTag));
  std::vector<WpcBlock> blocks = wpc_schedule(carriers.size(), rate_bpac, length, params);
  const std::uint64_t matrix_seed = rng::seed_combine(key.value, kNsf5MatrixTag);

  BitVec out(length, 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const WpcBlock& blk = blocks[b];
    auto cols = wpc_columns(rng::seed_combine(matrix_seed, b), blk.k, blk.n_eff);
    std::vector<std::uint64_t> syn(cols[0].size(), 0);
    for (int j = 0; j < blk.n_eff; ++j)
      if (f5_lsb(plane.coeffs[carriers[blk.carrier_offset + j]]))
        for (std::size_t w = 0; w < syn.size(); ++w) syn[w] ^= cols[j][w];
    for (int r = 0; r < blk.k; ++r)
      out[blk.message_offset + r] = static_cast<std::uint8_t>((syn[r / 64] >> (r % 64)) & 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spatial LSB replacement

imageio::GrayImage lsb_replace_embed(const imageio::GrayImage& image, const BitVec& message,
                                     StegoKey key) {
  if (message.size() > image.pixels.size())
    throw CapacityExceeded("lsb_replace: message longer than pixel count");
  std::vector<std::uint32_t> order(image.pixels.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  rng::SplitMix64 gen(rng::seed_combine(key.value, kLsbPermTag));
  gen.shuffle(order);

  imageio::GrayImage out = image;
  for (std::size_t i = 0; i < message.size(); ++i) {
    std::uint8_t& p = out.pixels[order[i]];
    p = static_cast<std::uint8_t>((p & ~1u) | message[i]);
  }
  return out;
}

BitVec lsb_replace_extract(const imageio::GrayImage& image, StegoKey key, std::size_t length) {
  if (length > image.pixels.size())
    throw CapacityExceeded("lsb_replace: length longer than pixel count");
  std::vector<std::uint32_t> order(image.pixels.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  rng::SplitMix64 gen(rng::seed_combine(key.value, kLsbPermTag));
  gen.shuffle(order);

  BitVec out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = image.pixels[order[i]] & 1;
  return out;
}

std::vector<CoeffChange> attack_map(const dctmodel::DctPlane& before,
                                    const dctmodel::DctPlane& after) {
  if (!before.same_geometry(after))
    throw std::invalid_argument("attack_map: plane geometry mismatch");
  std::vector<CoeffChange> changes;
  for (int br = 0; br < before.block_rows; ++br)
    for (int bc = 0; bc < before.block_cols; ++bc)
      for (int i = 0; i < dctmodel::kBlockSize; ++i)
        for (int j = 0; j < dctmodel::kBlockSize; ++j) {
          std::int32_t a = before.at(br, bc, i, j);
          std::int32_t b = after.at(br, bc, i, j);
          if (a != b) changes.push_back(CoeffChange{br, bc, i, j, a, b});
        }
  return changes;
}

}  // namespace wsn::stegocodec
