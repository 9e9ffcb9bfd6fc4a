#ifndef WSNSTEG_MATHUTIL_HPP
#define WSNSTEG_MATHUTIL_HPP

#include <cmath>
#include <cstdint>

namespace wsn {

// Single rounding convention for the whole pipeline: round half away from
// zero. Keeps quantized planes and rendered pixels bit-portable.
inline long round_half_away(double v) noexcept {
  return static_cast<long>(v < 0.0 ? std::ceil(v - 0.5) : std::floor(v + 0.5));
}

inline std::uint8_t clamp_u8(long v) noexcept {
  if (v < 0) return 0;
  if (v > 255) return 255;
  return static_cast<std::uint8_t>(v);
}

}  // namespace wsn

#endif
