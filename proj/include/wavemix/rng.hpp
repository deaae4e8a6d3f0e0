#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <string_view>

namespace wavemix {

/// FNV-1a, 64-bit. Used wherever a platform-stable hash is required
/// (noise-seed derivation, config fingerprints in reports).
inline std::uint64_t fnv1a64(const void* bytes, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(bytes);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t h, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  return fnv1a64(b, 8, h);
}

inline std::uint64_t fnv1a64_f64(std::uint64_t h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  return fnv1a64_u64(h, bits);
}

/// Per-cell noise seed used by the benchmark harness:
/// FNV-1a over base seed (8 bytes LE), the image name bytes, and the
/// IEEE-754 bits of sigma (8 bytes LE), in that order.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view image_name,
                                 double sigma) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a64_u64(h, base);
  h = fnv1a64(image_name.data(), image_name.size(), h);
  h = fnv1a64_f64(h, sigma);
  return h;
}

/// Deterministic standard-normal stream: mt19937_64 uniforms fed through
/// Box-Muller. std::normal_distribution is implementation-defined and is
/// deliberately not used.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;          // [0,1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  static constexpr const char* name() { return "mt19937_64+box-muller"; }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace wavemix
