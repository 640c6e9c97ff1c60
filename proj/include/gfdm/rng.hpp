#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "types.hpp"

namespace gfdm {

// Philox-style 4x32-10 counter-based generator. The 64-bit key is the seed,
// the 64-bit stream id selects an independent substream (one per Monte Carlo
// trial), and the block counter advances within the stream. Output is
// platform-independent: no implementation-defined distributions anywhere.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_(stream) {}

  std::uint64_t next_u64() {
    if (have_ == 0) fill();
    --have_;
    const std::uint64_t v = out_[have_];
    return v;
  }

  // uniform in [0, 1) with 53 significant bits
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

 private:
  void fill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr_);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ull * c0;
      const std::uint64_t p1 = 0xCD9E8D57ull * c2;
      const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
      const std::uint32_t n1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
      const std::uint32_t n3 = static_cast<std::uint32_t>(p0);
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    ++ctr_;
    out_[1] = (std::uint64_t(c1) << 32) | c0;
    out_[0] = (std::uint64_t(c3) << 32) | c2;
    have_ = 2;
  }

  std::uint32_t key0_, key1_;
  std::uint64_t stream_;
  std::uint64_t ctr_ = 0;
  std::array<std::uint64_t, 2> out_{};
  int have_ = 0;
};

// Standard normal samples via Box-Muller on Philox uniforms.
class GaussianGen {
 public:
  GaussianGen(std::uint64_t seed, std::uint64_t stream = 0) : rng_(seed, stream) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = rng_.next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard; deterministic
    const double u2 = rng_.next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(ang);
    has_spare_ = true;
    return r * std::cos(ang);
  }

 private:
  Philox rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Circularly-symmetric complex Gaussian vector with E|v|^2 = sigma2 per
// sample (real and imaginary parts each carry sigma2/2).
inline cvec complex_gaussian(std::size_t count, double sigma2, std::uint64_t seed,
                             std::uint64_t stream = 0) {
  if (sigma2 < 0.0) throw std::invalid_argument("complex_gaussian: sigma2 must be >= 0");
  cvec out(count, cplx(0.0, 0.0));
  if (sigma2 == 0.0) return out;
  GaussianGen gen(seed, stream);
  const double s = std::sqrt(sigma2 / 2.0);
  for (std::size_t k = 0; k < count; ++k) {
    const double re = s * gen.next();
    const double im = s * gen.next();
    out[k] = {re, im};
  }
  return out;
}

}  // namespace gfdm
