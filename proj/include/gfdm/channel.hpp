#pragma once

#include <cmath>
#include <cstdint>

#include "fft.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace gfdm {

inline constexpr double kChannelSpectrumTol = 1e-12;

struct ChannelSpec {
  cvec taps{cplx(1.0, 0.0)};
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
};

// Linear convolution with the channel taps, truncated to the input length,
// plus seeded circularly-symmetric Gaussian noise. The CP must absorb the
// channel transient (taps.size() - 1 samples), otherwise blocks would smear
// into each other and the circular model behind the equalizer breaks.
inline cvec transmit_through(const ChannelSpec& spec, const cvec& x_cp, std::size_t cp_len,
                             std::uint64_t noise_stream = 0) {
  if (spec.taps.empty()) throw std::invalid_argument("transmit_through: channel has no taps");
  if (spec.taps.size() > cp_len + 1)
    throw std::invalid_argument("transmit_through: CP shorter than the channel transient");
  const std::size_t len = x_cp.size();
  cvec out(len);
  const std::size_t n_taps = spec.taps.size();
  for (std::size_t n = 0; n < len; ++n) {
    cplx acc(0.0, 0.0);
    const std::size_t t_max = std::min(n_taps - 1, n);
    for (std::size_t t = 0; t <= t_max; ++t) acc += spec.taps[t] * x_cp[n - t];
    out[n] = acc;
  }
  if (spec.sigma2 > 0.0) {
    const cvec noise = complex_gaussian(len, spec.sigma2, spec.seed, noise_stream);
    for (std::size_t n = 0; n < len; ++n) out[n] += noise[n];
  }
  return out;
}

inline cvec remove_cp(const cvec& r_cp, std::size_t cp_len) {
  if (cp_len >= r_cp.size()) throw std::invalid_argument("remove_cp: cp_len must be < length");
  return cvec(r_cp.begin() + static_cast<std::ptrdiff_t>(cp_len), r_cp.end());
}

// Single-tap frequency-domain equalizer over the whole block: divide the
// block spectrum by the zero-padded channel spectrum. Valid only behind a CP,
// where the linear channel acts circularly on the retained block.
class Fde {
 public:
  Fde(const ChannelSpec& spec, std::size_t block_len) : fft_(block_len) {
    if (spec.taps.empty() || spec.taps.size() > block_len)
      throw std::invalid_argument("Fde: need 1 <= taps <= block length");
    cvec h(block_len, cplx(0.0, 0.0));
    for (std::size_t t = 0; t < spec.taps.size(); ++t) h[t] = spec.taps[t];
    fft_.forward(h.data());
    std::vector<std::size_t> dead;
    for (std::size_t k = 0; k < block_len; ++k)
      if (std::abs(h[k]) < kChannelSpectrumTol) dead.push_back(k);
    if (!dead.empty()) throw SingularChannel(std::move(dead));
    inv_h_.resize(block_len);
    for (std::size_t k = 0; k < block_len; ++k) inv_h_[k] = 1.0 / h[k];
  }

  std::size_t block_len() const { return inv_h_.size(); }

  ComplexBlock apply(const ComplexBlock& r) const {
    if (r.size() != inv_h_.size()) throw std::invalid_argument("Fde: block length mismatch");
    cvec spec = r;
    fft_.forward(spec.data());
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= inv_h_[k];
    fft_.inverse(spec.data());
    return spec;
  }

 private:
  Fft fft_;
  cvec inv_h_;
};

inline ComplexBlock fde(const ComplexBlock& r, const ChannelSpec& spec) {
  return Fde(spec, r.size()).apply(r);
}

}  // namespace gfdm
