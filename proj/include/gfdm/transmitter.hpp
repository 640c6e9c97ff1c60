#pragma once

#include <cmath>
#include <optional>

#include "complexity.hpp"
#include "fft.hpp"
#include "prototype.hpp"

namespace gfdm {

// Circular convolutions of length below this stay in the time domain; at or
// above it (powers of two only) they switch to transform pairs.
inline constexpr std::size_t kFastConvMinM = 8;

// Fast transmitter: one N-point DFT per time slot across subcarriers, then
// one M-point circular convolution per output comb with the sqrt(N)-scaled
// polyphase component of the prototype. Output comb k is fed by DFT branch
// (N-k) mod N.
class TxPlan {
 public:
  explicit TxPlan(const PrototypeFilter& proto, std::size_t fast_conv_min_m = kFastConvMinM)
      : cfg_(proto.config()), fft_n_(cfg_.n_subcarriers) {
    const std::size_t n = cfg_.n_subcarriers;
    const std::size_t m = cfg_.overlap_factor;
    const double root_n = std::sqrt(double(n));
    gbar_.resize(n);
    for (std::size_t branch = 0; branch < n; ++branch) {
      const auto pc = polyphase(proto, branch);
      gbar_[branch].resize(m);
      for (std::size_t k = 0; k < m; ++k) gbar_[branch][k] = root_n * pc.forward[k];
    }
    fast_conv_ = is_pow2(m) && m >= fast_conv_min_m;
    if (fast_conv_) {
      fft_m_.emplace(m);
      gbar_spec_.resize(n);
      for (std::size_t branch = 0; branch < n; ++branch) {
        cvec spec(m);
        for (std::size_t k = 0; k < m; ++k) spec[k] = gbar_[branch][k];
        fft_m_->forward(spec.data());
        gbar_spec_[branch] = std::move(spec);
      }
    }
    cm_budget_ = cm_count(Technique::ProposedTx, n, m).value;
  }

  const GfdmConfig& config() const { return cfg_; }
  const rvec& scaled_polyphase(std::size_t branch) const { return gbar_.at(branch); }
  double cm_budget() const { return cm_budget_; }
  bool uses_fast_convolution() const { return fast_conv_; }

  // d-bar = F_b d: per time slot, a unitary N-point DFT across subcarriers.
  ComplexBlock block_dft(const ComplexBlock& d, CmMeter* meter = nullptr) const {
    const std::size_t n = cfg_.n_subcarriers;
    const std::size_t m = cfg_.overlap_factor;
    if (d.size() != cfg_.block_len())
      throw std::invalid_argument("block_dft: block must have N*M elements");
    ComplexBlock dbar(d.size());
    cvec a(n);
    const double scale = 1.0 / std::sqrt(double(n));
    for (std::size_t slot = 0; slot < m; ++slot) {
      for (std::size_t i = 0; i < n; ++i) a[i] = d[i * m + slot];
      fft_n_.forward(a.data());
      for (std::size_t i = 0; i < n; ++i) dbar[i * m + slot] = a[i] * scale;
    }
    if (meter) meter->add_fft(n, m);
    return dbar;
  }

  ComplexBlock modulate(const ComplexBlock& d, CmMeter* meter = nullptr) const {
    const std::size_t n = cfg_.n_subcarriers;
    const std::size_t m = cfg_.overlap_factor;
    const ComplexBlock dbar = block_dft(d, meter);
    ComplexBlock x(d.size());
    cvec out(m);
    for (std::size_t comb = 0; comb < n; ++comb) {
      const std::size_t branch = (n - comb) % n;
      const cplx* src = dbar.data() + branch * m;
      if (fast_conv_) {
        cvec spec(src, src + m);
        fft_m_->forward(spec.data());
        const cvec& gs = gbar_spec_[comb];
        for (std::size_t k = 0; k < m; ++k) spec[k] *= gs[k];
        fft_m_->inverse(spec.data());
        out.assign(spec.begin(), spec.end());
        if (meter) {
          meter->add_fft(m, 2);
          meter->add_complex_products(double(m));
        }
      } else {
        const rvec& gb = gbar_[comb];
        for (std::size_t k = 0; k < m; ++k) {
          cplx acc(0.0, 0.0);
          for (std::size_t mm = 0; mm < m; ++mm) acc += gb[(k + m - mm) % m] * src[mm];
          out[k] = acc;
        }
        if (meter) meter->add_real_complex_products(double(m) * double(m));
      }
      for (std::size_t k = 0; k < m; ++k) x[comb + k * n] = out[k];
    }
    return x;
  }

 private:
  GfdmConfig cfg_;
  Fft fft_n_;
  std::optional<Fft> fft_m_;
  std::vector<rvec> gbar_;
  std::vector<cvec> gbar_spec_;
  bool fast_conv_ = false;
  double cm_budget_ = 0.0;
};

inline cvec add_cp(const ComplexBlock& x, std::size_t cp_len) {
  if (cp_len >= x.size())
    throw std::invalid_argument("add_cp: cp_len must be < block length");
  cvec out;
  out.reserve(x.size() + cp_len);
  out.insert(out.end(), x.end() - static_cast<std::ptrdiff_t>(cp_len), x.end());
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

}  // namespace gfdm
