#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>

#include "types.hpp"

namespace gfdm {

inline constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace detail {

// Iterative radix-2 Cooley-Tukey kernel (power-of-two sizes only).
struct Radix2 {
  std::size_t n = 1;
  std::vector<std::size_t> rev;
  cvec tw;  // tw[k] = exp(-2*pi*i*k/n), k < n/2

  explicit Radix2(std::size_t size) : n(size) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    rev.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      rev[i] = r;
    }
    tw.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      double ang = -2.0 * std::numbers::pi * double(k) / double(n);
      tw[k] = {std::cos(ang), std::sin(ang)};
    }
  }

  void forward(cplx* x) const {
    for (std::size_t i = 0; i < n; ++i)
      if (rev[i] > i) std::swap(x[i], x[rev[i]]);
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n / len;
      for (std::size_t base = 0; base < n; base += len) {
        for (std::size_t k = 0; k < half; ++k) {
          const cplx w = tw[k * step];
          const cplx u = x[base + k];
          const cplx v = x[base + k + half] * w;
          x[base + k] = u + v;
          x[base + k + half] = u - v;
        }
      }
    }
  }
};

}  // namespace detail

// Fixed-size DFT plan. Unnormalized forward transform
// X[k] = sum_m x[m] exp(-2*pi*i*m*k/n); inverse includes the 1/n factor.
// Power-of-two sizes run radix-2 directly, everything else goes through a
// Bluestein chirp convolution padded to a power of two >= 2n-1.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Fft: size must be positive");
    if (is_pow2(n)) {
      kernel_.emplace(n);
      return;
    }
    pad_ = next_pow2(2 * n - 1);
    kernel_.emplace(pad_);
    chirp_.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
      // reduce m^2 mod 2n first so the twiddle argument stays small
      const std::size_t e = (m * m) % (2 * n);
      const double ang = -std::numbers::pi * double(e) / double(n);
      chirp_[m] = {std::cos(ang), std::sin(ang)};
    }
    chirp_fft_.assign(pad_, cplx(0.0, 0.0));
    chirp_fft_[0] = std::conj(chirp_[0]);
    for (std::size_t m = 1; m < n; ++m) {
      chirp_fft_[m] = std::conj(chirp_[m]);
      chirp_fft_[pad_ - m] = std::conj(chirp_[m]);
    }
    kernel_->forward(chirp_fft_.data());
  }

  std::size_t size() const { return n_; }

  void forward(cplx* x) const {
    if (n_ == 1) return;
    if (pad_ == 0) {
      kernel_->forward(x);
      return;
    }
    cvec a(pad_, cplx(0.0, 0.0));
    for (std::size_t m = 0; m < n_; ++m) a[m] = x[m] * chirp_[m];
    kernel_->forward(a.data());
    // circular convolution with the conjugate chirp; the inverse pad-size
    // transform is done as conj(forward(conj(.)))/pad
    for (std::size_t k = 0; k < pad_; ++k) a[k] = std::conj(a[k] * chirp_fft_[k]);
    kernel_->forward(a.data());
    const double scale = 1.0 / double(pad_);
    for (std::size_t k = 0; k < n_; ++k) x[k] = std::conj(a[k]) * scale * chirp_[k];
  }

  void inverse(cplx* x) const {
    for (std::size_t k = 0; k < n_; ++k) x[k] = std::conj(x[k]);
    forward(x);
    const double scale = 1.0 / double(n_);
    for (std::size_t k = 0; k < n_; ++k) x[k] = std::conj(x[k]) * scale;
  }

  cvec forward(cvec v) const {
    forward(v.data());
    return v;
  }

  cvec inverse(cvec v) const {
    inverse(v.data());
    return v;
  }

 private:
  std::size_t n_;
  std::size_t pad_ = 0;  // 0 means plain radix-2
  std::optional<detail::Radix2> kernel_;
  cvec chirp_, chirp_fft_;
};

// Table-driven O(n^2) DFT for small sizes that need not be powers of two.
class DirectDft {
 public:
  explicit DirectDft(std::size_t n) : n_(n), w_(n) {
    if (n == 0) throw std::invalid_argument("DirectDft: size must be positive");
    for (std::size_t r = 0; r < n; ++r) {
      double ang = -2.0 * std::numbers::pi * double(r) / double(n);
      w_[r] = {std::cos(ang), std::sin(ang)};
    }
  }

  std::size_t size() const { return n_; }

  void forward(const cplx* in, cplx* out) const {
    for (std::size_t k = 0; k < n_; ++k) {
      cplx acc(0.0, 0.0);
      for (std::size_t m = 0; m < n_; ++m) acc += in[m] * w_[(k * m) % n_];
      out[k] = acc;
    }
  }

  void inverse(const cplx* in, cplx* out) const {
    const double scale = 1.0 / double(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      cplx acc(0.0, 0.0);
      for (std::size_t m = 0; m < n_; ++m) acc += in[m] * std::conj(w_[(k * m) % n_]);
      out[k] = acc * scale;
    }
  }

  cvec forward(const cvec& v) const {
    cvec out(n_);
    forward(v.data(), out.data());
    return out;
  }

  cvec inverse(const cvec& v) const {
    cvec out(n_);
    inverse(v.data(), out.data());
    return out;
  }

 private:
  std::size_t n_;
  cvec w_;
};

}  // namespace gfdm
