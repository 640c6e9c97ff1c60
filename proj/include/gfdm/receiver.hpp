#pragma once

#include <cmath>
#include <cstring>
#include <fstream>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "complexity.hpp"
#include "fft.hpp"
#include "prototype.hpp"
#include "transmitter.hpp"

namespace gfdm {

// A polyphase branch counts as singular when some M-point spectral
// coefficient of g_k falls below this magnitude.
inline constexpr double kBranchSpectrumTol = 1e-12;

// Unified receiver: gather the stride-N comb k of y, run one M-point circular
// convolution per branch, then per time slot an inverse N-point DFT across
// branches. The branch filter decides the receiver type:
//   MF    v_k = sqrt(N) * folded g_k                  (real)
//   ZF    q_k = first column of circ(g_k)^{-1} / sqrt(N)  (real)
//   MMSE  p_k = idft( conj(phi_k) / (|phi_k|^2 + sigma2) ), phi_k the M-point
//         spectrum of sqrt(N) g_k
// MMSE runs transform-domain unconditionally, recomputing the spectral
// weights from phi_k and sigma2 on every call; MF/ZF use time-domain taps
// below the fast-convolution crossover and stored tap spectra above it.
class ReceiverFilterBank {
 public:
  ReceiverFilterBank(const PrototypeFilter& proto, RxMode mode, double sigma2 = 0.0,
                     std::size_t fast_conv_min_m = kFastConvMinM)
      : cfg_(proto.config()),
        mode_(mode),
        sigma2_(sigma2),
        kind_(proto.kind()),
        fft_n_(cfg_.n_subcarriers) {
    if (sigma2 < 0.0) throw std::invalid_argument("ReceiverFilterBank: sigma2 must be >= 0");
    const std::size_t n = cfg_.n_subcarriers;
    const std::size_t m = cfg_.overlap_factor;
    const double root_n = std::sqrt(double(n));
    const DirectDft dft(m);

    taps_re_.resize(n);
    taps_im_.assign(n, rvec(m, 0.0));
    if (mode == RxMode::Mf) {
      for (std::size_t b = 0; b < n; ++b) {
        const auto pc = polyphase(proto, b);
        taps_re_[b].resize(m);
        for (std::size_t k = 0; k < m; ++k) taps_re_[b][k] = root_n * pc.folded[k];
      }
    } else {
      // both ZF and MMSE derive from the branch spectra of g_k
      std::vector<cvec> spectra(n);
      std::vector<std::size_t> dead;
      for (std::size_t b = 0; b < n; ++b) {
        cvec g(m);
        const auto pc = polyphase(proto, b);
        for (std::size_t k = 0; k < m; ++k) g[k] = pc.forward[k];
        spectra[b] = dft.forward(g);
        for (const cplx& c : spectra[b])
          if (std::abs(c) < kBranchSpectrumTol) {
            dead.push_back(b);
            break;
          }
      }
      if (!dead.empty() && (mode == RxMode::Zf || sigma2 == 0.0))
        throw SingularPolyphase(std::move(dead));
      if (mode == RxMode::Zf) {
        for (std::size_t b = 0; b < n; ++b) {
          cvec lam(m);
          for (std::size_t k = 0; k < m; ++k) lam[k] = 1.0 / (root_n * spectra[b][k]);
          const cvec q = dft.inverse(lam);
          taps_re_[b].resize(m);
          for (std::size_t k = 0; k < m; ++k) taps_re_[b][k] = q[k].real();
        }
      } else {
        phi_.resize(n);
        phi_abs2_.resize(n);
        for (std::size_t b = 0; b < n; ++b) {
          phi_[b].resize(m);
          phi_abs2_[b].resize(m);
          for (std::size_t k = 0; k < m; ++k) {
            phi_[b][k] = root_n * spectra[b][k];
            phi_abs2_[b][k] = std::norm(phi_[b][k]);
          }
          const cvec p = dft.inverse(mmse_weights(b));
          taps_re_[b].resize(m);
          for (std::size_t k = 0; k < m; ++k) {
            taps_re_[b][k] = p[k].real();
            taps_im_[b][k] = p[k].imag();
          }
        }
      }
    }
    finish_setup(fast_conv_min_m);
  }

  const GfdmConfig& config() const { return cfg_; }
  RxMode mode() const { return mode_; }
  double sigma2() const { return sigma2_; }
  FilterKind kind() const { return kind_; }

  // branch filter taps (v, q or p); imaginary parts are zero for MF/ZF
  cvec branch_filter(std::size_t branch) const {
    const rvec& re = taps_re_.at(branch);
    const rvec& im = taps_im_.at(branch);
    cvec out(re.size());
    for (std::size_t k = 0; k < re.size(); ++k) out[k] = {re[k], im[k]};
    return out;
  }

  ComplexBlock demodulate(const ComplexBlock& y, CmMeter* meter = nullptr) const {
    const std::size_t n = cfg_.n_subcarriers;
    const std::size_t m = cfg_.overlap_factor;
    if (y.size() != cfg_.block_len())
      throw std::invalid_argument("demodulate: block must have N*M elements");
    ComplexBlock ybar(y.size());
    cvec yk(m), out(m), spec(m), weighted(m);
    for (std::size_t block = 0; block < n; ++block) {
      const std::size_t branch = (n - block) % n;
      for (std::size_t k = 0; k < m; ++k) yk[k] = y[branch + k * n];
      if (mode_ == RxMode::Mmse) {
        dft_m_->forward(yk.data(), spec.data());
        if (!phi_.empty()) {
          const cvec& phi = phi_[branch];
          const rvec& abs2 = phi_abs2_[branch];
          for (std::size_t k = 0; k < m; ++k)
            weighted[k] = spec[k] * (std::conj(phi[k]) / (abs2[k] + sigma2_));
          if (meter) meter->add_real_complex_products(double(m));
        } else {
          const cvec& lam = lambda_[branch];
          for (std::size_t k = 0; k < m; ++k) weighted[k] = spec[k] * lam[k];
        }
        dft_m_->inverse(weighted.data(), out.data());
        if (meter) {
          meter->add_dense_dft(m, 2);
          meter->add_complex_products(double(m));
        }
      } else if (fast_conv_) {
        spec.assign(yk.begin(), yk.end());
        fft_m_->forward(spec.data());
        const cvec& fs = tap_spec_[branch];
        for (std::size_t k = 0; k < m; ++k) spec[k] *= fs[k];
        fft_m_->inverse(spec.data());
        out.assign(spec.begin(), spec.end());
        if (meter) {
          meter->add_fft(m, 2);
          meter->add_complex_products(double(m));
        }
      } else {
        const rvec& taps = taps_re_[branch];
        for (std::size_t k = 0; k < m; ++k) {
          cplx acc(0.0, 0.0);
          for (std::size_t mm = 0; mm < m; ++mm) acc += taps[(k + m - mm) % m] * yk[mm];
          out[k] = acc;
        }
        if (meter) meter->add_real_complex_products(double(m) * double(m));
      }
      for (std::size_t k = 0; k < m; ++k) ybar[block * m + k] = out[k];
    }
    // back end: inverse unitary N-point DFT per time slot
    ComplexBlock dhat(y.size());
    cvec b(n);
    const double root_n = std::sqrt(double(n));
    for (std::size_t slot = 0; slot < m; ++slot) {
      for (std::size_t i = 0; i < n; ++i) b[i] = ybar[i * m + slot];
      fft_n_.inverse(b.data());
      for (std::size_t i = 0; i < n; ++i) dhat[i * m + slot] = b[i] * root_n;
    }
    if (meter) meter->add_fft(n, m);
    return dhat;
  }

  // --- GFB1 serialization -------------------------------------------------
  // magic "GFB1" | u32 N | u32 M | u8 mode | f64 sigma2 | u8 filter kind |
  // N*M f64 real taps (branch-major) | MMSE only: N*M f64 imaginary taps.
  // All integers and floats little-endian.

  void save(std::ostream& os) const {
    const std::size_t n = cfg_.n_subcarriers;
    const std::size_t m = cfg_.overlap_factor;
    os.write("GFB1", 4);
    write_u32(os, static_cast<std::uint32_t>(n));
    write_u32(os, static_cast<std::uint32_t>(m));
    const unsigned char mode_tag = static_cast<unsigned char>(mode_);
    os.put(static_cast<char>(mode_tag));
    write_f64(os, sigma2_);
    os.put(static_cast<char>(kind_tag(kind_)));
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t k = 0; k < m; ++k) write_f64(os, taps_re_[b][k]);
    if (mode_ == RxMode::Mmse)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t k = 0; k < m; ++k) write_f64(os, taps_im_[b][k]);
    if (!os) throw std::runtime_error("filter bank save failed");
  }

  void save_file(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    save(os);
  }

  static ReceiverFilterBank load(std::istream& is) {
    char magic[4];
    std::size_t consumed = 0;
    read_exact(is, magic, 4, 22, consumed);
    if (std::memcmp(magic, "GFB1", 4) != 0)
      throw std::runtime_error("filter bank file: bad magic, expected GFB1");
    const std::uint32_t n = read_u32(is, 22, consumed);
    const std::uint32_t m = read_u32(is, 22, consumed);
    unsigned char mode_tag = read_u8(is, 22, consumed);
    if (n < 1 || m < 1 || mode_tag > 2)
      throw std::runtime_error("filter bank file: bad header fields");
    const RxMode mode = static_cast<RxMode>(mode_tag);
    const std::size_t planes = mode == RxMode::Mmse ? 2 : 1;
    const std::size_t expected = 22 + planes * 8 * std::size_t(n) * std::size_t(m);
    const double sigma2 = read_f64(is, expected, consumed);
    const unsigned char kind = read_u8(is, expected, consumed);
    if (kind > 3) throw std::runtime_error("filter bank file: bad filter kind tag");
    ReceiverFilterBank bank(GfdmConfig(n, m), mode, sigma2);
    bank.kind_ = kind_from_tag(kind);
    bank.taps_re_.assign(n, rvec(m, 0.0));
    bank.taps_im_.assign(n, rvec(m, 0.0));
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t k = 0; k < m; ++k) bank.taps_re_[b][k] = read_f64(is, expected, consumed);
    if (mode == RxMode::Mmse)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t k = 0; k < m; ++k) bank.taps_im_[b][k] = read_f64(is, expected, consumed);
    bank.rebuild_from_taps();
    return bank;
  }

  static ReceiverFilterBank load_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path + " for reading");
    return load(is);
  }

 private:
  // tap-bypass constructor used by load(); rebuild_from_taps() finishes it
  ReceiverFilterBank(GfdmConfig cfg, RxMode mode, double sigma2)
      : cfg_(cfg), mode_(mode), sigma2_(sigma2), fft_n_(cfg.n_subcarriers) {}

  cvec mmse_weights(std::size_t branch) const {
    const std::size_t m = cfg_.overlap_factor;
    cvec lam(m);
    for (std::size_t k = 0; k < m; ++k)
      lam[k] = std::conj(phi_[branch][k]) / (phi_abs2_[branch][k] + sigma2_);
    return lam;
  }

  void finish_setup(std::size_t fast_conv_min_m) {
    const std::size_t n = cfg_.n_subcarriers;
    const std::size_t m = cfg_.overlap_factor;
    if (mode_ == RxMode::Mmse) {
      dft_m_.emplace(m);
      return;
    }
    fast_conv_ = is_pow2(m) && m >= fast_conv_min_m;
    if (fast_conv_) {
      fft_m_.emplace(m);
      tap_spec_.resize(n);
      for (std::size_t b = 0; b < n; ++b) {
        cvec spec(m);
        for (std::size_t k = 0; k < m; ++k) spec[k] = taps_re_[b][k];
        fft_m_->forward(spec.data());
        tap_spec_[b] = std::move(spec);
      }
    }
  }

  // loaded banks carry taps only; MMSE weights then come from the tap spectra
  void rebuild_from_taps() {
    const std::size_t n = cfg_.n_subcarriers;
    const std::size_t m = cfg_.overlap_factor;
    if (mode_ == RxMode::Mmse) {
      const DirectDft dft(m);
      lambda_.resize(n);
      for (std::size_t b = 0; b < n; ++b) {
        cvec p(m);
        for (std::size_t k = 0; k < m; ++k) p[k] = {taps_re_[b][k], taps_im_[b][k]};
        lambda_[b] = dft.forward(p);
      }
    }
    finish_setup(kFastConvMinM);
  }

  static unsigned char kind_tag(FilterKind kind) {
    switch (kind) {
      case FilterKind::RaisedCosineTime: return 0;
      case FilterKind::Dirichlet: return 1;
      case FilterKind::UnitImpulse: return 2;
      case FilterKind::Custom: return 3;
    }
    return 3;
  }

  static FilterKind kind_from_tag(unsigned char tag) {
    switch (tag) {
      case 0: return FilterKind::RaisedCosineTime;
      case 1: return FilterKind::Dirichlet;
      case 2: return FilterKind::UnitImpulse;
      default: return FilterKind::Custom;
    }
  }

  static void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
    os.write(reinterpret_cast<const char*>(b), 4);
  }

  static void write_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
    os.write(reinterpret_cast<const char*>(b), 8);
  }

  static void read_exact(std::istream& is, char* dst, std::size_t count, std::size_t expected,
                         std::size_t& consumed) {
    is.read(dst, static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(is.gcount()) != count)
      throw std::runtime_error("filter bank file truncated: expected " + std::to_string(expected) +
                               " bytes, got " + std::to_string(consumed + std::size_t(is.gcount())));
    consumed += count;
  }

  static std::uint32_t read_u32(std::istream& is, std::size_t expected, std::size_t& consumed) {
    unsigned char b[4];
    read_exact(is, reinterpret_cast<char*>(b), 4, expected, consumed);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t(b[k]) << (8 * k);
    return v;
  }

  static unsigned char read_u8(std::istream& is, std::size_t expected, std::size_t& consumed) {
    unsigned char b;
    read_exact(is, reinterpret_cast<char*>(&b), 1, expected, consumed);
    return b;
  }

  static double read_f64(std::istream& is, std::size_t expected, std::size_t& consumed) {
    unsigned char b[8];
    read_exact(is, reinterpret_cast<char*>(b), 8, expected, consumed);
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= std::uint64_t(b[k]) << (8 * k);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  GfdmConfig cfg_;
  RxMode mode_ = RxMode::Mf;
  double sigma2_ = 0.0;
  FilterKind kind_ = FilterKind::Custom;
  Fft fft_n_;
  std::optional<DirectDft> dft_m_;  // MMSE transform pair
  std::optional<Fft> fft_m_;        // MF/ZF fast-convolution pair
  std::vector<rvec> taps_re_, taps_im_;
  std::vector<cvec> phi_;       // MMSE built from a prototype
  std::vector<rvec> phi_abs2_;
  std::vector<cvec> lambda_;    // MMSE loaded from disk
  std::vector<cvec> tap_spec_;  // MF/ZF fast-convolution spectra
  bool fast_conv_ = false;
};

// Keyed LRU cache of built filter banks; bounded, internally synchronized.
class FilterBankCache {
 public:
  explicit FilterBankCache(std::size_t capacity = 16) : cap_(capacity) {
    if (capacity < 1) throw std::invalid_argument("FilterBankCache: capacity must be >= 1");
  }

  std::shared_ptr<const ReceiverFilterBank> get(const PrototypeFilter& proto, RxMode mode,
                                                double sigma2 = 0.0) {
    const Key key = make_key(proto, mode, sigma2);
    std::lock_guard<std::mutex> lock(mu_);
    for (auto it = lru_.begin(); it != lru_.end(); ++it) {
      if (it->first == key) {
        lru_.splice(lru_.begin(), lru_, it);
        return lru_.front().second;
      }
    }
    auto bank = std::make_shared<const ReceiverFilterBank>(proto, mode, sigma2);
    ++builds_;
    lru_.emplace_front(key, bank);
    if (lru_.size() > cap_) lru_.pop_back();
    return bank;
  }

  std::size_t builds() const {
    std::lock_guard<std::mutex> lock(mu_);
    return builds_;
  }

 private:
  struct Key {
    std::size_t n = 0, m = 0;
    int mode = 0;
    std::uint64_t sigma_bits = 0;
    std::uint64_t coeff_hash = 0;
    friend bool operator==(const Key&, const Key&) = default;
  };

  static Key make_key(const PrototypeFilter& proto, RxMode mode, double sigma2) {
    Key key;
    key.n = proto.config().n_subcarriers;
    key.m = proto.config().overlap_factor;
    key.mode = static_cast<int>(mode);
    std::memcpy(&key.sigma_bits, &sigma2, 8);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the tap bytes
    for (double c : proto.coeffs()) {
      std::uint64_t bits;
      std::memcpy(&bits, &c, 8);
      for (int k = 0; k < 8; ++k) {
        h ^= (bits >> (8 * k)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    key.coeff_hash = h;
    return key;
  }

  mutable std::mutex mu_;
  std::list<std::pair<Key, std::shared_ptr<const ReceiverFilterBank>>> lru_;
  std::size_t cap_;
  std::size_t builds_ = 0;
};

}  // namespace gfdm
