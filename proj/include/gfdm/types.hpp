#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfdm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

// One GFDM block of N*M complex samples. Data vectors (d and its block DFT)
// are subcarrier-major: element i*M + m is the m-th symbol of subcarrier i.
// Time-domain vectors (x, y) are plain sample order.
using ComplexBlock = cvec;

enum class RxMode { Mf, Zf, Mmse };

inline const char* to_string(RxMode mode) {
  switch (mode) {
    case RxMode::Mf: return "mf";
    case RxMode::Zf: return "zf";
    case RxMode::Mmse: return "mmse";
  }
  return "?";
}

// System parameters: N subcarriers, M symbols per block (overlap factor) and
// the cyclic prefix length in samples. Block length is always N*M.
struct GfdmConfig {
  std::size_t n_subcarriers;
  std::size_t overlap_factor;
  std::size_t cp_len;

  explicit GfdmConfig(std::size_t n, std::size_t m, std::size_t cp = 0)
      : n_subcarriers(n), overlap_factor(m), cp_len(cp) {
    if (n < 1 || m < 1)
      throw std::invalid_argument("GfdmConfig: N and M must be >= 1");
    if (cp >= n * m)
      throw std::invalid_argument("GfdmConfig: cp_len must be < N*M");
  }

  std::size_t block_len() const { return n_subcarriers * overlap_factor; }

  friend bool operator==(const GfdmConfig&, const GfdmConfig&) = default;
};

// A ZF (or noiseless MMSE) filter bank cannot be built: some polyphase
// component has an M-point spectral coefficient at (or numerically at) zero.
class SingularPolyphase : public std::runtime_error {
 public:
  explicit SingularPolyphase(std::vector<std::size_t> branches)
      : std::runtime_error(describe(branches)), branches_(std::move(branches)) {}

  const std::vector<std::size_t>& branches() const { return branches_; }

 private:
  static std::string describe(const std::vector<std::size_t>& branches) {
    std::ostringstream os;
    os << "singular polyphase spectrum in branch(es):";
    for (auto b : branches) os << ' ' << b;
    return os.str();
  }

  std::vector<std::size_t> branches_;
};

// The dense Gram matrix A^H A is numerically singular (reciprocal condition
// estimate below threshold), so a direct ZF solve is refused.
class SingularSystem : public std::runtime_error {
 public:
  explicit SingularSystem(double rcond)
      : std::runtime_error("gram matrix numerically singular (rcond estimate " +
                           std::to_string(rcond) + ")"),
        rcond_(rcond) {}

  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

// Frequency-domain equalization is impossible: the channel spectrum has
// (near-)zero bins.
class SingularChannel : public std::runtime_error {
 public:
  explicit SingularChannel(std::vector<std::size_t> bins)
      : std::runtime_error(describe(bins)), bins_(std::move(bins)) {}

  const std::vector<std::size_t>& bins() const { return bins_; }

 private:
  static std::string describe(const std::vector<std::size_t>& bins) {
    std::ostringstream os;
    os << "channel spectrum has zero bin(s):";
    for (auto b : bins) os << ' ' << b;
    return os.str();
  }

  std::vector<std::size_t> bins_;
};

}  // namespace gfdm
