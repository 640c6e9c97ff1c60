#pragma once

#include <atomic>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "channel.hpp"
#include "receiver.hpp"
#include "rng.hpp"
#include "transmitter.hpp"

namespace gfdm {

inline std::vector<std::uint8_t> random_bits(std::size_t count, std::uint64_t seed,
                                             std::uint64_t stream = 0) {
  std::vector<std::uint8_t> bits(count);
  Philox rng(seed, stream);
  std::uint64_t word = 0;
  int left = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (left == 0) {
      word = rng.next_u64();
      left = 64;
    }
    bits[k] = static_cast<std::uint8_t>(word & 1u);
    word >>= 1;
    --left;
  }
  return bits;
}

// Gray-mapped QPSK, unit symbol energy: bit pair (b0, b1) -> ((1-2*b0) +
// j(1-2*b1))/sqrt(2). Adjacent constellation points differ in one bit.
inline ComplexBlock qpsk_map(const std::vector<std::uint8_t>& bits) {
  if (bits.size() % 2 != 0) throw std::invalid_argument("qpsk_map: bit count must be even");
  const double a = 1.0 / std::sqrt(2.0);
  ComplexBlock out(bits.size() / 2);
  for (std::size_t s = 0; s < out.size(); ++s) {
    out[s] = {bits[2 * s] ? -a : a, bits[2 * s + 1] ? -a : a};
  }
  return out;
}

inline std::vector<std::uint8_t> qpsk_slice(const ComplexBlock& symbols) {
  std::vector<std::uint8_t> bits(symbols.size() * 2);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    bits[2 * s] = symbols[s].real() < 0.0 ? 1 : 0;
    bits[2 * s + 1] = symbols[s].imag() < 0.0 ? 1 : 0;
  }
  return bits;
}

inline std::uint64_t count_bit_errors(const std::vector<std::uint8_t>& a,
                                      const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("count_bit_errors: size mismatch");
  std::uint64_t e = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) ++e;
  return e;
}

// SNR is per-symbol Es/N0 at the receiver input; with unit-energy QPSK the
// per-symbol received energy equals the prototype energy sum(g^2), so the
// noise variance per complex sample is sum(g^2) * 10^(-SNR/10).
inline double sigma2_from_snr_db(double snr_db, double symbol_energy) {
  return symbol_energy * std::pow(10.0, -snr_db / 10.0);
}

// Worker cap: explicit request, else GFDM_THREADS, else hardware.
inline unsigned worker_count(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GFDM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

struct BerPoint {
  double snr_db = 0.0;
  RxMode mode = RxMode::Zf;
  std::uint64_t blocks = 0;
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double sigma2 = 0.0;
};

// One Monte Carlo point: QPSK -> modulate -> CP -> channel -> FDE ->
// demodulate -> slice. Trial t draws data bits from stream 2t and channel
// noise from stream 2t+1, so the result is independent of the thread split.
inline BerPoint run_ber(const PrototypeFilter& proto, RxMode mode, const cvec& channel_taps,
                        double snr_db, std::uint64_t seed, std::uint64_t blocks,
                        unsigned threads = 0, FilterBankCache* cache = nullptr) {
  const GfdmConfig cfg = proto.config();
  const std::size_t mn = cfg.block_len();
  const double sigma2 = sigma2_from_snr_db(snr_db, proto.energy());

  const TxPlan plan(proto);
  std::shared_ptr<const ReceiverFilterBank> bank;
  const double bank_sigma2 = mode == RxMode::Mmse ? sigma2 : 0.0;
  if (cache) {
    bank = cache->get(proto, mode, bank_sigma2);
  } else {
    bank = std::make_shared<const ReceiverFilterBank>(proto, mode, bank_sigma2);
  }
  ChannelSpec spec{channel_taps, sigma2, seed};
  const Fde eq(spec, mn);

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(worker_count(threads), std::max<std::uint64_t>(blocks, 1)));
  std::atomic<std::uint64_t> errors{0};
  auto body = [&](unsigned w) {
    std::uint64_t local = 0;
    for (std::uint64_t t = w; t < blocks; t += workers) {
      const auto bits = random_bits(2 * mn, seed, 2 * t);
      const ComplexBlock d = qpsk_map(bits);
      const ComplexBlock x = plan.modulate(d);
      const cvec x_cp = add_cp(x, cfg.cp_len);
      const cvec r = transmit_through(spec, x_cp, cfg.cp_len, 2 * t + 1);
      const ComplexBlock y = eq.apply(remove_cp(r, cfg.cp_len));
      const ComplexBlock dhat = bank->demodulate(y);
      local += count_bit_errors(bits, qpsk_slice(dhat));
    }
    errors.fetch_add(local, std::memory_order_relaxed);
  };
  if (workers <= 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& th : pool) th.join();
  }

  BerPoint point;
  point.snr_db = snr_db;
  point.mode = mode;
  point.blocks = blocks;
  point.bits = blocks * 2 * mn;
  point.bit_errors = errors.load();
  point.ber = point.bits > 0 ? double(point.bit_errors) / double(point.bits) : 0.0;
  point.sigma2 = sigma2;
  return point;
}

}  // namespace gfdm
