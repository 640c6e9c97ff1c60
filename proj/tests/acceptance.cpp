// Acceptance gate: one self-contained check per release criterion, each
// printed as a single [PASS]/[FAIL] line with its worst observed numbers.
// Run with no arguments for the full gate or with a single 1..7 selector.
// Exit status is 0 only if every executed criterion passes.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "gfdm/gfdm.hpp"
#include "gfdm/oracle.hpp"

using namespace gfdm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* text, ...) {
  char buf[512];
  va_list args;
  va_start(args, text);
  std::vsnprintf(buf, sizeof(buf), text, args);
  va_end(args);
  return buf;
}

const std::size_t kGridN[] = {2, 4, 8, 16, 32};
const std::size_t kGridM[] = {1, 2, 3, 4, 5};

std::vector<PrototypeFilter> test_prototypes(const GfdmConfig& cfg) {
  return {make_prototype(cfg, FilterKind::RaisedCosineTime, 0.1),
          make_prototype(cfg, FilterKind::RaisedCosineTime, 0.5),
          make_prototype(cfg, FilterKind::RaisedCosineTime, 0.9),
          make_prototype(cfg, FilterKind::Dirichlet),
          make_prototype(cfg, FilterKind::UnitImpulse)};
}

double max_diff(const ComplexBlock& got, const ComplexBlock& want) {
  double worst = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k)
    worst = std::max(worst, std::abs(got[k] - want[k]));
  return worst;
}

ComplexBlock random_qpsk(std::size_t len, std::uint64_t seed, std::uint64_t stream) {
  return qpsk_map(random_bits(2 * len, seed, stream));
}

// Gaussian tail probability, the QPSK per-bit error reference.
double q_func(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t blocks = 0;
  std::uint64_t seed = 100;
  for (std::size_t n : kGridN) {
    for (std::size_t m : kGridM) {
      const GfdmConfig cfg(n, m);
      for (const auto& proto : test_prototypes(cfg)) {
        const auto a = oracle::build_modulation_matrix(cfg, proto);
        const TxPlan plan(proto);
        ++seed;
        for (std::uint64_t t = 0; t < 20; ++t) {
          const auto d = random_qpsk(cfg.block_len(), seed, t);
          worst = std::max(worst, max_diff(plan.modulate(d), oracle::direct_modulate(a, d)));
          ++blocks;
        }
      }
    }
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  const bool pass = worst < 1e-10 && elapsed.count() < 30.0;
  return {pass, format("worst |fast - dense| %.3e over %zu blocks in %.2f s (limits 1e-10, 30 s)",
                       worst, blocks, elapsed.count())};
}

Outcome criterion2() {
  double worst = 0.0;
  std::size_t combos = 0, singular = 0, mismatches = 0;
  std::uint64_t seed = 300;
  const double sigmas[] = {1e-6, 0.1, 1.0};
  for (std::size_t n : kGridN) {
    for (std::size_t m : kGridM) {
      const GfdmConfig cfg(n, m);
      for (const auto& proto : test_prototypes(cfg)) {
        const auto a = oracle::build_modulation_matrix(cfg, proto);
        ++seed;

        struct Case {
          RxMode mode;
          double sigma2;
        };
        std::vector<Case> cases{{RxMode::Mf, 0.0}, {RxMode::Zf, 0.0}};
        for (double s2 : sigmas) cases.push_back({RxMode::Mmse, s2});

        for (const auto& c : cases) {
          ++combos;
          const cvec y = complex_gaussian(cfg.block_len(), 1.0, seed, combos);
          bool fast_singular = false, oracle_singular = false;
          ComplexBlock fast, ref;
          try {
            fast = ReceiverFilterBank(proto, c.mode, c.sigma2).demodulate(y);
          } catch (const SingularPolyphase&) {
            fast_singular = true;
          }
          try {
            ref = oracle::direct_receive(a, y, c.mode, c.sigma2);
          } catch (const SingularSystem&) {
            oracle_singular = true;
          }
          if (fast_singular != oracle_singular) {
            ++mismatches;
            continue;
          }
          if (fast_singular) {
            ++singular;
            continue;
          }
          worst = std::max(worst, max_diff(fast, ref));
        }
      }
    }
  }
  const bool pass = worst < 1e-8 && mismatches == 0;
  return {pass,
          format("worst rx error %.3e over %zu combos (limit 1e-8); %zu singular combos "
                 "consistent on both paths, %zu mismatches",
                 worst, combos, singular, mismatches)};
}

Outcome criterion3() {
  double worst = 0.0;
  std::size_t points = 0;
  std::uint64_t seed = 500;
  for (std::size_t n : kGridN) {
    for (std::size_t m : kGridM) {
      const GfdmConfig cfg(n, m);
      for (const auto& proto : test_prototypes(cfg)) {
        ++seed;
        const TxPlan plan(proto);
        ComplexBlock basis(cfg.block_len(), cplx(0.0, 0.0));
        try {
          const ReceiverFilterBank zf(proto, RxMode::Zf);
          ++points;
          for (std::size_t k = 0; k < cfg.block_len(); ++k) {
            basis[k] = cplx(1.0, 0.0);
            worst = std::max(worst, max_diff(zf.demodulate(plan.modulate(basis)), basis));
            basis[k] = cplx(0.0, 0.0);
          }
          for (std::uint64_t t = 0; t < 50; ++t) {
            const auto d = random_qpsk(cfg.block_len(), seed, t);
            worst = std::max(worst, max_diff(zf.demodulate(plan.modulate(d)), d));
          }
        } catch (const SingularPolyphase&) {
          // ZF is undefined for this prototype; reconstruction applies elsewhere
        }
      }
    }
  }
  const bool pass = worst < 1e-10;
  return {pass, format("worst |ZF(modulate(d)) - d| %.3e over %zu nonsingular prototype points "
                       "(limit 1e-10)",
                       worst, points)};
}

Outcome criterion4() {
  bool support_exact = true;
  double worst_imag = 0.0, worst_energy = 0.0, worst_block = 0.0, worst_shift = 0.0;
  std::size_t rc_points = 0;
  for (std::size_t n : {std::size_t(2), std::size_t(4), std::size_t(8), std::size_t(16)}) {
    for (std::size_t m : kGridM) {
      const GfdmConfig cfg(n, m);
      const auto fb = oracle::build_block_dft(cfg);
      const auto protos = test_prototypes(cfg);
      for (std::size_t p = 0; p < protos.size(); ++p) {
        const auto& proto = protos[p];
        const auto a = oracle::build_modulation_matrix(cfg, proto);
        const auto gamma = oracle::gamma_direct(a, fb);

        // (a) support: exactly N*M^2 entries for the full-support RC family,
        //     never more for the sparser prototypes
        std::size_t nonzero = 0;
        for (Eigen::Index r = 0; r < gamma.rows(); ++r)
          for (Eigen::Index c = 0; c < gamma.cols(); ++c) {
            if (std::abs(gamma(r, c)) > 1e-12) ++nonzero;
            worst_imag = std::max(worst_imag, std::abs(gamma(r, c).imag()));
          }
        if (p < 3) {
          ++rc_points;
          if (nonzero != n * m * m) support_exact = false;
        } else if (nonzero > n * m * m) {
          support_exact = false;
        }

        // (b) D is block-diagonal and each block is N*circ(g_b conv folded g_b)
        const auto d = oracle::d_direct(a, fb);
        double off = 0.0, total = 0.0;
        for (Eigen::Index r = 0; r < d.rows(); ++r)
          for (Eigen::Index c = 0; c < d.cols(); ++c) {
            const double e = std::norm(d(r, c));
            total += e;
            if (std::size_t(r) / m != std::size_t(c) / m) off += e;
          }
        if (total > 0.0) worst_energy = std::max(worst_energy, off / total);
        for (std::size_t i = 0; i < n; ++i) {
          const auto comp = polyphase(proto, (n - i) % n);
          rvec conv(m, 0.0);
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t k = 0; k < m; ++k)
              conv[r] += comp.forward[k] * comp.folded[(r + m - k) % m];
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) {
              const cplx want(double(n) * conv[(r + m - c) % m], 0.0);
              const auto got = d(Eigen::Index(i * m + r), Eigen::Index(i * m + c));
              worst_block = std::max(worst_block, std::abs(got - want));
            }
        }

        // (c) the Gram matrix is block-circulant: block (r,c) equals block
        //     (r+1 mod N, c+1 mod N)
        const oracle::DenseMatrix gram = a.adjoint() * a;
        const Eigen::Index mm = Eigen::Index(m);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) {
            const auto diff = gram.block(Eigen::Index(r) * mm, Eigen::Index(c) * mm, mm, mm) -
                              gram.block(Eigen::Index((r + 1) % n) * mm,
                                         Eigen::Index((c + 1) % n) * mm, mm, mm);
            worst_shift = std::max(worst_shift, diff.cwiseAbs().maxCoeff());
          }
      }
    }
  }
  const bool pass = support_exact && worst_imag < 1e-12 && worst_energy < 1e-18 &&
                    worst_block < 1e-12 && worst_shift < 1e-12;
  return {pass,
          format("Gamma support %s on %zu full-support points, worst imag %.2e (limit 1e-12); "
                 "D off-block energy %.2e (limit 1e-18), block vs circulant %.2e, "
                 "Gram shift %.2e (limit 1e-12)",
                 support_exact ? "exact" : "WRONG", rc_points, worst_imag, worst_energy,
                 worst_block, worst_shift)};
}

Outcome criterion5() {
  std::size_t points = 0, exact = 0;
  const std::size_t grid_m[] = {1, 3, 5, 7};
  for (std::size_t n = 8; n <= 1024; n *= 2) {
    for (std::size_t m : grid_m) {
      const GfdmConfig cfg(n, m);
      const auto proto = make_prototype(cfg, FilterKind::RaisedCosineTime, 0.5);
      const auto d = random_qpsk(cfg.block_len(), 900, n * 8 + m);
      const cvec y = complex_gaussian(cfg.block_len(), 1.0, 901, n * 8 + m);

      CmMeter meter;
      TxPlan(proto).modulate(d, &meter);
      ++points;
      if (meter.total() == cm_count(Technique::ProposedTx, n, m).value) ++exact;

      meter.reset();
      ReceiverFilterBank(proto, RxMode::Mf).demodulate(y, &meter);
      ++points;
      if (meter.total() == cm_count(Technique::ProposedMfZf, n, m).value) ++exact;

      meter.reset();
      ReceiverFilterBank(proto, RxMode::Zf).demodulate(y, &meter);
      ++points;
      if (meter.total() == cm_count(Technique::ProposedMfZf, n, m).value) ++exact;

      meter.reset();
      ReceiverFilterBank(proto, RxMode::Mmse, 0.25).demodulate(y, &meter);
      ++points;
      if (meter.total() == cm_count(Technique::ProposedMmse, n, m).value) ++exact;
    }
  }

  const auto claims = check_complexity_claims(1024, 2, 8);
  std::size_t claims_pass = 0;
  for (const auto& c : claims) {
    std::printf("       claim %-48s %s (%s)\n", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                c.detail.c_str());
    if (c.pass) ++claims_pass;
  }
  const bool pass = exact == points && claims_pass == claims.size();
  return {pass, format("multiply tallies exact on %zu of %zu grid points; %zu of %zu headline "
                       "ratio claims hold",
                       exact, points, claims_pass, claims.size())};
}

Outcome criterion6() {
  const GfdmConfig cfg(64, 1);
  const auto proto = make_prototype(cfg, FilterKind::Dirichlet);
  const cvec awgn{cplx(1.0, 0.0)};
  FilterBankCache cache;

  double worst_rel = 0.0;
  std::uint64_t bits = 0;
  BerPoint flat6;
  for (double snr : {4.0, 6.0, 8.0}) {
    const auto pt = run_ber(proto, RxMode::Zf, awgn, snr, 42, 7813, 0, &cache);
    const double theory = q_func(std::sqrt(std::pow(10.0, snr / 10.0)));
    worst_rel = std::max(worst_rel, std::abs(pt.ber - theory) / theory);
    bits += pt.bits;
    if (snr == 6.0) flat6 = pt;
  }

  // Self-interference plus ZF noise enhancement must not land below the
  // flat single-symbol baseline at the same SNR (a small slack absorbs the
  // Monte Carlo noise of the shorter run).
  const GfdmConfig cfg5(64, 5);
  const auto proto5 = make_prototype(cfg5, FilterKind::RaisedCosineTime, 0.5);
  const auto gfdm6 = run_ber(proto5, RxMode::Zf, awgn, 6.0, 43, 313);
  const bool ordered = gfdm6.ber >= 0.95 * flat6.ber;

  const bool pass = worst_rel <= 0.10 && ordered;
  return {pass,
          format("worst relative BER error %.4f over %llu bits (limit 0.10); at 6 dB "
                 "BER_ZF(M=5) %.5f vs BER(M=1) %.5f over %llu bits (must not be lower)",
                 worst_rel, static_cast<unsigned long long>(bits), gfdm6.ber, flat6.ber,
                 static_cast<unsigned long long>(gfdm6.bits))};
}

Outcome criterion7() {
  const GfdmConfig cfg(16, 4, 4);
  const auto proto = make_prototype(cfg, FilterKind::RaisedCosineTime, 0.5);
  const TxPlan plan(proto);
  const std::size_t cp = 4;
  Fft fft(cfg.block_len());

  double worst = 0.0;
  std::size_t respins = 0;
  for (std::size_t k = 0; k < 10; ++k) {
    const std::size_t len = 1 + k % 4;
    cvec taps;
    std::uint64_t stream = k;
    for (;;) {
      taps = complex_gaussian(len, 1.0, 7000 + k, stream);
      double energy = 0.0;
      for (const auto& t : taps) energy += std::norm(t);
      const double scale = 1.0 / std::sqrt(energy);
      for (auto& t : taps) t *= scale;

      cvec padded(cfg.block_len(), cplx(0.0, 0.0));
      std::copy(taps.begin(), taps.end(), padded.begin());
      const cvec spectrum = fft.forward(padded);
      double lo = 1e300;
      for (const auto& b : spectrum) lo = std::min(lo, std::abs(b));
      if (lo >= 1e-3) break;
      stream += 1000;
      ++respins;
    }

    const ChannelSpec chan{taps, 0.0, 0};
    const auto d = random_qpsk(cfg.block_len(), 800 + k, 0);
    const auto x = plan.modulate(d);
    const auto y = fde(remove_cp(transmit_through(chan, add_cp(x, cp), cp), cp), chan);
    worst = std::max(worst, max_diff(y, x));
  }
  const bool pass = worst < 1e-10;
  return {pass, format("worst |fde(channel(x)) - x| %.3e over 10 random channels, %zu respins "
                       "(limit 1e-10)",
                       worst, respins)};
}

}  // namespace

int main(int argc, char** argv) {
  Outcome (*const criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                                   criterion5, criterion6, criterion7};
  std::vector<int> selected;
  if (argc <= 1) {
    for (int k = 1; k <= 7; ++k) selected.push_back(k);
  } else if (argc == 2) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > 7) {
      std::fprintf(stderr, "usage: acceptance [criterion 1..7]\n");
      return 2;
    }
    selected.push_back(k);
  } else {
    std::fprintf(stderr, "usage: acceptance [criterion 1..7]\n");
    return 2;
  }

  bool all = true;
  for (int k : selected) {
    const Outcome o = criteria[k - 1]();
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", k, o.detail.c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
