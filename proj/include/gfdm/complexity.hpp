#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "types.hpp"

namespace gfdm {

// Complex-multiplication cost models. "Direct" rows are dense-matrix
// baselines, "Proposed" rows are the block-DFT + polyphase-convolution
// transceiver, Tx5G is a frequency-domain filtered multicarrier transmitter
// with L overlapping subcarrier copies, MfSic is matched filtering plus I
// interference-cancellation passes. Ofdm rows are a plain CP-OFDM FFT per
// time slot, included as an external reference point.
enum class Technique {
  DirectTx,
  Tx5G,
  ProposedTx,
  OfdmTx,
  DirectZf,
  DirectMmse,
  MfSic,
  ProposedMfZf,
  ProposedMmse,
  OfdmRx,
};

inline constexpr std::array<Technique, 10> kAllTechniques = {
    Technique::DirectTx,  Technique::Tx5G,        Technique::ProposedTx,
    Technique::OfdmTx,    Technique::DirectZf,    Technique::DirectMmse,
    Technique::MfSic,     Technique::ProposedMfZf, Technique::ProposedMmse,
    Technique::OfdmRx,
};

inline const char* to_string(Technique t) {
  switch (t) {
    case Technique::DirectTx: return "direct_tx";
    case Technique::Tx5G: return "tx_5g";
    case Technique::ProposedTx: return "proposed_tx";
    case Technique::OfdmTx: return "ofdm_tx";
    case Technique::DirectZf: return "direct_zf";
    case Technique::DirectMmse: return "direct_mmse";
    case Technique::MfSic: return "mf_sic";
    case Technique::ProposedMfZf: return "proposed_mf_zf";
    case Technique::ProposedMmse: return "proposed_mmse";
    case Technique::OfdmRx: return "ofdm_rx";
  }
  return "?";
}

struct CmCount {
  Technique technique;
  std::size_t n = 1;
  std::size_t m = 1;
  int l = 2;
  int i = 8;
  double value = 0.0;
};

// Closed-form complex-multiplication counts. log2 is real-valued, so the
// formulas degrade gracefully at M = 1 and off powers of two.
inline CmCount cm_count(Technique t, std::size_t n, std::size_t m, int l = 2, int i = 8) {
  if (n < 1 || m < 1) throw std::invalid_argument("cm_count: N and M must be >= 1");
  if (l < 0 || i < 0) throw std::invalid_argument("cm_count: L and I must be >= 0");
  const double dn = double(n);
  const double dm = double(m);
  const double mn = dn * dm;
  const double lg_n = std::log2(dn);
  const double lg_m = std::log2(dm);
  const double lg_mn = std::log2(mn);
  double v = 0.0;
  switch (t) {
    case Technique::DirectTx: v = mn * mn; break;
    case Technique::Tx5G: v = mn * (lg_n + 2.0 * lg_m + double(l)); break;
    case Technique::ProposedTx:
    case Technique::ProposedMfZf: v = 0.5 * mn * (dm + lg_n); break;
    case Technique::OfdmTx:
    case Technique::OfdmRx: v = dm * 0.5 * dn * lg_n; break;
    case Technique::DirectZf: v = 2.0 * mn * mn; break;
    case Technique::DirectMmse: v = mn * mn * mn / 3.0 + 2.0 * mn * mn; break;
    case Technique::MfSic:
      v = mn * (lg_mn + lg_m + double(l) + double(i) * (2.0 * lg_m + 1.0));
      break;
    case Technique::ProposedMmse: v = 0.5 * mn * (4.0 * dm + lg_n + 3.0); break;
  }
  return {t, n, m, l, i, v};
}

// Rows ordered by technique enum order, then M ascending.
inline std::vector<CmCount> sweep(const std::vector<Technique>& techniques, std::size_t n,
                                  std::size_t m_lo, std::size_t m_hi, int l = 2, int i = 8) {
  if (techniques.empty()) throw std::invalid_argument("sweep: technique set is empty");
  if (m_lo < 1 || m_hi < m_lo) throw std::invalid_argument("sweep: bad M range");
  std::vector<CmCount> rows;
  for (Technique t : kAllTechniques) {
    bool wanted = false;
    for (Technique q : techniques) wanted = wanted || q == t;
    if (!wanted) continue;
    for (std::size_t m = m_lo; m <= m_hi; ++m) rows.push_back(cm_count(t, n, m, l, i));
  }
  return rows;
}

struct ClaimCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Headline ratio claims, evaluated from the closed forms at exact
// floating-point values (no rounding before the comparisons).
inline std::vector<ClaimCheck> check_complexity_claims(std::size_t n = 1024, int l = 2,
                                                       int i = 8) {
  auto ratio = [&](Technique a, Technique b, std::size_t m) {
    return cm_count(a, n, m, l, i).value / cm_count(b, n, m, l, i).value;
  };
  auto fmt = [](const char* text, double v0, double v1 = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), text, v0, v1);
    return std::string(buf);
  };
  std::vector<ClaimCheck> out;
  {
    const double r = ratio(Technique::DirectTx, Technique::ProposedTx, 5);
    out.push_back({"tx_direct_over_proposed_at_m5_ge_683", r >= 683.0,
                   fmt("ratio at M=5 is %.4f", r)});
  }
  {
    double lo = 1e300;
    std::size_t arg = 0;
    for (std::size_t m = 13; m <= 21; ++m) {
      const double r = ratio(Technique::DirectTx, Technique::ProposedTx, m);
      if (r < lo) { lo = r; arg = m; }
    }
    out.push_back({"tx_direct_over_proposed_ge_1000_for_m13_21", lo >= 1000.0,
                   fmt("minimum ratio %.4f at M=%.0f", lo, double(arg))});
  }
  {
    double lo = 1e300;
    std::size_t arg = 0;
    for (std::size_t m = 3; m <= 21; ++m) {
      const double r = ratio(Technique::MfSic, Technique::ProposedMfZf, m);
      if (r < lo) { lo = r; arg = m; }
    }
    out.push_back({"mfsic_over_proposed_zf_ge_8_for_m3_21", lo >= 8.0,
                   fmt("minimum ratio %.4f at M=%.0f", lo, double(arg))});
  }
  {
    std::size_t in_band = 0, total = 0;
    for (std::size_t m = 5; m <= 21; ++m) {
      const double r = ratio(Technique::MfSic, Technique::ProposedMmse, m);
      ++total;
      if (r >= 2.0 && r <= 3.0) ++in_band;
    }
    out.push_back({"mfsic_over_proposed_mmse_in_2_3_for_half_of_m5_21",
                   2 * in_band >= total,
                   fmt("%.0f of %.0f grid points in [2,3]", double(in_band), double(total))});
  }
  return out;
}

// Tally of executed complex multiplications. Transform passes are credited at
// the radix-2 figure (n/2)log2(n) per call, dense DFT passes at n^2, and
// products of a real coefficient with a complex sample count one half each.
class CmMeter {
 public:
  CmMeter() = default;
  explicit CmMeter(bool enabled) : enabled_(enabled) {}

  bool enabled() const { return enabled_; }

  void add_fft(std::size_t n, std::size_t count = 1) {
    if (enabled_) cm_ += double(count) * 0.5 * double(n) * std::log2(double(n));
  }

  void add_dense_dft(std::size_t n, std::size_t count = 1) {
    if (enabled_) cm_ += double(count) * double(n) * double(n);
  }

  void add_real_complex_products(double k) {
    if (enabled_) cm_ += 0.5 * k;
  }

  void add_complex_products(double k) {
    if (enabled_) cm_ += k;
  }

  double total() const {
    if (!enabled_) throw std::logic_error("CmMeter: instrumentation disabled");
    return cm_;
  }

  void reset() { cm_ = 0.0; }

 private:
  bool enabled_ = true;
  double cm_ = 0.0;
};

}  // namespace gfdm
