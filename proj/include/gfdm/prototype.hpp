#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "types.hpp"

namespace gfdm {

enum class FilterKind { RaisedCosineTime, Dirichlet, UnitImpulse, Custom };

inline const char* to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::RaisedCosineTime: return "rc";
    case FilterKind::Dirichlet: return "dirichlet";
    case FilterKind::UnitImpulse: return "impulse";
    case FilterKind::Custom: return "custom";
  }
  return "?";
}

// Real prototype filter of length N*M paired with its config. Generated kinds
// are normalized to sum(g^2) = 1/N; custom coefficients are taken verbatim.
class PrototypeFilter {
 public:
  PrototypeFilter(GfdmConfig cfg, FilterKind kind, double rolloff, rvec coeffs)
      : cfg_(cfg), kind_(kind), rolloff_(rolloff), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != cfg_.block_len())
      throw std::invalid_argument("PrototypeFilter: coefficient count must be N*M");
  }

  const GfdmConfig& config() const { return cfg_; }
  FilterKind kind() const { return kind_; }
  double rolloff() const { return rolloff_; }
  const rvec& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }

  double energy() const {
    double e = 0.0;
    for (double g : coeffs_) e += g * g;
    return e;
  }

 private:
  GfdmConfig cfg_;
  FilterKind kind_;
  double rolloff_;
  rvec coeffs_;
};

namespace detail {

// Circular raised-cosine (Tukey) taper evaluated at half-sample offsets so no
// tap lands exactly on the ramp's zero; at rolloff 1 this degenerates to a
// pure single-tone window whose stride-N subsequences have exact spectral
// nulls for M >= 4.
inline rvec raised_cosine_time(const GfdmConfig& cfg, double rolloff) {
  const double total = double(cfg.block_len());
  rvec g(cfg.block_len());
  const double edge = (1.0 - rolloff) / 2.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double u = (double(n) + 0.5) / total;
    const double tau = std::abs(u - 0.5);
    if (rolloff <= 0.0 || tau <= edge) {
      g[n] = 1.0;
    } else {
      g[n] = 0.5 * (1.0 + std::cos(std::numbers::pi * (tau - edge) * 2.0 / rolloff));
    }
  }
  return g;
}

inline rvec dirichlet(const GfdmConfig& cfg) {
  const double total = double(cfg.block_len());
  const double m = double(cfg.overlap_factor);
  rvec g(cfg.block_len());
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (n == 0) {
      g[n] = 1.0;
    } else {
      const double t = std::numbers::pi * double(n) / total;
      g[n] = std::sin(m * t) / (m * std::sin(t));
    }
  }
  return g;
}

}  // namespace detail

inline PrototypeFilter make_prototype(const GfdmConfig& cfg, FilterKind kind,
                                      double rolloff = 0.0) {
  rvec g;
  switch (kind) {
    case FilterKind::RaisedCosineTime:
      if (rolloff < 0.0 || rolloff > 1.0)
        throw std::invalid_argument("make_prototype: rolloff must be in [0, 1]");
      g = detail::raised_cosine_time(cfg, rolloff);
      break;
    case FilterKind::Dirichlet:
      g = detail::dirichlet(cfg);
      break;
    case FilterKind::UnitImpulse:
      g.assign(cfg.block_len(), 0.0);
      g[0] = 1.0;
      break;
    case FilterKind::Custom:
      throw std::invalid_argument("make_prototype: custom kind takes an explicit coefficient vector");
  }
  double raw = 0.0;
  for (double v : g) raw += v * v;
  const double scale = std::sqrt(1.0 / (double(cfg.n_subcarriers) * raw));
  for (double& v : g) v *= scale;
  return PrototypeFilter(cfg, kind, kind == FilterKind::RaisedCosineTime ? rolloff : 0.0,
                         std::move(g));
}

// Custom coefficients are used as given (no re-normalization), so callers can
// express exactly-unitary toy systems.
inline PrototypeFilter make_prototype(const GfdmConfig& cfg, rvec coeffs) {
  return PrototypeFilter(cfg, FilterKind::Custom, 0.0, std::move(coeffs));
}

inline PrototypeFilter make_prototype(const GfdmConfig& cfg, const cvec& coeffs) {
  rvec re(coeffs.size());
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (coeffs[n].imag() != 0.0)
      throw std::invalid_argument("make_prototype: prototype coefficients must be real");
    re[n] = coeffs[n].real();
  }
  return make_prototype(cfg, std::move(re));
}

// Circular fold: out[k] = in[(M-k) mod M]. Applying it twice gives back the
// input.
inline rvec fold(const rvec& v) {
  const std::size_t m = v.size();
  rvec out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = v[(m - k) % m];
  return out;
}

struct PolyphaseComponent {
  std::size_t branch = 0;
  rvec forward;  // [g_k, g_{k+N}, ..., g_{k+(M-1)N}]
  rvec folded;   // [g_k, g_{k+(M-1)N}, ..., g_{k+N}]
};

inline PolyphaseComponent polyphase(const PrototypeFilter& proto, std::size_t branch) {
  const std::size_t n = proto.config().n_subcarriers;
  const std::size_t m = proto.config().overlap_factor;
  if (branch >= n) throw std::out_of_range("polyphase: branch must be < N");
  PolyphaseComponent pc;
  pc.branch = branch;
  pc.forward.resize(m);
  for (std::size_t k = 0; k < m; ++k) pc.forward[k] = proto.coeffs()[branch + k * n];
  pc.folded = fold(pc.forward);
  return pc;
}

}  // namespace gfdm
