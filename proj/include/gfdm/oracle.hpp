#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "prototype.hpp"
#include "types.hpp"

// Literal-transcription reference implementations. Everything here is O(n^2)
// or worse on purpose: these routines define correct answers for the fast
// paths and are never used on the signal path.
namespace gfdm::oracle {

using DenseMatrix = Eigen::MatrixXcd;

inline constexpr double kRcondThreshold = 1e-12;

inline Eigen::VectorXcd to_eigen(const cvec& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline cvec from_eigen(const Eigen::VectorXcd& v) {
  return cvec(v.data(), v.data() + v.size());
}

// [A]_{n,m} = g_{(n - mN) mod MN} * exp(j 2 pi n floor(m/M) / N):
// column m carries symbol m of subcarrier floor(m/M), time slot m mod M.
inline DenseMatrix build_modulation_matrix(const GfdmConfig& cfg, const PrototypeFilter& proto) {
  if (proto.config() != cfg)
    throw std::invalid_argument("build_modulation_matrix: prototype built for a different config");
  const std::size_t n_sub = cfg.n_subcarriers;
  const std::size_t m_ov = cfg.overlap_factor;
  const std::size_t len = cfg.block_len();
  DenseMatrix a(len, len);
  for (std::size_t col = 0; col < len; ++col) {
    const std::size_t subcarrier = col / m_ov;
    const std::size_t slot = col % m_ov;
    const std::size_t shift = (slot * n_sub) % len;
    for (std::size_t row = 0; row < len; ++row) {
      const std::size_t idx = (row + len - shift) % len;
      const double ang =
          2.0 * std::numbers::pi * double(row) * double(subcarrier) / double(n_sub);
      a(row, col) = proto.coeffs()[idx] * cplx(std::cos(ang), std::sin(ang));
    }
  }
  return a;
}

// Block DFT: M x M identity blocks scaled by the unitary N-point DFT factors,
// (1/sqrt(N)) exp(-j 2 pi n i / N).
inline DenseMatrix build_block_dft(const GfdmConfig& cfg) {
  const std::size_t n_sub = cfg.n_subcarriers;
  const std::size_t m_ov = cfg.overlap_factor;
  const std::size_t len = cfg.block_len();
  const double scale = 1.0 / std::sqrt(double(n_sub));
  DenseMatrix fb = DenseMatrix::Zero(len, len);
  for (std::size_t bn = 0; bn < n_sub; ++bn) {
    for (std::size_t bi = 0; bi < n_sub; ++bi) {
      const double ang = -2.0 * std::numbers::pi * double(bn) * double(bi) / double(n_sub);
      const cplx w = scale * cplx(std::cos(ang), std::sin(ang));
      for (std::size_t r = 0; r < m_ov; ++r) fb(bn * m_ov + r, bi * m_ov + r) = w;
    }
  }
  return fb;
}

inline DenseMatrix gamma_direct(const DenseMatrix& a, const DenseMatrix& fb) {
  return fb * a.adjoint();
}

inline DenseMatrix d_direct(const DenseMatrix& a, const DenseMatrix& fb) {
  return fb * (a.adjoint() * a) * fb.adjoint();
}

inline ComplexBlock direct_modulate(const DenseMatrix& a, const ComplexBlock& d) {
  if (static_cast<std::size_t>(a.cols()) != d.size())
    throw std::invalid_argument("direct_modulate: size mismatch");
  return from_eigen(a * to_eigen(d));
}

// Reciprocal condition estimate of A^H A from its eigenvalue extremes.
inline double gram_rcond(const DenseMatrix& gram) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(gram, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double lo = std::max(ev(0), 0.0);
  const double hi = ev(ev.size() - 1);
  return hi > 0.0 ? lo / hi : 0.0;
}

// ZF computes (A^H A)^{-1} A^H y, MMSE computes (A^H A + sigma2 I)^{-1} A^H y.
// Both are evaluated as least-squares problems on A itself (MMSE through the
// algebraically identical damped stack [A; sqrt(sigma2) I] against [y; 0]),
// so the forward error scales with one stable orthogonal factorization
// instead of the squared conditioning of the explicit Gram system. The
// singularity gate reads on the Gram matrix: rcond(A^H A) < threshold.
inline ComplexBlock direct_receive(const DenseMatrix& a, const ComplexBlock& y, RxMode mode,
                                   double sigma2 = 0.0) {
  if (static_cast<std::size_t>(a.rows()) != y.size())
    throw std::invalid_argument("direct_receive: size mismatch");
  if (sigma2 < 0.0) throw std::invalid_argument("direct_receive: sigma2 must be >= 0");
  if (mode == RxMode::Mf) return from_eigen(a.adjoint() * to_eigen(y));
  if (mode == RxMode::Zf || sigma2 == 0.0) {
    const double gram_rc = gram_rcond(a.adjoint() * a);
    if (gram_rc < kRcondThreshold) throw SingularSystem(gram_rc);
    return from_eigen(a.completeOrthogonalDecomposition().solve(to_eigen(y)));
  }
  const Eigen::Index n = a.cols();
  DenseMatrix damped(a.rows() + n, n);
  damped.topRows(a.rows()) = a;
  damped.bottomRows(n) = std::sqrt(sigma2) * DenseMatrix::Identity(n, n);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(a.rows() + n);
  rhs.head(a.rows()) = to_eigen(y);
  return from_eigen(damped.completeOrthogonalDecomposition().solve(rhs));
}

}  // namespace gfdm::oracle
