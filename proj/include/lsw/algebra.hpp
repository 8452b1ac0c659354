#pragma once

// Closed-form 2x2 complex algebra: Pauli/Bloch decompositions, Hermitian
// eigensystems, and qubit states. Everything downstream (POVM construction,
// cascade compilation, Jones calculus) runs on these few primitives, so the
// contracts here are deliberately strict and deterministic.

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>

#include "lsw/errors.hpp"

namespace lsw {

using cplx = std::complex<double>;
using Ket = std::array<cplx, 2>;    // amplitude pair in the {|0>,|1>} basis
using Vec3 = std::array<double, 3>;

// tolerances; all computations are closed-form at double precision
inline constexpr double tol_herm = 1e-10;
inline constexpr double tol_unit = 1e-10;
inline constexpr double tol_psd = 1e-9;
inline constexpr double tol_rank = 1e-10;

// ---- real 3-vectors ----

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

// ---- 2x2 complex operators ----

struct Operator2 {
  // row-major entries
  std::array<cplx, 4> e{};

  cplx& operator()(int r, int c) { return e[2 * r + c]; }
  const cplx& operator()(int r, int c) const { return e[2 * r + c]; }
};

inline Operator2 operator+(const Operator2& a, const Operator2& b) {
  Operator2 m;
  for (int k = 0; k < 4; ++k) m.e[k] = a.e[k] + b.e[k];
  return m;
}
inline Operator2 operator-(const Operator2& a, const Operator2& b) {
  Operator2 m;
  for (int k = 0; k < 4; ++k) m.e[k] = a.e[k] - b.e[k];
  return m;
}
inline Operator2 operator*(const Operator2& a, const Operator2& b) {
  Operator2 m;
  m(0, 0) = a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0);
  m(0, 1) = a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1);
  m(1, 0) = a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0);
  m(1, 1) = a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1);
  return m;
}
inline Operator2 operator*(cplx s, const Operator2& a) {
  Operator2 m;
  for (int k = 0; k < 4; ++k) m.e[k] = s * a.e[k];
  return m;
}
inline Operator2 operator*(double s, const Operator2& a) { return cplx(s, 0.0) * a; }

inline Operator2 adjoint(const Operator2& a) {
  Operator2 m;
  m(0, 0) = std::conj(a(0, 0));
  m(0, 1) = std::conj(a(1, 0));
  m(1, 0) = std::conj(a(0, 1));
  m(1, 1) = std::conj(a(1, 1));
  return m;
}
inline cplx trace(const Operator2& a) { return a(0, 0) + a(1, 1); }
inline cplx det(const Operator2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

// max-abs entry; the operator distance used by every residual contract
inline double max_abs(const Operator2& a) {
  double m = 0.0;
  for (const cplx& z : a.e) m = std::max(m, std::abs(z));
  return m;
}
inline double distance(const Operator2& a, const Operator2& b) { return max_abs(a - b); }

inline Operator2 identity() {
  Operator2 m;
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  return m;
}
inline Operator2 zero() { return Operator2{}; }
inline Operator2 pauli_x() {
  Operator2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}
inline Operator2 pauli_y() {
  Operator2 m;
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}
inline Operator2 pauli_z() {
  Operator2 m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

// sigma . c for a real 3-vector c
inline Operator2 pauli_dot(const Vec3& c) {
  Operator2 m;
  m(0, 0) = cplx(c[2], 0.0);
  m(0, 1) = cplx(c[0], -c[1]);
  m(1, 0) = cplx(c[0], c[1]);
  m(1, 1) = cplx(-c[2], 0.0);
  return m;
}

inline bool is_hermitian(const Operator2& m, double tol = tol_herm) {
  return distance(m, adjoint(m)) <= tol;
}
inline bool is_unitary(const Operator2& u, double tol = tol_unit) {
  return distance(adjoint(u) * u, identity()) <= tol;
}

// ---- Bloch decomposition: M = c0*I + sigma.c for Hermitian M ----

struct BlochDecomp {
  double c0 = 0.0;
  Vec3 c{0.0, 0.0, 0.0};
};

inline BlochDecomp bloch_decompose(const Operator2& m) {
  if (!is_hermitian(m)) throw non_hermitian_error("bloch_decompose requires M = M+");
  BlochDecomp d;
  d.c0 = 0.5 * (m(0, 0).real() + m(1, 1).real());
  d.c[0] = 0.5 * (m(0, 1).real() + m(1, 0).real());
  d.c[1] = 0.5 * (m(1, 0).imag() - m(0, 1).imag());
  d.c[2] = 0.5 * (m(0, 0).real() - m(1, 1).real());
  return d;
}

inline Operator2 bloch_compose(const BlochDecomp& d) {
  Operator2 m = pauli_dot(d.c);
  m(0, 0) += d.c0;
  m(1, 1) += d.c0;
  return m;
}

// eigenvalues of a Hermitian M are c0 +- |c|
inline std::array<double, 2> hermitian_eigenvalues(const Operator2& m) {
  BlochDecomp d = bloch_decompose(m);
  double r = norm(d.c);
  return {d.c0 + r, d.c0 - r};
}

inline bool is_effect(const Operator2& m, double tol = tol_psd) {
  if (!is_hermitian(m)) return false;
  auto ev = hermitian_eigenvalues(m);
  return ev[1] >= -tol && ev[0] <= 1.0 + tol;
}

// ---- amplitude pairs ----

inline cplx inner(const Ket& a, const Ket& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}
inline double ket_norm(const Ket& a) { return std::sqrt(std::norm(a[0]) + std::norm(a[1])); }
inline Ket normalized(const Ket& a) {
  double n = ket_norm(a);
  return {a[0] / n, a[1] / n};
}
// canonical orthogonal partner: <perp(a)|a> = 0 identically
inline Ket perp(const Ket& a) { return {-std::conj(a[1]), std::conj(a[0])}; }

inline Ket operator*(const Operator2& m, const Ket& k) {
  return {m(0, 0) * k[0] + m(0, 1) * k[1], m(1, 0) * k[0] + m(1, 1) * k[1]};
}
// |a><b|
inline Operator2 outer(const Ket& a, const Ket& b) {
  Operator2 m;
  m(0, 0) = a[0] * std::conj(b[0]);
  m(0, 1) = a[0] * std::conj(b[1]);
  m(1, 0) = a[1] * std::conj(b[0]);
  m(1, 1) = a[1] * std::conj(b[1]);
  return m;
}

// phase convention: first component above threshold is made real non-negative
inline Ket canonical_phase(const Ket& a) {
  cplx lead = std::abs(a[0]) > 1e-14 ? a[0] : a[1];
  double r = std::abs(lead);
  if (r == 0.0) return a;
  cplx ph = std::conj(lead) / r;
  return {ph * a[0], ph * a[1]};
}

// ---- closed-form Hermitian eigensystem ----

struct EigenSystem {
  double lambda1 = 0.0;  // larger
  double lambda2 = 0.0;
  Ket v1{};
  Ket v2{};
};

// Eigenvectors via the Bloch axis n = c/|c|: the +|c| eigenvector of sigma.n
// is (1+nz, nx+i*ny) up to normalization; the branch with 1-nz is used when
// nz < 0 to stay well conditioned near the poles. Degenerate input (c = 0)
// returns the computational basis.
inline EigenSystem eigen_hermitian(const Operator2& m) {
  BlochDecomp d = bloch_decompose(m);  // throws for non-Hermitian input
  double r = norm(d.c);
  EigenSystem es;
  es.lambda1 = d.c0 + r;
  es.lambda2 = d.c0 - r;
  if (r < 1e-300) {
    es.v1 = {1.0, 0.0};
    es.v2 = {0.0, 1.0};
    return es;
  }
  Vec3 n = (1.0 / r) * d.c;
  Ket v;
  if (n[2] >= 0.0) {
    v = {cplx(1.0 + n[2], 0.0), cplx(n[0], n[1])};
  } else {
    v = {cplx(n[0], -n[1]), cplx(1.0 - n[2], 0.0)};
  }
  es.v1 = canonical_phase(normalized(v));
  es.v2 = canonical_phase(perp(es.v1));
  return es;
}

// ---- qubit states ----

class QubitState {
 public:
  static QubitState from_density(const Operator2& rho) {
    if (!is_hermitian(rho)) throw invalid_state_error("density operator must be Hermitian");
    if (std::abs(trace(rho).real() - 1.0) > 1e-9 || std::abs(trace(rho).imag()) > 1e-12)
      throw invalid_state_error("density operator must have unit trace");
    auto ev = hermitian_eigenvalues(rho);
    if (ev[1] < -tol_psd || ev[0] > 1.0 + tol_psd)
      throw invalid_state_error("density operator must be positive semidefinite");
    return QubitState(rho);
  }

  static QubitState from_amplitudes(const Ket& a) {
    double n = ket_norm(a);
    if (std::abs(n - 1.0) > 1e-6) throw invalid_state_error("amplitudes must be normalized");
    Ket u = normalized(a);
    return QubitState(outer(u, u));
  }

  static QubitState from_bloch(const Vec3& r) {
    if (norm(r) > 1.0 + tol_psd) throw invalid_state_error("Bloch vector must satisfy |r| <= 1");
    BlochDecomp d;
    d.c0 = 0.5;
    d.c = 0.5 * r;
    return QubitState(bloch_compose(d));
  }

  // polarization probe states; H=|0>, V=|1>, D=(|0>+|1>)/sqrt2, R=(|0>+i|1>)/sqrt2
  static QubitState H() { return from_bloch({0.0, 0.0, 1.0}); }
  static QubitState V() { return from_bloch({0.0, 0.0, -1.0}); }
  static QubitState D() { return from_bloch({1.0, 0.0, 0.0}); }
  static QubitState R() { return from_bloch({0.0, 1.0, 0.0}); }
  static QubitState L() { return from_bloch({0.0, -1.0, 0.0}); }
  static QubitState maximally_mixed() { return from_bloch({0.0, 0.0, 0.0}); }

  const Operator2& density() const { return rho_; }
  Vec3 bloch() const {
    BlochDecomp d = bloch_decompose(rho_);
    return {2.0 * d.c[0], 2.0 * d.c[1], 2.0 * d.c[2]};
  }
  bool is_pure() const { return std::abs(norm(bloch()) - 1.0) <= tol_psd; }

 private:
  explicit QubitState(const Operator2& rho) : rho_(rho) {}
  Operator2 rho_;
};

// Tr(M rho); the imaginary part vanishes for Hermitian M and is discarded
inline double expectation(const Operator2& m, const QubitState& rho) {
  if (!is_hermitian(m)) throw non_hermitian_error("expectation requires a Hermitian observable");
  return trace(m * rho.density()).real();
}

}  // namespace lsw
