#pragma once

// Noisy binary qubit observables E+- = (1/2)(I +- eta sigma.n), the trine
// axis triple, and the four-outcome parent measurements G_ij whose marginals
// reproduce the pairs. The (alpha, a) parameter choice makes every element
// rank-1 across the admissible sharpness window; the radicand of |a| going
// negative is exactly the loss of pairwise compatibility.

#include <array>
#include <cmath>
#include <string>

#include "lsw/algebra.hpp"
#include "lsw/errors.hpp"

namespace lsw {

enum class Outcome { pp = 0, pm = 1, mp = 2, mm = 3 };

inline constexpr std::array<const char*, 4> outcome_labels{"++", "+-", "-+", "--"};
inline const char* label(Outcome o) { return outcome_labels[static_cast<int>(o)]; }

// marginal residuals must vanish at this scale for a valid parent measurement
inline constexpr double tol_marginal = 1e-12;

struct NoisyObservable {
  double eta = 0.0;
  Vec3 axis{0.0, 0.0, 1.0};

  // E+ = (1/2)I + (eta/2) sigma.n; eigenvalues (1 +- eta)/2
  Operator2 plus() const {
    BlochDecomp d;
    d.c0 = 0.5;
    d.c = (0.5 * eta) * axis;
    return bloch_compose(d);
  }
  // exact complement, never reconstructed from the formula
  Operator2 minus() const { return identity() - plus(); }
};

inline NoisyObservable noisy_observable(double eta, const Vec3& axis) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw domain_error("sharpness eta must lie in [0, 1]");
  if (std::abs(norm(axis) - 1.0) > 1e-9) throw domain_error("axis must be a unit vector");
  return {eta, axis};
}

// coplanar unit triple at mutual 120 degrees in the z-x plane; pairwise dots -1/2
inline std::array<Vec3, 3> trine_axes() {
  const double s = std::sqrt(3.0) / 2.0;
  return {Vec3{0.0, 0.0, 1.0}, Vec3{s, 0.0, -0.5}, Vec3{-s, 0.0, -0.5}};
}

struct JointParams {
  double alpha = 0.0;
  Vec3 a{0.0, 0.0, 0.0};
};

// alpha = 1 + eta^2 n_i.n_j; a = (0, sqrt(1 + eta^4 (n_i.n_j)^2 - 2 eta^2), 0).
// The a direction is orthogonal to the axis plane, which is why the axes are
// required to sit in the z-x plane; out-of-plane inputs are refused rather
// than silently generalized.
inline JointParams joint_params(double eta, const Vec3& ni, const Vec3& nj) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw domain_error("sharpness eta must lie in [0, 1]");
  for (const Vec3& n : {ni, nj}) {
    if (std::abs(norm(n) - 1.0) > 1e-9) throw domain_error("axes must be unit vectors");
    if (std::abs(n[1]) > 1e-9) throw domain_error("axes must lie in the z-x plane");
  }
  const double d = dot(ni, nj);
  double radicand = 1.0 + eta * eta * eta * eta * d * d - 2.0 * eta * eta;
  if (radicand < -1e-12)
    throw negative_radicand_error("no joint measurement at this sharpness: radicand " +
                                  std::to_string(radicand));
  if (radicand < 0.0) radicand = 0.0;  // boundary eta is admissible, |a| = 0 there
  JointParams p;
  p.alpha = 1.0 + eta * eta * d;
  p.a = {0.0, std::sqrt(radicand), 0.0};
  return p;
}

struct JointPovm {
  double eta = 0.0;
  Vec3 ni{}, nj{};
  int i = 0, j = 0;  // 1-based axis tags for labeling; 0 when ad hoc
  double alpha = 0.0;
  Vec3 a{};
  std::array<Operator2, 4> g{};

  const Operator2& operator[](Outcome o) const { return g[static_cast<int>(o)]; }
  std::string pair_label() const {
    return (i > 0 && j > 0) ? std::to_string(i) + std::to_string(j) : std::string("ij");
  }
};

// General four-outcome form with caller-supplied (alpha, a): an escape hatch
// for configurations where no canonical parameter choice exists. Validates
// that every element is an effect but does not require rank-1.
inline JointPovm joint_povm_with_params(double eta, const Vec3& ni, const Vec3& nj, double alpha,
                                        const Vec3& a, int i = 0, int j = 0) {
  JointPovm G;
  G.eta = eta;
  G.ni = ni;
  G.nj = nj;
  G.i = i;
  G.j = j;
  G.alpha = alpha;
  G.a = a;

  auto elem = [](double c0, const Vec3& c) {
    BlochDecomp d;
    d.c0 = c0;
    d.c = c;
    return bloch_compose(d);
  };
  const Vec3 sum = eta * (ni + nj);
  const Vec3 dif = eta * (ni - nj);
  G.g[0] = elem(0.25 * alpha, 0.25 * (sum - a));
  G.g[1] = elem(0.5 - 0.25 * alpha, 0.25 * (dif + a));
  G.g[2] = elem(0.5 - 0.25 * alpha, 0.25 * (-dif + a));
  G.g[3] = elem(0.25 * alpha, -0.25 * (sum + a));

  for (int k = 0; k < 4; ++k) {
    auto ev = hermitian_eigenvalues(G.g[k]);
    if (ev[1] < -tol_psd || ev[0] > 1.0 + tol_psd)
      throw effect_invalid_error(std::string("element ") + outcome_labels[k] +
                                 " is not an effect");
  }
  return G;
}

inline JointPovm joint_povm(double eta, const Vec3& ni, const Vec3& nj, int i = 0, int j = 0) {
  JointParams p = joint_params(eta, ni, nj);
  return joint_povm_with_params(eta, ni, nj, p.alpha, p.a, i, j);
}

// pair order (12), (23), (13)
inline std::array<JointPovm, 3> trine_joint_povms(double eta) {
  auto n = trine_axes();
  return {joint_povm(eta, n[0], n[1], 1, 2), joint_povm(eta, n[1], n[2], 2, 3),
          joint_povm(eta, n[0], n[2], 1, 3)};
}

struct MarginalReport {
  // residuals against E+_i, E-_i, E+_j, E-_j in that order
  std::array<double, 4> residual{};
  bool pass = false;
};

inline MarginalReport check_marginals(const JointPovm& G) {
  NoisyObservable mi{G.eta, G.ni};
  NoisyObservable mj{G.eta, G.nj};
  MarginalReport r;
  r.residual[0] = distance(G[Outcome::pp] + G[Outcome::pm], mi.plus());
  r.residual[1] = distance(G[Outcome::mp] + G[Outcome::mm], mi.minus());
  r.residual[2] = distance(G[Outcome::pp] + G[Outcome::mp], mj.plus());
  r.residual[3] = distance(G[Outcome::pm] + G[Outcome::mm], mj.minus());
  r.pass = true;
  for (double x : r.residual) r.pass = r.pass && x <= tol_marginal;
  return r;
}

struct ConditionReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

// State-dependent violation needs sum_ij (alpha_ij - a_ij . r) < 2 eta; this
// is necessary, not sufficient.
inline ConditionReport necessary_condition(const std::array<JointPovm, 3>& Gs,
                                           const QubitState& rho) {
  for (const JointPovm& G : Gs)
    if (std::abs(G.eta - Gs[0].eta) > 1e-12)
      throw mismatched_eta_error("pairs must share one sharpness");
  const Vec3 r = rho.bloch();
  ConditionReport c;
  for (const JointPovm& G : Gs) c.lhs += G.alpha - dot(G.a, r);
  c.rhs = 2.0 * Gs[0].eta;
  c.satisfied = c.lhs < c.rhs;
  return c;
}

}  // namespace lsw
