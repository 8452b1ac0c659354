#pragma once

// Compiles a rank-1 four-outcome measurement into three sequential two-outcome
// stages plus a remainder. Stage t applies a rotation U_t and a partial
// projector pair P1 = chi |1><1|, P0 = |0><0| + (1-chi)|1><1|; a click stops
// the chain, a pass continues through the Kraus operator B_t = sqrt(P0) U_t.
//
// Writing C_t for the product of the earlier pass operators, the stage is
// aimed with u_t proportional to (C_t^+)^-1 |xi_t> and chi_t = lambda_t
// ||(C_t^+)^-1 |xi_t>||^2, which makes the conjugated click effect equal
// lambda_t |xi_t><xi_t| identically; the final pass-through effect is then
// the fourth element by completeness.

#include <array>
#include <cmath>
#include <string>

#include "lsw/algebra.hpp"
#include "lsw/errors.hpp"
#include "lsw/povm.hpp"

namespace lsw {

struct Rank1Effect {
  double lambda = 0.0;  // in (0, 1]
  Ket xi{};             // unit, canonical phase
};

inline Rank1Effect rank1_decompose(const Operator2& E) {
  if (!is_effect(E)) throw effect_invalid_error("rank-1 decomposition needs an effect");
  EigenSystem es = eigen_hermitian(E);
  if (std::abs(es.lambda2) > tol_rank)
    throw not_rank1_error("smaller eigenvalue " + std::to_string(es.lambda2) +
                          " exceeds the rank tolerance");
  if (es.lambda1 <= tol_rank) throw not_rank1_error("effect is numerically zero");
  return {es.lambda1, es.v1};
}

struct CascadeStage {
  Operator2 U;        // unitary, canonical global phase
  double chi = 0.0;   // click strength in (0, 1]
  Outcome label = Outcome::pp;
};

struct Cascade {
  std::array<CascadeStage, 3> stages{};  // click order
  Outcome remainder = Outcome::mm;       // pass-through after stage 3
  double eta = 0.0;
  int i = 0, j = 0;

  std::string pair_label() const {
    return (i > 0 && j > 0) ? std::to_string(i) + std::to_string(j) : std::string("ij");
  }
};

namespace detail {

inline Operator2 inverse(const Operator2& m) {
  cplx d = det(m);
  Operator2 inv;
  inv(0, 0) = m(1, 1) / d;
  inv(0, 1) = -m(0, 1) / d;
  inv(1, 0) = -m(1, 0) / d;
  inv(1, 1) = m(0, 0) / d;
  return inv;
}

inline double smallest_singular_value(const Operator2& m) {
  auto ev = hermitian_eigenvalues(adjoint(m) * m);
  return std::sqrt(std::max(ev[1], 0.0));
}

// rows <u_perp| and <u|, then a global phase making the first row's leading
// entry real non-negative
inline Operator2 rotation_onto(const Ket& u) {
  Ket up = perp(u);
  Operator2 U;
  U(0, 0) = std::conj(up[0]);
  U(0, 1) = std::conj(up[1]);
  U(1, 0) = std::conj(u[0]);
  U(1, 1) = std::conj(u[1]);
  cplx lead = std::abs(U(0, 0)) > 1e-14 ? U(0, 0) : U(0, 1);
  U = (std::conj(lead) / std::abs(lead)) * U;
  return U;
}

inline Operator2 pass_kraus(const CascadeStage& s) {
  Operator2 sq;  // sqrt(P0) = diag(1, sqrt(1 - chi))
  sq(0, 0) = 1.0;
  sq(1, 1) = std::sqrt(std::max(1.0 - s.chi, 0.0));
  return sq * s.U;
}

}  // namespace detail

inline constexpr std::array<Outcome, 3> default_stage_order{Outcome::pm, Outcome::mp,
                                                            Outcome::pp};

inline Cascade compile_cascade(const JointPovm& G,
                               const std::array<Outcome, 3>& order = default_stage_order) {
  bool seen[4] = {false, false, false, false};
  for (Outcome o : order) seen[static_cast<int>(o)] = true;
  int missing = -1, count = 0;
  for (int k = 0; k < 4; ++k) {
    if (seen[k]) ++count;
    else missing = k;
  }
  if (count != 3) throw domain_error("stage order must name three distinct outcomes");

  Cascade c;
  c.remainder = static_cast<Outcome>(missing);
  c.eta = G.eta;
  c.i = G.i;
  c.j = G.j;

  Operator2 C = identity();
  for (int t = 0; t < 3; ++t) {
    Rank1Effect target = rank1_decompose(G[order[t]]);
    if (detail::smallest_singular_value(C) < 1e-8)
      throw ill_conditioned_error("pass-operator product is numerically singular at stage " +
                                  std::to_string(t + 1));
    Ket w = detail::inverse(adjoint(C)) * target.xi;
    double w2 = std::norm(w[0]) + std::norm(w[1]);
    double chi = target.lambda * w2;
    if (chi > 1.0 + 1e-9)
      throw chi_out_of_range_error("stage " + std::to_string(t + 1) + " needs chi = " +
                                   std::to_string(chi) + " > 1; reorder the stages");
    chi = std::min(chi, 1.0);
    if (!(chi > 0.0)) throw chi_out_of_range_error("stage click strength must be positive");

    CascadeStage s;
    s.U = detail::rotation_onto(normalized(w));
    s.chi = chi;
    s.label = order[t];
    c.stages[t] = s;
    C = detail::pass_kraus(s) * C;
  }
  return c;
}

// conjugated click effects per outcome plus the remainder pass-through;
// indexed by Outcome, sums to the identity by Kraus completeness
inline std::array<Operator2, 4> cascade_effects(const Cascade& c) {
  std::array<Operator2, 4> eff{};
  Operator2 C = identity();
  for (const CascadeStage& s : c.stages) {
    Operator2 p1;  // chi |1><1|
    p1(1, 1) = s.chi;
    eff[static_cast<int>(s.label)] = adjoint(C) * adjoint(s.U) * p1 * s.U * C;
    C = detail::pass_kraus(s) * C;
  }
  eff[static_cast<int>(c.remainder)] = adjoint(C) * C;
  return eff;
}

// probabilities in element order ++, +-, -+, --
inline std::array<double, 4> outcome_probabilities(const Cascade& c, const QubitState& rho) {
  auto eff = cascade_effects(c);
  std::array<double, 4> p{};
  for (int k = 0; k < 4; ++k) p[k] = expectation(eff[k], rho);
  return p;
}

}  // namespace lsw
