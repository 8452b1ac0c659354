#pragma once

// Average anticorrelation R3, the generalized-noncontextual bound 1 - eta/3,
// the traditional deterministic-assignment bound 2/3, sweeps over the
// sharpness window, and plain z-score significance.

#include <array>
#include <cmath>
#include <vector>

#include "lsw/algebra.hpp"
#include "lsw/errors.hpp"
#include "lsw/povm.hpp"

namespace lsw {

inline constexpr double ks_bound = 2.0 / 3.0;
inline double lsw_bound(double eta) { return 1.0 - eta / 3.0; }

// upper edge of the pairwise-compatibility window for trine axes
inline double eta_max_trine() { return std::sqrt(3.0) - 1.0; }

inline double anticorr_probability(const JointPovm& G, const QubitState& rho) {
  return expectation(G[Outcome::pm] + G[Outcome::mp], rho);
}

struct LswReport {
  double eta = 0.0;
  std::array<double, 3> anticorr{};  // pairs (12), (23), (13)
  double r3 = 0.0;                   // mean of the three
  double lsw_bound = 0.0;            // 1 - eta/3
  double ks_bound = lsw::ks_bound;
  double margin = 0.0;               // r3 - lsw_bound
  bool violated = false;             // margin > 0
};

inline LswReport r3(const std::array<JointPovm, 3>& Gs, const QubitState& rho) {
  for (const JointPovm& G : Gs)
    if (std::abs(G.eta - Gs[0].eta) > 1e-12)
      throw mismatched_eta_error("pairs must share one sharpness");
  LswReport rep;
  rep.eta = Gs[0].eta;
  for (int k = 0; k < 3; ++k) rep.anticorr[k] = anticorr_probability(Gs[k], rho);
  rep.r3 = (rep.anticorr[0] + rep.anticorr[1] + rep.anticorr[2]) / 3.0;
  rep.lsw_bound = lsw_bound(rep.eta);
  rep.margin = rep.r3 - rep.lsw_bound;
  rep.violated = rep.margin > 0.0;
  return rep;
}

// (|0> + i|1>)/sqrt2, the state the trine construction is anticorrelated
// hardest on; built from the density operator so bloch() is exactly (0,1,0)
inline QubitState optimal_state() {
  Operator2 rho;
  rho(0, 0) = 0.5;
  rho(0, 1) = cplx(0.0, -0.5);
  rho(1, 0) = cplx(0.0, 0.5);
  rho(1, 1) = 0.5;
  return QubitState::from_density(rho);
}

// scalar shortcut valid for trine axes + optimal state: the eta(n_i +- n_j)
// Bloch components are orthogonal to y and drop out of the anticorrelation
inline double r3_closed_form(double eta) {
  JointParams p = joint_params(eta, trine_axes()[0], trine_axes()[1]);
  return 1.0 - 0.5 * p.alpha + 0.5 * norm(p.a);
}

struct SweepRow {
  double eta = 0.0;
  double r3 = 0.0;
  double lsw_bound = 0.0;
  double margin = 0.0;
};

// grid rows at eta_min + k (eta_max - eta_min)/steps, k = 1..steps: the lower
// edge is excluded (the window is open there), the upper edge included
inline std::vector<SweepRow> sweep_eta(double eta_min, double eta_max, int steps) {
  if (!(eta_min >= 0.0 && eta_min < eta_max && eta_max <= eta_max_trine() + 1e-12))
    throw domain_error("sweep range must satisfy 0 <= min < max <= sqrt(3)-1");
  if (steps < 1) throw domain_error("sweep needs at least one step");
  QubitState phi0 = optimal_state();
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<size_t>(steps));
  for (int k = 1; k <= steps; ++k) {
    double eta = eta_min + (eta_max - eta_min) * static_cast<double>(k) / steps;
    if (eta > eta_max_trine()) eta = eta_max_trine();
    LswReport rep = r3(trine_joint_povms(eta), phi0);
    rows.push_back({eta, rep.r3, rep.lsw_bound, rep.margin});
  }
  return rows;
}

// bisection on margin(eta) for trine + optimal state; needs a sign change
inline double margin_root(double lo, double hi) {
  auto margin = [](double eta) { return r3_closed_form(eta) - lsw_bound(eta); };
  double flo = margin(lo), fhi = margin(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw domain_error("margin does not change sign in bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = margin(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct SignificanceReport {
  double measured = 0.0;
  double sigma = 0.0;
  double bound = 0.0;
  double n_sigma = 0.0;  // (measured - bound) / sigma
};

inline SignificanceReport significance(double measured, double sigma, double bound) {
  if (!(sigma > 0.0)) throw domain_error("significance needs sigma > 0");
  return {measured, sigma, bound, (measured - bound) / sigma};
}

}  // namespace lsw
