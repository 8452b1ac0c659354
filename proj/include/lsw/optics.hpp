#pragma once

// Polarization-optics realization: Jones matrices for wave plates, the
// QWP-HWP-QWP sandwich solver, partially polarizing beam splitters, exact
// detector probabilities, and seeded Monte Carlo counting.
//
// Jones convention, fixed once for the whole artifact: a plate with fast axis
// at theta from horizontal is R(theta) diag(1, e^{i delta}) R(-theta) with
// delta = pi/2 for a quarter-wave plate and pi for a half-wave plate, R the
// real rotation [[c,-s],[s,c]], |H> = (1,0), |V> = (0,1). Published setting
// angles from other conventions are diagnostic only; circuits are accepted at
// the channel level.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "lsw/algebra.hpp"
#include "lsw/cascade.hpp"
#include "lsw/errors.hpp"
#include "lsw/povm.hpp"
#include "lsw/sampling.hpp"

namespace lsw {

inline constexpr double pi = 3.14159265358979323846;

inline Operator2 rotation_matrix(double theta_rad) {
  Operator2 r;
  r(0, 0) = std::cos(theta_rad);
  r(0, 1) = -std::sin(theta_rad);
  r(1, 0) = std::sin(theta_rad);
  r(1, 1) = std::cos(theta_rad);
  return r;
}

inline Operator2 wave_plate(double theta_deg, double delta) {
  double th = theta_deg * pi / 180.0;
  Operator2 d;
  d(0, 0) = 1.0;
  d(1, 1) = std::exp(cplx(0.0, delta));
  return rotation_matrix(th) * d * rotation_matrix(-th);
}

inline Operator2 qwp(double theta_deg) { return wave_plate(theta_deg, pi / 2.0); }
inline Operator2 hwp(double theta_deg) { return wave_plate(theta_deg, pi); }

struct WavePlateTriple {
  // fast-axis angles in degrees; the beam meets q1 first
  double theta_q1 = 0.0;
  double theta_h = 0.0;
  double theta_q2 = 0.0;
};

inline Operator2 compose_triple(const WavePlateTriple& w) {
  return qwp(w.theta_q2) * hwp(w.theta_h) * qwp(w.theta_q1);
}

// distance measures ignoring global phase; the composed triple always has
// unit determinant while targets may carry a determinant phase
inline double phase_distance(const Operator2& v, const Operator2& u) {
  return 1.0 - 0.5 * std::abs(trace(adjoint(v) * u));
}
inline double aligned_distance(const Operator2& v, const Operator2& u) {
  cplx t = trace(adjoint(u) * v);
  cplx ph = std::abs(t) > 0.0 ? std::conj(t) / std::abs(t) : cplx(1.0, 0.0);
  return distance(ph * v, u);
}

namespace detail {

inline double wrap_angle(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a <= -180.0) a += 360.0;
  if (a > 180.0) a -= 360.0;
  return a;
}

// entrywise residual of the phase-aligned triple against the target
inline void triple_residual(const std::array<double, 3>& x, const Operator2& u, double* r) {
  Operator2 v = compose_triple({x[0], x[1], x[2]});
  cplx t = trace(adjoint(u) * v);
  cplx ph = std::abs(t) > 0.0 ? std::conj(t) / std::abs(t) : cplx(1.0, 0.0);
  Operator2 d = ph * v - u;
  for (int k = 0; k < 4; ++k) {
    r[2 * k] = d.e[k].real();
    r[2 * k + 1] = d.e[k].imag();
  }
}

inline bool solve3(double a[3][3], const double b[3], double out[3]) {
  double m[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = a[i][j];
    m[i][3] = b[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int i = col + 1; i < 3; ++i)
      if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
    if (std::abs(m[piv][col]) < 1e-300) return false;
    if (piv != col)
      for (int j = 0; j < 4; ++j) std::swap(m[piv][j], m[col][j]);
    for (int i = 0; i < 3; ++i) {
      if (i == col) continue;
      double f = m[i][col] / m[col][col];
      for (int j = col; j < 4; ++j) m[i][j] -= f * m[col][j];
    }
  }
  for (int i = 0; i < 3; ++i) out[i] = m[i][3] / m[i][i];
  return true;
}

// damped Gauss-Newton from one grid seed; returns the aligned distance reached
inline double refine_triple(std::array<double, 3>& x, const Operator2& u) {
  const double h = 1e-4;  // degrees; central differences
  double r[8];
  triple_residual(x, u, r);
  double cost = 0.0;
  for (double v : r) cost += v * v;
  double mu = 1e-6;
  for (int it = 0; it < 80; ++it) {
    double jac[8][3];
    for (int p = 0; p < 3; ++p) {
      std::array<double, 3> xp = x, xm = x;
      xp[p] += h;
      xm[p] -= h;
      double rp[8], rm[8];
      triple_residual(xp, u, rp);
      triple_residual(xm, u, rm);
      for (int k = 0; k < 8; ++k) jac[k][p] = (rp[k] - rm[k]) / (2.0 * h);
    }
    double jtj[3][3] = {}, jtr[3] = {};
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q)
        for (int k = 0; k < 8; ++k) jtj[p][q] += jac[k][p] * jac[k][q];
      for (int k = 0; k < 8; ++k) jtr[p] += jac[k][p] * r[k];
    }
    bool stepped = false;
    for (int damp = 0; damp < 12; ++damp) {
      double a[3][3];
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) a[p][q] = jtj[p][q] + (p == q ? mu : 0.0);
      double nb[3] = {-jtr[0], -jtr[1], -jtr[2]};
      double step[3];
      if (solve3(a, nb, step)) {
        std::array<double, 3> xn = {x[0] + step[0], x[1] + step[1], x[2] + step[2]};
        double rn[8];
        triple_residual(xn, u, rn);
        double cn = 0.0;
        for (double v : rn) cn += v * v;
        if (cn < cost) {
          x = xn;
          std::copy(rn, rn + 8, r);
          cost = cn;
          mu = std::max(mu / 3.0, 1e-12);
          stepped = true;
          break;
        }
      }
      mu *= 10.0;
    }
    if (cost < 1e-26 || !stepped) break;
  }
  return aligned_distance(compose_triple({x[0], x[1], x[2]}), u);
}

}  // namespace detail

// Bounded search: coarse grid over the three fast-axis angles ranked by the
// phase-invariant distance, then damped Gauss-Newton from the best seeds.
// The sandwich reaches all of SU(2), so a root always exists; targets with a
// determinant phase are matched up to that global phase.
inline WavePlateTriple solve_sandwich(const Operator2& u) {
  if (!is_unitary(u)) throw non_unitary_error("sandwich target must be unitary");

  auto attempt = [&u](int grid_n, WavePlateTriple& out) {
    struct Seed {
      double f;
      std::array<double, 3> x;
    };
    std::vector<Seed> seeds;
    seeds.reserve(static_cast<size_t>(grid_n) * grid_n * grid_n);
    const double step = 180.0 / grid_n;
    for (int a = 0; a < grid_n; ++a)
      for (int b = 0; b < grid_n; ++b)
        for (int c = 0; c < grid_n; ++c) {
          std::array<double, 3> x{-90.0 + step * a, -90.0 + step * b, -90.0 + step * c};
          seeds.push_back({phase_distance(compose_triple({x[0], x[1], x[2]}), u), x});
        }
    std::sort(seeds.begin(), seeds.end(), [](const Seed& l, const Seed& r) { return l.f < r.f; });

    double best = 1e300;
    std::array<double, 3> best_x{};
    const size_t tries = std::min<size_t>(seeds.size(), 10);
    for (size_t k = 0; k < tries; ++k) {
      std::array<double, 3> x = seeds[k].x;
      double d = detail::refine_triple(x, u);
      if (d < best) {
        best = d;
        best_x = x;
      }
      if (best <= 1e-11) break;
    }
    out = {detail::wrap_angle(best_x[0]), detail::wrap_angle(best_x[1]),
           detail::wrap_angle(best_x[2])};
    return best;
  };

  WavePlateTriple w;
  if (attempt(12, w) <= 1e-9) return w;
  if (attempt(24, w) <= 1e-8) return w;
  throw solver_error("wave-plate decomposition did not converge");
}

struct PpbsSpec {
  double t_h = 1.0;  // the hardware transmits horizontal fully
  double t_v = 0.0;  // vertical intensity transmission

  Operator2 transmit() const {
    Operator2 k;
    k(0, 0) = 1.0;
    k(1, 1) = std::sqrt(t_v);
    return k;
  }
  Operator2 reflect() const {
    Operator2 k;
    k(1, 1) = std::sqrt(1.0 - t_v);
    return k;
  }
};

struct CircuitStage {
  WavePlateTriple plates;
  PpbsSpec ppbs;
  Outcome label = Outcome::pp;
};

struct OpticalCircuit {
  std::array<CircuitStage, 3> stages{};  // reflected arm of stage t clicks stages[t].label
  Outcome remainder = Outcome::mm;       // transmitted arm of stage 3
  double eta = 0.0;
  int i = 0, j = 0;

  std::string pair_label() const {
    return (i > 0 && j > 0) ? std::to_string(i) + std::to_string(j) : std::string("ij");
  }
};

// stage t carries t_v = 1 - chi_t; a fully reflecting vertical arm is a plain
// polarizing splitter, which is what chi = 1 degenerates to
inline OpticalCircuit build_circuit(const Cascade& c) {
  OpticalCircuit circ;
  circ.remainder = c.remainder;
  circ.eta = c.eta;
  circ.i = c.i;
  circ.j = c.j;
  for (int t = 0; t < 3; ++t) {
    CircuitStage s;
    s.plates = solve_sandwich(c.stages[t].U);
    s.ppbs.t_v = std::clamp(1.0 - c.stages[t].chi, 0.0, 1.0);
    s.label = c.stages[t].label;
    circ.stages[t] = s;
  }
  return circ;
}

// detector order: reflected arms of stages 1..3, then the transmitted arm
inline std::array<double, 4> circuit_probabilities(const OpticalCircuit& circ,
                                                   const QubitState& rho) {
  std::array<double, 4> p{};
  Operator2 cur = rho.density();
  for (int t = 0; t < 3; ++t) {
    Operator2 w = compose_triple(circ.stages[t].plates);
    Operator2 after = w * cur * adjoint(w);
    Operator2 kr = circ.stages[t].ppbs.reflect();
    Operator2 kt = circ.stages[t].ppbs.transmit();
    p[t] = trace(kr * after * adjoint(kr)).real();
    cur = kt * after * adjoint(kt);
  }
  p[3] = trace(cur).real();
  return p;
}

// the same four probabilities rearranged by element index ++, +-, -+, --
inline std::array<double, 4> circuit_outcome_probabilities(const OpticalCircuit& circ,
                                                           const QubitState& rho) {
  auto det = circuit_probabilities(circ, rho);
  std::array<double, 4> p{};
  for (int t = 0; t < 3; ++t) p[static_cast<int>(circ.stages[t].label)] = det[t];
  p[static_cast<int>(circ.remainder)] = det[3];
  return p;
}

struct CountRecord {
  std::uint64_t shots = 0;
  std::array<std::uint64_t, 4> counts{};  // element order ++, +-, -+, --
  std::array<double, 4> probabilities{};  // counts / shots
  std::array<double, 4> stderrs{};        // sqrt(p(1-p)/shots) on the empirical p
  std::uint64_t seed = 0;
};

// Multinomial photon counting over the exact probabilities. Shard k draws
// from a generator seeded with seed xor k, so a fixed (seed, shots, shards)
// triple reproduces identical counts regardless of thread scheduling; counts
// merge by summation.
inline CountRecord monte_carlo(const OpticalCircuit& circ, const QubitState& rho,
                               std::uint64_t shots, std::uint64_t seed, int shards = 1) {
  if (shots == 0) throw domain_error("counting needs at least one shot");
  if (shards < 1) throw domain_error("shard count must be positive");

  auto p = circuit_outcome_probabilities(circ, rho);
  double cdf[4];
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    acc += p[k];
    cdf[k] = acc;
  }
  cdf[3] = 1.0;  // guard against rounding in the tail

  auto run_shard = [&cdf](std::uint64_t n, std::uint64_t shard_seed,
                          std::array<std::uint64_t, 4>& counts) {
    Xoshiro256ss rng(shard_seed);
    for (std::uint64_t s = 0; s < n; ++s) {
      double u = rng.uniform();
      int k = 0;
      while (k < 3 && u >= cdf[k]) ++k;
      ++counts[k];
    }
  };

  CountRecord rec;
  rec.shots = shots;
  rec.seed = seed;
  if (shards == 1) {
    run_shard(shots, seed, rec.counts);
  } else {
    std::vector<std::array<std::uint64_t, 4>> parts(static_cast<size_t>(shards),
                                                    std::array<std::uint64_t, 4>{});
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(shards));
    std::uint64_t base = shots / static_cast<std::uint64_t>(shards);
    std::uint64_t extra = shots % static_cast<std::uint64_t>(shards);
    for (int k = 0; k < shards; ++k) {
      std::uint64_t n = base + (static_cast<std::uint64_t>(k) < extra ? 1 : 0);
      pool.emplace_back(run_shard, n, seed ^ static_cast<std::uint64_t>(k),
                        std::ref(parts[static_cast<size_t>(k)]));
    }
    for (std::thread& t : pool) t.join();
    for (const auto& part : parts)
      for (int k = 0; k < 4; ++k) rec.counts[k] += part[k];
  }

  for (int k = 0; k < 4; ++k) {
    double q = static_cast<double>(rec.counts[k]) / static_cast<double>(shots);
    rec.probabilities[k] = q;
    rec.stderrs[k] = std::sqrt(q * (1.0 - q) / static_cast<double>(shots));
  }
  return rec;
}

}  // namespace lsw
