#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lsw/inequality.hpp"
#include "oracle.hpp"

using namespace lsw;

TEST_CASE("Bounds: noise-dependent threshold and the sharp-measurement constant", "[inequality]") {
  CHECK(ks_bound == 2.0 / 3.0);
  CHECK(std::abs(lsw_bound(0.67) - 0.776666666666667) <= 1e-12);
  CHECK(lsw_bound(0.0) == 1.0);
  CHECK(std::abs(lsw_bound(1.0) - ks_bound) <= 1e-15);
  // any unsharpness strictly relaxes the constant bound
  for (double eta : {0.1, 0.5, 0.9}) CHECK(lsw_bound(eta) > ks_bound);
  CHECK(std::abs(eta_max_trine() - 0.7320508075688772) <= 1e-15);
}

TEST_CASE("The optimal state is the circular one and is built exactly", "[inequality]") {
  QubitState phi0 = optimal_state();
  Vec3 r = phi0.bloch();
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 1.0);
  CHECK(r[2] == 0.0);
  CHECK(phi0.is_pure());
}

TEST_CASE("Anticorrelation at the working sharpness matches the frozen value", "[inequality]") {
  auto Gs = trine_joint_povms(0.67);
  QubitState phi0 = optimal_state();
  for (const JointPovm& G : Gs) {
    double p = anticorr_probability(G, phi0);
    CHECK(std::abs(p - 0.807531043493282) <= 1e-12);
    CHECK(std::abs(p - 0.8075) <= 5e-4);
  }
  // on an equatorial state only the trace term survives
  CHECK(std::abs(anticorr_probability(Gs[0], QubitState::H()) - 0.612225) <= 1e-12);
}

TEST_CASE("The evaluation report flags the violation at the working point", "[inequality]") {
  auto Gs = trine_joint_povms(0.67);
  LswReport rep = r3(Gs, optimal_state());
  CHECK(rep.eta == 0.67);
  CHECK(std::abs(rep.r3 - 0.807531043493282) <= 1e-12);
  CHECK(std::abs(rep.lsw_bound - 0.776666666666667) <= 1e-12);
  CHECK(std::abs(rep.margin - 0.0308643768266159) <= 1e-12);
  CHECK(rep.ks_bound == 2.0 / 3.0);
  CHECK(rep.violated);
  for (double a : rep.anticorr) CHECK(std::abs(a - rep.r3) <= 1e-15);

  LswReport flat = r3(Gs, QubitState::H());
  CHECK(std::abs(flat.r3 - 0.612225) <= 1e-12);
  CHECK_FALSE(flat.violated);

  std::array<JointPovm, 3> mixed{Gs[0], Gs[1], trine_joint_povms(0.6)[2]};
  CHECK_THROWS_AS(r3(mixed, optimal_state()), mismatched_eta_error);
}

TEST_CASE("Pair order does not change the mean anticorrelation", "[inequality]") {
  auto Gs = trine_joint_povms(0.69);
  QubitState phi0 = optimal_state();
  double base = r3(Gs, phi0).r3;
  std::array<JointPovm, 3> perm{Gs[2], Gs[0], Gs[1]};
  CHECK(std::abs(r3(perm, phi0).r3 - base) <= 1e-15);
}

TEST_CASE("The circular state beats the named reference states", "[inequality]") {
  auto Gs = trine_joint_povms(0.67);
  double best = r3(Gs, optimal_state()).r3;
  for (const QubitState& rho : {QubitState::H(), QubitState::V(), QubitState::D(),
                                QubitState::L(), QubitState::maximally_mixed()}) {
    CHECK(best >= r3(Gs, rho).r3);
  }
  // the circular state's antipode is the worst pure equator-orthogonal choice
  CHECK(std::abs(r3(Gs, QubitState::L()).r3 - (2.0 * 0.612225 - 0.807531043493282)) <= 1e-12);
}

TEST_CASE("At zero sharpness the anticorrelation tracks the circular component", "[inequality]") {
  auto Gs = trine_joint_povms(0.0);
  for (const JointPovm& G : Gs) {
    CHECK(std::abs(anticorr_probability(G, QubitState::H()) - 0.5) <= 1e-15);
    CHECK(std::abs(anticorr_probability(G, QubitState::V()) - 0.5) <= 1e-15);
    CHECK(std::abs(anticorr_probability(G, QubitState::D()) - 0.5) <= 1e-15);
    CHECK(std::abs(anticorr_probability(G, QubitState::R()) - 1.0) <= 1e-15);
    CHECK(std::abs(anticorr_probability(G, QubitState::L()) - 0.0) <= 1e-15);
  }
  // never a violation without sharpness
  CHECK_FALSE(r3(Gs, optimal_state()).violated);
  CHECK(std::abs(r3(Gs, optimal_state()).r3 - 1.0) <= 1e-15);
}

TEST_CASE("The scalar shortcut reproduces the trace evaluation across the window",
          "[inequality]") {
  QubitState phi0 = optimal_state();
  for (int k = 0; k <= 50; ++k) {
    double eta = eta_max_trine() * k / 50.0;
    CHECK(std::abs(r3_closed_form(eta) - r3(trine_joint_povms(eta), phi0).r3) <= 1e-12);
  }
}

TEST_CASE("Margins near the threshold match the frozen values", "[inequality]") {
  QubitState phi0 = optimal_state();
  auto margin_at = [&](double eta) { return r3(trine_joint_povms(eta), phi0).margin; };
  CHECK(std::abs(margin_at(0.67) - 0.0308643768266159) <= 1e-12);
  CHECK(std::abs(margin_at(0.68) - 0.0216081286881411) <= 1e-12);
  CHECK(std::abs(margin_at(0.69) - 0.0106323965664938) <= 1e-12);
  CHECK(std::abs(margin_at(0.70) + 0.00272321506851025) <= 1e-12);
  CHECK(std::abs(margin_at(0.71) + 0.0196975318523468) <= 1e-12);
  // limit point just above the joint-measurability threshold
  CHECK(std::abs(r3(trine_joint_povms(2.0 / 3.0 + 1e-9), phi0).r3 - 0.811419514157688) <= 1e-12);
  CHECK(std::abs(r3(trine_joint_povms(2.0 / 3.0 + 1e-9), phi0).r3 - 0.8114) <= 1e-3);
}

TEST_CASE("The sweep covers the window on the stated grid", "[inequality]") {
  auto rows = sweep_eta(2.0 / 3.0, eta_max_trine(), 256);
  REQUIRE(rows.size() == 256);
  double lo = 2.0 / 3.0, hi = eta_max_trine();
  for (size_t k = 0; k < rows.size(); ++k) {
    double expected = lo + (hi - lo) * static_cast<double>(k + 1) / 256.0;
    CHECK(std::abs(rows[k].eta - expected) <= 1e-15);
    CHECK(std::abs(rows[k].margin - (rows[k].r3 - rows[k].lsw_bound)) <= 1e-15);
    CHECK(std::abs(rows[k].r3 - r3_closed_form(rows[k].eta)) <= 1e-12);
  }
  CHECK(rows.front().margin > 0.0);
  CHECK(rows.back().margin < 0.0);
  // the sign change brackets the root
  size_t flip = 0;
  for (size_t k = 1; k < rows.size(); ++k)
    if (rows[k - 1].margin > 0.0 && rows[k].margin <= 0.0) flip = k;
  REQUIRE(flip > 0);
  CHECK(rows[flip - 1].eta < 0.698129860536028);
  CHECK(rows[flip].eta > 0.698129860536028);

  CHECK_THROWS_AS(sweep_eta(-0.1, 0.7, 10), domain_error);
  CHECK_THROWS_AS(sweep_eta(0.7, 0.7, 10), domain_error);
  CHECK_THROWS_AS(sweep_eta(0.6, 0.8, 10), domain_error);
  CHECK_THROWS_AS(sweep_eta(0.6, 0.7, 0), domain_error);
}

TEST_CASE("Bisection pins the violation threshold", "[inequality]") {
  double root = margin_root(0.69, 0.70);
  CHECK(std::abs(root - 0.698129860536028) <= 1e-9);
  CHECK(std::abs(root - 0.6981) <= 5e-5);
  // no sign change in the bracket
  CHECK_THROWS_AS(margin_root(0.67, 0.68), domain_error);
}

TEST_CASE("Violation significance in published units", "[inequality]") {
  SignificanceReport s = significance(0.8125, 0.0056, 0.7767);
  CHECK(std::abs(s.n_sigma - 6.392857142857143) <= 1e-12);
  CHECK(std::abs(s.n_sigma - 6.4) <= 0.05);
  CHECK(s.measured == 0.8125);
  CHECK(s.sigma == 0.0056);
  CHECK(s.bound == 0.7767);

  SignificanceReport limit = significance(0.8114, 0.0056, 0.7778);
  CHECK(std::abs(limit.n_sigma - 6.0) <= 1e-10);

  CHECK(significance(0.7767, 0.0056, 0.7767).n_sigma == 0.0);
  CHECK_THROWS_AS(significance(0.8, 0.0, 0.77), domain_error);
  CHECK_THROWS_AS(significance(0.8, -0.1, 0.77), domain_error);
}
