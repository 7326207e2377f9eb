#include <doctest.h>

#include <cmath>
#include <complex>

#include "cxyz/couplings.hpp"
#include "cxyz/units.hpp"

using namespace cxyz;
using couplings::CavityParams;
using couplings::CouplingOptions;
using couplings::ToneSet;

namespace {

// published cavity numbers
CavityParams reference_cavity() {
  return CavityParams{hz_to_angular(0.48e6), hz_to_angular(56e3),
                      hz_to_angular(500e6), hz_to_angular(500e3), 700};
}

ToneSet tones_at(double detuning, double a1, double a2) {
  ToneSet t;
  t.alpha1 = a1;
  t.alpha2 = a2;
  t.delta_c1 = detuning;
  t.delta_c2 = detuning;
  return t;
}

const double kTactRatio = (std::sqrt(2.0) - 1.0) / (std::sqrt(2.0) + 1.0);

}  // namespace

TEST_CASE("classical field: on-resonance and off-resonance values") {
  const double kappa = 2.0;
  const auto on_res = couplings::classical_field(1.0, 0.0, kappa);
  CHECK(std::abs(std::abs(on_res) - 2.0 / kappa) < 1e-14);
  CHECK(std::arg(on_res) == doctest::Approx(-0.5 * 3.14159265358979));

  CHECK(std::abs(couplings::classical_field(0.0, 1.0, kappa)) == 0.0);

  // direct complex-arithmetic cross-check at delta = kappa
  const auto val = couplings::classical_field(1.0, kappa, kappa);
  const std::complex<double> oracle =
      std::complex<double>(kappa, -0.5 * kappa) /
      (kappa * kappa + 0.25 * kappa * kappa);
  CHECK(std::abs(val - oracle) < 1e-15);

  CHECK_THROWS_AS(couplings::classical_field(1.0, 0.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("coupling strengths: single-tone limit") {
  const auto cav = reference_cavity();
  const auto tones = tones_at(hz_to_angular(-200e3), 1.3, 0.0);
  const auto cs = couplings::coupling_strengths(cav, tones);

  CHECK(std::abs(cs.chi_p) == 0.0);
  CHECK(cs.gamma_sr > 0.0);

  const double v = cav.g0 * cav.g0 / (4.0 * cav.delta_a);
  const double expected = v * v * 1.3 * 1.3 * tones.delta_c1 /
                          (tones.delta_c1 * tones.delta_c1 +
                           0.25 * cav.kappa * cav.kappa);
  CHECK(cs.chi_e == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("coupling strengths: equal amplitudes give chi_e = chi_P (2 chi_e Jx^2)") {
  const auto cav = reference_cavity();
  const auto tones = tones_at(hz_to_angular(-200e3), 1.0, 1.0);
  const auto cs =
      couplings::coupling_strengths(cav, tones, CouplingOptions{false, false});

  const double chi_pair = couplings::canonical_pair_coupling(cs);
  CHECK(cs.chi_e == doctest::Approx(chi_pair).epsilon(1e-14));

  const auto xyz = couplings::xyz_from_couplings(cs, 0.0);
  CHECK(xyz.chi_x == doctest::Approx(2.0 * cs.chi_e).epsilon(1e-14));
  CHECK(std::abs(xyz.chi_y) < 1e-14 * std::abs(xyz.chi_x));
}

TEST_CASE("coupling strengths: TACT amplitude ratio gives chi_e = 3 chi_P") {
  const auto cav = reference_cavity();
  const auto tones = tones_at(hz_to_angular(-200e3), 1.0, kTactRatio);
  const auto cs =
      couplings::coupling_strengths(cav, tones, CouplingOptions{false, false});

  const double chi_pair = couplings::canonical_pair_coupling(cs);
  CHECK(std::abs(cs.chi_e - 3.0 * chi_pair) <= 1e-12 * std::abs(cs.chi_e));

  const auto xyz = couplings::xyz_from_couplings(cs, 0.0);
  CHECK(std::abs(xyz.chi_x - 2.0 * xyz.chi_y) <= 1e-12 * std::abs(xyz.chi_x));
}

TEST_CASE("coupling strengths: pole guard without kappa") {
  const auto cav = reference_cavity();
  auto tones = tones_at(cav.kappa / 200.0, 1.0, 1.0);
  CHECK_THROWS_WITH_AS(
      couplings::coupling_strengths(cav, tones, CouplingOptions{false, false}),
      doctest::Contains("delta_c1"), std::invalid_argument);
}

TEST_CASE("coupling strengths: kappa -> 0 limit converges quadratically") {
  auto cav = reference_cavity();
  const auto tones = tones_at(hz_to_angular(-300e3), 1.0, 0.7);
  const auto bare =
      couplings::coupling_strengths(cav, tones, CouplingOptions{false, false});

  cav.kappa = std::abs(tones.delta_c1) / 100.0;
  const auto k1 = couplings::coupling_strengths(cav, tones);
  cav.kappa = std::abs(tones.delta_c1) / 200.0;
  const auto k2 = couplings::coupling_strengths(cav, tones);

  const double d1 = std::abs(k1.chi_e - bare.chi_e);
  const double d2 = std::abs(k2.chi_e - bare.chi_e);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.05));

  const double p1 = std::abs(k1.chi_p - bare.chi_p);
  const double p2 = std::abs(k2.chi_p - bare.chi_p);
  CHECK(p1 / p2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("coupling strengths: amplitude scaling and sign structure") {
  const auto cav = reference_cavity();
  const auto base = tones_at(hz_to_angular(-200e3), 1.0, 0.4);
  const auto scaled = tones_at(hz_to_angular(-200e3), 3.0, 1.2);

  const auto cs0 = couplings::coupling_strengths(cav, base);
  const auto cs1 = couplings::coupling_strengths(cav, scaled);
  CHECK(cs1.chi_e == doctest::Approx(9.0 * cs0.chi_e).epsilon(1e-12));
  CHECK(std::abs(cs1.chi_p) ==
        doctest::Approx(9.0 * std::abs(cs0.chi_p)).epsilon(1e-12));
  CHECK(cs1.gamma_sr == doctest::Approx(9.0 * cs0.gamma_sr).epsilon(1e-12));
  CHECK(cs1.chi_e / std::abs(cs1.chi_p) ==
        doctest::Approx(cs0.chi_e / std::abs(cs0.chi_p)).epsilon(1e-12));

  // red-detuned configuration has chi_e < 0; flipping the detuning flips it
  CHECK(cs0.chi_e < 0.0);
  const auto flipped =
      couplings::coupling_strengths(cav, tones_at(hz_to_angular(200e3), 1.0, 0.4));
  CHECK(flipped.chi_e == doctest::Approx(-cs0.chi_e).epsilon(1e-12));
  CHECK(flipped.chi_p.real() == doctest::Approx(-cs0.chi_p.real()).epsilon(1e-12));
}

TEST_CASE("coupling strengths: balanced Lorentzian weights null the superradiance") {
  const auto cav = reference_cavity();
  ToneSet tones;
  tones.delta_c1 = hz_to_angular(-150e3);
  tones.delta_c2 = hz_to_angular(-250e3);
  tones.alpha1 = 1.0;
  const double w1 = std::norm(tones.alpha1) /
                    (tones.delta_c1 * tones.delta_c1 + 0.25 * cav.kappa * cav.kappa);
  tones.alpha2 = std::sqrt(
      w1 * (tones.delta_c2 * tones.delta_c2 + 0.25 * cav.kappa * cav.kappa));
  // delta != 0 here, so only the rates matter
  const auto rates = couplings::lindblad_rates(cav, tones);
  CHECK(std::abs(rates.gamma_plus - rates.gamma_minus) < 1e-14 * rates.gamma_plus);

  const auto cs = couplings::coupling_strengths(cav, tones);
  CHECK(std::abs(cs.gamma_sr) < 1e-14 * std::abs(cs.chi_e));
  CHECK(cs.gamma_sr == rates.gamma_plus - rates.gamma_minus);
}

TEST_CASE("xyz reduction: pure exchange, TACT and pair-only forms") {
  couplings::CouplingSet cs{1.0, 0.0, 0.0, 0.0};
  const auto oat = couplings::xyz_from_couplings(cs, -1.0);
  CHECK(oat.chi_x == doctest::Approx(0.0));
  CHECK(oat.chi_y == doctest::Approx(0.0));
  CHECK(oat.chi_z == doctest::Approx(-1.0));
  CHECK(oat.casimir_gauge == doctest::Approx(-1.0));

  // chi_e = 0, chi_P = 2 chi: the pair-only Hamiltonian 2 chi (Jx^2 - Jy^2)
  couplings::CouplingSet pair_only{0.0, std::complex<double>(1.0, 0.0), 0.0, 0.0};
  const auto hprime = couplings::xyz_from_couplings(pair_only, 0.0);
  CHECK(hprime.chi_x == doctest::Approx(2.0));
  CHECK(hprime.chi_y == doctest::Approx(-2.0));
  CHECK(hprime.chi_z == doctest::Approx(0.0));

  couplings::CouplingSet detuned{1.0, 0.5, 0.0, 0.1};
  CHECK_THROWS_AS(couplings::xyz_from_couplings(detuned, 0.0),
                  std::invalid_argument);
  couplings::CouplingSet phased{1.0, std::complex<double>(0.3, 0.2), 0.0, 0.0};
  CHECK_THROWS_AS(couplings::xyz_from_couplings(phased, 0.0),
                  std::invalid_argument);
}

TEST_CASE("cancellation ratio: solver nulls the three-Lorentzian exchange sum") {
  const auto cav = reference_cavity();
  const double d1 = hz_to_angular(700e3);
  const double d2 = hz_to_angular(700e3);
  const double r = couplings::cancellation_ratio(cav, d1, d2);
  CHECK(r > 0.0);

  ToneSet tones;
  tones.alpha1 = 1.0;
  tones.alpha2 = r;
  tones.delta_c1 = d1;
  tones.delta_c2 = d2;
  const auto cs = couplings::coupling_strengths(cav, tones,
                                                CouplingOptions{true, true});
  const double chi_pair = couplings::canonical_pair_coupling(cs);
  CHECK(std::abs(cs.chi_e) < 1e-10 * std::abs(chi_pair));

  // moving away from the solved ratio grows |chi_e| monotonically
  double prev = std::abs(cs.chi_e);
  for (double f : {1.01, 1.025, 1.05}) {
    tones.alpha2 = r * f;
    const auto off = couplings::coupling_strengths(cav, tones,
                                                   CouplingOptions{true, true});
    CHECK(std::abs(off.chi_e) > prev);
    prev = std::abs(off.chi_e);
  }
  prev = std::abs(cs.chi_e);
  for (double f : {0.99, 0.975, 0.95}) {
    tones.alpha2 = r * f;
    const auto off = couplings::coupling_strengths(cav, tones,
                                                   CouplingOptions{true, true});
    CHECK(std::abs(off.chi_e) > prev);
    prev = std::abs(off.chi_e);
  }

  CHECK_THROWS_AS(couplings::cancellation_ratio(cav, d1, -d2), std::invalid_argument);
}

TEST_CASE("cancellation ratio: kappa -> 0 restatement of the balance equation") {
  auto cav = reference_cavity();
  cav.kappa = hz_to_angular(1.0);  // effectively lossless
  const double d = hz_to_angular(700e3);
  const double r = couplings::cancellation_ratio(cav, d, d);
  // (1 + r^2)/Delta must balance the opposite-side sideband weight
  const double lhs = (1.0 + r * r) / d;
  const double rhs = -1.0 / (d - 2.0 * cav.omega_z);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("tact ratio root: chi_e - 3 chi_P vanishes at (sqrt2-1)/(sqrt2+1)") {
  const auto cav = reference_cavity();
  auto chi_gap = [&](double r) {
    const auto cs = couplings::coupling_strengths(
        cav, tones_at(hz_to_angular(-200e3), 1.0, r), CouplingOptions{false, false});
    return cs.chi_e - 3.0 * couplings::canonical_pair_coupling(cs);
  };
  double lo = 0.05, hi = 0.5;
  REQUIRE(chi_gap(lo) * chi_gap(hi) < 0.0);
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (chi_gap(lo) * chi_gap(mid) <= 0.0 ? hi : lo) = mid;
  }
  CHECK(std::abs(0.5 * (lo + hi) - (3.0 - 2.0 * std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("chirp schedule: linear ramp and doubled tone separation") {
  const double w0 = hz_to_angular(500e3);
  const double rate = hz_to_angular(25.11e3) / 1e-3;  // per second
  CHECK(couplings::chirp_omega_z(w0, rate, 0.0) == w0);
  CHECK(couplings::chirp_omega_z(w0, rate, 1e-3) ==
        doctest::Approx(w0 + hz_to_angular(25.11e3)).epsilon(1e-14));
  // tone separation moves twice as fast: +2pi x 100.44 kHz after 2 ms
  const double dp = couplings::chirp_tone_separation_rate(rate) * 2e-3;
  CHECK(dp == doctest::Approx(hz_to_angular(100.44e3)).epsilon(1e-14));
}
