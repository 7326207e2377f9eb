#include <doctest.h>

#include <cmath>
#include <random>

#include "cxyz/dicke.hpp"
#include "cxyz/meanfield.hpp"
#include "cxyz/sequence.hpp"

using namespace cxyz;
using Eigen::Vector3d;
using meanfield::BlochState;
using meanfield::EOMSpec;
using sequence::FlowMode;

namespace {

constexpr double kPi = 3.14159265358979323846;

EOMSpec tact_spec(double chi_pair) {
  EOMSpec spec;
  spec.xyz = XYZCouplings{4.0 * chi_pair, 2.0 * chi_pair, 0.0, 0.0};
  return spec;
}

EOMSpec oatx_spec(double chi) {
  EOMSpec spec;
  spec.xyz = XYZCouplings{2.0 * chi, 0.0, 0.0, 0.0};
  spec.time_dependent = meanfield::TimeDependentTerms{0.0, 0.0};
  return spec;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
  }
};

}  // namespace

TEST_CASE("rotate: group properties on both backends") {
  const int n = 20;
  Rng rng(17);

  // 2 pi rotation is the identity on the Bloch vector
  const BlochState state = BlochState::from_angles(1.0, 0.4, 0.5 * n);
  const auto full_turn = sequence::rotate(state, 0.7, 2.0 * kPi);
  CHECK((full_turn.direction - state.direction).norm() < 1e-12);

  // pi/2 pulse about x maps all-up to -y (convention fixed here)
  const auto exact_up = sequence::prepare_coherent_exact(0.0, 0.0, n);
  const auto rotated = sequence::rotate(exact_up, 0.0, 0.5 * kPi);
  const auto m = dicke::spin_moments(rotated);
  CHECK((m.mean - Vector3d(0.0, -0.5 * n, 0.0)).norm() < 1e-9 * n);
  const auto mf_up = sequence::prepare_coherent_meanfield(0.0, 0.0, n);
  const auto mf_rotated = sequence::rotate(mf_up, 0.0, 0.5 * kPi);
  CHECK((mf_rotated.vector() - Vector3d(0.0, -0.5 * n, 0.0)).norm() < 1e-12 * n);

  // two pi pulses about the same axis compose to the identity
  for (int trial = 0; trial < 50; ++trial) {
    const double phase = rng.uniform(-kPi, kPi);
    const BlochState s = BlochState::from_angles(rng.uniform(0.1, kPi - 0.1),
                                                 rng.uniform(-kPi, kPi), 10.0);
    const auto twice = sequence::rotate(sequence::rotate(s, phase, kPi), phase, kPi);
    CHECK((twice.direction - s.direction).norm() < 1e-10);
  }

  // exact and mean-field backends agree on the rotated mean direction
  for (int trial = 0; trial < 5; ++trial) {
    const double theta = rng.uniform(0.2, kPi - 0.2);
    const double phi = rng.uniform(-kPi, kPi);
    const double phase = rng.uniform(-kPi, kPi);
    const double angle = rng.uniform(0.0, kPi);
    const auto mf = sequence::rotate(
        sequence::prepare_coherent_meanfield(theta, phi, n), phase, angle);
    const auto ex = sequence::rotate(
        sequence::prepare_coherent_exact(theta, phi, n), phase, angle);
    const auto mex = dicke::spin_moments(ex);
    CHECK((mex.mean / (0.5 * n) - mf.direction).norm() < 1e-9);
  }
}

TEST_CASE("prepare_coherent: pole and equator geometry") {
  const int n = 30;
  const auto up = sequence::prepare_coherent_exact(0.0, 0.0, n);
  const auto m_up = dicke::spin_moments(up);
  CHECK((m_up.mean - Vector3d(0, 0, 0.5 * n)).norm() < 1e-10 * n);

  const auto eq = sequence::prepare_coherent_exact(0.5 * kPi, 0.5 * kPi, n);
  const auto m_eq = dicke::spin_moments(eq);
  CHECK((m_eq.mean - Vector3d(0, 0.5 * n, 0)).norm() < 1e-9 * n);
  CHECK(m_eq.covariance(0, 0) == doctest::Approx(0.25 * n).epsilon(1e-9));
  CHECK(m_eq.covariance(2, 2) == doctest::Approx(0.25 * n).epsilon(1e-9));

  const auto tilted = sequence::prepare_coherent_meanfield(0.25 * kPi, 0.0, n);
  CHECK((tilted.vector() -
         Vector3d(0.5 * n * std::sin(0.25 * kPi), 0.0,
                  0.5 * n * std::cos(0.25 * kPi)))
            .norm() < 1e-12 * n);
}

TEST_CASE("measure_flow: echo property and frozen dynamics") {
  EOMSpec frozen;
  frozen.xyz = XYZCouplings{0, 0, 0, 0};
  const int n = 700;
  for (double theta : {0.3, 0.5 * kPi, 2.5}) {
    const auto direct = sequence::measure_flow(frozen, theta, 0.8, 1e-4,
                                               FlowMode::Direct, n);
    const auto emulated = sequence::measure_flow(frozen, theta, 0.8, 1e-4,
                                                 FlowMode::SequenceEmulated, n);
    CHECK(std::abs(direct.dtheta) < 1e-12);
    CHECK(std::abs(direct.dphi) < 1e-12);
    // the pulse train composes to an exact no-op readout
    CHECK(std::abs(emulated.dtheta) < 1e-12);
    CHECK(std::abs(emulated.dphi) < 1e-12);
  }

  // OAT about z: the equator is a zero-dynamics line in both modes
  EOMSpec oat;
  oat.xyz = XYZCouplings{1.0, 1.0, 0.0, 0.0};
  const double dt = 0.05 / (oat.chi_scale() * n);
  for (FlowMode mode : {FlowMode::Direct, FlowMode::SequenceEmulated}) {
    const auto s = sequence::measure_flow(oat, 0.5 * kPi, 0.9, dt, mode, n);
    CHECK(std::abs(s.dtheta) < 1e-9);
    CHECK(std::abs(s.dphi) < 1e-9);
  }

  CHECK_THROWS_AS(sequence::measure_flow(oat, 1e-9, 0.0, dt,
                                         FlowMode::SequenceEmulated, n),
                  std::invalid_argument);
}

TEST_CASE("measure_flow: sequence emulation tracks the direct flow") {
  const int n = 700;
  const auto spec = tact_spec(1.0);
  const double dt = 0.05 / (spec.chi_scale() * n);

  // near the saddle
  for (double offset : {kPi / 24.0, -kPi / 24.0}) {
    const auto direct = sequence::measure_flow(spec, 0.5 * kPi + offset,
                                               0.5 * kPi, dt, FlowMode::Direct, n);
    const auto emulated = sequence::measure_flow(
        spec, 0.5 * kPi + offset, 0.5 * kPi, dt, FlowMode::SequenceEmulated, n);
    CHECK(std::abs(direct.dtheta - emulated.dtheta) < 5e-3);
    CHECK(std::abs(direct.dphi - emulated.dphi) < 5e-3);
  }

  // 5x5 grid: first-order agreement bound max(1e-3, (chi N dt)^2)
  const double bound = std::max(1e-3, std::pow(0.05, 2));
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      const double theta = 0.5 * kPi + (a - 2) * 0.1;
      const double phi = 0.5 * kPi + (b - 2) * 0.1;
      const auto direct =
          sequence::measure_flow(spec, theta, phi, dt, FlowMode::Direct, n);
      const auto emulated = sequence::measure_flow(
          spec, theta, phi, dt, FlowMode::SequenceEmulated, n);
      CHECK(std::abs(direct.dtheta - emulated.dtheta) < bound);
      CHECK(std::abs(direct.dphi - emulated.dphi) < bound);
    }
  }
}

TEST_CASE("four-photon scan: resonance signs and equator response") {
  const int n = 200;
  const double chi = 1.0;
  EOMSpec spec = oatx_spec(chi);  // chi_e = chi_P = chi on resonance
  const double chi_n = spec.chi_scale() * n;
  const double dt = 0.2 / chi_n;

  std::vector<double> deltas;
  for (int i = 0; i <= 80; ++i) deltas.push_back(-10.0 * chi_n + 0.25 * chi_n * i);

  const auto north = sequence::four_photon_scan(spec, deltas, 0.25 * kPi,
                                                0.5 * kPi, dt, n);
  const auto south = sequence::four_photon_scan(spec, deltas, 0.75 * kPi,
                                                0.5 * kPi, dt, n);

  // wings: opposite azimuthal drifts for the two hemispheres
  CHECK(north.front().dphi * south.front().dphi < 0.0);
  CHECK(north.back().dphi * south.back().dphi < 0.0);

  // wing antisymmetry within 5 percent once the pair-term residual
  // (which decays like chi N / delta) is small enough
  const std::vector<double> far_wing = {40.0 * chi_n, -40.0 * chi_n};
  const auto far_north =
      sequence::four_photon_scan(spec, far_wing, 0.25 * kPi, 0.5 * kPi, dt, n);
  const auto far_south =
      sequence::four_photon_scan(spec, far_wing, 0.75 * kPi, 0.5 * kPi, dt, n);
  for (size_t i = 0; i < far_wing.size(); ++i) {
    CHECK(std::abs(far_north[i].dphi + far_south[i].dphi) <
          0.05 * std::abs(far_north[i].dphi));
  }

  // the resonance feature is centered at delta = 0
  const double wing = north.front().dphi;
  double best = -1.0, best_delta = 1.0;
  for (const auto& p : north) {
    const double response = std::abs(p.dphi - wing);
    if (response > best) {
      best = response;
      best_delta = p.delta;
    }
  }
  CHECK(std::abs(best_delta) < 0.26 * chi_n);

  // equator scan at delta = 0: antisymmetric Jz response, null along x
  const auto plus = sequence::four_photon_scan(spec, {0.0}, 0.5 * kPi,
                                               0.25 * kPi, dt, n);
  const auto minus = sequence::four_photon_scan(spec, {0.0}, 0.5 * kPi,
                                                -0.25 * kPi, dt, n);
  const auto zero = sequence::four_photon_scan(spec, {0.0}, 0.5 * kPi, 0.0, dt, n);
  CHECK(std::abs(plus[0].djz_over_j + minus[0].djz_over_j) < 1e-9);
  CHECK(plus[0].djz_over_j * minus[0].djz_over_j < 0.0);
  CHECK(std::abs(zero[0].djz_over_j) < 1e-10);

  EOMSpec resonant;
  resonant.xyz = spec.xyz;
  CHECK_THROWS_AS(sequence::four_photon_scan(resonant, deltas, 1.0, 0.0, dt, n),
                  std::invalid_argument);
}

TEST_CASE("ring scan: H-prime deflection pattern and ellipse orientation") {
  const int n = 700;
  EOMSpec spec;
  spec.xyz = XYZCouplings{2.0, -2.0, 0.0, 0.0};
  const double dt = 0.05 / (spec.chi_scale() * n);

  // equator ring: final Jz alternates sign four times
  const auto ring = sequence::ring_scan(spec, 0.5 * kPi, dt, 48, n);
  int crossings = 0;
  for (size_t k = 0; k < ring.size(); ++k) {
    const double a = ring[k].j_final.z();
    const double b = ring[(k + 1) % ring.size()].j_final.z();
    if (a != 0.0 && a * b < 0.0) ++crossings;
  }
  CHECK(crossings == 4);

  // polar rings: squeezing axes near the two poles are orthogonal
  auto principal_angle = [&](double theta_i) {
    const auto points = sequence::ring_scan(spec, theta_i, dt, 64, n);
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& p : points) {
      sxx += p.j_final.x() * p.j_final.x();
      sxy += p.j_final.x() * p.j_final.y();
      syy += p.j_final.y() * p.j_final.y();
    }
    return 0.5 * std::atan2(2.0 * sxy, sxx - syy);  // major-axis angle mod pi
  };
  const double a_north = principal_angle(0.1 * kPi);
  const double a_south = principal_angle(0.9 * kPi);
  double gap = std::abs(a_north - a_south);
  while (gap > 0.5 * kPi) gap = std::abs(gap - kPi);
  CHECK(gap == doctest::Approx(0.5 * kPi).epsilon(0.02));

  // frozen couplings leave the ring unchanged
  EOMSpec frozen;
  frozen.xyz = XYZCouplings{0, 0, 0, 0};
  for (const auto& p : sequence::ring_scan(frozen, 0.4 * kPi, dt, 16, n)) {
    const Vector3d expect = 0.5 * n *
                            Vector3d(std::sin(0.4 * kPi) * std::cos(p.phi_i),
                                     std::sin(0.4 * kPi) * std::sin(p.phi_i),
                                     std::cos(0.4 * kPi));
    CHECK((p.j_final - expect).norm() < 1e-10 * n);
  }
}

TEST_CASE("sample_jz: deterministic binomial projection noise") {
  const int n = 64;
  std::mt19937_64 rng(42);
  const auto up = sequence::prepare_coherent_exact(0.0, 0.0, n);
  for (int i = 0; i < 10; ++i) CHECK(sequence::sample_jz(up, rng) == 0.5 * n);

  const auto eq = sequence::prepare_coherent_exact(0.5 * kPi, 0.0, n);
  double sum = 0.0, sum_sq = 0.0;
  const int shots = 2000;
  for (int i = 0; i < shots; ++i) {
    const double m = sequence::sample_jz(eq, rng);
    sum += m;
    sum_sq += m * m;
  }
  const double mean = sum / shots;
  const double var = sum_sq / shots - mean * mean;
  // binomial projection noise: mean 0, variance N/4
  CHECK(std::abs(mean) < 3.0 * std::sqrt(0.25 * n / shots));
  CHECK(var == doctest::Approx(0.25 * n).epsilon(0.15));

  // determinism for a fixed seed
  std::mt19937_64 r1(7), r2(7);
  for (int i = 0; i < 20; ++i)
    CHECK(sequence::sample_jz(eq, r1) == sequence::sample_jz(eq, r2));
}
