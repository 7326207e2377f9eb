#include "cxyz/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cxyz::sequence {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 0.5 * kPi;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Eigen::Vector3d equatorial_axis(double axis_phase) {
  return Eigen::Vector3d(std::cos(axis_phase), std::sin(axis_phase), 0.0);
}

std::vector<meanfield::TrajectoryPoint> evolve(const meanfield::EOMSpec& spec,
                                               const BlochState& j0, double dt,
                                               double tol) {
  return spec.resonant()
             ? meanfield::integrate(spec, j0, dt, tol, 1)
             : meanfield::integrate_time_dependent(spec, j0, dt, tol, 1);
}

}  // namespace

BlochState rotate(const BlochState& state, double axis_phase, double angle) {
  const Eigen::AngleAxisd rot(angle, equatorial_axis(axis_phase));
  return BlochState(rot * state.direction, state.magnitude);
}

dicke::DickeState rotate(const dicke::DickeState& state, double axis_phase,
                         double angle) {
  const auto ops = dicke::build_collective_ops(state.basis);
  const dicke::Matrix generator = std::cos(axis_phase) * ops.jx +
                                  std::sin(axis_phase) * ops.jy;
  dicke::UnitaryPropagator prop(generator);
  if (state.kind == dicke::DickeState::Kind::Pure)
    return dicke::DickeState::pure(state.basis, prop.apply(state.psi, angle));
  // rho -> U rho U^dag, column by column through the cached propagator
  const int dim = state.basis.dimension();
  dicke::Matrix u(dim, dim);
  for (int c = 0; c < dim; ++c) {
    dicke::Vector e = dicke::Vector::Zero(dim);
    e(c) = 1.0;
    u.col(c) = prop.apply(e, angle);
  }
  dicke::Matrix rho = u * state.rho * u.adjoint();
  return dicke::DickeState{state.basis, dicke::DickeState::Kind::Mixed,
                           dicke::Vector(), std::move(rho)};
}

BlochState prepare_coherent_meanfield(double theta, double phi, int n_atoms) {
  return BlochState::from_angles(theta, phi, 0.5 * n_atoms);
}

dicke::DickeState prepare_coherent_exact(double theta, double phi, int n_atoms) {
  return dicke::coherent_state(dicke::DickeBasis(n_atoms), theta, phi);
}

namespace {

meanfield::FlowSample sample_from_final(double theta_i, double phi_i,
                                        const Eigen::Vector3d& ji,
                                        const Eigen::Vector3d& jf, double dt) {
  meanfield::FlowSample s;
  s.theta_i = theta_i;
  s.phi_i = phi_i;
  s.j_initial = ji;
  s.j_final = jf;
  s.torque = (jf - ji) / dt;
  const Eigen::Vector3d nf = jf.normalized();
  s.dtheta = std::acos(std::clamp(nf.z(), -1.0, 1.0)) - theta_i;
  s.dphi = wrap_angle(std::atan2(nf.y(), nf.x()) - phi_i);
  s.dt = dt;
  return s;
}

}  // namespace

meanfield::FlowSample measure_flow(const meanfield::EOMSpec& spec,
                                   double theta_i, double phi_i, double dt,
                                   FlowMode mode, int n_atoms, double tol) {
  const double chi_n_dt = spec.chi_scale() * n_atoms * dt;
  if (chi_n_dt > 0.1)
    std::fprintf(stderr, "measure_flow: chi N dt = %g beyond short-time regime\n",
                 chi_n_dt);

  const BlochState j0 = prepare_coherent_meanfield(theta_i, phi_i, n_atoms);
  const Eigen::Vector3d jf = evolve(spec, j0, dt, tol).back().j;

  if (mode == FlowMode::Direct)
    return sample_from_final(theta_i, phi_i, j0.vector(), jf, dt);

  const BlochState evolved(jf.normalized(), j0.magnitude);

  // polar-angle readout: pi pulse at phase phi_i, then a (pi/2 + theta_i)
  // pulse at phase phi_i + pi, Jz readout
  BlochState dtheta_arm = rotate(evolved, phi_i + kHalfPi, kPi);
  dtheta_arm = rotate(dtheta_arm, phi_i + kPi + kHalfPi, kHalfPi + theta_i);
  const double dtheta_est = -dtheta_arm.direction.z();

  // azimuthal readout: pi pulse at phase phi_i, then a pi/2 pulse at phase
  // phi_i + pi/2, Jz readout scaled by 1/sin(theta_i)
  const double sin_theta = std::sin(theta_i);
  if (std::abs(sin_theta) < 1e-6)
    throw std::invalid_argument(
        "measure_flow: azimuth readout undefined at the poles");
  BlochState dphi_arm = rotate(evolved, phi_i + kHalfPi, kPi);
  dphi_arm = rotate(dphi_arm, phi_i + kHalfPi + kHalfPi, kHalfPi);
  const double dphi_est = -dphi_arm.direction.z() / sin_theta;

  const BlochState reconstructed = BlochState::from_angles(
      theta_i + dtheta_est, phi_i + dphi_est, j0.magnitude);
  auto s = sample_from_final(theta_i, phi_i, j0.vector(),
                             reconstructed.vector(), dt);
  s.dtheta = dtheta_est;
  s.dphi = dphi_est;
  return s;
}

std::vector<SpectroscopyPoint> four_photon_scan(const meanfield::EOMSpec& spec,
                                                const std::vector<double>& deltas,
                                                double theta_i, double phi_i,
                                                double dt, int n_atoms,
                                                double tol) {
  if (!spec.time_dependent)
    throw std::invalid_argument("four_photon_scan: spec must be time-dependent");

  const BlochState j0 = prepare_coherent_meanfield(theta_i, phi_i, n_atoms);
  std::vector<SpectroscopyPoint> out;
  out.reserve(deltas.size());
  for (double delta : deltas) {
    meanfield::EOMSpec point_spec = spec;
    point_spec.time_dependent->delta = delta;
    const Eigen::Vector3d jf =
        meanfield::integrate_time_dependent(point_spec, j0, dt, tol, 1).back().j;
    const auto s = sample_from_final(theta_i, phi_i, j0.vector(), jf, dt);
    out.push_back({delta, s.dphi, s.dtheta,
                   (jf.z() - j0.vector().z()) / j0.magnitude});
  }
  return out;
}

std::vector<RingPoint> ring_scan(const meanfield::EOMSpec& spec, double theta_i,
                                 double dt, int n_points, int n_atoms,
                                 double tol) {
  if (n_points < 1) throw std::invalid_argument("ring_scan: need n_points >= 1");
  std::vector<RingPoint> out;
  out.reserve(n_points);
  for (int k = 0; k < n_points; ++k) {
    const double phi = -kPi + 2.0 * kPi * k / n_points;
    const BlochState j0 = prepare_coherent_meanfield(theta_i, phi, n_atoms);
    out.push_back({phi, evolve(spec, j0, dt, tol).back().j});
  }
  return out;
}

double sample_jz(const dicke::DickeState& state, std::mt19937_64& rng) {
  const int dim = state.basis.dimension();
  std::vector<double> prob(dim);
  if (state.kind == dicke::DickeState::Kind::Pure) {
    for (int i = 0; i < dim; ++i) prob[i] = std::norm(state.psi(i));
  } else {
    for (int i = 0; i < dim; ++i) prob[i] = std::real(state.rho(i, i));
  }
  // canonical uniform independent of the standard library's distribution
  const double u = (rng() >> 11) * 0x1.0p-53;
  double acc = 0.0;
  for (int i = 0; i < dim; ++i) {
    acc += std::max(prob[i], 0.0);
    if (u < acc) return state.basis.m_of(i);
  }
  return state.basis.m_of(dim - 1);
}

}  // namespace cxyz::sequence
