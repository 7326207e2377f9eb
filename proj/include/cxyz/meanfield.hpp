#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cxyz/xyz.hpp"

namespace cxyz::meanfield {

using Eigen::Vector3d;

// Mean-field collective spin: unit direction plus magnitude J = N/2.
struct BlochState {
  BlochState(const Vector3d& dir, double j);

  Vector3d direction;  // unit vector
  double magnitude;    // spin length J = N/2

  Vector3d vector() const { return magnitude * direction; }
  static BlochState from_angles(double theta, double phi, double j);
  double theta() const;
  double phi() const;
};

// Linear drive term delta * J_axis (LMG transverse field and the optional
// exchange Jz term both use this).
struct Drive {
  Vector3d axis;
  double rate;
};

// Off-resonant pair coupling: the twisting axis rotates in the equatorial
// plane at -(delta t + phi_int)/2 while the exchange part stays static.
struct TimeDependentTerms {
  double delta;
  double phi_int = 0.0;
};

struct EOMSpec {
  XYZCouplings xyz;
  double gamma_sr = 0.0;
  std::optional<Drive> drive;
  std::optional<TimeDependentTerms> time_dependent;

  bool resonant() const { return !time_dependent.has_value(); }
  // exchange / canonical pair couplings recovered from the XYZ triple
  double chi_exchange() const { return 0.5 * (xyz.chi_x + xyz.chi_y) - xyz.chi_z; }
  double chi_pair() const { return 0.5 * (xyz.chi_x - xyz.chi_y); }
  // gauge-invariant interaction scale (largest pairwise coupling difference)
  double chi_scale() const;
};

// dJ/dt for the resonant spec; rejects time-dependent specs.
Vector3d torque(const EOMSpec& spec, const Vector3d& j);

// Analytic 3x3 Jacobian d(torque)/dJ at a point (resonant specs).
Eigen::Matrix3d torque_jacobian(const EOMSpec& spec, const Vector3d& j);

struct TrajectoryPoint {
  double t;
  Vector3d j;
};

// Thrown when the adaptive step controller underflows; carries the last
// accepted state.
struct IntegrationError : std::runtime_error {
  IntegrationError(const std::string& what, double t_in, const Vector3d& j_in)
      : std::runtime_error(what), t(t_in), j(j_in) {}
  double t;
  Vector3d j;
};

// Adaptive embedded Dormand-Prince 5(4) integration of the mean-field EOM.
// n_samples == 0 records every accepted step; otherwise the trajectory holds
// exactly n_samples + 1 uniformly spaced points (steps are clipped so sample
// times are hit exactly). tol must lie in [1e-13, 1e-6].
std::vector<TrajectoryPoint> integrate(const EOMSpec& spec, const BlochState& j0,
                                       double duration, double tol = 1e-10,
                                       int n_samples = 0);

// Same integrator driving the rotating-twisting-axis form of the detuned
// two-tone dynamics; requires spec.time_dependent (delta = 0 reproduces the
// resonant flow).
std::vector<TrajectoryPoint> integrate_time_dependent(const EOMSpec& spec,
                                                      const BlochState& j0,
                                                      double duration,
                                                      double tol = 1e-10,
                                                      int n_samples = 0);

// Conserved energy of the resonant flow at Gamma = 0.
double energy(const EOMSpec& spec, const Vector3d& j);

enum class Stability {
  StableCenter,   // purely imaginary conjugate pair
  Saddle,         // real pair with opposite signs
  Degenerate,     // vanishing tangent eigenvalues (coupling degeneracy)
  StableFocus,    // complex pair, negative real part (Gamma != 0)
  UnstableFocus,  // complex pair, positive real part
};

std::string to_string(Stability s);

struct FixedPointReport {
  BlochState location;
  Stability classification;
  std::array<std::complex<double>, 2> eigenvalues;  // tangent plane, rad/s
  std::string note;
};

// Enumerates fixed points of the resonant flow at spin length J = N/2.
// Pure XYZ and LMG-type specs are handled analytically; anything else
// (Gamma != 0, other drives) goes through Newton refinement of seeded roots.
std::vector<FixedPointReport> fixed_points(const EOMSpec& spec, double spin_j);

// Tangent-plane Jacobian eigenvalues at a fixed point. The radial direction
// carries a structural zero and is projected out; the input must satisfy
// ||T|| < 1e-6 * scale or an error naming ||T|| is thrown.
std::array<std::complex<double>, 2> jacobian_eigenvalues(const EOMSpec& spec,
                                                         const BlochState& point);

enum class Projection { PolarSouth, PolarNorth, Equirect, SaddleWindow };

struct FlowGrid {
  Projection projection = Projection::Equirect;
  int resolution = 11;
  // saddle-window parameters
  double center_theta = 1.5707963267948966;
  double center_phi = 1.5707963267948966;
  double halfwidth = 0.2617993877991494;  // pi/12
};

struct FlowSample {
  double theta_i, phi_i;
  Vector3d j_initial, j_final;
  Vector3d torque;  // (J_f - J_i) / dt
  double dtheta, dphi;
  double dt;
};

// Short-time evolution of a grid of initial states; chi N dt must stay below
// 0.5 (warning above 0.1).
std::vector<FlowSample> flow_map(const EOMSpec& spec, const FlowGrid& grid,
                                 double dt, int n_atoms, double tol = 1e-10);

// Removes the mean z-displacement common to all samples (the superradiant
// background) and recomputes the derived fields.
std::vector<FlowSample> superradiance_subtract(const std::vector<FlowSample>& samples);

// Quadratic bosonic expansion H ~ c_dd (c^dag)^2 + c_aa c^2 + c_da c^dag c
// about a +/-y saddle, canonical quadrature normalization (the Bogoliubov
// rate sqrt(4 c_dd^2 - c_da^2) equals the tangent-plane eigenvalue).
struct HPCoefficients {
  double c_dd, c_aa, c_da;
};

HPCoefficients hp_linearize(const EOMSpec& spec, const BlochState& point);

}  // namespace cxyz::meanfield
