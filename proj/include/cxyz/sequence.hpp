#pragma once

#include <random>
#include <vector>

#include "cxyz/dicke.hpp"
#include "cxyz/meanfield.hpp"

namespace cxyz::sequence {

using meanfield::BlochState;

// Rotation by `angle` about the equatorial axis (cos(axis_phase),
// sin(axis_phase), 0), right-handed on the Bloch vector. The exact backend
// applies exp(-i angle J_axis); both backends agree on mean directions.
BlochState rotate(const BlochState& state, double axis_phase, double angle);
dicke::DickeState rotate(const dicke::DickeState& state, double axis_phase,
                         double angle);

// Spin-coherent state at (theta, phi) prepared from all atoms in |up>.
BlochState prepare_coherent_meanfield(double theta, double phi, int n_atoms);
dicke::DickeState prepare_coherent_exact(double theta, double phi, int n_atoms);

enum class FlowMode { Direct, SequenceEmulated };

// Local flow vector at one initial state. Direct mode reads (dtheta, dphi)
// off the integrated trajectory; sequence-emulated mode replays the
// pulse-train readout (interaction, pi echo pulse, final mapping pulse, Jz
// readout) for each angle and converts Jz into the angle estimate. A Bragg
// pulse of phase p rotates about the equatorial axis at azimuth p + pi/2;
// the estimators are dtheta = -Jz|dtheta / J and
// dphi = -Jz|dphi / (J sin theta_i).
meanfield::FlowSample measure_flow(const meanfield::EOMSpec& spec,
                                   double theta_i, double phi_i, double dt,
                                   FlowMode mode, int n_atoms,
                                   double tol = 1e-10);

struct SpectroscopyPoint {
  double delta;       // four-photon detuning (rad/s)
  double dphi;        // azimuthal change (rad)
  double dtheta;      // polar change (rad)
  double djz_over_j;  // change in Jz / (N/2)
};

// Scans the four-photon detuning of a time-dependent spec at a fixed initial
// state and interaction time.
std::vector<SpectroscopyPoint> four_photon_scan(const meanfield::EOMSpec& spec,
                                                const std::vector<double>& deltas,
                                                double theta_i, double phi_i,
                                                double dt, int n_atoms,
                                                double tol = 1e-10);

struct RingPoint {
  double phi_i;
  Eigen::Vector3d j_final;
};

// Evolves a ring of initial states at fixed polar angle; the caller fits the
// resulting distribution.
std::vector<RingPoint> ring_scan(const meanfield::EOMSpec& spec, double theta_i,
                                 double dt, int n_points, int n_atoms,
                                 double tol = 1e-10);

// Single projective Jz readout drawn from the state's m-distribution
// (binomial projection noise for coherent states). Deterministic given the
// engine state.
double sample_jz(const dicke::DickeState& state, std::mt19937_64& rng);

}  // namespace cxyz::sequence
