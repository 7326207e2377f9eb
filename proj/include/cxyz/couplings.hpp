#pragma once

#include <complex>

#include "cxyz/xyz.hpp"

namespace cxyz::couplings {

// Physical cavity parameters, all angular frequencies (rad/s).
struct CavityParams {
  double g0;       // maximal atom-cavity Rabi coupling at an antinode
  double kappa;    // cavity power decay rate
  double delta_a;  // cavity-atom detuning, omega_c - omega_a (main-text sign)
  double omega_z;  // two-photon Doppler frequency
  int n_atoms;
};

// Two dressing tones described by intracavity field amplitudes (sqrt photons)
// and their detunings delta_c1 = (w1 - wc) + wz, delta_c2 = (w2 - wc) - wz.
struct ToneSet {
  std::complex<double> alpha1;
  std::complex<double> alpha2;
  double delta_c1;
  double delta_c2;
  double phi_int = 0.0;  // differential tone phase relative to the Bragg phase

  double delta() const { return delta_c2 - delta_c1; }          // four-photon detuning
  double delta_c_bar() const { return 0.5 * (delta_c1 + delta_c2); }
};

// Effective interaction constants produced by adiabatic cavity elimination.
struct CouplingSet {
  double chi_e;                 // exchange (J+J-) coupling, real
  std::complex<double> chi_p;   // pair (J+J+) coupling, phase = phi_int on resonance
  double gamma_sr;              // mean-field superradiance strength
  double delta;                 // four-photon detuning carried through
};

struct CouplingOptions {
  bool include_kappa = true;           // Lorentzian-weighted sums vs bare 1/Delta
  bool include_extra_sidebands = false;  // adds the Delta_c1 - 2 wz exchange term
};

// Steady-state intracavity field alpha = eps / (i kappa/2 + Delta).
std::complex<double> classical_field(std::complex<double> drive_amplitude,
                                     double detuning_from_cavity, double kappa);

// chi_e, chi_p, Gamma, delta from the cavity and tone parameters. With
// include_kappa off the kappa -> 0 forms are used and detunings within
// kappa/100 of a pole are rejected.
CouplingSet coupling_strengths(const CavityParams& cav, const ToneSet& tones,
                               const CouplingOptions& opts = {});

// Collective dissipation rates of the secular two-channel form
// (sqrt(gamma_plus) J+, sqrt(gamma_minus) J-); gamma_sr = gamma_plus - gamma_minus.
struct LindbladRates {
  double gamma_plus;
  double gamma_minus;
};
LindbladRates lindblad_rates(const CavityParams& cav, const ToneSet& tones);

// Canonical pair coupling chi_P = 2 Re(chi_p): the coefficient of Jx^2 - Jy^2
// once the resonant Hamiltonian is expanded into spin components.
double canonical_pair_coupling(const CouplingSet& c);

// Resonant (delta = 0, phi_int = 0) reduction to canonical XYZ couplings:
// chi_x = chi_e + chi_P + g, chi_y = chi_e - chi_P + g, chi_z = g, where the
// gauge g multiplies J.J and does not affect in-manifold dynamics.
XYZCouplings xyz_from_couplings(const CouplingSet& c, double chi_z_gauge);

// Amplitude ratio |alpha2/alpha1| that nulls the three-Lorentzian exchange sum
// (main tones at delta_c1, delta_c2 plus the opposite-sign sideband at
// delta_c1 - 2 omega_z). Bracketed 1-D root solve, residual < 1e-12 relative.
double cancellation_ratio(const CavityParams& cav, double delta_c1,
                          double delta_c2);

// Gravity-compensation schedule: omega_z(t) = omega_z0 + rate * t. The tone
// separation must be chirped at twice this rate.
double chirp_omega_z(double omega_z0, double d_omega_z_dt, double t);
double chirp_tone_separation_rate(double d_omega_z_dt);

}  // namespace cxyz::couplings
