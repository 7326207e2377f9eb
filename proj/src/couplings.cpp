#include "cxyz/couplings.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cxyz::couplings {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// single-atom dispersive coupling prefactor (g0^2 / 4 Delta_a)^2
double vertex_sq(const CavityParams& cav) {
  const double v = cav.g0 * cav.g0 / (4.0 * cav.delta_a);
  return v * v;
}

// Lorentzian exchange weight Delta / (Delta^2 + kappa^2/4); reduces to
// 1/Delta as kappa -> 0.
double exchange_weight(double detuning, double kappa, bool include_kappa) {
  if (include_kappa)
    return detuning / (detuning * detuning + 0.25 * kappa * kappa);
  return 1.0 / detuning;
}

void guard_pole(double detuning, double kappa, const char* name) {
  if (std::abs(detuning) < kappa / 100.0)
    throw std::invalid_argument(
        std::string("coupling_strengths: detuning ") + name +
        " is within kappa/100 of the cavity pole; enable include_kappa");
}

}  // namespace

std::complex<double> classical_field(std::complex<double> drive_amplitude,
                                     double detuning_from_cavity, double kappa) {
  if (kappa <= 0.0)
    throw std::invalid_argument("classical_field: kappa must be positive");
  return drive_amplitude / (kI * 0.5 * kappa + detuning_from_cavity);
}

CouplingSet coupling_strengths(const CavityParams& cav, const ToneSet& tones,
                               const CouplingOptions& opts) {
  const double v2 = vertex_sq(cav);
  const double kappa = cav.kappa;
  const double a1_sq = std::norm(tones.alpha1);
  const double a2_sq = std::norm(tones.alpha2);
  const double extra_detuning = tones.delta_c1 - 2.0 * cav.omega_z;

  if (!opts.include_kappa) {
    guard_pole(tones.delta_c1, kappa, "delta_c1");
    guard_pole(tones.delta_c2, kappa, "delta_c2");
    if (opts.include_extra_sidebands)
      guard_pole(extra_detuning, kappa, "delta_c1 - 2 omega_z");
  }

  double chi_e =
      v2 * (a1_sq * exchange_weight(tones.delta_c1, kappa, opts.include_kappa) +
            a2_sq * exchange_weight(tones.delta_c2, kappa, opts.include_kappa));
  if (opts.include_extra_sidebands) {
    // lower modulation sideband of tone 1; its weight carries the opposite
    // sign whenever it falls on the other side of the cavity resonance
    chi_e += v2 * a1_sq * exchange_weight(extra_detuning, kappa, opts.include_kappa);
  }

  const double pair_mag = std::abs(tones.alpha1) * std::abs(tones.alpha2);
  std::complex<double> lorentz_sum;
  if (opts.include_kappa) {
    lorentz_sum = 1.0 / (tones.delta_c1 + kI * 0.5 * kappa) +
                  1.0 / (tones.delta_c2 - kI * 0.5 * kappa);
  } else {
    lorentz_sum = 1.0 / tones.delta_c1 + 1.0 / tones.delta_c2;
  }
  const std::complex<double> chi_p =
      v2 * 0.5 * pair_mag * std::exp(kI * tones.phi_int) * lorentz_sum;

  double gamma_sr = 0.0;
  if (opts.include_kappa) {
    const auto rates = lindblad_rates(cav, tones);
    gamma_sr = rates.gamma_plus - rates.gamma_minus;
  }

  return CouplingSet{chi_e, chi_p, gamma_sr, tones.delta()};
}

LindbladRates lindblad_rates(const CavityParams& cav, const ToneSet& tones) {
  const double v2 = vertex_sq(cav);
  const double k2 = 0.25 * cav.kappa * cav.kappa;
  const double wp = std::norm(tones.alpha1) /
                    (tones.delta_c1 * tones.delta_c1 + k2);
  const double wm = std::norm(tones.alpha2) /
                    (tones.delta_c2 * tones.delta_c2 + k2);
  return LindbladRates{cav.kappa * v2 * wp, cav.kappa * v2 * wm};
}

double canonical_pair_coupling(const CouplingSet& c) {
  return 2.0 * c.chi_p.real();
}

XYZCouplings xyz_from_couplings(const CouplingSet& c, double chi_z_gauge) {
  const double scale = std::max(std::abs(c.chi_e), std::abs(c.chi_p));
  if (std::abs(c.delta) > 1e-12 * std::max(scale, 1e-300))
    throw std::invalid_argument(
        "xyz_from_couplings: nonzero four-photon detuning; "
        "use the time-dependent integrator");
  if (std::abs(c.chi_p.imag()) > 1e-9 * std::max(std::abs(c.chi_p), 1e-300))
    throw std::invalid_argument(
        "xyz_from_couplings: nonzero phi_int rotates the pair axes; "
        "only the time-dependent integrator supports it");

  const double chi_pair = canonical_pair_coupling(c);
  XYZCouplings out;
  out.chi_x = c.chi_e + chi_pair + chi_z_gauge;
  out.chi_y = c.chi_e - chi_pair + chi_z_gauge;
  out.chi_z = chi_z_gauge;
  out.casimir_gauge = chi_z_gauge;
  return out;
}

namespace {

// signed exchange sum entering the cancellation condition, per unit |alpha1|^2
double exchange_residual(const CavityParams& cav, double delta_c1,
                         double delta_c2, double ratio_sq) {
  const double kappa = cav.kappa;
  return exchange_weight(delta_c1, kappa, true) +
         ratio_sq * exchange_weight(delta_c2, kappa, true) +
         exchange_weight(delta_c1 - 2.0 * cav.omega_z, kappa, true);
}

}  // namespace

double cancellation_ratio(const CavityParams& cav, double delta_c1,
                          double delta_c2) {
  if (delta_c1 * delta_c2 <= 0.0)
    throw std::invalid_argument(
        "cancellation_ratio: detunings must lie on the same side of the cavity");

  auto f = [&](double r) {
    return exchange_residual(cav, delta_c1, delta_c2, r * r);
  };

  // expand the bracket until the residual changes sign
  double lo = 0.0, hi = 1.0;
  double flo = f(lo), fhi = f(hi);
  int expansions = 0;
  while (flo * fhi > 0.0 && expansions < 60) {
    hi *= 2.0;
    fhi = f(hi);
    ++expansions;
  }
  if (flo * fhi > 0.0)
    throw std::runtime_error(
        "cancellation_ratio: no positive real root; residual sign at r=0 is " +
        std::string(flo > 0.0 ? "+" : "-") + " and at r=" + std::to_string(hi) +
        " is " + std::string(fhi > 0.0 ? "+" : "-"));

  // bisection to full double precision; f is monotone in r^2
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double chirp_omega_z(double omega_z0, double d_omega_z_dt, double t) {
  return omega_z0 + d_omega_z_dt * t;
}

double chirp_tone_separation_rate(double d_omega_z_dt) {
  return 2.0 * d_omega_z_dt;
}

}  // namespace cxyz::couplings
