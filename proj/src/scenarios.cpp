#include "cxyz/scenarios.hpp"

#include <cmath>
#include <stdexcept>

#include "cxyz/dicke.hpp"
#include "cxyz/sequence.hpp"
#include "cxyz/units.hpp"

namespace cxyz::scenarios {

namespace {

constexpr double kPi = 3.14159265358979323846;

using config::RunConfig;
using meanfield::BlochState;
using meanfield::EOMSpec;
using meanfield::FlowGrid;
using meanfield::FlowSample;
using meanfield::Projection;

std::vector<std::string> unit_comments() {
  return {"angles: rad; file frequencies: Hz",
          "spin components in units of J = N/2; torque columns per second"};
}

std::filesystem::path write_table(const io::Table& table,
                                  const std::filesystem::path& dir,
                                  const std::string& stem,
                                  const std::string& format) {
  std::filesystem::create_directories(dir);
  if (format == "json") {
    const auto path = dir / (stem + ".json");
    io::write_json_file(path, table.to_json());
    return path;
  }
  const auto path = dir / (stem + ".csv");
  io::write_text_file(path, table.to_csv());
  return path;
}

std::filesystem::path write_report(const io::Json& report,
                                   const std::filesystem::path& dir,
                                   const std::string& stem) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (stem + ".json");
  io::write_json_file(path, report);
  return path;
}

// interaction time giving chi N dt = target for the spec's coupling scale
double derive_dt(const EOMSpec& spec, int n_atoms, double target) {
  const double scale = spec.chi_scale() * n_atoms;
  if (scale <= 0.0)
    throw std::runtime_error("scenario: vanishing coupling scale, cannot derive dt");
  return target / scale;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * (n > 1 ? static_cast<double>(i) / (n - 1) : 0.0);
  return out;
}

}  // namespace

io::Json couplings_report(const config::RunConfig& cfg) {
  const auto cs = cfg.coupling_set();
  const auto rates = couplings::lindblad_rates(cfg.cavity_params(), cfg.tone_set());

  io::Json report;
  report["units"] = "Hz";
  report["n_atoms"] = cfg.n_atoms;
  report["chi_e_hz"] = angular_to_hz(cs.chi_e);
  report["chi_p_hz"] = {{"re", angular_to_hz(cs.chi_p.real())},
                        {"im", angular_to_hz(cs.chi_p.imag())}};
  report["chi_pair_hz"] = angular_to_hz(couplings::canonical_pair_coupling(cs));
  report["gamma_sr_hz"] = angular_to_hz(cs.gamma_sr);
  report["gamma_plus_hz"] = angular_to_hz(rates.gamma_plus);
  report["gamma_minus_hz"] = angular_to_hz(rates.gamma_minus);
  report["delta_hz"] = angular_to_hz(cs.delta);
  if (cs.delta == 0.0 && cfg.phi_int == 0.0) {
    const auto xyz = couplings::xyz_from_couplings(cs, 0.0);
    report["xyz_hz"] = {{"chi_x", angular_to_hz(xyz.chi_x)},
                        {"chi_y", angular_to_hz(xyz.chi_y)},
                        {"chi_z", angular_to_hz(xyz.chi_z)},
                        {"casimir_gauge", angular_to_hz(xyz.casimir_gauge)}};
  }
  return report;
}

io::Json fixed_point_report(const meanfield::EOMSpec& spec, int n_atoms) {
  const auto points = meanfield::fixed_points(spec, 0.5 * n_atoms);
  io::Json arr = io::Json::array();
  for (const auto& p : points) {
    io::Json entry;
    entry["direction"] = {p.location.direction.x(), p.location.direction.y(),
                          p.location.direction.z()};
    entry["theta_rad"] = p.location.theta();
    entry["phi_rad"] = p.location.phi();
    entry["classification"] = meanfield::to_string(p.classification);
    entry["eigenvalues_hz"] = {
        {angular_to_hz(p.eigenvalues[0].real()), angular_to_hz(p.eigenvalues[0].imag())},
        {angular_to_hz(p.eigenvalues[1].real()), angular_to_hz(p.eigenvalues[1].imag())}};
    if (!p.note.empty()) entry["note"] = p.note;
    arr.push_back(std::move(entry));
  }
  return arr;
}

io::Table flow_table(const std::vector<meanfield::FlowSample>& samples,
                     double spin_j) {
  io::Table table({"theta_i", "phi_i", "jx_i", "jy_i", "jz_i", "tx", "ty", "tz",
                   "dtheta", "dphi"},
                  unit_comments());
  for (const auto& s : samples) {
    table.add_row({s.theta_i, s.phi_i, s.j_initial.x() / spin_j,
                   s.j_initial.y() / spin_j, s.j_initial.z() / spin_j,
                   s.torque.x() / spin_j, s.torque.y() / spin_j,
                   s.torque.z() / spin_j, s.dtheta, s.dphi});
  }
  return table;
}

double odd_cubic_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("odd_cubic_slope: need matching samples");
  double s2 = 0, s4 = 0, s6 = 0, sxy = 0, sx3y = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double x2 = x[i] * x[i];
    s2 += x2;
    s4 += x2 * x2;
    s6 += x2 * x2 * x2;
    sxy += x[i] * y[i];
    sx3y += x2 * x[i] * y[i];
  }
  const double det = s2 * s6 - s4 * s4;
  if (std::abs(det) < 1e-300) {
    if (s2 <= 0.0) throw std::invalid_argument("odd_cubic_slope: degenerate abscissae");
    return sxy / s2;  // all |x| equal: plain linear fit
  }
  return (sxy * s6 - sx3y * s4) / det;
}

namespace {

std::vector<std::filesystem::path> scenario_fig1e(const RunConfig& cfg,
                                                  const ScenarioOptions& opts) {
  EOMSpec spec = cfg.eom_spec();
  if (!spec.time_dependent)
    spec.time_dependent = meanfield::TimeDependentTerms{0.0, cfg.phi_int};

  const int n = cfg.n_atoms;
  const double dt = derive_dt(spec, n, 0.2);
  const double chi_n = spec.chi_scale() * n;

  std::vector<double> deltas;
  if (cfg.scan && cfg.scan->variable == "delta") {
    for (double v : cfg.scan->values) deltas.push_back(hz_to_angular(v));
  } else {
    deltas = linspace(-10.0 * chi_n, 10.0 * chi_n, 81);
  }

  io::Table scan_table({"delta_hz", "theta_i", "dphi", "dtheta", "djz_over_j"},
                       unit_comments());
  for (double theta_i : {0.25 * kPi, 0.75 * kPi}) {
    const auto points =
        sequence::four_photon_scan(spec, deltas, theta_i, 0.5 * kPi, dt, n);
    for (const auto& p : points)
      scan_table.add_row({angular_to_hz(p.delta), theta_i, p.dphi, p.dtheta,
                          p.djz_over_j});
  }

  io::Table equator_table({"phi_i", "djz_over_j", "dphi"}, unit_comments());
  for (double phi_i : {-0.25 * kPi, 0.0, 0.25 * kPi}) {
    const auto points =
        sequence::four_photon_scan(spec, {0.0}, 0.5 * kPi, phi_i, dt, n);
    equator_table.add_row({phi_i, points[0].djz_over_j, points[0].dphi});
  }

  return {write_table(scan_table, opts.out_dir, "spectroscopy", opts.format),
          write_table(equator_table, opts.out_dir, "equator", opts.format),
          write_report(couplings_report(cfg), opts.out_dir, "couplings")};
}

std::vector<std::filesystem::path> scenario_flowmaps(const RunConfig& cfg,
                                                     const ScenarioOptions& opts) {
  const EOMSpec spec = cfg.eom_spec();
  const int n = cfg.n_atoms;
  const double j = 0.5 * n;
  const double dt = derive_dt(spec, n, 0.05);

  FlowGrid south{Projection::PolarSouth, 7};
  FlowGrid north{Projection::PolarNorth, 7};
  FlowGrid equirect{Projection::Equirect, 9};

  std::vector<std::filesystem::path> files;
  files.push_back(write_table(flow_table(meanfield::flow_map(spec, south, dt, n), j),
                              opts.out_dir, "flow_south", opts.format));
  files.push_back(write_table(flow_table(meanfield::flow_map(spec, north, dt, n), j),
                              opts.out_dir, "flow_north", opts.format));
  files.push_back(
      write_table(flow_table(meanfield::flow_map(spec, equirect, dt, n), j),
                  opts.out_dir, "flow_equirect", opts.format));
  files.push_back(
      write_report(fixed_point_report(spec, n), opts.out_dir, "fixed_points"));
  files.push_back(write_report(couplings_report(cfg), opts.out_dir, "couplings"));
  return files;
}

struct SaddleFit {
  double slope_plus, slope_minus;
  double target;  // 4 chi_P (N/2) dt
};

SaddleFit fit_saddle_slopes(const std::vector<FlowSample>& samples, double spin_j,
                            double chi_pair, double dt) {
  const Eigen::Vector3d saddle(0.0, spin_j, 0.0);
  const Eigen::Vector3d n_plus = Eigen::Vector3d(1, 0, 1).normalized();
  const Eigen::Vector3d n_minus = Eigen::Vector3d(1, 0, -1).normalized();

  std::vector<double> xp, yp, xm, ym;
  for (const auto& s : samples) {
    const double u = s.theta_i - 0.5 * kPi;
    const double v = s.phi_i - 0.5 * kPi;
    const Eigen::Vector3d dji = s.j_initial - saddle;
    const Eigen::Vector3d dj = s.j_final - s.j_initial;
    if (std::abs(u - v) < 1e-12) {
      xp.push_back(dji.dot(n_plus) / spin_j);
      yp.push_back(dj.dot(n_plus) / spin_j);
    }
    if (std::abs(u + v) < 1e-12) {
      xm.push_back(dji.dot(n_minus) / spin_j);
      ym.push_back(dj.dot(n_minus) / spin_j);
    }
  }
  SaddleFit fit;
  fit.slope_plus = odd_cubic_slope(xp, yp);
  fit.slope_minus = odd_cubic_slope(xm, ym);
  fit.target = 4.0 * chi_pair * spin_j * dt;
  return fit;
}

std::vector<std::filesystem::path> scenario_fig3(const RunConfig& cfg,
                                                 const ScenarioOptions& opts) {
  const EOMSpec spec = cfg.eom_spec();
  const int n = cfg.n_atoms;
  const double j = 0.5 * n;
  const double dt = derive_dt(spec, n, 0.05);
  const double chi_pair = spec.chi_pair();

  FlowGrid window{Projection::SaddleWindow, 11};
  const auto raw = meanfield::flow_map(spec, window, dt, n);
  const auto subtracted = meanfield::superradiance_subtract(raw);

  const SaddleFit fit = fit_saddle_slopes(subtracted, j, chi_pair, dt);

  io::Json slopes;
  slopes["slope_plus"] = fit.slope_plus;
  slopes["slope_minus"] = fit.slope_minus;
  slopes["target_plus"] = fit.target;
  slopes["target_minus"] = -fit.target;
  slopes["chi_pair_hz"] = angular_to_hz(chi_pair);
  slopes["gamma_sr_hz"] = angular_to_hz(spec.gamma_sr);
  slopes["dt_s"] = dt;

  return {write_table(flow_table(raw, j), opts.out_dir, "saddle_window", opts.format),
          write_table(flow_table(subtracted, j), opts.out_dir,
                      "saddle_window_subtracted", opts.format),
          write_report(slopes, opts.out_dir, "slopes"),
          write_report(couplings_report(cfg), opts.out_dir, "couplings")};
}

std::vector<std::filesystem::path> scenario_fig4(const RunConfig& cfg,
                                                 const ScenarioOptions& opts) {
  const auto cav = cfg.cavity_params();
  const double ratio = couplings::cancellation_ratio(cav, cfg.tones[0].detuning,
                                                     cfg.tones[1].detuning);

  RunConfig tuned = cfg;
  tuned.tones[1].amplitude = ratio * cfg.tones[0].amplitude;
  tuned.normalized["tones"][1]["amplitude_sqrtphotons"] = tuned.tones[1].amplitude;
  tuned.sidebands = config::Sidebands::Three;
  tuned.normalized["model"]["sidebands"] = "three";

  const EOMSpec spec = tuned.eom_spec();
  const int n = tuned.n_atoms;
  const double j = 0.5 * n;
  const double dt = derive_dt(spec, n, 0.05);

  io::Table rings({"theta_i", "phi_i", "jx_f", "jy_f", "jz_f"}, unit_comments());
  for (double theta_i : {0.1 * kPi, 0.5 * kPi, 0.9 * kPi}) {
    const auto ring = sequence::ring_scan(spec, theta_i, dt, 48, n);
    for (const auto& p : ring)
      rings.add_row({theta_i, p.phi_i, p.j_final.x() / j, p.j_final.y() / j,
                     p.j_final.z() / j});
  }

  FlowGrid equirect{Projection::Equirect, 9};
  const auto flow = meanfield::flow_map(spec, equirect, dt, n);

  io::Json report = couplings_report(tuned);
  report["cancellation_ratio"] = ratio;

  return {write_table(rings, opts.out_dir, "rings", opts.format),
          write_table(flow_table(flow, j), opts.out_dir, "flow_equirect",
                      opts.format),
          write_report(fixed_point_report(spec, n), opts.out_dir, "fixed_points"),
          write_report(report, opts.out_dir, "couplings")};
}

std::vector<std::filesystem::path> scenario_stability(const RunConfig& cfg,
                                                      const ScenarioOptions& opts) {
  const EOMSpec tact = cfg.eom_spec();
  const int n = cfg.n_atoms;
  const double chi = std::abs(tact.chi_pair());
  if (chi <= 0.0)
    throw std::runtime_error("stability: configuration has no pair coupling");

  EOMSpec hprime;
  hprime.xyz = XYZCouplings{2.0 * chi, -2.0 * chi, 0.0, 0.0};
  EOMSpec oatz;
  oatz.xyz = XYZCouplings{chi, chi, 0.0, 0.0};

  std::vector<std::filesystem::path> files;
  files.push_back(
      write_report(fixed_point_report(tact, n), opts.out_dir, "fixed_points_tact"));
  files.push_back(write_report(fixed_point_report(hprime, n), opts.out_dir,
                               "fixed_points_hprime"));
  files.push_back(
      write_report(fixed_point_report(oatz, n), opts.out_dir, "fixed_points_oatz"));

  // LMG saddle growth rate across the drive window
  const double chi_n = chi * n;
  io::Table lmg({"delta_over_chin", "growth_rate_over_chin"}, unit_comments());
  double best_x = 0.0, best_rate = -1.0;
  for (int i = 1; i <= 99; ++i) {
    const double x = 0.01 * i;
    EOMSpec lmg_spec;
    lmg_spec.xyz = XYZCouplings{0.0, 0.0, chi, 0.0};
    lmg_spec.drive = meanfield::Drive{Eigen::Vector3d::UnitY(), x * chi_n};
    const auto eig = meanfield::jacobian_eigenvalues(
        lmg_spec, BlochState(Eigen::Vector3d::UnitY(), 0.5 * n));
    const double rate = std::max(eig[0].real(), eig[1].real());
    lmg.add_row({x, rate / chi_n});
    if (rate > best_rate) {
      best_rate = rate;
      best_x = x;
    }
  }
  io::Json summary;
  summary["argmax_delta_over_chin"] = best_x;
  summary["peak_rate_over_chin"] = best_rate / chi_n;
  files.push_back(write_table(lmg, opts.out_dir, "lmg_scan", opts.format));
  files.push_back(write_report(summary, opts.out_dir, "lmg_summary"));
  return files;
}

std::vector<std::filesystem::path> scenario_squeeze(const RunConfig& cfg,
                                                    const ScenarioOptions& opts) {
  const int n = cfg.n_atoms;
  const auto cs = cfg.coupling_set();
  double chi = std::abs(couplings::canonical_pair_coupling(cs));
  if (chi <= 0.0) chi = std::abs(cs.chi_e);
  if (chi <= 0.0)
    throw std::runtime_error("squeeze: configuration has no interaction strength");

  const dicke::DickeBasis basis(n);
  const auto h_oat =
      dicke::build_xyz_hamiltonian(XYZCouplings{0.0, 0.0, chi, 0.0}, basis);
  const auto h_tact =
      dicke::build_xyz_hamiltonian(XYZCouplings{chi, 0.0, -chi, 0.0}, basis);
  const dicke::UnitaryPropagator prop_oat(h_oat);
  const dicke::UnitaryPropagator prop_tact(h_tact);
  const auto psi_oat = dicke::coherent_state(basis, 0.5 * kPi, 0.0);   // +x
  const auto psi_tact = dicke::coherent_state(basis, 0.5 * kPi, 0.5 * kPi);  // +y

  const int steps = 300;
  const double chi_t_max = 24.0 / n;

  io::Table table({"t_s", "chi_t", "xi2_ku_oat", "xi2_w_oat", "xi2_ku_tact",
                   "xi2_w_tact"},
                  unit_comments());
  double min_oat = 1e300, min_tact = 1e300, t_min_oat = 0.0, t_min_tact = 0.0;
  double t_half_crossing = -1.0;
  std::vector<double> tact_curve(steps + 1), times(steps + 1);

  for (int i = 0; i <= steps; ++i) {
    const double chi_t = chi_t_max * i / steps;
    const double t = chi_t / chi;
    const auto s_oat = dicke::squeezing_parameter(dicke::DickeState::pure(
        basis, prop_oat.apply(psi_oat.psi, t)));
    const auto s_tact = dicke::squeezing_parameter(dicke::DickeState::pure(
        basis, prop_tact.apply(psi_tact.psi, t)));
    table.add_row({t, chi_t, s_oat.xi2_kitagawa, s_oat.xi2_wineland,
                   s_tact.xi2_kitagawa, s_tact.xi2_wineland});
    times[i] = t;
    tact_curve[i] = s_tact.xi2_kitagawa;
    if (s_oat.xi2_kitagawa < min_oat) {
      min_oat = s_oat.xi2_kitagawa;
      t_min_oat = t;
    }
    if (s_tact.xi2_kitagawa < min_tact) {
      min_tact = s_tact.xi2_kitagawa;
      t_min_tact = t;
    }
  }
  for (int i = 0; i <= steps; ++i) {
    if (tact_curve[i] <= 0.5 * min_oat) {
      t_half_crossing = times[i];
      break;
    }
  }

  io::Json summary;
  summary["n_atoms"] = n;
  summary["chi_hz"] = angular_to_hz(chi);
  summary["xi2_min_oat"] = min_oat;
  summary["t_min_oat_s"] = t_min_oat;
  summary["xi2_min_tact"] = min_tact;
  summary["t_min_tact_s"] = t_min_tact;
  summary["t_tact_reaches_half_oat_min_s"] = t_half_crossing;

  return {write_table(table, opts.out_dir, "squeeze", opts.format),
          write_report(summary, opts.out_dir, "squeeze_summary")};
}

}  // namespace

std::vector<std::string> scenario_names() { return config::preset_names(); }

std::vector<std::filesystem::path> run_scenario(const std::string& name,
                                                const config::RunConfig& cfg,
                                                const ScenarioOptions& opts) {
  if (name == "fig1e") return scenario_fig1e(cfg, opts);
  if (name == "fig2-oatz" || name == "fig2-tact" || name == "fig2-oatx")
    return scenario_flowmaps(cfg, opts);
  if (name == "fig3-saddle") return scenario_fig3(cfg, opts);
  if (name == "fig4-hprime") return scenario_fig4(cfg, opts);
  if (name == "stability") return scenario_stability(cfg, opts);
  if (name == "squeeze") return scenario_squeeze(cfg, opts);
  throw std::invalid_argument("run_scenario: unknown scenario '" + name + "'");
}

}  // namespace cxyz::scenarios
