// cxyz: collective-spin cavity simulator CLI.
//
// Subcommands map cavity/tone configurations to effective couplings, generate
// Bloch-sphere flow maps and fixed-point reports, emulate the spectroscopy
// sequences, evolve states on the mean-field or exact backend and reproduce
// the named measurement scenarios. Output is deterministic for a given
// configuration and seed.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cxyz/config.hpp"
#include "cxyz/dicke.hpp"
#include "cxyz/io.hpp"
#include "cxyz/meanfield.hpp"
#include "cxyz/scenarios.hpp"
#include "cxyz/sequence.hpp"
#include "cxyz/units.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::uint64_t seed = 0;
};

std::string slurp(const std::string& path) {
  if (path.empty()) return "";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cxyz::config::RunConfig load_config(const GlobalArgs& args) {
  return cxyz::config::parse_config(slurp(args.config_path));
}

cxyz::scenarios::ScenarioOptions scenario_options(const GlobalArgs& args) {
  cxyz::scenarios::ScenarioOptions opts;
  opts.out_dir = args.out_dir;
  opts.format = args.format;
  opts.seed = args.seed;
  return opts;
}

void report_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cxyz: cavity-engineered collective spin dynamics"};
  app.require_subcommand(1);
  // global flags remain valid after the subcommand name
  app.fallthrough(true);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON configuration file");
  app.add_option("--out", args.out_dir, "output directory")->capture_default_str();
  app.add_option("--format", args.format, "grid/scan table format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--seed", args.seed, "seed for stochastic emulation modes")
      ->capture_default_str();

  auto* cmd_couplings =
      app.add_subcommand("couplings", "effective interaction constants");

  auto* cmd_flowmap = app.add_subcommand("flowmap", "Bloch-sphere flow map");
  std::string projection = "equirect";
  int resolution = 9;
  double chi_n_dt = 0.05;
  cmd_flowmap->add_option("--projection", projection,
                          "polar-south|polar-north|equirect|saddle-window")
      ->check(CLI::IsMember({"polar-south", "polar-north", "equirect",
                             "saddle-window"}))
      ->capture_default_str();
  cmd_flowmap->add_option("--resolution", resolution, "grid resolution")
      ->capture_default_str();
  cmd_flowmap->add_option("--chi-n-dt", chi_n_dt,
                          "dimensionless interaction time chi N dt")
      ->capture_default_str();

  auto* cmd_fixed = app.add_subcommand("fixed-points", "fixed-point census");

  auto* cmd_spectroscopy =
      app.add_subcommand("spectroscopy", "four-photon detuning scan");

  auto* cmd_evolve = app.add_subcommand("evolve", "single-trajectory evolution");
  double theta0 = 0.5 * kPi, phi0 = 0.5 * kPi;
  double chi_n_t = 1.0;
  int samples = 200;
  cmd_evolve->add_option("--theta-rad", theta0, "initial polar angle")
      ->capture_default_str();
  cmd_evolve->add_option("--phi-rad", phi0, "initial azimuth")
      ->capture_default_str();
  cmd_evolve->add_option("--chi-n-t", chi_n_t, "dimensionless duration chi N t")
      ->capture_default_str();
  cmd_evolve->add_option("--samples", samples, "trajectory samples")
      ->capture_default_str();

  auto* cmd_squeeze =
      app.add_subcommand("squeeze", "squeezing-parameter curves (exact backend)");

  auto* cmd_scenario = app.add_subcommand("scenario", "named measurement scenario");
  std::string scenario_name;
  cmd_scenario
      ->add_option("name", scenario_name, "fig1e|fig2-oatz|fig2-tact|fig2-oatx|"
                                          "fig3-saddle|fig4-hprime|stability|squeeze")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_couplings->parsed()) {
      const auto cfg = load_config(args);
      const auto report = cxyz::scenarios::couplings_report(cfg);
      std::filesystem::create_directories(args.out_dir);
      const auto path = std::filesystem::path(args.out_dir) / "couplings.json";
      cxyz::io::write_json_file(path, report);
      std::cout << report.dump(2) << "\n" << path.string() << "\n";
    } else if (cmd_flowmap->parsed()) {
      const auto cfg = load_config(args);
      const auto spec = cfg.eom_spec();
      cxyz::meanfield::FlowGrid grid;
      grid.resolution = resolution;
      if (projection == "polar-south")
        grid.projection = cxyz::meanfield::Projection::PolarSouth;
      else if (projection == "polar-north")
        grid.projection = cxyz::meanfield::Projection::PolarNorth;
      else if (projection == "saddle-window")
        grid.projection = cxyz::meanfield::Projection::SaddleWindow;
      else
        grid.projection = cxyz::meanfield::Projection::Equirect;
      const double dt = chi_n_dt / (spec.chi_scale() * cfg.n_atoms);
      const auto samples_out =
          cxyz::meanfield::flow_map(spec, grid, dt, cfg.n_atoms);
      const auto table =
          cxyz::scenarios::flow_table(samples_out, 0.5 * cfg.n_atoms);
      std::filesystem::create_directories(args.out_dir);
      const auto ext = args.format == "json" ? ".json" : ".csv";
      const auto path = std::filesystem::path(args.out_dir) / ("flowmap" + std::string(ext));
      if (args.format == "json")
        cxyz::io::write_json_file(path, table.to_json());
      else
        cxyz::io::write_text_file(path, table.to_csv());
      std::cout << path.string() << "\n";
    } else if (cmd_fixed->parsed()) {
      const auto cfg = load_config(args);
      const auto report =
          cxyz::scenarios::fixed_point_report(cfg.eom_spec(), cfg.n_atoms);
      std::filesystem::create_directories(args.out_dir);
      const auto path = std::filesystem::path(args.out_dir) / "fixed_points.json";
      cxyz::io::write_json_file(path, report);
      std::cout << report.dump(2) << "\n" << path.string() << "\n";
    } else if (cmd_spectroscopy->parsed()) {
      const auto cfg = load_config(args);
      report_files(cxyz::scenarios::run_scenario("fig1e", cfg,
                                                 scenario_options(args)));
    } else if (cmd_evolve->parsed()) {
      const auto cfg = load_config(args);
      const auto spec = cfg.eom_spec();
      const double duration = chi_n_t / (spec.chi_scale() * cfg.n_atoms);
      const double j = 0.5 * cfg.n_atoms;
      cxyz::io::Table table({"t_s", "jx", "jy", "jz", "norm_over_j"},
                            {"angles: rad; file frequencies: Hz",
                             "spin components in units of J = N/2"});
      if (cfg.backend == cxyz::config::Backend::Exact) {
        const cxyz::dicke::DickeBasis basis(cfg.n_atoms);
        const auto h = cxyz::dicke::build_xyz_hamiltonian(spec.xyz, basis);
        const cxyz::dicke::UnitaryPropagator prop(h);
        const auto psi0 = cxyz::dicke::coherent_state(basis, theta0, phi0);
        for (int i = 0; i <= samples; ++i) {
          const double t = duration * i / samples;
          const auto state = cxyz::dicke::DickeState::pure(
              basis, prop.apply(psi0.psi, t));
          const auto m = cxyz::dicke::spin_moments(state);
          table.add_row({t, m.mean.x() / j, m.mean.y() / j, m.mean.z() / j,
                         m.mean.norm() / j});
        }
      } else {
        const cxyz::meanfield::BlochState j0 =
            cxyz::meanfield::BlochState::from_angles(theta0, phi0, j);
        const auto traj = spec.resonant()
                              ? cxyz::meanfield::integrate(spec, j0, duration,
                                                           1e-10, samples)
                              : cxyz::meanfield::integrate_time_dependent(
                                    spec, j0, duration, 1e-10, samples);
        for (const auto& p : traj)
          table.add_row({p.t, p.j.x() / j, p.j.y() / j, p.j.z() / j,
                         p.j.norm() / j});
      }
      std::filesystem::create_directories(args.out_dir);
      const auto ext = args.format == "json" ? ".json" : ".csv";
      const auto path =
          std::filesystem::path(args.out_dir) / ("trajectory" + std::string(ext));
      if (args.format == "json")
        cxyz::io::write_json_file(path, table.to_json());
      else
        cxyz::io::write_text_file(path, table.to_csv());
      std::cout << path.string() << "\n";
    } else if (cmd_squeeze->parsed()) {
      const auto cfg = load_config(args);
      report_files(cxyz::scenarios::run_scenario("squeeze", cfg,
                                                 scenario_options(args)));
    } else if (cmd_scenario->parsed()) {
      cxyz::config::RunConfig cfg;
      if (args.config_path.empty()) {
        // scenario names double as presets
        cxyz::config::Json preset;
        preset["preset"] = scenario_name;
        cfg = cxyz::config::parse_config(preset.dump());
      } else {
        cfg = load_config(args);
      }
      report_files(
          cxyz::scenarios::run_scenario(scenario_name, cfg, scenario_options(args)));
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
