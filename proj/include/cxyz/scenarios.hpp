#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cxyz/config.hpp"
#include "cxyz/io.hpp"
#include "cxyz/meanfield.hpp"

namespace cxyz::scenarios {

struct ScenarioOptions {
  std::filesystem::path out_dir = "out";
  std::string format = "csv";  // grid/scan tables: "csv" or "json"
  std::uint64_t seed = 0;
};

// Deterministic scenario runners reproducing the standard measurement
// configurations. Returns the list of files written.
std::vector<std::filesystem::path> run_scenario(const std::string& name,
                                                const config::RunConfig& cfg,
                                                const ScenarioOptions& opts);

std::vector<std::string> scenario_names();

// --- shared report builders (also used by the CLI subcommands) ---

// Coupling constants implied by a configuration, reported in plain Hz.
io::Json couplings_report(const config::RunConfig& cfg);

// Fixed-point census for a resonant spec at J = N/2.
io::Json fixed_point_report(const meanfield::EOMSpec& spec, int n_atoms);

// Flow-map samples as the standard grid table
// (theta_i, phi_i, jx_i, jy_i, jz_i, tx, ty, tz, dtheta, dphi).
io::Table flow_table(const std::vector<meanfield::FlowSample>& samples,
                     double spin_j);

// Least-squares fit of y = a1 x + a3 x^3 returning a1 (slope at the origin).
double odd_cubic_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cxyz::scenarios
