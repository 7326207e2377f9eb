#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cxyz/couplings.hpp"
#include "cxyz/meanfield.hpp"

namespace cxyz::config {

using Json = nlohmann::ordered_json;

enum class Backend { MeanField, Exact };
enum class GammaPolicy { Computed, Zeroed };
enum class Sidebands { Two, Three };

struct ScanBlock {
  std::string variable;        // "delta" | "theta_i" | "phi_i"
  std::vector<double> values;  // Hz for delta, radians for angles
  double theta_i = 0.7853981633974483;  // pi/4
  double phi_i = 1.5707963267948966;    // pi/2
};

// Parsed, validated run configuration. All frequencies are angular (rad/s);
// the Hz -> angular conversion happens here and only here.
struct RunConfig {
  int n_atoms = 700;

  double g0 = 0.0;       // rad/s
  double kappa = 0.0;    // rad/s
  double delta_a = 0.0;  // rad/s
  double omega_z = 0.0;  // rad/s

  struct Tone {
    double detuning = 0.0;   // rad/s, sideband detuning from cavity resonance
    double amplitude = 1.0;  // sqrt(photons)
    double phase = 0.0;      // rad
  };
  std::array<Tone, 2> tones;

  double delta = 0.0;     // rad/s four-photon detuning
  double phi_int = 0.0;   // rad
  double duration = 0.0;  // s

  Backend backend = Backend::MeanField;
  GammaPolicy gamma_policy = GammaPolicy::Computed;
  Sidebands sidebands = Sidebands::Two;

  std::optional<ScanBlock> scan;

  // normalized configuration (plain-Hz units) for report round-trips
  Json normalized;

  couplings::CavityParams cavity_params() const;
  couplings::ToneSet tone_set() const;
  couplings::CouplingOptions coupling_options() const;
  // coupling constants and the resonant mean-field spec implied by the config
  couplings::CouplingSet coupling_set() const;
  meanfield::EOMSpec eom_spec(double chi_z_gauge = 0.0) const;
};

// Structured parse failure carrying the offending config path.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path(path) {}
  std::string path;
};

// Default configuration (the published cavity numbers).
Json default_config();

// Named parameter presets layered over the defaults; unknown name throws.
// Names: fig1e, fig2-oatz, fig2-tact, fig2-oatx, fig3-saddle, fig4-hprime,
// stability, squeeze.
Json preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Parses JSON text (empty text = all defaults). Unknown keys, wrong types,
// non-finite numbers and invalid physical values are rejected with the JSON
// path in the message. A top-level "preset" string applies the named preset
// beneath the file's explicit values.
RunConfig parse_config(const std::string& text);

// Environment overrides: CXYZ_<PATH> with '_'-joined upper-case path
// (CXYZ_ATOMS_N, CXYZ_CAVITY_KAPPA_HZ, CXYZ_TONES_0_AMPLITUDE_SQRTPHOTONS,
// CXYZ_MODEL_BACKEND, ...). Scalar keys only. `getenv` defaults to the
// process environment; injectable for tests.
RunConfig parse_config_with_env(
    const std::string& text,
    const std::function<const char*(const char*)>& getenv_fn);

}  // namespace cxyz::config
