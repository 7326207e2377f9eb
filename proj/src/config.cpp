#include "cxyz/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include "cxyz/units.hpp"

namespace cxyz::config {

namespace {

const double kTactRatio = (std::sqrt(2.0) - 1.0) / (std::sqrt(2.0) + 1.0);

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

double finite_number(const Json& j, const std::string& path) {
  require(j.is_number(), path, "expected a number");
  const double v = j.get<double>();
  require(std::isfinite(v), path, "value must be finite");
  return v;
}

// Recursive structural merge of `patch` into `base`: every key in the patch
// must already exist in the base schema with a compatible shape.
void merge_checked(Json& base, const Json& patch, const std::string& path) {
  require(patch.is_object(), path, "expected an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string child = path + "/" + key;
    require(base.contains(key), child, "unknown key");
    Json& slot = base[key];
    if (slot.is_object()) {
      merge_checked(slot, value, child);
    } else if (slot.is_array() && !slot.empty() && slot[0].is_object()) {
      require(value.is_array(), child, "expected an array");
      require(value.size() == slot.size(), child,
              "expected exactly " + std::to_string(slot.size()) + " entries");
      for (size_t i = 0; i < value.size(); ++i)
        merge_checked(slot[i], value[i], child + "/" + std::to_string(i));
    } else {
      slot = value;
    }
  }
}

}  // namespace

Json default_config() {
  Json cfg;
  cfg["atoms"] = {{"n", 700}};
  cfg["cavity"] = {{"g0_hz", 0.48e6},
                   {"kappa_hz", 56e3},
                   {"delta_a_hz", 500e6},
                   {"omega_z_hz", 500e3}};
  // two dressing tones at the average detuning of the standard configuration
  cfg["tones"] = Json::array({Json{{"detuning_hz", -200e3},
                                   {"amplitude_sqrtphotons", 1.0},
                                   {"phase_rad", 0.0}},
                              Json{{"detuning_hz", -200e3},
                                   {"amplitude_sqrtphotons", 1.0},
                                   {"phase_rad", 0.0}}});
  cfg["interaction"] = {{"delta_hz", 0.0}, {"phi_int_rad", 0.0},
                        {"duration_s", 50e-6}};
  cfg["model"] = {{"backend", "meanfield"},
                  {"gamma_policy", "computed"},
                  {"sidebands", "two"}};
  cfg["scan"] = nullptr;
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"fig1e",      "fig2-oatz", "fig2-tact", "fig2-oatx",
          "fig3-saddle", "fig4-hprime", "stability", "squeeze"};
}

Json preset_config(const std::string& name) {
  Json cfg = default_config();
  auto& tones = cfg["tones"];
  if (name == "fig1e" || name == "fig2-oatx") {
    // equal amplitudes: chi_e = chi_P, pure Jx^2 twisting on resonance
    tones[0]["amplitude_sqrtphotons"] = 1.0;
    tones[1]["amplitude_sqrtphotons"] = 1.0;
    if (name == "fig2-oatx") cfg["model"]["gamma_policy"] = "zeroed";
  } else if (name == "fig2-oatz") {
    tones[1]["amplitude_sqrtphotons"] = 0.0;
    cfg["model"]["gamma_policy"] = "zeroed";
  } else if (name == "fig2-tact") {
    tones[1]["amplitude_sqrtphotons"] = kTactRatio;
    cfg["model"]["gamma_policy"] = "zeroed";
  } else if (name == "fig3-saddle") {
    tones[1]["amplitude_sqrtphotons"] = kTactRatio;
  } else if (name == "fig4-hprime") {
    // both tones on the same side above resonance; the amplitude ratio that
    // nulls the exchange sum is solved at run time
    tones[0]["detuning_hz"] = 700e3;
    tones[1]["detuning_hz"] = 700e3;
    cfg["model"]["sidebands"] = "three";
    cfg["model"]["gamma_policy"] = "zeroed";
  } else if (name == "stability") {
    tones[1]["amplitude_sqrtphotons"] = kTactRatio;
  } else if (name == "squeeze") {
    cfg["atoms"]["n"] = 100;
    cfg["model"]["backend"] = "exact";
    tones[1]["amplitude_sqrtphotons"] = kTactRatio;
  } else {
    throw ConfigError("/preset", "unknown preset '" + name + "'");
  }
  return cfg;
}

namespace {

RunConfig materialize(const Json& cfg) {
  RunConfig out;
  out.normalized = cfg;

  const auto& atoms = cfg["atoms"];
  require(atoms["n"].is_number_integer(), "/atoms/n", "expected an integer");
  out.n_atoms = atoms["n"].get<int>();
  require(out.n_atoms >= 1, "/atoms/n", "need at least one atom");

  const auto& cav = cfg["cavity"];
  const double g0_hz = finite_number(cav["g0_hz"], "/cavity/g0_hz");
  const double kappa_hz = finite_number(cav["kappa_hz"], "/cavity/kappa_hz");
  const double delta_a_hz = finite_number(cav["delta_a_hz"], "/cavity/delta_a_hz");
  const double omega_z_hz = finite_number(cav["omega_z_hz"], "/cavity/omega_z_hz");
  require(g0_hz > 0.0, "/cavity/g0_hz", "must be positive");
  require(kappa_hz > 0.0, "/cavity/kappa_hz", "must be positive");
  require(omega_z_hz > 0.0, "/cavity/omega_z_hz", "must be positive");
  require(delta_a_hz != 0.0, "/cavity/delta_a_hz", "must be nonzero");
  if (std::abs(delta_a_hz) < 100.0 * kappa_hz)
    std::cerr << "config: |delta_a| is not large against kappa; dispersive "
                 "elimination is marginal\n";
  out.g0 = hz_to_angular(g0_hz);
  out.kappa = hz_to_angular(kappa_hz);
  out.delta_a = hz_to_angular(delta_a_hz);
  out.omega_z = hz_to_angular(omega_z_hz);

  const auto& tones = cfg["tones"];
  for (int i = 0; i < 2; ++i) {
    const std::string base = "/tones/" + std::to_string(i);
    const auto& tone = tones[i];
    out.tones[i].detuning =
        hz_to_angular(finite_number(tone["detuning_hz"], base + "/detuning_hz"));
    out.tones[i].amplitude = finite_number(tone["amplitude_sqrtphotons"],
                                           base + "/amplitude_sqrtphotons");
    require(out.tones[i].amplitude >= 0.0, base + "/amplitude_sqrtphotons",
            "must be non-negative");
    out.tones[i].phase = finite_number(tone["phase_rad"], base + "/phase_rad");
  }

  const auto& inter = cfg["interaction"];
  out.delta = hz_to_angular(finite_number(inter["delta_hz"], "/interaction/delta_hz"));
  out.phi_int = finite_number(inter["phi_int_rad"], "/interaction/phi_int_rad");
  out.duration = finite_number(inter["duration_s"], "/interaction/duration_s");
  require(out.duration >= 0.0, "/interaction/duration_s", "must be non-negative");

  const auto& model = cfg["model"];
  const std::string backend = model["backend"].get<std::string>();
  if (backend == "meanfield") out.backend = Backend::MeanField;
  else if (backend == "exact") out.backend = Backend::Exact;
  else throw ConfigError("/model/backend", "expected 'meanfield' or 'exact'");

  const std::string gamma = model["gamma_policy"].get<std::string>();
  if (gamma == "computed") out.gamma_policy = GammaPolicy::Computed;
  else if (gamma == "zeroed") out.gamma_policy = GammaPolicy::Zeroed;
  else throw ConfigError("/model/gamma_policy", "expected 'computed' or 'zeroed'");

  const std::string sidebands = model["sidebands"].get<std::string>();
  if (sidebands == "two") out.sidebands = Sidebands::Two;
  else if (sidebands == "three") out.sidebands = Sidebands::Three;
  else throw ConfigError("/model/sidebands", "expected 'two' or 'three'");

  if (!cfg["scan"].is_null()) {
    const auto& scan = cfg["scan"];
    require(scan.is_object(), "/scan", "expected an object or null");
    ScanBlock block;
    require(scan.contains("variable") && scan["variable"].is_string(), "/scan/variable",
            "expected a string");
    block.variable = scan["variable"].get<std::string>();
    require(block.variable == "delta" || block.variable == "theta_i" ||
                block.variable == "phi_i",
            "/scan/variable", "expected 'delta', 'theta_i' or 'phi_i'");
    require(scan.contains("values") && scan["values"].is_array() &&
                !scan["values"].empty(),
            "/scan/values", "expected a non-empty array");
    for (size_t i = 0; i < scan["values"].size(); ++i)
      block.values.push_back(finite_number(scan["values"][i],
                                           "/scan/values/" + std::to_string(i)));
    if (scan.contains("theta_i_rad"))
      block.theta_i = finite_number(scan["theta_i_rad"], "/scan/theta_i_rad");
    if (scan.contains("phi_i_rad"))
      block.phi_i = finite_number(scan["phi_i_rad"], "/scan/phi_i_rad");
    for (const auto& [key, value] : scan.items()) {
      (void)value;
      require(key == "variable" || key == "values" || key == "theta_i_rad" ||
                  key == "phi_i_rad",
              "/scan/" + key, "unknown key");
    }
    out.scan = std::move(block);
  }

  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  return parse_config_with_env(text, [](const char* name) {
    return std::getenv(name);
  });
}

namespace {

// Walks the schema and applies CXYZ_* environment overrides to scalar leaves.
void apply_env(Json& node, const std::string& env_path,
               const std::function<const char*(const char*)>& getenv_fn) {
  if (node.is_object()) {
    for (auto& [key, value] : node.items()) {
      std::string upper = key;
      for (char& c : upper) c = static_cast<char>(std::toupper(c));
      apply_env(value, env_path + "_" + upper, getenv_fn);
    }
    return;
  }
  if (node.is_array()) {
    for (size_t i = 0; i < node.size(); ++i)
      apply_env(node[i], env_path + "_" + std::to_string(i), getenv_fn);
    return;
  }
  const char* raw = getenv_fn(env_path.c_str());
  if (raw == nullptr) return;
  const std::string text(raw);
  Json parsed = Json::parse(text, nullptr, false);
  if (parsed.is_discarded() || parsed.is_string()) {
    node = text;  // bare strings (backend names etc.)
  } else {
    node = parsed;
  }
}

}  // namespace

RunConfig parse_config_with_env(
    const std::string& text,
    const std::function<const char*(const char*)>& getenv_fn) {
  Json base = default_config();

  if (!text.empty()) {
    Json user = Json::parse(text, nullptr, false);
    if (user.is_discarded())
      throw ConfigError("/", "configuration is not valid JSON");
    require(user.is_object(), "/", "expected a JSON object");
    if (user.contains("preset")) {
      require(user["preset"].is_string(), "/preset", "expected a string");
      base = preset_config(user["preset"].get<std::string>());
      user.erase("preset");
    }
    merge_checked(base, user, "");
  }

  apply_env(base, "CXYZ", getenv_fn);
  return materialize(base);
}

couplings::CavityParams RunConfig::cavity_params() const {
  return couplings::CavityParams{g0, kappa, delta_a, omega_z, n_atoms};
}

couplings::ToneSet RunConfig::tone_set() const {
  couplings::ToneSet set;
  set.alpha1 = std::polar(tones[0].amplitude, tones[0].phase);
  set.alpha2 = std::polar(tones[1].amplitude, tones[1].phase);
  set.delta_c1 = tones[0].detuning;
  set.delta_c2 = tones[1].detuning;
  set.phi_int = phi_int;
  return set;
}

couplings::CouplingOptions RunConfig::coupling_options() const {
  couplings::CouplingOptions opts;
  opts.include_kappa = true;
  opts.include_extra_sidebands = sidebands == Sidebands::Three;
  return opts;
}

couplings::CouplingSet RunConfig::coupling_set() const {
  return couplings::coupling_strengths(cavity_params(), tone_set(),
                                       coupling_options());
}

meanfield::EOMSpec RunConfig::eom_spec(double chi_z_gauge) const {
  auto cs = coupling_set();
  const double gamma =
      gamma_policy == GammaPolicy::Computed ? cs.gamma_sr : 0.0;
  meanfield::EOMSpec spec;
  if (delta == 0.0 && phi_int == 0.0) {
    spec.xyz = couplings::xyz_from_couplings(cs, chi_z_gauge);
  } else {
    // time-dependent route: carry the resonant-equivalent couplings plus the
    // rotating-pair parameters
    couplings::CouplingSet resonant = cs;
    resonant.delta = 0.0;
    resonant.chi_p = std::abs(cs.chi_p);
    spec.xyz = couplings::xyz_from_couplings(resonant, chi_z_gauge);
    spec.time_dependent = meanfield::TimeDependentTerms{delta, phi_int};
  }
  spec.gamma_sr = gamma;
  return spec;
}

}  // namespace cxyz::config
