#include "chancert/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chancert/errors.hpp"

namespace chancert {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

FiberSpec fiber_preset(const std::string& name) {
  if (name == "paper-2m") return FiberSpec::paper_2m();
  if (name == "paper-5m") return FiberSpec::paper_5m();
  throw ConfigError("unknown fiber preset '" + name + "' (expected paper-2m or paper-5m)");
}

NoiseModel noise_preset(const std::string& name) {
  if (name == "none") return NoiseModel::none_model();
  if (name == "paper-2m") return NoiseModel::paper_2m();
  if (name == "paper-5m") return NoiseModel::paper_5m();
  throw ConfigError("unknown noise preset '" + name + "' (expected none, paper-2m or paper-5m)");
}

FiberSpec parse_fiber(const json& node, std::string& name_out) {
  if (node.is_string()) {
    name_out = node.get<std::string>();
    return fiber_preset(name_out);
  }
  if (!node.is_object()) throw ConfigError("'fiber' must be a preset name or an object");
  reject_unknown_keys(node,
                      {"preset", "length_m", "core_radius_m", "n_core", "numerical_aperture",
                       "alpha", "center_wavelength_m", "bandwidth_m", "num_wavelengths", "sigma_m"},
                      "'fiber'");
  FiberSpec spec;
  if (node.contains("preset")) {
    name_out = node.at("preset").get<std::string>();
    spec = fiber_preset(name_out);
    name_out += "*";  // preset with overrides
  } else {
    name_out = "inline";
    const char* required[] = {"length_m", "core_radius_m", "n_core", "numerical_aperture",
                              "center_wavelength_m", "bandwidth_m", "num_wavelengths", "sigma_m"};
    for (const char* key : required)
      if (!node.contains(key)) throw ConfigError(std::string("inline 'fiber' is missing '") + key + "'");
  }
  auto fetch = [&node](const char* key, auto& field) {
    if (node.contains(key)) field = node.at(key).get<std::decay_t<decltype(field)>>();
  };
  fetch("length_m", spec.length_m);
  fetch("core_radius_m", spec.core_radius_m);
  fetch("n_core", spec.n_core);
  fetch("numerical_aperture", spec.numerical_aperture);
  fetch("alpha", spec.alpha);
  fetch("center_wavelength_m", spec.center_wavelength_m);
  fetch("bandwidth_m", spec.bandwidth_m);
  fetch("num_wavelengths", spec.num_wavelengths);
  fetch("sigma_m", spec.sigma_m);
  return spec;
}

NoiseModel parse_noise(const json& node) {
  if (node.is_string()) return noise_preset(node.get<std::string>());
  if (!node.is_object()) throw ConfigError("'noise' must be a preset name or an object");
  reject_unknown_keys(node, {"kind", "p", "a", "b", "c"}, "'noise'");
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "none") return NoiseModel::none_model();
  if (kind == "fixed_p") {
    const double p = node.at("p").get<double>();
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError("'noise.p' must lie in [0, 1], got " + std::to_string(p));
    return NoiseModel::fixed(p);
  }
  if (kind == "quadratic_p") {
    return NoiseModel::quadratic(node.at("a").get<double>(), node.at("b").get<double>(),
                                 node.at("c").get<double>());
  }
  throw ConfigError("unknown noise kind '" + kind + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (dims.empty()) throw ConfigError("'dims' must not be empty");
  for (int d : dims)
    if (d < 2) throw ConfigError("'dims' entries must be >= 2, got " + std::to_string(d));
  for (int m : mub_m)
    if (m != kFullMubSet && m < 2)
      throw ConfigError("'mub_m' entries must be >= 2 or \"d+1\"");
  if (mub_m.empty()) throw ConfigError("'mub_m' must not be empty");
  if (witnesses.empty()) throw ConfigError("'witnesses' must not be empty");
  if (fit_iters < 1) throw ConfigError("'fit_iters' must be >= 1");
  if (num_probes < 0) throw ConfigError("'num_probes' must be >= 0");
  try {
    fiber.validate();
  } catch (const std::invalid_argument& error) {
    throw ConfigError(std::string("invalid fiber parameters: ") + error.what());
  }
}

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str(), path.string());
}

RunConfig RunConfig::from_json_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& error) {
    throw ConfigError(origin + ": " + error.what());
  }
  if (!root.is_object()) throw ConfigError(origin + ": top level must be a JSON object");

  try {
    reject_unknown_keys(root,
                        {"schema_version", "fiber", "estimator", "witnesses", "mub_m", "dims",
                         "noise", "seed", "output_dir", "num_probes", "fit_iters", "input_csv"},
                        "config");
    if (!root.contains("schema_version"))
      throw ConfigError("config is missing 'schema_version'");
    if (root.at("schema_version").get<int>() != 1)
      throw ConfigError("unsupported schema_version (expected 1)");

    RunConfig config;
    if (root.contains("fiber")) config.fiber = parse_fiber(root.at("fiber"), config.fiber_name);
    if (root.contains("estimator")) {
      const std::string name = root.at("estimator").get<std::string>();
      if (name == "spectral_mean")
        config.estimator = TmEstimator::spectral_mean;
      else if (name == "intensity_fit")
        config.estimator = TmEstimator::intensity_fit;
      else
        throw ConfigError("unknown estimator '" + name + "'");
    }
    if (root.contains("witnesses")) {
      config.witnesses.clear();
      for (const auto& entry : root.at("witnesses"))
        config.witnesses.push_back(witness_from_name(entry.get<std::string>()));
    }
    if (root.contains("mub_m")) {
      config.mub_m.clear();
      for (const auto& entry : root.at("mub_m")) {
        if (entry.is_string()) {
          if (entry.get<std::string>() != "d+1")
            throw ConfigError("'mub_m' string entries must be \"d+1\"");
          config.mub_m.push_back(kFullMubSet);
        } else {
          config.mub_m.push_back(entry.get<int>());
        }
      }
    }
    if (root.contains("dims")) config.dims = root.at("dims").get<std::vector<int>>();
    if (root.contains("noise")) config.noise = parse_noise(root.at("noise"));
    if (root.contains("seed")) config.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("output_dir"))
      config.output_dir = root.at("output_dir").get<std::string>();
    if (root.contains("num_probes")) config.num_probes = root.at("num_probes").get<int>();
    if (root.contains("fit_iters")) config.fit_iters = root.at("fit_iters").get<int>();
    if (root.contains("input_csv")) config.input_csv = root.at("input_csv").get<std::string>();

    config.validate();
    return config;
  } catch (const json::exception& error) {
    throw ConfigError(origin + ": " + error.what());
  }
}

}  // namespace chancert
