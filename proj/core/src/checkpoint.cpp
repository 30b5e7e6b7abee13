#include "cotenqu/checkpoint.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cotenqu/error.hpp"

namespace cotenqu {
namespace {

using nlohmann::json;

constexpr const char* kFormatName = "cotenqu-checkpoint";

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& cp) {
  const ModelState& m = cp.model;
  json j;
  j["format"] = kFormatName;
  j["version"] = kCheckpointVersion;
  // the output directory is where a run happened to write, not model state
  RunConfig echo = cp.config;
  echo.out_dir = ".";
  j["config"] = format_config(echo);

  json circuit;
  circuit["register_qubits"] = m.circuit.register_qubits;
  circuit["layers"] = json::array();
  for (LayerKind k : m.circuit.layers) circuit["layers"].push_back(std::string(to_string(k)));
  j["circuit"] = circuit;
  j["num_classes"] = m.num_classes;
  j["output_scaling"] = std::string(to_string(m.output_scaling));
  j["circuit_params"] = m.circuit_params;

  json mps;
  mps["num_sites"] = m.mps.num_sites();
  mps["bond_dim"] = m.mps.bond_dim();
  mps["n_out"] = m.mps.n_out();
  mps["output_site"] = m.mps.output_site();
  mps["tensors"] = json::array();
  for (std::size_t i = 0; i < m.mps.num_sites(); ++i) {
    json t;
    t["shape"] = m.mps.site_shape(i);
    t["values"] = m.mps.tensors()[i];
    mps["tensors"].push_back(std::move(t));
  }
  j["mps"] = std::move(mps);

  j["normalization"] = {{"min", cp.normalizer.minimum()}, {"max", cp.normalizer.maximum()}};
  j["rng"] = {{"seed", cp.config.seed}};
  return j.dump(1) + "\n";
}

Checkpoint parse_checkpoint(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kFormatName) {
      throw LoadError("not a checkpoint file");
    }
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw LoadError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kCheckpointVersion) + ")");
    }
    Checkpoint cp;
    try {
      cp.config = parse_config(j.at("config").get<std::string>());
    } catch (const ConfigError& e) {
      throw LoadError(std::string("embedded config: ") + e.what());
    }

    ModelState& m = cp.model;
    const json& circuit = j.at("circuit");
    m.circuit.register_qubits = circuit.at("register_qubits").get<std::size_t>();
    for (const auto& layer : circuit.at("layers")) {
      m.circuit.layers.push_back(parse_layer_kind(layer.get<std::string>()));
    }
    m.num_classes = j.at("num_classes").get<std::size_t>();
    const auto scaling = j.at("output_scaling").get<std::string>();
    if (scaling == "normalized") m.output_scaling = OutputScaling::kNormalized;
    else if (scaling == "raw") m.output_scaling = OutputScaling::kRaw;
    else throw LoadError("unknown output_scaling '" + scaling + "'");
    m.circuit_params = j.at("circuit_params").get<std::vector<std::vector<double>>>();

    const json& mps = j.at("mps");
    const auto num_sites = mps.at("num_sites").get<std::size_t>();
    m.mps = MpsModel(num_sites, mps.at("bond_dim").get<std::size_t>(),
                     mps.at("n_out").get<std::size_t>());
    if (mps.at("output_site").get<std::size_t>() != m.mps.output_site()) {
      throw LoadError("output site does not match the chain length");
    }
    const json& tensors = mps.at("tensors");
    if (tensors.size() != num_sites) throw LoadError("tensor count does not match num_sites");
    std::vector<std::vector<double>> values(num_sites);
    for (std::size_t i = 0; i < num_sites; ++i) {
      if (tensors[i].at("shape").get<std::vector<std::size_t>>() != m.mps.site_shape(i)) {
        throw LoadError("site " + std::to_string(i) + " has an unexpected shape");
      }
      values[i] = tensors[i].at("values").get<std::vector<double>>();
    }
    m.mps.set_tensors(std::move(values));
    m.validate();

    const json& norm = j.at("normalization");
    cp.normalizer = Normalizer(norm.at("min").get<std::vector<double>>(),
                               norm.at("max").get<std::vector<double>>());
    if (cp.normalizer.dimension() != num_sites) {
      throw LoadError("normalization dimension does not match the MPS");
    }
    if (cp.config.circuit() != m.circuit || cp.config.classes.size() != m.num_classes ||
        cp.config.bond_dim != m.mps.bond_dim()) {
      throw LoadError("embedded config disagrees with the stored model");
    }
    return cp;
  } catch (const LoadError&) {
    throw;
  } catch (const std::exception& e) {
    throw LoadError(std::string("corrupt checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write checkpoint " + path.string());
  out << serialize_checkpoint(checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

std::string format_metrics(std::span<const LossRecord> records) {
  std::string out = "# cotenqu-metrics v" + std::to_string(kMetricsVersion) + "\n";
  out += "epoch\tmean_cost\ttrain_accuracy\ttest_accuracy\n";
  for (const auto& r : records) {
    out += std::to_string(r.epoch) + '\t' + format_double(r.mean_cost) + '\t' +
           format_double(r.train_accuracy) + '\t' + format_double(r.test_accuracy) + '\n';
  }
  return out;
}

}  // namespace cotenqu
