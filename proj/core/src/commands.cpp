#include "cotenqu/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "cotenqu/error.hpp"

namespace cotenqu {
namespace {

int original_label(const std::map<int, int>& class_map, int index) {
  for (const auto& [orig, idx] : class_map)
    if (idx == index) return orig;
  return -1;
}

std::map<int, int> class_map_of(const std::vector<int>& classes) {
  std::map<int, int> m;
  std::vector<int> sorted = classes;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) m[sorted[i]] = static_cast<int>(i);
  return m;
}

/// Runs `body`, mapping library errors onto the exit-code taxonomy.
template <typename F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const FormatError& e) {
    log << "data error (" << e.field() << "): " << e.what() << '\n';
    return kExitDataError;
  } catch (const LoadError& e) {
    log << "load error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const TrainingError& e) {
    log << "training error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

void require_dataset(const RunConfig& config) {
  if (!std::filesystem::exists(config.images_path())) {
    throw ConfigError("dataset file not found: " + config.images_path().string());
  }
  if (!std::filesystem::exists(config.labels_path())) {
    throw ConfigError("dataset file not found: " + config.labels_path().string());
  }
}

const std::vector<LabeledImage>& pick(const DatasetSplit& split, SplitChoice choice,
                                      std::vector<LabeledImage>& scratch) {
  switch (choice) {
    case SplitChoice::kTrain: return split.train;
    case SplitChoice::kTest: return split.test;
    case SplitChoice::kAll: break;
  }
  scratch = split.train;
  scratch.insert(scratch.end(), split.test.begin(), split.test.end());
  return scratch;
}

std::string_view split_name(SplitChoice choice) {
  switch (choice) {
    case SplitChoice::kTrain: return "train";
    case SplitChoice::kTest: return "test";
    case SplitChoice::kAll: return "all";
  }
  return "?";
}

/// Reloads the split a checkpoint was trained on, optionally from another
/// directory.
DatasetSplit reload_split(const Checkpoint& cp,
                          const std::optional<std::filesystem::path>& data_dir) {
  RunConfig config = cp.config;
  if (data_dir) config.data_dir = *data_dir;
  require_dataset(config);
  const auto images = load_idx(config.images_path(), config.labels_path());
  SplitOptions options{config.test_fraction, config.train_cap, config.test_cap, config.seed};
  return split_and_cap(filter_classes(images, config.classes), options);
}

}  // namespace

std::vector<Sample> to_samples(std::span<const LabeledImage> images,
                               const Normalizer& normalizer) {
  std::vector<Sample> out;
  out.reserve(images.size());
  for (const auto& im : images) {
    out.push_back(Sample{normalizer.apply(pixel_vector(im)), im.label});
  }
  return out;
}

PreparedData prepare_data(const RunConfig& config) {
  config.validate();
  require_dataset(config);
  const auto images = load_idx(config.images_path(), config.labels_path());
  PreparedData data;
  SplitOptions options{config.test_fraction, config.train_cap, config.test_cap, config.seed};
  data.split = split_and_cap(filter_classes(images, config.classes), options);
  if (data.split.train.empty()) throw ArgumentError("training split is empty");
  std::vector<std::vector<double>> raw;
  raw.reserve(data.split.train.size());
  for (const auto& im : data.split.train) raw.push_back(pixel_vector(im));
  data.normalizer = Normalizer::fit(raw);
  data.train = to_samples(data.split.train, data.normalizer);
  data.test = to_samples(data.split.test, data.normalizer);
  return data;
}

int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const PreparedData data = prepare_data(config);
    for (const auto& w : data.split.warnings) log << "warning: " << w << '\n';
    log << "train " << data.train.size() << " / test " << data.test.size() << " samples, "
        << config.classes.size() << " classes\n";

    Checkpoint cp;
    cp.config = config;
    cp.normalizer = data.normalizer;
    cp.model = ModelState::initialize(kImagePixels, config.bond_dim, config.circuit(),
                                      config.classes.size(), config.seed, config.output_scaling);

    const auto records = train(cp.model, data.train, data.test, config.train_config(),
                               [&log](const LossRecord& r) {
                                 log << "epoch " << r.epoch << "  cost " << r.mean_cost
                                     << "  train " << r.train_accuracy << "  test "
                                     << r.test_accuracy << '\n';
                               });

    std::filesystem::create_directories(config.out_dir);
    const auto checkpoint_path = config.out_dir / "checkpoint.json";
    const auto metrics_path = config.out_dir / "metrics.tsv";
    save_checkpoint(checkpoint_path, cp);
    std::ofstream metrics(metrics_path, std::ios::binary);
    if (!metrics) throw ConfigError("cannot write " + metrics_path.string());
    metrics << format_metrics(records);

    out << "checkpoint: " << checkpoint_path.string() << '\n'
        << "metrics: " << metrics_path.string() << '\n';
    if (!records.empty()) {
      out << "final test accuracy: " << records.back().test_accuracy << '\n';
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_eval(const std::filesystem::path& checkpoint,
             const std::optional<std::filesystem::path>& data_dir, SplitChoice split,
             std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const Checkpoint cp = load_checkpoint(checkpoint);
    const DatasetSplit ds = reload_split(cp, data_dir);
    std::vector<LabeledImage> scratch;
    const auto samples = to_samples(pick(ds, split, scratch), cp.normalizer);
    const Evaluation ev = evaluate(cp.model, samples);
    const auto class_map = class_map_of(cp.config.classes);

    out << "split: " << split_name(split) << " (" << samples.size() << " samples)\n";
    out << "accuracy: " << std::setprecision(17) << ev.accuracy << '\n';
    out << "mean_cost: " << ev.mean_cost << '\n';
    out << "confusion (rows = true, columns = predicted):\n";
    out << "true\\pred";
    for (std::size_t c = 0; c < ev.confusion.size(); ++c) {
      out << '\t' << original_label(class_map, static_cast<int>(c));
    }
    out << '\n';
    for (std::size_t r = 0; r < ev.confusion.size(); ++r) {
      out << original_label(class_map, static_cast<int>(r));
      for (std::size_t c = 0; c < ev.confusion[r].size(); ++c) out << '\t' << ev.confusion[r][c];
      out << '\n';
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_predict(const std::filesystem::path& checkpoint, std::size_t index,
                const std::optional<std::filesystem::path>& data_dir, SplitChoice split,
                std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const Checkpoint cp = load_checkpoint(checkpoint);
    const DatasetSplit ds = reload_split(cp, data_dir);
    std::vector<LabeledImage> scratch;
    const auto& images = pick(ds, split, scratch);
    if (index >= images.size()) {
      log << "argument error: index " << index << " outside the " << split_name(split)
          << " split (" << images.size() << " images)\n";
      return static_cast<int>(kExitConfigError);
    }
    const auto features = cp.normalizer.apply(pixel_vector(images[index]));
    const Prediction p = predict(cp.model, features);
    const auto class_map = class_map_of(cp.config.classes);

    out << std::setprecision(17);
    out << "index: " << index << " (" << split_name(split) << ")\n";
    out << "true label: " << original_label(class_map, images[index].label) << '\n';
    out << "predicted: " << original_label(class_map, p.label) << '\n';
    if (cp.model.is_binary()) {
      out << "score: " << p.scores[0] << " (threshold 0.5: below -> "
          << original_label(class_map, 0) << ", otherwise " << original_label(class_map, 1)
          << ")\n";
    } else {
      for (std::size_t c = 0; c < p.scores.size(); ++c) {
        out << "class " << original_label(class_map, static_cast<int>(c))
            << ": fidelity " << p.scores[c] << "  probability " << p.probabilities[c] << '\n';
      }
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_inspect(const std::filesystem::path& checkpoint, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const Checkpoint cp = load_checkpoint(checkpoint);
    const ModelState& m = cp.model;
    std::string layers;
    for (std::size_t i = 0; i < m.circuit.layers.size(); ++i) {
      layers += (i ? ", " : "") + std::string(to_string(m.circuit.layers[i]));
    }
    std::string classes;
    for (std::size_t i = 0; i < cp.config.classes.size(); ++i) {
      classes += (i ? "," : "") + std::to_string(cp.config.classes[i]);
    }
    const std::size_t per_circuit = parameter_count(m.circuit);
    out << "classes: " << classes << (m.is_binary() ? " (binary)" : " (multi-class)") << '\n'
        << "qubits: " << m.circuit.data_qubits() << " data + " << m.circuit.trained_qubits()
        << " trained + 1 ancilla = " << m.circuit.total_qubits() << '\n'
        << "layers: " << layers << '\n'
        << "circuits: " << m.num_circuits() << '\n'
        << "quantum parameters per circuit: " << per_circuit << '\n'
        << "quantum parameters total: " << per_circuit * m.num_circuits() << '\n'
        << "tn tensors: " << m.mps.num_sites() << '\n'
        << "tn bond dimension: " << m.mps.bond_dim() << '\n'
        << "tn output dimension: " << m.mps.n_out() << '\n'
        << "tn parameters: " << m.mps.parameter_count() << '\n'
        << "tn output scaling: " << to_string(m.output_scaling) << '\n'
        << "seed: " << cp.config.seed << '\n';
    return static_cast<int>(kExitOk);
  });
}

}  // namespace cotenqu
