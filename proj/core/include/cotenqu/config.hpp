#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cotenqu/circuit.hpp"
#include "cotenqu/training.hpp"

namespace cotenqu {

/// Environment variable naming the default dataset directory.
inline constexpr const char* kDataDirEnv = "COTENQU_DATA_DIR";

enum class ReadoutMode { kExact, kShots };

/// Everything a training run needs. Read from `key = value` text files;
/// see docs/formats.md for the key list.
struct RunConfig {
  std::filesystem::path data_dir;
  std::string images_file = "train-images-idx3-ubyte";
  std::string labels_file = "train-labels-idx1-ubyte";
  std::vector<int> classes = {1, 5};

  std::vector<LayerKind> layers = {LayerKind::kSingle, LayerKind::kDual, LayerKind::kEntangle};
  std::size_t n_out = 4;
  std::size_t bond_dim = 4;
  OutputScaling output_scaling = OutputScaling::kNormalized;

  double learning_rate = 1e-4;
  std::optional<double> tn_learning_rate;
  std::size_t epochs = 40;
  ShiftMode shift_mode = ShiftMode::kFixedHalfPi;
  MulticlassUpdate multiclass_update = MulticlassUpdate::kAllCircuits;
  ReadoutMode readout = ReadoutMode::kExact;
  std::uint64_t shots = 8192;
  std::uint64_t seed = 0;

  double test_fraction = 0.2;
  std::size_t train_cap = 500;
  std::size_t test_cap = 200;

  std::filesystem::path out_dir = ".";

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  CircuitSpec circuit() const;
  TrainConfig train_config() const;

  std::filesystem::path images_path() const { return data_dir / images_file; }
  std::filesystem::path labels_path() const { return data_dir / labels_file; }

  bool operator==(const RunConfig&) const = default;
};

/// Applies one `key = value` setting. ConfigError for unknown keys or
/// unparsable values.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Parses the text of a config file on top of `base`.
RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Reads a config file. data_dir defaults to $COTENQU_DATA_DIR when unset.
RunConfig load_config(const std::filesystem::path& path);

/// Canonical `key = value` rendering; parse_config(format_config(c)) == c.
std::string format_config(const RunConfig& config);

std::vector<int> parse_int_list(std::string_view text);

}  // namespace cotenqu
