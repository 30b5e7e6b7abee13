#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cotenqu/checkpoint.hpp"
#include "cotenqu/config.hpp"
#include "cotenqu/data.hpp"

namespace cotenqu {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitDataError = 3,
  kExitDivergence = 4,
};

/// Dataset loaded, filtered, split and normalized according to a config.
struct PreparedData {
  DatasetSplit split;
  Normalizer normalizer;
  std::vector<Sample> train;
  std::vector<Sample> test;
};

/// Normalizer statistics come from the training split only.
PreparedData prepare_data(const RunConfig& config);

/// Applies an existing normalizer to a split.
std::vector<Sample> to_samples(std::span<const LabeledImage> images,
                               const Normalizer& normalizer);

enum class SplitChoice { kTrain, kTest, kAll };

/// Trains from scratch and writes <out_dir>/checkpoint.json and
/// <out_dir>/metrics.tsv. Progress goes to `log`.
int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Accuracy and confusion matrix of a checkpoint on a split of the dataset
/// in `data_dir` (defaults to the directory recorded in the checkpoint).
int cmd_eval(const std::filesystem::path& checkpoint,
             const std::optional<std::filesystem::path>& data_dir, SplitChoice split,
             std::ostream& out, std::ostream& log);

/// Classifies one image of the chosen split.
int cmd_predict(const std::filesystem::path& checkpoint, std::size_t index,
                const std::optional<std::filesystem::path>& data_dir, SplitChoice split,
                std::ostream& out, std::ostream& log);

/// Human-readable model summary.
int cmd_inspect(const std::filesystem::path& checkpoint, std::ostream& out, std::ostream& log);

}  // namespace cotenqu
