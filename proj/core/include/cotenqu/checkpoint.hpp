#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "cotenqu/config.hpp"
#include "cotenqu/encoding.hpp"
#include "cotenqu/training.hpp"

namespace cotenqu {

inline constexpr int kCheckpointVersion = 1;
inline constexpr int kMetricsVersion = 1;

/// Self-contained snapshot of a trained model. The JSON layout is
/// documented in docs/formats.md.
struct Checkpoint {
  RunConfig config;
  ModelState model;
  Normalizer normalizer;

  bool operator==(const Checkpoint& other) const {
    return config == other.config && model == other.model &&
           normalizer.minimum() == other.normalizer.minimum() &&
           normalizer.maximum() == other.normalizer.maximum();
  }
};

/// Deterministic serialization; equal checkpoints give identical bytes.
std::string serialize_checkpoint(const Checkpoint& checkpoint);

/// LoadError on malformed JSON, a version mismatch or inconsistent shapes.
Checkpoint parse_checkpoint(std::string_view text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Tab-separated metrics: a version comment, a header line and one record
/// per epoch (epoch, mean_cost, train_accuracy, test_accuracy).
std::string format_metrics(std::span<const LossRecord> records);

}  // namespace cotenqu
