#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "cotenqu/data.hpp"

namespace cotenqu::testing {

/// Noisy images where each digit lights up its own band of rows, so a
/// handful of epochs separates them.
std::vector<LabeledImage> synthetic_digits(std::size_t per_class, const std::vector<int>& labels,
                                           std::uint64_t seed);

/// Writes synthetic_digits under the default MNIST file names in `dir`.
void write_synthetic_dataset(const std::filesystem::path& dir, std::size_t per_class,
                             const std::vector<int>& labels, std::uint64_t seed = 1);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace cotenqu::testing
