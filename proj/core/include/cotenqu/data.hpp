#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cotenqu {

inline constexpr std::size_t kImageSide = 28;
inline constexpr std::size_t kImagePixels = kImageSide * kImageSide;

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct LabeledImage {
  std::array<std::uint8_t, kImagePixels> pixels{};  ///< row-major
  int label = 0;

  bool operator==(const LabeledImage&) const = default;
};

/// Reads an IDX3 image file and its IDX1 label file (MNIST, Fashion-MNIST
/// and EMNIST all share the container). Throws FormatError naming the bad
/// field: "magic", "dimensions", "count", "label" or "truncated".
std::vector<LabeledImage> load_idx(const std::filesystem::path& images_path,
                                   const std::filesystem::path& labels_path);

/// Writes images and labels in IDX format.
void write_idx(const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path,
               std::span<const LabeledImage> images);

/// Images whose labels were remapped to contiguous class indices.
struct FilteredData {
  std::vector<LabeledImage> images;
  /// original label -> class index, ascending in the original label
  std::map<int, int> class_map;
};

/// Keeps only `classes` and remaps them in ascending order. ArgumentError
/// for an empty or repeated list or a class with no images.
FilteredData filter_classes(std::span<const LabeledImage> data, std::span<const int> classes);

struct SplitOptions {
  double test_fraction = 0.2;
  /// Per-class limits after splitting; 0 means unlimited.
  std::size_t train_cap = 0;
  std::size_t test_cap = 0;
  std::uint64_t seed = 0;
};

struct DatasetSplit {
  std::vector<LabeledImage> train;
  std::vector<LabeledImage> test;
  std::map<int, int> class_map;
  /// Caps that exceeded what a class had available.
  std::vector<std::string> warnings;
};

/// Seeded shuffle, per-class split with round(count * test_fraction) test
/// items, then the per-class caps. Both halves are shuffled again so the
/// classes are interleaved.
DatasetSplit split_and_cap(FilteredData data, const SplitOptions& options);

/// Pixels as doubles in [0, 255], ready for the Normalizer.
std::vector<double> pixel_vector(const LabeledImage& image);

/// Fisher-Yates with an explicit engine so the order is the same on every
/// standard library.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed);

}  // namespace cotenqu
