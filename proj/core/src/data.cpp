#include "cotenqu/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include "cotenqu/error.hpp"

namespace cotenqu {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("file", "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& buf, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > buf.size()) {
    throw FormatError("truncated", path.string() + ": header is truncated");
  }
  return (std::uint32_t{buf[offset]} << 24) | (std::uint32_t{buf[offset + 1]} << 16) |
         (std::uint32_t{buf[offset + 2]} << 8) | std::uint32_t{buf[offset + 3]};
}

void write_be32(std::ofstream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

/// Bounded draw without modulo bias.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_below(rng, i)]);
  }
}

template void seeded_shuffle<LabeledImage>(std::vector<LabeledImage>&, std::uint64_t);
template void seeded_shuffle<std::size_t>(std::vector<std::size_t>&, std::uint64_t);

std::vector<LabeledImage> load_idx(const std::filesystem::path& images_path,
                                   const std::filesystem::path& labels_path) {
  const auto img = read_file(images_path);
  const auto lab = read_file(labels_path);

  if (read_be32(img, 0, images_path) != kIdxImageMagic) {
    throw FormatError("magic", images_path.string() + ": bad magic number (expected 0x00000803)");
  }
  if (read_be32(lab, 0, labels_path) != kIdxLabelMagic) {
    throw FormatError("magic", labels_path.string() + ": bad magic number (expected 0x00000801)");
  }
  const std::uint32_t n_images = read_be32(img, 4, images_path);
  const std::uint32_t rows = read_be32(img, 8, images_path);
  const std::uint32_t cols = read_be32(img, 12, images_path);
  const std::uint32_t n_labels = read_be32(lab, 4, labels_path);
  if (rows != kImageSide || cols != kImageSide) {
    throw FormatError("dimensions", images_path.string() + ": images are " +
                                        std::to_string(rows) + "x" + std::to_string(cols) +
                                        ", expected 28x28");
  }
  if (n_images != n_labels) {
    throw FormatError("count", "image count " + std::to_string(n_images) +
                                   " does not match label count " + std::to_string(n_labels));
  }
  const std::size_t n = n_images;
  if (img.size() < 16 + n * kImagePixels) {
    throw FormatError("truncated", images_path.string() + ": expected " +
                                       std::to_string(n) + " images, file is too short");
  }
  if (lab.size() < 8 + n) {
    throw FormatError("truncated", labels_path.string() + ": expected " +
                                       std::to_string(n) + " labels, file is too short");
  }

  std::vector<LabeledImage> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(img.begin() + static_cast<std::ptrdiff_t>(16 + i * kImagePixels), kImagePixels,
                out[i].pixels.begin());
    out[i].label = lab[8 + i];
    if (out[i].label > 9) {
      throw FormatError("label", labels_path.string() + ": label " +
                                     std::to_string(out[i].label) + " at index " +
                                     std::to_string(i) + " outside 0-9");
    }
  }
  return out;
}

void write_idx(const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path,
               std::span<const LabeledImage> images) {
  std::ofstream img(images_path, std::ios::binary);
  std::ofstream lab(labels_path, std::ios::binary);
  if (!img || !lab) throw FormatError("file", "cannot write IDX files");
  const auto n = static_cast<std::uint32_t>(images.size());
  write_be32(img, kIdxImageMagic);
  write_be32(img, n);
  write_be32(img, kImageSide);
  write_be32(img, kImageSide);
  write_be32(lab, kIdxLabelMagic);
  write_be32(lab, n);
  for (const auto& im : images) {
    img.write(reinterpret_cast<const char*>(im.pixels.data()), kImagePixels);
    lab.put(static_cast<char>(im.label));
  }
}

FilteredData filter_classes(std::span<const LabeledImage> data, std::span<const int> classes) {
  if (classes.empty()) throw ArgumentError("class list is empty");
  std::set<int> wanted(classes.begin(), classes.end());
  if (wanted.size() != classes.size()) throw ArgumentError("class list has duplicates");

  FilteredData out;
  int index = 0;
  for (int c : wanted) out.class_map[c] = index++;

  std::set<int> seen;
  for (const auto& im : data) {
    auto it = out.class_map.find(im.label);
    if (it == out.class_map.end()) continue;
    LabeledImage copy = im;
    copy.label = it->second;
    out.images.push_back(copy);
    seen.insert(im.label);
  }
  for (int c : wanted) {
    if (!seen.contains(c)) {
      throw ArgumentError("unknown class " + std::to_string(c) + ": no images carry that label");
    }
  }
  return out;
}

DatasetSplit split_and_cap(FilteredData data, const SplitOptions& options) {
  if (!(options.test_fraction > 0.0 && options.test_fraction < 1.0)) {
    throw ArgumentError("test_fraction must lie strictly between 0 and 1");
  }
  DatasetSplit split;
  split.class_map = data.class_map;

  seeded_shuffle(data.images, options.seed);
  const std::size_t k = data.class_map.size();
  std::vector<std::vector<LabeledImage>> by_class(k);
  for (auto& im : data.images) by_class.at(static_cast<std::size_t>(im.label)).push_back(im);

  auto original_label = [&](std::size_t cls) {
    for (const auto& [orig, idx] : split.class_map)
      if (static_cast<std::size_t>(idx) == cls) return orig;
    return -1;
  };

  for (std::size_t c = 0; c < k; ++c) {
    auto& items = by_class[c];
    const auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(items.size()) * options.test_fraction));
    std::size_t test_end = n_test;
    std::size_t train_end = items.size();
    if (options.test_cap > 0) {
      if (options.test_cap > n_test) {
        split.warnings.push_back("class " + std::to_string(original_label(c)) + ": test cap " +
                                 std::to_string(options.test_cap) + " exceeds the " +
                                 std::to_string(n_test) + " available; using all");
      }
      test_end = std::min(n_test, options.test_cap);
    }
    if (options.train_cap > 0) {
      const std::size_t available = items.size() - n_test;
      if (options.train_cap > available) {
        split.warnings.push_back("class " + std::to_string(original_label(c)) + ": train cap " +
                                 std::to_string(options.train_cap) + " exceeds the " +
                                 std::to_string(available) + " available; using all");
      }
      train_end = n_test + std::min(available, options.train_cap);
    }
    split.test.insert(split.test.end(), items.begin(),
                      items.begin() + static_cast<std::ptrdiff_t>(test_end));
    split.train.insert(split.train.end(), items.begin() + static_cast<std::ptrdiff_t>(n_test),
                       items.begin() + static_cast<std::ptrdiff_t>(train_end));
  }
  seeded_shuffle(split.train, options.seed + 1);
  seeded_shuffle(split.test, options.seed + 2);
  return split;
}

std::vector<double> pixel_vector(const LabeledImage& image) {
  return {image.pixels.begin(), image.pixels.end()};
}

}  // namespace cotenqu
