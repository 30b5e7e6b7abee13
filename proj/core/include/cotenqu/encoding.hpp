#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cotenqu/state_vector.hpp"

namespace cotenqu {

enum class EncodingMode {
  /// Values in [0, 1], rotated by 2*asin(sqrt(x)).
  kUnitInterval,
  /// Unbounded values, rotated by atan(x).
  kArctan,
};

/// Two feature dimensions per qubit: dimension 2k drives RY on qubit k and
/// dimension 2k+1 drives RZ on the same qubit.
struct EncodingPlan {
  EncodingMode mode = EncodingMode::kUnitInterval;
  std::size_t dimension = 0;

  /// Throws LayoutError for odd or zero dimensions.
  EncodingPlan(EncodingMode mode, std::size_t dimension);

  std::size_t qubits_used() const noexcept { return (dimension + 1) / 2; }
};

/// 2*asin(sqrt(x)) in [0, pi]. DomainError unless 0 <= x <= 1.
double angle_from_value(double x);

/// Rotation angles for every feature, in the order they are applied.
std::vector<double> encoding_angles(std::span<const double> features,
                                    EncodingMode mode);

/// Applies RY(angle[2k]) then RZ(angle[2k+1]) to qubit first_qubit + k.
void encode_angles(StateVector& state, std::span<const double> angles,
                   std::size_t first_qubit);

/// encoding_angles + encode_angles, with layout checks against the state.
void encode_features(StateVector& state, std::span<const double> features,
                     std::size_t first_qubit, const EncodingPlan& plan);

/// Per-dimension min-max scaling fitted on a reference set.
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(std::vector<double> minimum, std::vector<double> maximum);

  /// ArgumentError on an empty or ragged dataset.
  static Normalizer fit(std::span<const std::vector<double>> raw);

  std::size_t dimension() const noexcept { return min_.size(); }
  const std::vector<double>& minimum() const noexcept { return min_; }
  const std::vector<double>& maximum() const noexcept { return max_; }

  /// Maps to [0, 1]; constant dimensions map to 0 and values outside the
  /// fitted range are clamped.
  std::vector<double> apply(std::span<const double> raw) const;

 private:
  std::vector<double> min_;
  std::vector<double> max_;
};

/// Fits a Normalizer on `raw` and applies it to every row.
std::vector<std::vector<double>> normalize_dataset(
    std::span<const std::vector<double>> raw);

}  // namespace cotenqu
