#include "cotenqu/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cotenqu/error.hpp"

namespace cotenqu {

EncodingPlan::EncodingPlan(EncodingMode m, std::size_t d) : mode(m), dimension(d) {
  if (d == 0 || d % 2 != 0) {
    throw LayoutError("feature dimension must be even and nonzero, got " +
                      std::to_string(d));
  }
}

double angle_from_value(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("value " + std::to_string(x) + " outside [0, 1]");
  }
  return 2.0 * std::asin(std::sqrt(x));
}

std::vector<double> encoding_angles(std::span<const double> features,
                                    EncodingMode mode) {
  std::vector<double> angles(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    angles[i] = mode == EncodingMode::kUnitInterval ? angle_from_value(features[i])
                                                    : std::atan(features[i]);
  }
  return angles;
}

void encode_angles(StateVector& state, std::span<const double> angles,
                   std::size_t first_qubit) {
  if (angles.size() % 2 != 0) {
    throw LayoutError("angle count must be even, got " + std::to_string(angles.size()));
  }
  const std::size_t qubits = angles.size() / 2;
  if (first_qubit + qubits > state.num_qubits()) {
    throw LayoutError("encoding needs qubits [" + std::to_string(first_qubit) + ", " +
                      std::to_string(first_qubit + qubits) + ") but the state has " +
                      std::to_string(state.num_qubits()));
  }
  for (std::size_t k = 0; k < qubits; ++k) {
    apply_1q(state, gate_matrix(GateKind::RY, angles[2 * k]), first_qubit + k);
    apply_1q(state, gate_matrix(GateKind::RZ, angles[2 * k + 1]), first_qubit + k);
  }
}

void encode_features(StateVector& state, std::span<const double> features,
                     std::size_t first_qubit, const EncodingPlan& plan) {
  if (features.size() != plan.dimension) {
    throw LayoutError("expected " + std::to_string(plan.dimension) +
                      " features, got " + std::to_string(features.size()));
  }
  encode_angles(state, encoding_angles(features, plan.mode), first_qubit);
}

Normalizer::Normalizer(std::vector<double> minimum, std::vector<double> maximum)
    : min_(std::move(minimum)), max_(std::move(maximum)) {
  if (min_.size() != max_.size()) {
    throw ArgumentError("normalizer bounds differ in length");
  }
}

Normalizer Normalizer::fit(std::span<const std::vector<double>> raw) {
  if (raw.empty()) throw ArgumentError("cannot normalize an empty dataset");
  const std::size_t d = raw.front().size();
  std::vector<double> lo(raw.front()), hi(raw.front());
  for (const auto& row : raw) {
    if (row.size() != d) throw ArgumentError("ragged dataset");
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], row[i]);
      hi[i] = std::max(hi[i], row[i]);
    }
  }
  return Normalizer(std::move(lo), std::move(hi));
}

std::vector<double> Normalizer::apply(std::span<const double> raw) const {
  if (raw.size() != min_.size()) {
    throw LayoutError("normalizer fitted on dimension " + std::to_string(min_.size()) +
                      ", got " + std::to_string(raw.size()));
  }
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double span = max_[i] - min_[i];
    out[i] = span > 0.0 ? std::clamp((raw[i] - min_[i]) / span, 0.0, 1.0) : 0.0;
  }
  return out;
}

std::vector<std::vector<double>> normalize_dataset(
    std::span<const std::vector<double>> raw) {
  const Normalizer n = Normalizer::fit(raw);
  std::vector<std::vector<double>> out;
  out.reserve(raw.size());
  for (const auto& row : raw) out.push_back(n.apply(row));
  return out;
}

}  // namespace cotenqu
