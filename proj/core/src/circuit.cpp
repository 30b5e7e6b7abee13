#include "cotenqu/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "cotenqu/error.hpp"

namespace cotenqu {

std::string_view to_string(LayerKind kind) noexcept {
  switch (kind) {
    case LayerKind::kSingle: return "single";
    case LayerKind::kDual: return "dual";
    case LayerKind::kEntangle: return "entangle";
  }
  return "?";
}

LayerKind parse_layer_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "single" || lower == "s") return LayerKind::kSingle;
  if (lower == "dual" || lower == "d") return LayerKind::kDual;
  if (lower == "entangle" || lower == "e") return LayerKind::kEntangle;
  throw ArgumentError("unknown layer kind '" + std::string(text) + "'");
}

std::size_t layer_parameter_count(LayerKind kind, std::size_t qubits) noexcept {
  if (kind == LayerKind::kSingle) return 2 * qubits;
  return qubits < 2 ? 0 : 2 * (qubits - 1);
}

std::size_t parameter_count(const CircuitSpec& spec) noexcept {
  std::size_t n = 0;
  for (LayerKind kind : spec.layers) n += layer_parameter_count(kind, spec.register_qubits);
  return n;
}

bool is_controlled_parameter(const CircuitSpec& spec, std::size_t index) {
  std::size_t first = 0;
  for (LayerKind kind : spec.layers) {
    const std::size_t n = layer_parameter_count(kind, spec.register_qubits);
    if (index < first + n) return kind == LayerKind::kEntangle;
    first += n;
  }
  throw IndexError("parameter index " + std::to_string(index) + " out of range");
}

namespace {

void apply_insertion(StateVector& state, const ShiftInsertion& insert, GateKind axis,
                     GateKind controlled, std::size_t control, std::size_t target) {
  apply_1q(state, gate_matrix(axis, insert.target_angle), target);
  if (insert.controlled_angle != 0.0) {
    apply_2q(state, gate_matrix(controlled, insert.controlled_angle), control, target);
  }
}

}  // namespace

void apply_ansatz(StateVector& state, const CircuitSpec& spec,
                  std::span<const double> params, std::size_t first_qubit,
                  const ShiftInsertion* insert) {
  const std::size_t expected = parameter_count(spec);
  if (params.size() != expected) {
    throw ParameterError("ansatz expects " + std::to_string(expected) +
                         " parameters, got " + std::to_string(params.size()));
  }
  const std::size_t m = spec.register_qubits;
  if (first_qubit + m > state.num_qubits()) {
    throw LayoutError("ansatz register does not fit in the state");
  }
  if (insert && !is_controlled_parameter(spec, insert->parameter)) {
    throw ArgumentError("shift insertions only apply to controlled rotations");
  }
  const auto inserted_at = [&](std::size_t p) { return insert && insert->parameter == p; };
  std::size_t p = 0;
  for (LayerKind kind : spec.layers) {
    switch (kind) {
      case LayerKind::kSingle:
        for (std::size_t q = 0; q < m; ++q) {
          apply_1q(state, gate_matrix(GateKind::RY, params[p++]), first_qubit + q);
          apply_1q(state, gate_matrix(GateKind::RZ, params[p++]), first_qubit + q);
        }
        break;
      case LayerKind::kDual:
        for (std::size_t q = 0; q + 1 < m; ++q) {
          apply_2q(state, gate_matrix(GateKind::RYY, params[p++]), first_qubit + q,
                   first_qubit + q + 1);
          apply_2q(state, gate_matrix(GateKind::RZZ, params[p++]), first_qubit + q,
                   first_qubit + q + 1);
        }
        break;
      case LayerKind::kEntangle:
        for (std::size_t q = 0; q + 1 < m; ++q) {
          const std::size_t control = first_qubit + q, target = control + 1;
          apply_2q(state, gate_matrix(GateKind::CRY, params[p]), control, target);
          if (inserted_at(p)) {
            apply_insertion(state, *insert, GateKind::RY, GateKind::CRY, control, target);
          }
          ++p;
          apply_2q(state, gate_matrix(GateKind::CRZ, params[p]), control, target);
          if (inserted_at(p)) {
            apply_insertion(state, *insert, GateKind::RZ, GateKind::CRZ, control, target);
          }
          ++p;
        }
        break;
    }
  }
}

void prepare_trained_state(const CircuitSpec& spec, std::span<const double> params,
                           StateVector& state, const ShiftInsertion* insert) {
  if (state.num_qubits() != spec.total_qubits()) {
    throw LayoutError("state has " + std::to_string(state.num_qubits()) +
                      " qubits, layout needs " + std::to_string(spec.total_qubits()));
  }
  apply_ansatz(state, spec, params, spec.trained_qubit(0), insert);
}

StateVector swap_test_state(const CircuitSpec& spec, std::span<const double> params,
                            std::span<const double> angles,
                            const ShiftInsertion* insert) {
  if (angles.size() != spec.feature_dimension()) {
    throw LayoutError("swap test expects " + std::to_string(spec.feature_dimension()) +
                      " features, got " + std::to_string(angles.size()));
  }
  StateVector state(spec.total_qubits());
  const GateMatrix h = gate_matrix(GateKind::H);
  apply_1q(state, h, CircuitSpec::ancilla());
  encode_angles(state, angles, spec.data_qubit(0));
  prepare_trained_state(spec, params, state, insert);
  for (std::size_t i = 0; i < spec.register_qubits; ++i) {
    apply_cswap(state, CircuitSpec::ancilla(), spec.data_qubit(i), spec.trained_qubit(i));
  }
  apply_1q(state, h, CircuitSpec::ancilla());
  return state;
}

double swap_test_angles(const CircuitSpec& spec, std::span<const double> params,
                        std::span<const double> angles, const Readout& readout,
                        const ShiftInsertion* insert) {
  const StateVector state = swap_test_state(spec, params, angles, insert);
  if (const auto* shots = std::get_if<ShotReadout>(&readout)) {
    const MeasurementOutcome m =
        sample(state, CircuitSpec::ancilla(), shots->shots, shots->seed);
    return static_cast<double>((*m.counts)[0]) / static_cast<double>(m.shots);
  }
  return zero_probability(state, CircuitSpec::ancilla());
}

double swap_test(const CircuitSpec& spec, std::span<const double> params,
                 std::span<const double> features, EncodingMode mode,
                 const Readout& readout) {
  if (features.size() != spec.feature_dimension()) {
    throw LayoutError("swap test expects " + std::to_string(spec.feature_dimension()) +
                      " features, got " + std::to_string(features.size()));
  }
  const std::vector<double> angles = encoding_angles(features, mode);
  return swap_test_angles(spec, params, angles, readout);
}

double mapped_fidelity(double raw) noexcept { return std::max(0.0, (raw - 0.5) * 2.0); }

}  // namespace cotenqu
