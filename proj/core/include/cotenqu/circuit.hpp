#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "cotenqu/encoding.hpp"
#include "cotenqu/state_vector.hpp"

namespace cotenqu {

enum class LayerKind {
  /// RY and RZ on every register qubit.
  kSingle,
  /// RYY and RZZ on every adjacent pair (q_i, q_i+1).
  kDual,
  /// CRY and CRZ on every adjacent pair, control q_i, target q_i+1.
  kEntangle,
};

std::string_view to_string(LayerKind kind) noexcept;
/// Accepts "single", "dual", "entangle" (case-insensitive) or "S", "D", "E".
LayerKind parse_layer_kind(std::string_view text);

/// Parameters a layer consumes on a register of `qubits` qubits.
std::size_t layer_parameter_count(LayerKind kind, std::size_t qubits) noexcept;

/// Swap-test classifier layout.
///
/// Qubit 0 is the ancilla, qubits [1, m] hold the encoded data and
/// qubits [m+1, 2m] hold the trained state, where m = register_qubits.
struct CircuitSpec {
  std::size_t register_qubits = 2;
  std::vector<LayerKind> layers;

  std::size_t data_qubits() const noexcept { return register_qubits; }
  std::size_t trained_qubits() const noexcept { return register_qubits; }
  std::size_t total_qubits() const noexcept { return 2 * register_qubits + 1; }
  std::size_t feature_dimension() const noexcept { return 2 * register_qubits; }

  static constexpr std::size_t ancilla() noexcept { return 0; }
  std::size_t data_qubit(std::size_t i) const noexcept { return 1 + i; }
  std::size_t trained_qubit(std::size_t i) const noexcept {
    return 1 + register_qubits + i;
  }

  bool operator==(const CircuitSpec&) const = default;
};

std::size_t parameter_count(const CircuitSpec& spec) noexcept;

/// True for parameters of controlled rotations (the ENTANGLE layers).
bool is_controlled_parameter(const CircuitSpec& spec, std::size_t index);

/// Extra gates placed right after the controlled rotation of one parameter:
/// a rotation of the target about the same axis, then a controlled rotation
/// about that axis. Used to differentiate controlled rotations exactly.
struct ShiftInsertion {
  std::size_t parameter = 0;
  double target_angle = 0.0;
  double controlled_angle = 0.0;
};

/// Applies the ansatz layers to qubits [first_qubit, first_qubit + m).
/// ParameterError if params.size() != parameter_count(spec), ArgumentError
/// if `insert` names a parameter that is not controlled.
void apply_ansatz(StateVector& state, const CircuitSpec& spec,
                  std::span<const double> params, std::size_t first_qubit,
                  const ShiftInsertion* insert = nullptr);

/// Applies the ansatz to the trained register of a full swap-test layout.
void prepare_trained_state(const CircuitSpec& spec, std::span<const double> params,
                           StateVector& state, const ShiftInsertion* insert = nullptr);

struct ExactReadout {};
struct ShotReadout {
  std::uint64_t shots = 8192;
  std::uint64_t seed = 0;
};
using Readout = std::variant<ExactReadout, ShotReadout>;

/// Full circuit up to (and including) the closing Hadamard on the ancilla,
/// with the data register prepared from rotation angles.
StateVector swap_test_state(const CircuitSpec& spec, std::span<const double> params,
                            std::span<const double> angles,
                            const ShiftInsertion* insert = nullptr);

/// Swap-test fidelity, (1 + |<data|trained>|^2) / 2, from encoding angles.
double swap_test_angles(const CircuitSpec& spec, std::span<const double> params,
                        std::span<const double> angles,
                        const Readout& readout = ExactReadout{},
                        const ShiftInsertion* insert = nullptr);

/// Swap-test fidelity for a feature vector encoded with `mode`.
/// LayoutError unless features.size() == spec.feature_dimension().
double swap_test(const CircuitSpec& spec, std::span<const double> params,
                 std::span<const double> features, EncodingMode mode,
                 const Readout& readout = ExactReadout{});

/// Maps a swap-test output from [0.5, 1] onto [0, 1], clamping below at 0.
double mapped_fidelity(double raw) noexcept;

}  // namespace cotenqu
