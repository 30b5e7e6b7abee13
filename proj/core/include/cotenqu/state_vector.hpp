#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cotenqu/gates.hpp"

namespace cotenqu {

/// Largest register the simulator will allocate (2^24 amplitudes).
inline constexpr std::size_t kMaxQubits = 24;

/// Dense pure state of `num_qubits` qubits.
///
/// Qubit 0 is the most significant bit of the basis index, so the ket
/// |q0 q1 ... q(n-1)> sits at index q0*2^(n-1) + ... + q(n-1).
class StateVector {
 public:
  /// All-zero ground state. Throws SizeError unless 1 <= num_qubits <= 24.
  explicit StateVector(std::size_t num_qubits);

  /// Wraps explicit amplitudes; the length must be a power of two >= 2.
  static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }

  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
  std::span<Amplitude> amplitudes() noexcept { return amplitudes_; }

  const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }
  Amplitude& operator[](std::size_t i) { return amplitudes_[i]; }

  double norm_squared() const noexcept;

  /// Bit mask selecting `qubit` in a basis index.
  std::size_t mask(std::size_t qubit) const noexcept {
    return std::size_t{1} << (num_qubits_ - 1 - qubit);
  }

 private:
  StateVector() = default;

  std::size_t num_qubits_ = 0;
  std::vector<Amplitude> amplitudes_;
};

/// Ground state |0...0>.
StateVector init_state(std::size_t num_qubits);

/// Applies a 2x2 gate to `target` in place.
void apply_1q(StateVector& state, const GateMatrix& gate, std::size_t target);

/// Applies a 4x4 gate in place. The gate's row/column index is
/// 2*bit(q_a) + bit(q_b), so for controlled gates q_a is the control.
void apply_2q(StateVector& state, const GateMatrix& gate, std::size_t q_a,
              std::size_t q_b);

/// Fredkin gate: exchanges wires `a` and `b` where `control` is 1.
void apply_cswap(StateVector& state, std::size_t control, std::size_t a,
                 std::size_t b);

/// Probability that measuring `qubit` yields 0.
double zero_probability(const StateVector& state, std::size_t qubit);

struct MeasurementOutcome {
  double zero_probability = 1.0;
  std::uint64_t shots = 0;
  /// counts[b] = number of shots that read bit b. Present when sampled.
  std::optional<std::array<std::uint64_t, 2>> counts;
};

/// Seeded single-qubit measurement repeated `shots` times.
/// The state is not collapsed; every shot reads the same distribution.
MeasurementOutcome sample(const StateVector& state, std::size_t qubit,
                          std::uint64_t shots, std::uint64_t seed);

}  // namespace cotenqu
