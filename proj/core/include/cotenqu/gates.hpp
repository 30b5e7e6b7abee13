#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>

namespace cotenqu {

using Amplitude = std::complex<double>;

enum class GateKind { RX, RY, RZ, H, CNOT, RXX, RYY, RZZ, CRX, CRY, CRZ };

inline constexpr std::array<GateKind, 11> kAllGateKinds = {
    GateKind::RX,  GateKind::RY,  GateKind::RZ,  GateKind::H,
    GateKind::CNOT, GateKind::RXX, GateKind::RYY, GateKind::RZZ,
    GateKind::CRX, GateKind::CRY, GateKind::CRZ};

std::string_view to_string(GateKind kind) noexcept;

/// True for rotation gates that take an angle.
bool is_parameterized(GateKind kind) noexcept;

/// 1 for RX/RY/RZ/H, 2 otherwise.
std::size_t gate_arity(GateKind kind) noexcept;

/// Unitary matrix of a one- or two-qubit gate, stored row-major in a 4x4
/// buffer (single-qubit gates use the top-left 2x2 block).
class GateMatrix {
 public:
  GateKind kind() const noexcept { return kind_; }
  std::optional<double> angle() const noexcept { return angle_; }
  /// 2 or 4.
  std::size_t size() const noexcept { return size_; }

  const Amplitude& operator()(std::size_t row, std::size_t col) const {
    return elements_[row * 4 + col];
  }

  /// max |(U^dagger U - I)_ij|
  double unitarity_error() const noexcept;

 private:
  friend GateMatrix gate_matrix(GateKind kind, std::optional<double> angle);
  Amplitude& at(std::size_t row, std::size_t col) {
    return elements_[row * 4 + col];
  }

  GateKind kind_ = GateKind::H;
  std::optional<double> angle_;
  std::size_t size_ = 2;
  std::array<Amplitude, 16> elements_{};
};

/// Builds the matrix for `kind`. An angle must be given exactly when the
/// gate is parameterized; otherwise ConstructionError is thrown.
///
/// Two-qubit matrices are indexed |q_a q_b> with q_a the high bit, so the
/// controlled gates act on rows 2 and 3 (control = q_a).
GateMatrix gate_matrix(GateKind kind, std::optional<double> angle = {});

}  // namespace cotenqu
