#include "cotenqu/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cotenqu/error.hpp"

namespace cotenqu {

std::string_view to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
    case GateKind::RXX: return "RXX";
    case GateKind::RYY: return "RYY";
    case GateKind::RZZ: return "RZZ";
    case GateKind::CRX: return "CRX";
    case GateKind::CRY: return "CRY";
    case GateKind::CRZ: return "CRZ";
  }
  return "?";
}

bool is_parameterized(GateKind kind) noexcept {
  return kind != GateKind::H && kind != GateKind::CNOT;
}

std::size_t gate_arity(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::H:
      return 1;
    default:
      return 2;
  }
}

double GateMatrix::unitarity_error() const noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = 0; j < size_; ++j) {
      Amplitude acc = 0.0;
      for (std::size_t k = 0; k < size_; ++k) {
        acc += std::conj((*this)(k, i)) * (*this)(k, j);
      }
      const Amplitude expected = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(acc - expected));
    }
  }
  return worst;
}

GateMatrix gate_matrix(GateKind kind, std::optional<double> angle) {
  if (is_parameterized(kind) != angle.has_value()) {
    throw ConstructionError(std::string(to_string(kind)) +
                            (angle ? " takes no angle" : " requires an angle"));
  }
  GateMatrix g;
  g.kind_ = kind;
  g.angle_ = angle;
  g.size_ = gate_arity(kind) == 1 ? 2 : 4;

  const double theta = angle.value_or(0.0);
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const Amplitude i_unit{0.0, 1.0};
  const Amplitude phase_minus = std::polar(1.0, -theta / 2);
  const Amplitude phase_plus = std::polar(1.0, theta / 2);

  switch (kind) {
    case GateKind::RX:
      g.at(0, 0) = c;
      g.at(0, 1) = -i_unit * s;
      g.at(1, 0) = -i_unit * s;
      g.at(1, 1) = c;
      break;
    case GateKind::RY:
      g.at(0, 0) = c;
      g.at(0, 1) = -s;
      g.at(1, 0) = s;
      g.at(1, 1) = c;
      break;
    case GateKind::RZ:
      g.at(0, 0) = phase_minus;
      g.at(1, 1) = phase_plus;
      break;
    case GateKind::H: {
      const double r = 1.0 / std::numbers::sqrt2;
      g.at(0, 0) = r;
      g.at(0, 1) = r;
      g.at(1, 0) = r;
      g.at(1, 1) = -r;
      break;
    }
    case GateKind::CNOT:
      g.at(0, 0) = 1.0;
      g.at(1, 1) = 1.0;
      g.at(2, 3) = 1.0;
      g.at(3, 2) = 1.0;
      break;
    case GateKind::RXX:
      for (std::size_t k = 0; k < 4; ++k) {
        g.at(k, k) = c;
        g.at(k, 3 - k) = -i_unit * s;
      }
      break;
    case GateKind::RYY:
      for (std::size_t k = 0; k < 4; ++k) g.at(k, k) = c;
      g.at(0, 3) = i_unit * s;
      g.at(3, 0) = i_unit * s;
      g.at(1, 2) = -i_unit * s;
      g.at(2, 1) = -i_unit * s;
      break;
    case GateKind::RZZ:
      g.at(0, 0) = phase_minus;
      g.at(1, 1) = phase_plus;
      g.at(2, 2) = phase_plus;
      g.at(3, 3) = phase_minus;
      break;
    case GateKind::CRX:
      g.at(0, 0) = 1.0;
      g.at(1, 1) = 1.0;
      g.at(2, 2) = c;
      g.at(2, 3) = -i_unit * s;
      g.at(3, 2) = -i_unit * s;
      g.at(3, 3) = c;
      break;
    case GateKind::CRY:
      g.at(0, 0) = 1.0;
      g.at(1, 1) = 1.0;
      g.at(2, 2) = c;
      g.at(2, 3) = -s;
      g.at(3, 2) = s;
      g.at(3, 3) = c;
      break;
    case GateKind::CRZ:
      g.at(0, 0) = 1.0;
      g.at(1, 1) = 1.0;
      g.at(2, 2) = phase_minus;
      g.at(3, 3) = phase_plus;
      break;
  }
  return g;
}

}  // namespace cotenqu
