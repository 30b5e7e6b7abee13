#include "cotenqu/state_vector.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>
#include <utility>

#include "cotenqu/error.hpp"

namespace cotenqu {
namespace {

void check_qubit(const StateVector& state, std::size_t qubit) {
  if (qubit >= state.num_qubits()) {
    throw IndexError("qubit " + std::to_string(qubit) + " out of range for " +
                     std::to_string(state.num_qubits()) + "-qubit state");
  }
}

/// Inserts a zero bit at position `pos` of `x`.
constexpr std::size_t insert_zero(std::size_t x, std::size_t pos) noexcept {
  const std::size_t low = x & ((std::size_t{1} << pos) - 1);
  return ((x >> pos) << (pos + 1)) | low;
}

}  // namespace

StateVector::StateVector(std::size_t num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw SizeError("num_qubits must be in [1, " + std::to_string(kMaxQubits) +
                    "], got " + std::to_string(num_qubits));
  }
  num_qubits_ = num_qubits;
  amplitudes_.assign(std::size_t{1} << num_qubits, Amplitude{});
  amplitudes_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  const std::size_t n = amplitudes.size();
  if (n < 2 || !std::has_single_bit(n) ||
      std::countr_zero(n) > static_cast<int>(kMaxQubits)) {
    throw SizeError("amplitude count must be 2^k with 1 <= k <= 24, got " +
                    std::to_string(n));
  }
  StateVector s;
  s.num_qubits_ = static_cast<std::size_t>(std::countr_zero(n));
  s.amplitudes_ = std::move(amplitudes);
  return s;
}

double StateVector::norm_squared() const noexcept {
  double acc = 0.0;
  for (const auto& a : amplitudes_) acc += std::norm(a);
  return acc;
}

StateVector init_state(std::size_t num_qubits) { return StateVector(num_qubits); }

void apply_1q(StateVector& state, const GateMatrix& gate, std::size_t target) {
  if (gate.size() != 2) {
    throw ArgumentError("apply_1q needs a single-qubit gate, got " +
                        std::string(to_string(gate.kind())));
  }
  check_qubit(state, target);
  const Amplitude u00 = gate(0, 0), u01 = gate(0, 1);
  const Amplitude u10 = gate(1, 0), u11 = gate(1, 1);
  const std::size_t stride = state.mask(target);
  const std::size_t dim = state.dimension();
  auto amps = state.amplitudes();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Amplitude a0 = amps[i];
      const Amplitude a1 = amps[i + stride];
      amps[i] = u00 * a0 + u01 * a1;
      amps[i + stride] = u10 * a0 + u11 * a1;
    }
  }
}

void apply_2q(StateVector& state, const GateMatrix& gate, std::size_t q_a,
              std::size_t q_b) {
  if (gate.size() != 4) {
    throw ArgumentError("apply_2q needs a two-qubit gate, got " +
                        std::string(to_string(gate.kind())));
  }
  check_qubit(state, q_a);
  check_qubit(state, q_b);
  if (q_a == q_b) throw IndexError("apply_2q: q_a and q_b must differ");

  const std::size_t mask_a = state.mask(q_a);
  const std::size_t mask_b = state.mask(q_b);
  const std::size_t pos_lo = static_cast<std::size_t>(std::countr_zero(std::min(mask_a, mask_b)));
  const std::size_t pos_hi = static_cast<std::size_t>(std::countr_zero(std::max(mask_a, mask_b)));

  Amplitude u[4][4];
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) u[r][c] = gate(r, c);

  auto amps = state.amplitudes();
  const std::size_t quarter = state.dimension() / 4;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i00 = insert_zero(insert_zero(k, pos_lo), pos_hi);
    const std::size_t idx[4] = {i00, i00 | mask_b, i00 | mask_a, i00 | mask_a | mask_b};
    const Amplitude in[4] = {amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]};
    for (std::size_t r = 0; r < 4; ++r) {
      amps[idx[r]] = u[r][0] * in[0] + u[r][1] * in[1] + u[r][2] * in[2] + u[r][3] * in[3];
    }
  }
}

void apply_cswap(StateVector& state, std::size_t control, std::size_t a,
                 std::size_t b) {
  check_qubit(state, control);
  check_qubit(state, a);
  check_qubit(state, b);
  if (control == a || control == b || a == b) {
    throw IndexError("apply_cswap: control, a and b must be distinct");
  }
  const std::size_t mc = state.mask(control);
  const std::size_t ma = state.mask(a);
  const std::size_t mb = state.mask(b);
  auto amps = state.amplitudes();
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    // visit each swapped pair once, from its (a=1, b=0) member
    if ((i & mc) && (i & ma) && !(i & mb)) {
      std::swap(amps[i], amps[(i & ~ma) | mb]);
    }
  }
}

double zero_probability(const StateVector& state, std::size_t qubit) {
  check_qubit(state, qubit);
  const std::size_t m = state.mask(qubit);
  double p = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (!(i & m)) p += std::norm(amps[i]);
  }
  return std::clamp(p, 0.0, 1.0);
}

MeasurementOutcome sample(const StateVector& state, std::size_t qubit,
                          std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ArgumentError("sample: shots must be >= 1");
  MeasurementOutcome out;
  out.zero_probability = zero_probability(state, qubit);
  out.shots = shots;
  std::mt19937_64 rng(seed);
  std::array<std::uint64_t, 2> counts{0, 0};
  for (std::uint64_t s = 0; s < shots; ++s) {
    // 53-bit uniform in [0, 1); avoids the library-specific distributions
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    ++counts[u < out.zero_probability ? 0 : 1];
  }
  out.counts = counts;
  return out;
}

}  // namespace cotenqu
