#pragma once

// Brute-force reference computations used only by the tests. Nothing here
// calls the strided kernels or the chain contraction it is checked against.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cotenqu/circuit.hpp"
#include "cotenqu/gates.hpp"
#include "cotenqu/mps.hpp"
#include "cotenqu/state_vector.hpp"

namespace cotenqu::oracle {

/// Dense row-major complex matrix.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Amplitude> data;

  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Amplitude& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Amplitude& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

Matrix identity(std::size_t n);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::vector<Amplitude> matvec(const Matrix& m, std::span<const Amplitude> v);

/// Copies a GateMatrix into a dense 2x2 or 4x4 Matrix.
Matrix to_matrix(const GateMatrix& g);

/// Permutation matrix that moves qubit `order[k]` of the input into wire k.
Matrix qubit_permutation(std::span<const std::size_t> order, std::size_t num_qubits);

/// Full 2^n x 2^n operator for a gate on the given qubits, built from
/// Kronecker products with identities and, for non-adjacent or reversed
/// qubits, conjugation by an explicit permutation.
Matrix embed(const Matrix& gate, std::span<const std::size_t> qubits, std::size_t num_qubits);

/// The 8x8 CSWAP matrix written out entry by entry.
Matrix cswap_matrix();

/// <a|b>
Amplitude inner(std::span<const Amplitude> a, std::span<const Amplitude> b);

/// |a> (x) |b>
std::vector<Amplitude> tensor(std::span<const Amplitude> a, std::span<const Amplitude> b);

/// Register of `angles.size() / 2` qubits with RY(angle[2k]) RZ(angle[2k+1])
/// on qubit k, built with dense operators.
std::vector<Amplitude> dense_encoded_state(std::span<const double> angles);

/// Ansatz applied to |0..0> of `spec.register_qubits` qubits, built with
/// dense operators.
std::vector<Amplitude> dense_ansatz_state(const CircuitSpec& spec, std::span<const double> params);

/// (1 + |<data|trained>|^2) / 2 from the two register states.
double swap_test_oracle(const CircuitSpec& spec, std::span<const double> params,
                        std::span<const double> angles);

/// Contraction of the MPS with the mapped input by summing over all 2^N
/// physical configurations. Only for N <= ~12.
std::vector<double> dense_contract(const MpsModel& model, const MappedInput& input);

/// Model with every entry drawn from N(0, sigma) (not near identity).
MpsModel random_mps(std::size_t sites, std::size_t bond, std::size_t n_out,
                    std::mt19937_64& rng, double sigma = 0.5);

/// Uniform features in [0, 1].
std::vector<double> random_features(std::size_t n, std::mt19937_64& rng);

/// Random normalized state.
std::vector<Amplitude> random_state(std::size_t num_qubits, std::mt19937_64& rng);

double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0);

}  // namespace cotenqu::oracle
