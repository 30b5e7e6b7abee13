#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cotenqu/circuit.hpp"
#include "cotenqu/mps.hpp"

namespace cotenqu {

/// Probability clamp used by the cross-entropy.
inline constexpr double kCostClamp = 1e-12;

/// -y log(p) - (1-y) log(1-p) with p clamped to [1e-12, 1 - 1e-12].
double binary_cost(double p, int label);

/// d binary_cost / dp; zero where the clamp is active.
double binary_cost_derivative(double p, int label);

/// pi / (2 sqrt(epoch)) for 1-based epochs. ArgumentError for epoch 0.
double epoch_shift(std::size_t epoch);

using CostFunction = std::function<double(std::span<const double>)>;

/// 0.5 * (f(theta + s e_i) - f(theta - s e_i))
double shift_gradient(const CostFunction& f, std::span<const double> theta,
                      std::size_t index, double shift);

/// A swap-test quantity as a function of the ansatz parameters, with an
/// optional insertion (see ShiftInsertion).
using ShiftedFidelity =
    std::function<double(std::span<const double>, const ShiftInsertion*)>;

/// Shift-rule derivative of f with respect to ansatz parameter `index`.
///
/// Plain rotations use shift_gradient. A controlled rotation is not
/// sinusoidal in its angle, so it is written as
/// R_t(theta/2) CNOT R_t(-theta/2) CNOT and the shift rule is applied to the
/// two half-angle rotations; both shifted circuits are the original one
/// followed by a ShiftInsertion. Exact for s = pi/2.
double ansatz_shift_gradient(const ShiftedFidelity& f, const CircuitSpec& spec,
                             std::span<const double> params, std::size_t index,
                             double shift);

/// (f(theta + s e_i) - f(theta - s e_i)) / 2s. ArgumentError unless s > 0.
double finite_difference_gradient(const CostFunction& f, std::span<const double> theta,
                                  std::size_t index, double step);

/// exp-normalized with the maximum subtracted first.
std::vector<double> softmax(std::span<const double> scores);

// ---------------------------------------------------------------------------
// Single-circuit cost

/// Cross-entropy of the mapped swap-test fidelity against `label` (0 or 1).
double circuit_cost(const CircuitSpec& spec, std::span<const double> params,
                    std::span<const double> angles, int label);

/// Parameter-shift gradient of circuit_cost with respect to every ansatz
/// parameter. The shift rule differentiates the raw swap-test output and
/// the result is chained through mapped_fidelity and the cross-entropy.
std::vector<double> circuit_cost_gradient(const CircuitSpec& spec,
                                          std::span<const double> params,
                                          std::span<const double> angles, int label,
                                          double shift);

// ---------------------------------------------------------------------------
// Hybrid model

enum class ShiftMode {
  /// s = pi/2 every epoch; exact for the rotation gates used here.
  kFixedHalfPi,
  /// s = pi / (2 sqrt(epoch)).
  kEpochDecay,
};

/// How the MPS output is turned into encoding inputs.
enum class OutputScaling {
  /// The contracted values as they are.
  kRaw,
  /// Rescaled to norm sqrt(n_out) before the arctangent.
  kNormalized,
};

enum class MulticlassUpdate {
  /// Every class circuit is updated on every sample.
  kAllCircuits,
  /// Only the circuit of the sample's label is updated.
  kLabelCircuit,
};

std::string_view to_string(ShiftMode mode) noexcept;
std::string_view to_string(OutputScaling scaling) noexcept;
std::string_view to_string(MulticlassUpdate update) noexcept;

struct TrainConfig {
  double learning_rate = 1e-4;
  /// Learning rate for the MPS tensors; defaults to learning_rate.
  std::optional<double> tn_learning_rate;
  std::size_t epochs = 40;
  ShiftMode shift_mode = ShiftMode::kFixedHalfPi;
  MulticlassUpdate multiclass_update = MulticlassUpdate::kAllCircuits;
  std::uint64_t seed = 0;
  Readout readout = ExactReadout{};

  /// ArgumentError unless learning rates are positive and finite.
  void validate() const;
};

/// Labelled, already-normalized feature vector. Labels are contiguous
/// class indices 0..k-1.
struct Sample {
  std::vector<double> features;
  int label = 0;
};

struct ModelState {
  MpsModel mps;
  CircuitSpec circuit;
  /// One parameter vector for binary models, one per class otherwise.
  std::vector<std::vector<double>> circuit_params;
  std::size_t num_classes = 2;
  OutputScaling output_scaling = OutputScaling::kNormalized;

  bool is_binary() const noexcept { return num_classes == 2; }
  std::size_t num_circuits() const noexcept { return is_binary() ? 1 : num_classes; }

  /// Near-identity MPS over `num_sites` inputs with n_out = 2 * register
  /// qubits, and circuit angles drawn uniformly from [0, pi).
  static ModelState initialize(std::size_t num_sites, std::size_t bond_dim,
                               CircuitSpec circuit, std::size_t num_classes,
                               std::uint64_t seed,
                               OutputScaling scaling = OutputScaling::kNormalized);

  /// ArgumentError if any component disagrees with another.
  void validate() const;

  bool operator==(const ModelState&) const = default;
};

/// Everything the forward pass produces for one input.
struct ForwardPass {
  MappedInput mapped;
  ScaledVector tn_raw;
  std::vector<double> tn_output;  ///< after scaling, before the arctangent
  std::vector<double> angles;
  std::vector<double> fidelities;  ///< raw swap-test output per circuit
};

ForwardPass forward(const ModelState& model, std::span<const double> features,
                    const Readout& readout = ExactReadout{});

/// Summed cross-entropy over all circuits. For k classes the circuit of the
/// label targets 1 and the others 0.
double sample_cost(const ModelState& model, std::span<const double> fidelities, int label);

struct Prediction {
  int label = 0;
  /// Mapped fidelity per circuit.
  std::vector<double> scores;
  /// Softmax of the scores (multi-class) or {1 - s, s} (binary).
  std::vector<double> probabilities;
};

/// Binary: class 1 when the mapped fidelity is >= 0.5. Multi-class: argmax
/// of the softmaxed mapped fidelities, ties to the lowest index.
Prediction decide(std::span<const double> raw_fidelities, bool binary);

Prediction predict(const ModelState& model, std::span<const double> features);

/// dCost/dTheta for every circuit parameter (exact readout, s = pi/2),
/// without updating anything. Useful for checking the training gradients.
std::vector<std::vector<double>> quantum_gradient(const ModelState& model,
                                                  std::span<const double> features,
                                                  int label);

/// dCost/dT for the MPS tensors via the encoding angles.
MpsGradient tn_gradient(const ModelState& model, std::span<const double> features,
                        int label);

struct LossRecord {
  std::size_t epoch = 0;
  double mean_cost = 0.0;
  double train_accuracy = 0.0;
  /// NaN when no held-out set was given.
  double test_accuracy = 0.0;
};

struct Evaluation {
  double mean_cost = 0.0;
  double accuracy = 0.0;
  /// confusion[true][predicted]
  std::vector<std::vector<std::size_t>> confusion;
};

Evaluation evaluate(const ModelState& model, std::span<const Sample> data);

using EpochCallback = std::function<void(const LossRecord&)>;

/// Per-sample training loop: TN forward, sequential shift-rule updates of
/// each circuit parameter, then one MPS update. Throws TrainingError on a
/// non-finite cost.
std::vector<LossRecord> train(ModelState& model, std::span<const Sample> train_set,
                              std::span<const Sample> test_set, const TrainConfig& config,
                              const EpochCallback& on_epoch = {});

}  // namespace cotenqu
