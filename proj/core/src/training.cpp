#include "cotenqu/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "cotenqu/error.hpp"

namespace cotenqu {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Swap-test evaluations with per-call seeds in shots mode, so a run is
/// reproducible from the configured seed alone.
class FidelityOracle {
 public:
  FidelityOracle(const Readout& readout, std::uint64_t seed)
      : readout_(readout), state_(seed) {}

  double operator()(const CircuitSpec& spec, std::span<const double> params,
                    std::span<const double> angles, const ShiftInsertion* insert = nullptr) {
    if (const auto* shots = std::get_if<ShotReadout>(&readout_)) {
      state_ = splitmix64(state_);
      return swap_test_angles(spec, params, angles, ShotReadout{shots->shots, state_}, insert);
    }
    return swap_test_angles(spec, params, angles, ExactReadout{}, insert);
  }

 private:
  Readout readout_;
  std::uint64_t state_;
};

int circuit_target(const ModelState& model, std::size_t circuit, int label) {
  if (model.is_binary()) return label;
  return static_cast<int>(circuit) == label ? 1 : 0;
}

/// dCost/dp for the raw swap-test output p.
double cost_slope(double raw, int target) {
  const double dm_dp = raw > 0.5 ? 2.0 : 0.0;
  return binary_cost_derivative(mapped_fidelity(raw), target) * dm_dp;
}

std::vector<double> scale_output(const ScaledVector& raw, OutputScaling scaling) {
  if (scaling == OutputScaling::kRaw) return raw.value();
  double norm = 0.0;
  for (double x : raw.mantissa) norm += x * x;
  norm = std::sqrt(norm);
  std::vector<double> out(raw.mantissa.size(), 0.0);
  if (norm == 0.0) return out;
  const double k = std::sqrt(static_cast<double>(raw.mantissa.size())) / norm;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = raw.mantissa[i] * k;
  return out;
}

/// Pulls dCost/d(scaled output) back to the contracted MPS output.
/// Returns the upstream mantissa; its log scale goes to `log_scale`.
std::vector<double> unscale_gradient(const ScaledVector& raw, OutputScaling scaling,
                                     std::span<const double> grad, double& log_scale) {
  if (scaling == OutputScaling::kRaw) {
    log_scale = 0.0;
    return {grad.begin(), grad.end()};
  }
  const std::size_t n = raw.mantissa.size();
  double norm = 0.0;
  for (double x : raw.mantissa) norm += x * x;
  norm = std::sqrt(norm);
  std::vector<double> up(n, 0.0);
  log_scale = -raw.log_scale;
  if (norm == 0.0) return up;
  double proj = 0.0;
  for (std::size_t i = 0; i < n; ++i) proj += raw.mantissa[i] / norm * grad[i];
  const double k = std::sqrt(static_cast<double>(n)) / norm;
  for (std::size_t i = 0; i < n; ++i) {
    up[i] = k * (grad[i] - raw.mantissa[i] / norm * proj);
  }
  return up;
}

MpsGradient tn_gradient_from(const ModelState& model, const ForwardPass& fp, int label,
                             FidelityOracle& oracle) {
  const std::size_t d = fp.angles.size();
  std::vector<double> d_angle(d, 0.0);
  std::vector<double> shifted(fp.angles);
  for (std::size_t c = 0; c < model.num_circuits(); ++c) {
    const double slope = cost_slope(fp.fidelities[c], circuit_target(model, c, label));
    if (slope == 0.0) continue;
    const auto& params = model.circuit_params[c];
    for (std::size_t j = 0; j < d; ++j) {
      shifted[j] = fp.angles[j] + kHalfPi;
      const double plus = oracle(model.circuit, params, shifted);
      shifted[j] = fp.angles[j] - kHalfPi;
      const double minus = oracle(model.circuit, params, shifted);
      shifted[j] = fp.angles[j];
      d_angle[j] += slope * 0.5 * (plus - minus);
    }
  }
  // d atan(y) / dy = 1 / (1 + y^2)
  std::vector<double> d_output(d);
  for (std::size_t j = 0; j < d; ++j) {
    d_output[j] = d_angle[j] / (1.0 + fp.tn_output[j] * fp.tn_output[j]);
  }
  double log_scale = 0.0;
  const auto upstream = unscale_gradient(fp.tn_raw, model.output_scaling, d_output, log_scale);
  return mps_backward(model.mps, fp.mapped, upstream, log_scale);
}

ForwardPass forward_with(const ModelState& model, std::span<const double> features,
                         FidelityOracle& oracle) {
  ForwardPass fp;
  fp.mapped = feature_map(features);
  fp.tn_raw = mps_forward_scaled(model.mps, fp.mapped);
  fp.tn_output = scale_output(fp.tn_raw, model.output_scaling);
  fp.angles = encoding_angles(fp.tn_output, EncodingMode::kArctan);
  fp.fidelities.reserve(model.num_circuits());
  for (const auto& params : model.circuit_params) {
    fp.fidelities.push_back(oracle(model.circuit, params, fp.angles));
  }
  return fp;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

double binary_cost(double p, int label) {
  const double q = std::clamp(p, kCostClamp, 1.0 - kCostClamp);
  return label == 1 ? -std::log(q) : -std::log(1.0 - q);
}

double binary_cost_derivative(double p, int label) {
  if (p < kCostClamp || p > 1.0 - kCostClamp) return 0.0;
  return label == 1 ? -1.0 / p : 1.0 / (1.0 - p);
}

double epoch_shift(std::size_t epoch) {
  if (epoch == 0) throw ArgumentError("epoch numbers start at 1");
  return std::numbers::pi / (2.0 * std::sqrt(static_cast<double>(epoch)));
}

double shift_gradient(const CostFunction& f, std::span<const double> theta,
                      std::size_t index, double shift) {
  if (index >= theta.size()) throw IndexError("parameter index out of range");
  std::vector<double> t(theta.begin(), theta.end());
  t[index] = theta[index] + shift;
  const double plus = f(t);
  t[index] = theta[index] - shift;
  const double minus = f(t);
  return 0.5 * (plus - minus);
}

double ansatz_shift_gradient(const ShiftedFidelity& f, const CircuitSpec& spec,
                             std::span<const double> params, std::size_t index,
                             double shift) {
  if (!is_controlled_parameter(spec, index)) {
    return shift_gradient([&](std::span<const double> t) { return f(t, nullptr); }, params,
                          index, shift);
  }
  // outer half-angle rotation: R_t(s) after the gate
  ShiftInsertion outer{index, shift, 0.0};
  const double outer_plus = f(params, &outer);
  outer.target_angle = -shift;
  const double outer_minus = f(params, &outer);
  // inner one: R_t(s) on control 0, R_t(-s) on control 1
  ShiftInsertion inner{index, shift, -2.0 * shift};
  const double inner_plus = f(params, &inner);
  inner = {index, -shift, 2.0 * shift};
  const double inner_minus = f(params, &inner);
  return 0.25 * (outer_plus - outer_minus) - 0.25 * (inner_plus - inner_minus);
}

double finite_difference_gradient(const CostFunction& f, std::span<const double> theta,
                                  std::size_t index, double step) {
  if (!(step > 0.0)) throw ArgumentError("finite-difference step must be positive");
  if (index >= theta.size()) throw IndexError("parameter index out of range");
  std::vector<double> t(theta.begin(), theta.end());
  t[index] = theta[index] + step;
  const double plus = f(t);
  t[index] = theta[index] - step;
  const double minus = f(t);
  return (plus - minus) / (2.0 * step);
}

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) return {};
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - top);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

double circuit_cost(const CircuitSpec& spec, std::span<const double> params,
                    std::span<const double> angles, int label) {
  return binary_cost(mapped_fidelity(swap_test_angles(spec, params, angles)), label);
}

std::vector<double> circuit_cost_gradient(const CircuitSpec& spec,
                                          std::span<const double> params,
                                          std::span<const double> angles, int label,
                                          double shift) {
  const double slope = cost_slope(swap_test_angles(spec, params, angles), label);
  const ShiftedFidelity fidelity = [&](std::span<const double> t, const ShiftInsertion* insert) {
    return swap_test_angles(spec, t, angles, ExactReadout{}, insert);
  };
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    grad[i] = slope * ansatz_shift_gradient(fidelity, spec, params, i, shift);
  }
  return grad;
}

std::string_view to_string(ShiftMode mode) noexcept {
  return mode == ShiftMode::kFixedHalfPi ? "fixed" : "decay";
}

std::string_view to_string(OutputScaling scaling) noexcept {
  return scaling == OutputScaling::kRaw ? "raw" : "normalized";
}

std::string_view to_string(MulticlassUpdate update) noexcept {
  return update == MulticlassUpdate::kAllCircuits ? "all" : "label";
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ArgumentError("learning rate must be positive");
  }
  if (tn_learning_rate && (!(*tn_learning_rate > 0.0) || !std::isfinite(*tn_learning_rate))) {
    throw ArgumentError("TN learning rate must be positive");
  }
  if (const auto* shots = std::get_if<ShotReadout>(&readout); shots && shots->shots == 0) {
    throw ArgumentError("shots must be >= 1");
  }
}

ModelState ModelState::initialize(std::size_t num_sites, std::size_t bond_dim,
                                  CircuitSpec circuit, std::size_t num_classes,
                                  std::uint64_t seed, OutputScaling scaling) {
  if (num_classes < 2) throw ArgumentError("need at least two classes");
  ModelState m;
  m.mps = MpsModel::near_identity(num_sites, bond_dim, circuit.feature_dimension(), seed);
  m.circuit = std::move(circuit);
  m.num_classes = num_classes;
  m.output_scaling = scaling;
  std::mt19937_64 rng(splitmix64(seed));
  const std::size_t count = parameter_count(m.circuit);
  m.circuit_params.assign(m.num_circuits(), std::vector<double>(count));
  for (auto& params : m.circuit_params) {
    for (double& theta : params) {
      theta = static_cast<double>(rng() >> 11) * 0x1.0p-53 * std::numbers::pi;
    }
  }
  return m;
}

void ModelState::validate() const {
  if (num_classes < 2) throw ArgumentError("need at least two classes");
  if (circuit.register_qubits == 0 || circuit.layers.empty()) {
    throw ArgumentError("circuit needs at least one qubit per register and one layer");
  }
  if (mps.n_out() != circuit.feature_dimension()) {
    throw ArgumentError("MPS outputs " + std::to_string(mps.n_out()) +
                        " values but the circuit encodes " +
                        std::to_string(circuit.feature_dimension()));
  }
  if (circuit_params.size() != num_circuits()) {
    throw ArgumentError("expected " + std::to_string(num_circuits()) +
                        " circuit parameter vectors, got " +
                        std::to_string(circuit_params.size()));
  }
  for (const auto& params : circuit_params) {
    if (params.size() != parameter_count(circuit)) {
      throw ArgumentError("circuit parameter vector has the wrong length");
    }
  }
}

ForwardPass forward(const ModelState& model, std::span<const double> features,
                    const Readout& readout) {
  FidelityOracle oracle(readout, 0);
  return forward_with(model, features, oracle);
}

double sample_cost(const ModelState& model, std::span<const double> fidelities, int label) {
  double cost = 0.0;
  for (std::size_t c = 0; c < fidelities.size(); ++c) {
    cost += binary_cost(mapped_fidelity(fidelities[c]), circuit_target(model, c, label));
  }
  return cost;
}

Prediction decide(std::span<const double> raw_fidelities, bool binary) {
  Prediction p;
  if (binary) {
    const double score = mapped_fidelity(raw_fidelities.front());
    p.scores = {score};
    p.probabilities = {1.0 - std::min(score, 1.0), std::min(score, 1.0)};
    p.label = score < 0.5 ? 0 : 1;
    return p;
  }
  // no ReLU in front of the softmax
  for (double raw : raw_fidelities) p.scores.push_back((raw - 0.5) * 2.0);
  p.probabilities = softmax(p.scores);
  // max_element returns the first maximum, i.e. the lowest class index
  p.label = static_cast<int>(std::max_element(p.probabilities.begin(), p.probabilities.end()) -
                             p.probabilities.begin());
  return p;
}

Prediction predict(const ModelState& model, std::span<const double> features) {
  const ForwardPass fp = forward(model, features);
  return decide(fp.fidelities, model.is_binary());
}

std::vector<std::vector<double>> quantum_gradient(const ModelState& model,
                                                  std::span<const double> features,
                                                  int label) {
  const ForwardPass fp = forward(model, features);
  std::vector<std::vector<double>> grads;
  for (std::size_t c = 0; c < model.num_circuits(); ++c) {
    grads.push_back(circuit_cost_gradient(model.circuit, model.circuit_params[c], fp.angles,
                                          circuit_target(model, c, label), kHalfPi));
  }
  return grads;
}

MpsGradient tn_gradient(const ModelState& model, std::span<const double> features,
                        int label) {
  FidelityOracle oracle(ExactReadout{}, 0);
  const ForwardPass fp = forward_with(model, features, oracle);
  return tn_gradient_from(model, fp, label, oracle);
}

Evaluation evaluate(const ModelState& model, std::span<const Sample> data) {
  Evaluation ev;
  ev.confusion.assign(model.num_classes, std::vector<std::size_t>(model.num_classes, 0));
  if (data.empty()) {
    ev.accuracy = std::numeric_limits<double>::quiet_NaN();
    ev.mean_cost = std::numeric_limits<double>::quiet_NaN();
    return ev;
  }
  std::size_t correct = 0;
  double cost = 0.0;
  for (const Sample& s : data) {
    const ForwardPass fp = forward(model, s.features);
    cost += sample_cost(model, fp.fidelities, s.label);
    const Prediction p = decide(fp.fidelities, model.is_binary());
    if (s.label < 0 || static_cast<std::size_t>(s.label) >= model.num_classes) {
      throw ArgumentError("label " + std::to_string(s.label) + " outside the model's classes");
    }
    ++ev.confusion[static_cast<std::size_t>(s.label)][static_cast<std::size_t>(p.label)];
    if (p.label == s.label) ++correct;
  }
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  ev.mean_cost = cost / static_cast<double>(data.size());
  return ev;
}

std::vector<LossRecord> train(ModelState& model, std::span<const Sample> train_set,
                              std::span<const Sample> test_set, const TrainConfig& config,
                              const EpochCallback& on_epoch) {
  config.validate();
  model.validate();
  std::vector<LossRecord> records;
  if (config.epochs == 0) return records;
  if (train_set.empty()) throw ArgumentError("training set is empty");

  const double alpha = config.learning_rate;
  const double tn_alpha = config.tn_learning_rate.value_or(alpha);
  FidelityOracle oracle(config.readout, splitmix64(config.seed ^ 0x5eedULL));

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const double shift =
        config.shift_mode == ShiftMode::kFixedHalfPi ? kHalfPi : epoch_shift(epoch);

    for (std::size_t k = 0; k < train_set.size(); ++k) {
      const Sample& sample = train_set[k];
      const ForwardPass initial = forward_with(model, sample.features, oracle);
      if (!std::isfinite(sample_cost(model, initial.fidelities, sample.label)) ||
          !all_finite(initial.tn_output)) {
        throw TrainingError(epoch, k,
                            "non-finite cost at epoch " + std::to_string(epoch) +
                                ", sample " + std::to_string(k));
      }

      // quantum parameters, one at a time, each update visible to the next
      for (std::size_t c = 0; c < model.num_circuits(); ++c) {
        if (!model.is_binary() && config.multiclass_update == MulticlassUpdate::kLabelCircuit &&
            static_cast<int>(c) != sample.label) {
          continue;
        }
        const int target = circuit_target(model, c, sample.label);
        auto& params = model.circuit_params[c];
        const ShiftedFidelity fidelity = [&](std::span<const double> t,
                                             const ShiftInsertion* insert) {
          return oracle(model.circuit, t, initial.angles, insert);
        };
        for (std::size_t i = 0; i < params.size(); ++i) {
          const double current = oracle(model.circuit, params, initial.angles);
          const double grad = cost_slope(current, target) *
                              ansatz_shift_gradient(fidelity, model.circuit, params, i, shift);
          params[i] -= grad * alpha;
          if (!std::isfinite(params[i])) {
            throw TrainingError(epoch, k,
                                "non-finite circuit parameter at epoch " +
                                    std::to_string(epoch) + ", sample " + std::to_string(k));
          }
        }
      }

      // then the tensor network, against the updated circuits
      ForwardPass fp = initial;
      for (std::size_t c = 0; c < model.num_circuits(); ++c) {
        fp.fidelities[c] = oracle(model.circuit, model.circuit_params[c], fp.angles);
      }
      const MpsGradient grad = tn_gradient_from(model, fp, sample.label, oracle);
      for (const auto& t : grad.tensors) {
        if (!all_finite(t)) {
          throw TrainingError(epoch, k,
                              "non-finite tensor gradient at epoch " + std::to_string(epoch) +
                                  ", sample " + std::to_string(k));
        }
      }
      apply_gradient(model.mps, grad, tn_alpha);
    }

    const Evaluation train_eval = evaluate(model, train_set);
    if (!std::isfinite(train_eval.mean_cost)) {
      throw TrainingError(epoch, train_set.size(),
                          "non-finite mean cost after epoch " + std::to_string(epoch));
    }
    LossRecord rec;
    rec.epoch = epoch;
    rec.mean_cost = train_eval.mean_cost;
    rec.train_accuracy = train_eval.accuracy;
    rec.test_accuracy = test_set.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : evaluate(model, test_set).accuracy;
    records.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return records;
}

}  // namespace cotenqu
