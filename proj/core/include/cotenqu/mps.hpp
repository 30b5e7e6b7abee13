#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cotenqu {

/// Per-site embedding x -> (cos(pi/2 x), sin(pi/2 x)).
using MappedInput = std::vector<std::array<double, 2>>;

/// DomainError if any feature lies outside [0, 1].
MappedInput feature_map(std::span<const double> features);

/// Matrix product state with one output leg.
///
/// Site i holds a (left, 2, right) tensor, row-major; the output site holds
/// (left, 2, n_out, right). Boundary bonds have size 1 and every interior
/// bond has size `bond_dim`. The output leg sits on site num_sites / 2.
class MpsModel {
 public:
  MpsModel() = default;
  /// Zero-filled model. ShapeError for zero sizes.
  MpsModel(std::size_t num_sites, std::size_t bond_dim, std::size_t n_out);

  /// Interior sites: identity on the bond block for both physical indices
  /// plus seeded Gaussian noise of standard deviation `noise`. The first,
  /// last and output sites are drawn from N(0, 1).
  static MpsModel near_identity(std::size_t num_sites, std::size_t bond_dim,
                                std::size_t n_out, std::uint64_t seed,
                                double noise = 0.01);

  std::size_t num_sites() const noexcept { return tensors_.size(); }
  std::size_t bond_dim() const noexcept { return bond_dim_; }
  std::size_t n_out() const noexcept { return n_out_; }
  std::size_t output_site() const noexcept { return num_sites() / 2; }

  std::size_t left_dim(std::size_t site) const noexcept {
    return site == 0 ? 1 : bond_dim_;
  }
  std::size_t right_dim(std::size_t site) const noexcept {
    return site + 1 == num_sites() ? 1 : bond_dim_;
  }
  /// {left, 2, right} or {left, 2, n_out, right} for the output site.
  std::vector<std::size_t> site_shape(std::size_t site) const;

  std::span<double> site(std::size_t i) { return tensors_.at(i); }
  std::span<const double> site(std::size_t i) const { return tensors_.at(i); }

  /// Element (l, s, r) of a regular site.
  double& at(std::size_t site, std::size_t l, std::size_t s, std::size_t r) {
    return tensors_[site][(l * 2 + s) * right_dim(site) + r];
  }
  double at(std::size_t site, std::size_t l, std::size_t s, std::size_t r) const {
    return tensors_[site][(l * 2 + s) * right_dim(site) + r];
  }
  /// Element (l, s, j, r) of the output site.
  double& out_at(std::size_t l, std::size_t s, std::size_t j, std::size_t r) {
    const std::size_t o = output_site();
    return tensors_[o][((l * 2 + s) * n_out_ + j) * right_dim(o) + r];
  }
  double out_at(std::size_t l, std::size_t s, std::size_t j, std::size_t r) const {
    const std::size_t o = output_site();
    return tensors_[o][((l * 2 + s) * n_out_ + j) * right_dim(o) + r];
  }

  std::size_t parameter_count() const noexcept;

  /// Replaces the tensors after checking every shape.
  void set_tensors(std::vector<std::vector<double>> tensors);
  const std::vector<std::vector<double>>& tensors() const noexcept { return tensors_; }

  bool operator==(const MpsModel&) const = default;

 private:
  std::size_t bond_dim_ = 1;
  std::size_t n_out_ = 1;
  std::vector<std::vector<double>> tensors_;
};

/// A vector stored as mantissa * exp(log_scale).
struct ScaledVector {
  std::vector<double> mantissa;
  double log_scale = 0.0;

  std::vector<double> value() const;
};

/// Contracts the chain with the mapped input. The result is carried in
/// log-scaled form so long chains neither overflow nor underflow.
/// ShapeError if the input length differs from the number of sites.
ScaledVector mps_forward_scaled(const MpsModel& model, const MappedInput& input);

/// mps_forward_scaled folded back into plain values.
std::vector<double> mps_forward(const MpsModel& model, const MappedInput& input);

/// dLoss/dT for every site tensor, same layout as MpsModel::tensors().
struct MpsGradient {
  std::vector<std::vector<double>> tensors;
};

/// Gradient of sum_j upstream_j * exp(upstream_log_scale) * output_j.
///
/// Left and right environments are computed once and swept, so the cost is
/// linear in the number of sites.
MpsGradient mps_backward(const MpsModel& model, const MappedInput& input,
                         std::span<const double> upstream,
                         double upstream_log_scale = 0.0);

/// model -= learning_rate * gradient
void apply_gradient(MpsModel& model, const MpsGradient& gradient, double learning_rate);

}  // namespace cotenqu
