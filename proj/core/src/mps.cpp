#include "cotenqu/mps.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cotenqu/error.hpp"

namespace cotenqu {
namespace {

/// Vector with a running log scale; the mantissa is kept at unit norm
/// unless it is exactly zero.
struct Env {
  std::vector<double> v;
  double log_scale = 0.0;

  void renormalize() {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n > 0.0 && std::isfinite(n)) {
      for (double& x : v) x /= n;
      log_scale += std::log(n);
    }
  }
};

/// site matrix M[a][b] = sum_s input[s] * A[a, s, b], row-major
std::vector<double> site_matrix(const MpsModel& model, std::size_t site,
                                const std::array<double, 2>& in) {
  const std::size_t l = model.left_dim(site), r = model.right_dim(site);
  std::vector<double> m(l * r);
  for (std::size_t a = 0; a < l; ++a)
    for (std::size_t b = 0; b < r; ++b)
      m[a * r + b] = in[0] * model.at(site, a, 0, b) + in[1] * model.at(site, a, 1, b);
  return m;
}

void check_input(const MpsModel& model, const MappedInput& input) {
  if (input.size() != model.num_sites()) {
    throw ShapeError("input has " + std::to_string(input.size()) +
                     " sites, model has " + std::to_string(model.num_sites()));
  }
}

/// Uniform in (0, 1) from 53 random bits.
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Left environments: envs[i] = input-contracted product of sites [0, i).
std::vector<Env> left_envs(const MpsModel& model, const MappedInput& input) {
  const std::size_t o = model.output_site();
  std::vector<Env> envs(o + 1);
  envs[0].v = {1.0};
  for (std::size_t i = 0; i < o; ++i) {
    const auto m = site_matrix(model, i, input[i]);
    const std::size_t l = model.left_dim(i), r = model.right_dim(i);
    Env next{std::vector<double>(r, 0.0), envs[i].log_scale};
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t b = 0; b < r; ++b) next.v[b] += envs[i].v[a] * m[a * r + b];
    next.renormalize();
    envs[i + 1] = std::move(next);
  }
  return envs;
}

/// Right environments: envs[i] = product of sites [i, N), for i > output site.
/// envs[N] is the trivial boundary.
std::vector<Env> right_envs(const MpsModel& model, const MappedInput& input) {
  const std::size_t n = model.num_sites(), o = model.output_site();
  std::vector<Env> envs(n + 1);
  envs[n].v = {1.0};
  for (std::size_t i = n; i-- > o + 1;) {
    const auto m = site_matrix(model, i, input[i]);
    const std::size_t l = model.left_dim(i), r = model.right_dim(i);
    Env next{std::vector<double>(l, 0.0), envs[i + 1].log_scale};
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t b = 0; b < r; ++b) next.v[a] += m[a * r + b] * envs[i + 1].v[b];
    next.renormalize();
    envs[i] = std::move(next);
  }
  return envs;
}

}  // namespace

MappedInput feature_map(std::span<const double> features) {
  MappedInput out(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double x = features[i];
    if (!(x >= 0.0 && x <= 1.0)) {
      throw DomainError("feature " + std::to_string(i) + " = " + std::to_string(x) +
                        " outside [0, 1]");
    }
    out[i] = {std::cos(std::numbers::pi / 2 * x), std::sin(std::numbers::pi / 2 * x)};
  }
  return out;
}

MpsModel::MpsModel(std::size_t num_sites, std::size_t bond_dim, std::size_t n_out)
    : bond_dim_(bond_dim), n_out_(n_out) {
  if (num_sites == 0 || bond_dim == 0 || n_out == 0) {
    throw ShapeError("MPS sizes must be nonzero");
  }
  tensors_.resize(num_sites);
  for (std::size_t i = 0; i < num_sites; ++i) {
    std::size_t size = left_dim(i) * 2 * right_dim(i);
    if (i == output_site()) size *= n_out;
    tensors_[i].assign(size, 0.0);
  }
}

MpsModel MpsModel::near_identity(std::size_t num_sites, std::size_t bond_dim,
                                 std::size_t n_out, std::uint64_t seed, double noise) {
  MpsModel model(num_sites, bond_dim, n_out);
  std::mt19937_64 rng(seed);
  // Box-Muller, so the stream is identical on every standard library
  auto gaussian = [&rng]() {
    const double u1 = open_uniform(rng), u2 = open_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  for (std::size_t i = 0; i < num_sites; ++i) {
    const std::size_t l = model.left_dim(i), r = model.right_dim(i);
    const std::size_t legs = i == model.output_site() ? n_out : 1;
    // the ends and the output site are dense so every bond channel reaches
    // every output; with identity there only one channel would carry signal
    const bool dense = i == 0 || i + 1 == num_sites || legs > 1;
    auto t = model.site(i);
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t j = 0; j < legs; ++j)
          for (std::size_t b = 0; b < r; ++b)
            t[((a * 2 + s) * legs + j) * r + b] =
                dense ? gaussian() : (a == b ? 1.0 : 0.0) + noise * gaussian();
  }
  return model;
}

std::vector<std::size_t> MpsModel::site_shape(std::size_t site) const {
  if (site == output_site()) return {left_dim(site), 2, n_out_, right_dim(site)};
  return {left_dim(site), 2, right_dim(site)};
}

std::size_t MpsModel::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

void MpsModel::set_tensors(std::vector<std::vector<double>> tensors) {
  if (tensors.size() != tensors_.size()) {
    throw ShapeError("expected " + std::to_string(tensors_.size()) + " site tensors, got " +
                     std::to_string(tensors.size()));
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (tensors[i].size() != tensors_[i].size()) {
      throw ShapeError("site " + std::to_string(i) + " has " +
                       std::to_string(tensors[i].size()) + " elements, expected " +
                       std::to_string(tensors_[i].size()));
    }
  }
  tensors_ = std::move(tensors);
}

std::vector<double> ScaledVector::value() const {
  std::vector<double> out(mantissa.size());
  const double scale = std::exp(log_scale);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mantissa[i] * scale;
  return out;
}

ScaledVector mps_forward_scaled(const MpsModel& model, const MappedInput& input) {
  check_input(model, input);
  const std::size_t o = model.output_site();
  const auto lefts = left_envs(model, input);
  const auto rights = right_envs(model, input);
  const Env& left = lefts[o];
  const Env& right = rights[o + 1];

  Env out{std::vector<double>(model.n_out(), 0.0), left.log_scale + right.log_scale};
  const std::size_t l = model.left_dim(o), r = model.right_dim(o);
  const auto& in = input[o];
  for (std::size_t a = 0; a < l; ++a)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t j = 0; j < model.n_out(); ++j)
        for (std::size_t b = 0; b < r; ++b)
          out.v[j] += left.v[a] * in[s] * model.out_at(a, s, j, b) * right.v[b];
  out.renormalize();
  return ScaledVector{std::move(out.v), out.log_scale};
}

std::vector<double> mps_forward(const MpsModel& model, const MappedInput& input) {
  return mps_forward_scaled(model, input).value();
}

MpsGradient mps_backward(const MpsModel& model, const MappedInput& input,
                         std::span<const double> upstream, double upstream_log_scale) {
  check_input(model, input);
  if (upstream.size() != model.n_out()) {
    throw ShapeError("upstream gradient has " + std::to_string(upstream.size()) +
                     " entries, model outputs " + std::to_string(model.n_out()));
  }
  const std::size_t n = model.num_sites(), o = model.output_site();
  const auto lefts = left_envs(model, input);
  const auto rights = right_envs(model, input);
  const Env& left = lefts[o];
  const Env& right = rights[o + 1];
  const auto& in_o = input[o];
  const std::size_t lo = model.left_dim(o), ro = model.right_dim(o);

  MpsGradient grad;
  grad.tensors.resize(n);

  // output site: L[a] v[s] g[j] R[b]
  {
    auto& g = grad.tensors[o];
    g.assign(model.site(o).size(), 0.0);
    const double scale = std::exp(left.log_scale + right.log_scale + upstream_log_scale);
    for (std::size_t a = 0; a < lo; ++a)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t j = 0; j < model.n_out(); ++j)
          for (std::size_t b = 0; b < ro; ++b)
            g[((a * 2 + s) * model.n_out() + j) * ro + b] =
                left.v[a] * in_o[s] * upstream[j] * right.v[b] * scale;
  }

  // sweep left of the output site, carrying everything to the right of it
  Env carry{std::vector<double>(lo, 0.0), right.log_scale + upstream_log_scale};
  for (std::size_t a = 0; a < lo; ++a)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t j = 0; j < model.n_out(); ++j)
        for (std::size_t b = 0; b < ro; ++b)
          carry.v[a] += in_o[s] * model.out_at(a, s, j, b) * upstream[j] * right.v[b];
  carry.renormalize();
  for (std::size_t i = o; i-- > 0;) {
    const std::size_t l = model.left_dim(i), r = model.right_dim(i);
    const Env& env = lefts[i];
    const double scale = std::exp(env.log_scale + carry.log_scale);
    auto& g = grad.tensors[i];
    g.assign(l * 2 * r, 0.0);
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t b = 0; b < r; ++b)
          g[(a * 2 + s) * r + b] = env.v[a] * input[i][s] * carry.v[b] * scale;
    const auto m = site_matrix(model, i, input[i]);
    Env next{std::vector<double>(l, 0.0), carry.log_scale};
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t b = 0; b < r; ++b) next.v[a] += m[a * r + b] * carry.v[b];
    next.renormalize();
    carry = std::move(next);
  }

  // sweep right of the output site
  carry = Env{std::vector<double>(ro, 0.0), left.log_scale + upstream_log_scale};
  for (std::size_t a = 0; a < lo; ++a)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t j = 0; j < model.n_out(); ++j)
        for (std::size_t b = 0; b < ro; ++b)
          carry.v[b] += left.v[a] * in_o[s] * model.out_at(a, s, j, b) * upstream[j];
  carry.renormalize();
  for (std::size_t i = o + 1; i < n; ++i) {
    const std::size_t l = model.left_dim(i), r = model.right_dim(i);
    const Env& env = rights[i + 1];
    const double scale = std::exp(carry.log_scale + env.log_scale);
    auto& g = grad.tensors[i];
    g.assign(l * 2 * r, 0.0);
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t b = 0; b < r; ++b)
          g[(a * 2 + s) * r + b] = carry.v[a] * input[i][s] * env.v[b] * scale;
    const auto m = site_matrix(model, i, input[i]);
    Env next{std::vector<double>(r, 0.0), carry.log_scale};
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t b = 0; b < r; ++b) next.v[b] += carry.v[a] * m[a * r + b];
    next.renormalize();
    carry = std::move(next);
  }
  return grad;
}

void apply_gradient(MpsModel& model, const MpsGradient& gradient, double learning_rate) {
  if (gradient.tensors.size() != model.num_sites()) {
    throw ShapeError("gradient does not match the model");
  }
  for (std::size_t i = 0; i < model.num_sites(); ++i) {
    auto t = model.site(i);
    const auto& g = gradient.tensors[i];
    if (g.size() != t.size()) throw ShapeError("gradient does not match the model");
    for (std::size_t k = 0; k < t.size(); ++k) t[k] -= learning_rate * g[k];
  }
}

}  // namespace cotenqu
