#include "acopt/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace acopt {

namespace {

double apply_activation(Activation act, double z) {
  switch (act) {
    case Activation::Tanh: return std::tanh(z);
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Identity: return z;
  }
  return z;
}

// Derivative expressed through the post-activation value a = act(z); works
// for all three supported activations and avoids recomputing tanh.
double activation_grad(Activation act, double a) {
  switch (act) {
    case Activation::Tanh: return 1.0 - a * a;
    case Activation::Relu: return a > 0.0 ? 1.0 : 0.0;
    case Activation::Identity: return 1.0;
  }
  return 1.0;
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

NetworkSpec NetworkSpec::mlp(std::vector<int> widths, Activation hidden) {
  NetworkSpec spec;
  spec.layer_widths = std::move(widths);
  if (spec.layer_widths.size() >= 2) {
    spec.hidden_activations.assign(spec.layer_widths.size() - 2, hidden);
  }
  spec.validate();
  return spec;
}

std::size_t NetworkSpec::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_widths.size(); ++l) {
    n += static_cast<std::size_t>(layer_widths[l] + 1) * layer_widths[l + 1];
  }
  return n;
}

std::size_t NetworkSpec::layer_offset(int layer) const {
  std::size_t off = 0;
  for (int l = 0; l < layer; ++l) {
    off += static_cast<std::size_t>(layer_widths[l] + 1) * layer_widths[l + 1];
  }
  return off;
}

Activation NetworkSpec::activation_of(int layer) const {
  if (layer == num_weight_layers() - 1) return Activation::Identity;
  return hidden_activations[static_cast<std::size_t>(layer)];
}

void NetworkSpec::validate() const {
  if (layer_widths.size() < 2) {
    throw std::invalid_argument("NetworkSpec: need at least input and output widths");
  }
  for (int w : layer_widths) {
    if (w <= 0) throw std::invalid_argument("NetworkSpec: layer widths must be positive");
  }
  if (hidden_activations.size() != layer_widths.size() - 2) {
    throw std::invalid_argument("NetworkSpec: one activation per hidden layer required");
  }
}

ParamVector init_params(const NetworkSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  ParamVector p{spec, std::vector<double>(spec.param_count(), 0.0)};
  for (int l = 0; l < spec.num_weight_layers(); ++l) {
    const int in = spec.layer_widths[l];
    const int out = spec.layer_widths[l + 1];
    const double bound = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    double* w = p.values.data() + spec.layer_offset(l);
    for (int i = 0; i < in * out; ++i) w[i] = dist(rng);
    // biases stay zero
  }
  return p;
}

ParamVector zero_params(const NetworkSpec& spec) {
  spec.validate();
  return ParamVector{spec, std::vector<double>(spec.param_count(), 0.0)};
}

std::vector<double> forward(const ParamVector& params, std::span<const double> input) {
  const NetworkSpec& spec = params.spec;
  if (static_cast<int>(input.size()) != spec.input_width()) {
    throw std::invalid_argument("forward: input width mismatch");
  }
  if (params.values.size() != spec.param_count()) {
    throw std::invalid_argument("forward: parameter vector length mismatch");
  }
  check_finite(input, "forward input");

  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  for (int l = 0; l < spec.num_weight_layers(); ++l) {
    const int in = spec.layer_widths[l];
    const int out = spec.layer_widths[l + 1];
    const double* w = params.values.data() + spec.layer_offset(l);
    const double* b = w + static_cast<std::size_t>(in) * out;
    const Activation act = spec.activation_of(l);
    next.assign(static_cast<std::size_t>(out), 0.0);
    for (int o = 0; o < out; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * in;
      double z = b[o];
      for (int i = 0; i < in; ++i) z += row[i] * cur[static_cast<std::size_t>(i)];
      next[static_cast<std::size_t>(o)] = apply_activation(act, z);
    }
    cur.swap(next);
  }
  return cur;
}

Gradients backward(const ParamVector& params, std::span<const double> input,
                   std::span<const double> output_grad) {
  return forward_backward(params, input, output_grad).second;
}

std::pair<std::vector<double>, Gradients> forward_backward(const ParamVector& params,
                                                           std::span<const double> input,
                                                           std::span<const double> output_grad) {
  const NetworkSpec& spec = params.spec;
  if (static_cast<int>(input.size()) != spec.input_width()) {
    throw std::invalid_argument("backward: input width mismatch");
  }
  if (static_cast<int>(output_grad.size()) != spec.output_width()) {
    throw std::invalid_argument("backward: output gradient width mismatch");
  }
  if (params.values.size() != spec.param_count()) {
    throw std::invalid_argument("backward: parameter vector length mismatch");
  }

  const int layers = spec.num_weight_layers();

  // Forward pass keeping the post-activation of every layer.
  std::vector<std::vector<double>> acts(static_cast<std::size_t>(layers) + 1);
  acts[0].assign(input.begin(), input.end());
  for (int l = 0; l < layers; ++l) {
    const int in = spec.layer_widths[l];
    const int out = spec.layer_widths[l + 1];
    const double* w = params.values.data() + spec.layer_offset(l);
    const double* b = w + static_cast<std::size_t>(in) * out;
    const Activation act = spec.activation_of(l);
    auto& dst = acts[static_cast<std::size_t>(l) + 1];
    dst.assign(static_cast<std::size_t>(out), 0.0);
    const auto& src = acts[static_cast<std::size_t>(l)];
    for (int o = 0; o < out; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * in;
      double z = b[o];
      for (int i = 0; i < in; ++i) z += row[i] * src[static_cast<std::size_t>(i)];
      dst[static_cast<std::size_t>(o)] = apply_activation(act, z);
    }
  }

  Gradients g;
  g.param_grad.assign(spec.param_count(), 0.0);
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  std::vector<double> prev;

  for (int l = layers - 1; l >= 0; --l) {
    const int in = spec.layer_widths[l];
    const int out = spec.layer_widths[l + 1];
    const double* w = params.values.data() + spec.layer_offset(l);
    double* dw = g.param_grad.data() + spec.layer_offset(l);
    double* db = dw + static_cast<std::size_t>(in) * out;
    const auto& below = acts[static_cast<std::size_t>(l)];

    prev.assign(static_cast<std::size_t>(in), 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[static_cast<std::size_t>(o)];
      const double* row = w + static_cast<std::size_t>(o) * in;
      double* drow = dw + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) {
        drow[i] += d * below[static_cast<std::size_t>(i)];
        prev[static_cast<std::size_t>(i)] += row[i] * d;
      }
      db[o] += d;
    }
    if (l > 0) {
      const Activation act = spec.activation_of(l - 1);
      for (int i = 0; i < in; ++i) {
        prev[static_cast<std::size_t>(i)] *=
            activation_grad(act, below[static_cast<std::size_t>(i)]);
      }
    }
    delta.swap(prev);
  }
  g.input_grad = std::move(delta);
  return {std::move(acts.back()), std::move(g)};
}

AdamState AdamState::for_param_count(std::size_t n) {
  AdamState s;
  s.first_moment.assign(n, 0.0);
  s.second_moment.assign(n, 0.0);
  return s;
}

void adam_step(AdamState& state, ParamVector& params, std::span<const double> grad, double lr) {
  const std::size_t n = params.values.size();
  if (grad.size() != n || state.first_moment.size() != n || state.second_moment.size() != n) {
    throw std::invalid_argument("adam_step: length mismatch");
  }
  if (!(lr > 0.0)) throw std::invalid_argument("adam_step: lr must be positive");
  for (double gi : grad) {
    if (!std::isfinite(gi)) throw std::invalid_argument("adam_step: non-finite gradient entry");
  }

  state.step_count += 1;
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
  for (std::size_t i = 0; i < n; ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = b1 * m + (1.0 - b1) * grad[i];
    v = b2 * v + (1.0 - b2) * grad[i] * grad[i];
    const double mhat = m / corr1;
    const double vhat = v / corr2;
    params.values[i] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
  }
}

namespace {
constexpr char kMagic[4] = {'A', 'C', 'N', 'W'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_network(const std::string& path, const ParamVector& params) {
  params.spec.validate();
  if (params.values.size() != params.spec.param_count()) {
    throw std::invalid_argument("save_network: parameter vector length mismatch");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_network: cannot open " + path);
  out.write(kMagic, 4);
  auto put_u32 = [&out](std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  put_u32(kVersion);
  put_u32(static_cast<std::uint32_t>(params.spec.layer_widths.size()));
  for (int w : params.spec.layer_widths) put_u32(static_cast<std::uint32_t>(w));
  const Activation hidden = params.spec.hidden_activations.empty()
                                ? Activation::Identity
                                : params.spec.hidden_activations.front();
  const char act = static_cast<char>(hidden);
  out.write(&act, 1);
  out.write(reinterpret_cast<const char*>(params.values.data()),
            static_cast<std::streamsize>(params.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("save_network: write failed for " + path);
}

ParamVector load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_network: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("load_network: bad magic in " + path);
  }
  auto get_u32 = [&in, &path]() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("load_network: truncated header in " + path);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  };
  const std::uint32_t version = get_u32();
  if (version != kVersion) throw std::runtime_error("load_network: unsupported version");
  const std::uint32_t n_widths = get_u32();
  if (n_widths < 2 || n_widths > 64) throw std::runtime_error("load_network: bad width count");
  std::vector<int> widths(n_widths);
  for (auto& w : widths) w = static_cast<int>(get_u32());
  char act = 0;
  in.read(&act, 1);
  if (!in || act > 2) throw std::runtime_error("load_network: bad activation code");
  NetworkSpec spec = NetworkSpec::mlp(std::move(widths), static_cast<Activation>(act));
  ParamVector params{spec, std::vector<double>(spec.param_count())};
  in.read(reinterpret_cast<char*>(params.values.data()),
          static_cast<std::streamsize>(params.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("load_network: truncated weights in " + path);
  return params;
}

}  // namespace acopt
