#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace acopt {

enum class Activation : std::uint8_t { Tanh = 0, Relu = 1, Identity = 2 };

// Fixed feedforward stack. layer_widths holds the input width, any hidden
// widths, and the output width; hidden_activations has one entry per hidden
// layer (layer_widths.size() - 2 entries). The output layer is always linear.
struct NetworkSpec {
  std::vector<int> layer_widths;
  std::vector<Activation> hidden_activations;

  static NetworkSpec mlp(std::vector<int> widths, Activation hidden = Activation::Tanh);

  int input_width() const { return layer_widths.front(); }
  int output_width() const { return layer_widths.back(); }
  int num_weight_layers() const { return static_cast<int>(layer_widths.size()) - 1; }

  // Total parameter count: sum of (w_in + 1) * w_out over consecutive pairs.
  std::size_t param_count() const;

  // Offset of layer l's block in the flat parameter vector. Each block is the
  // weight matrix (row-major, w_out x w_in) followed by the bias (w_out).
  std::size_t layer_offset(int layer) const;

  Activation activation_of(int layer) const;  // Identity for the output layer

  void validate() const;  // throws std::invalid_argument on a malformed spec

  bool operator==(const NetworkSpec&) const = default;
};

struct ParamVector {
  NetworkSpec spec;
  std::vector<double> values;  // length spec.param_count()
};

// Glorot-style uniform init: weights in +-sqrt(6/(fan_in+fan_out)), biases 0.
ParamVector init_params(const NetworkSpec& spec, std::mt19937_64& rng);
ParamVector zero_params(const NetworkSpec& spec);

std::vector<double> forward(const ParamVector& params, std::span<const double> input);

struct Gradients {
  std::vector<double> param_grad;
  std::vector<double> input_grad;
};

// Exact reverse-mode gradients of output_grad . forward(params, input) with
// respect to the parameters and the input.
Gradients backward(const ParamVector& params, std::span<const double> input,
                   std::span<const double> output_grad);

// Same, but also hands back the forward output of the shared pass.
std::pair<std::vector<double>, Gradients> forward_backward(const ParamVector& params,
                                                           std::span<const double> input,
                                                           std::span<const double> output_grad);

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  long step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_param_count(std::size_t n);
};

// One bias-corrected Adam step in the minimizing direction. Rejects
// non-finite gradient entries.
void adam_step(AdamState& state, ParamVector& params, std::span<const double> grad, double lr);

// Flat weights file: "ACNW" magic, u32 version, u32 width count, u32 widths,
// u8 hidden activation code, then the parameter values as little-endian f64
// in the layer layout documented above.
void save_network(const std::string& path, const ParamVector& params);
ParamVector load_network(const std::string& path);

}  // namespace acopt
