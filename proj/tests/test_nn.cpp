#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "acopt/nn.hpp"
#include "oracles.hpp"

using namespace acopt;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_SUITE("nn") {

TEST_CASE("param count matches the (w_in+1)*w_out layout") {
  const auto spec = NetworkSpec::mlp({1, 64, 64, 2});
  CHECK(spec.param_count() == 2 * 64 + 65 * 64 + 65 * 2);
  CHECK(spec.layer_offset(1) == 2 * 64);
  CHECK(spec.layer_offset(2) == 2 * 64 + 65 * 64);
}

TEST_CASE("spec validation rejects malformed shapes") {
  NetworkSpec spec;
  spec.layer_widths = {4};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.layer_widths = {4, 0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.layer_widths = {4, 3};
  spec.hidden_activations = {Activation::Tanh};  // no hidden layer exists
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("zero network maps any input to zero") {
  const auto params = zero_params(NetworkSpec::mlp({3, 5, 2}));
  const std::vector<double> input{0.3, -1.2, 2.0};
  const auto out = forward(params, input);
  REQUIRE(out.size() == 2);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
}

TEST_CASE("single linear layer with identity weights is the identity map") {
  auto params = zero_params(NetworkSpec::mlp({4, 4}));
  for (int i = 0; i < 4; ++i) params.values[static_cast<std::size_t>(i * 4 + i)] = 1.0;
  const std::vector<double> input{0.5, -2.0, 3.25, 0.0};
  const auto out = forward(params, input);
  for (int i = 0; i < 4; ++i) CHECK(out[static_cast<std::size_t>(i)] == input[static_cast<std::size_t>(i)]);
}

TEST_CASE("random two-layer tanh net matches the reference evaluation") {
  std::mt19937_64 rng(11);
  const auto spec = NetworkSpec::mlp({3, 6, 2});
  const auto params = init_params(spec, rng);
  const auto input = random_vector(3, rng);
  const auto impl = forward(params, input);
  const auto ref = oracle::reference_forward(params, input);
  REQUIRE(impl.size() == ref.size());
  for (std::size_t i = 0; i < impl.size(); ++i) CHECK(impl[i] == doctest::Approx(ref[i]).epsilon(1e-10));
}

TEST_CASE("forward is pure: repeated calls are bit-identical") {
  std::mt19937_64 rng(12);
  const auto params = init_params(NetworkSpec::mlp({4, 8, 3}), rng);
  const auto input = random_vector(4, rng);
  const auto a = forward(params, input);
  const auto b = forward(params, input);
  CHECK(a == b);
}

TEST_CASE("forward rejects dimension mismatches") {
  const auto params = zero_params(NetworkSpec::mlp({3, 2}));
  const std::vector<double> bad{1.0, 2.0};
  CHECK_THROWS_AS(forward(params, bad), std::invalid_argument);
}

TEST_CASE("zero cotangent gives zero gradients") {
  std::mt19937_64 rng(13);
  const auto params = init_params(NetworkSpec::mlp({3, 5, 2}), rng);
  const std::vector<double> input{0.1, 0.2, -0.4};
  const std::vector<double> og{0.0, 0.0};
  const auto g = backward(params, input, og);
  for (double v : g.param_grad) CHECK(v == 0.0);
  for (double v : g.input_grad) CHECK(v == 0.0);
}

TEST_CASE("linear layer gradients are the hand-derived outer products") {
  // y = W v + b, cotangent g: dW = g v^T, db = g, dv = W^T g.
  std::mt19937_64 rng(14);
  const auto spec = NetworkSpec::mlp({3, 2});
  const auto params = init_params(spec, rng);
  const std::vector<double> v{0.7, -1.1, 0.4};
  const std::vector<double> g{2.0, -0.5};
  const auto grads = backward(params, v, g);
  for (int o = 0; o < 2; ++o) {
    for (int i = 0; i < 3; ++i) {
      CHECK(grads.param_grad[static_cast<std::size_t>(o * 3 + i)] ==
            doctest::Approx(g[static_cast<std::size_t>(o)] * v[static_cast<std::size_t>(i)]));
    }
    CHECK(grads.param_grad[static_cast<std::size_t>(6 + o)] ==
          doctest::Approx(g[static_cast<std::size_t>(o)]));
  }
  for (int i = 0; i < 3; ++i) {
    double expected = 0.0;
    for (int o = 0; o < 2; ++o) {
      expected += params.values[static_cast<std::size_t>(o * 3 + i)] * g[static_cast<std::size_t>(o)];
    }
    CHECK(grads.input_grad[static_cast<std::size_t>(i)] == doctest::Approx(expected));
  }
}

TEST_CASE("backward matches central finite differences on random small nets") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<int> width(1, 8);
  std::uniform_int_distribution<int> depth(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> widths{width(rng)};
    const int hidden = depth(rng);
    for (int h = 0; h < hidden; ++h) widths.push_back(width(rng));
    widths.push_back(width(rng));
    const auto spec = NetworkSpec::mlp(widths);
    const auto params = init_params(spec, rng);
    const auto input = random_vector(static_cast<std::size_t>(spec.input_width()), rng);
    const auto cotangent = random_vector(static_cast<std::size_t>(spec.output_width()), rng);

    const auto grads = backward(params, input, cotangent);

    auto scalar = [&](std::span<const double> p) {
      ParamVector moved{spec, std::vector<double>(p.begin(), p.end())};
      const auto out = forward(moved, input);
      double s = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i) s += cotangent[i] * out[i];
      return s;
    };
    const auto fd = oracle::finite_difference_gradient(scalar, params.values);
    CHECK(oracle::max_relative_error(grads.param_grad, fd) <= 1e-4);

    auto scalar_input = [&](std::span<const double> x) {
      const auto out = forward(params, x);
      double s = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i) s += cotangent[i] * out[i];
      return s;
    };
    const auto fd_input = oracle::finite_difference_gradient(scalar_input, input);
    CHECK(oracle::max_relative_error(grads.input_grad, fd_input) <= 1e-4);
  }
}

TEST_CASE("relu backward is exact in the linear regions") {
  auto params = zero_params(NetworkSpec::mlp({1, 2, 1}, Activation::Relu));
  // w1 = [2, -3], b1 = 0; w2 = [1, 1], b2 = 0.
  params.values[0] = 2.0;
  params.values[1] = -3.0;
  params.values[4] = 1.0;
  params.values[5] = 1.0;
  const std::vector<double> input{0.5};  // first unit active, second clamped
  const std::vector<double> og{1.0};
  const auto out = forward(params, input);
  CHECK(out[0] == doctest::Approx(1.0));
  const auto g = backward(params, input, og);
  CHECK(g.input_grad[0] == doctest::Approx(2.0));
}

TEST_CASE("adam leaves params unchanged on zero gradient from a fresh state") {
  std::mt19937_64 rng(16);
  auto params = init_params(NetworkSpec::mlp({2, 3, 1}), rng);
  const auto before = params.values;
  auto state = AdamState::for_param_count(params.values.size());
  const std::vector<double> zero(params.values.size(), 0.0);
  adam_step(state, params, zero, 1e-2);
  CHECK(params.values == before);
  CHECK(state.step_count == 1);
}

TEST_CASE("first adam step moves each coordinate by about -lr*sign(grad)") {
  auto params = zero_params(NetworkSpec::mlp({1, 2}));
  auto state = AdamState::for_param_count(params.values.size());
  const std::vector<double> grad{0.37, -1.93, 0.004, -0.2};
  const double lr = 1e-3;
  adam_step(state, params, grad, lr);
  // At t=1 the bias-corrected update is lr * g / (|g| + eps), i.e. lr*sign(g)
  // up to the epsilon correction.
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double expected = -lr * grad[i] / (std::abs(grad[i]) + state.epsilon);
    CHECK(params.values[i] == doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(params.values[i] + lr * (grad[i] > 0 ? 1.0 : -1.0)) < lr * 1e-3);
  }
}

TEST_CASE("update magnitude decays over zero-grad steps after one push") {
  auto params = zero_params(NetworkSpec::mlp({1, 1}));
  auto state = AdamState::for_param_count(params.values.size());
  const std::vector<double> grad{1.0, 0.0};
  const std::vector<double> zero{0.0, 0.0};
  adam_step(state, params, grad, 1e-2);
  const double step1 = std::abs(params.values[0]);
  double prev = params.values[0];
  adam_step(state, params, zero, 1e-2);
  const double step2 = std::abs(params.values[0] - prev);
  prev = params.values[0];
  adam_step(state, params, zero, 1e-2);
  const double step3 = std::abs(params.values[0] - prev);
  CHECK(step2 < step1);
  CHECK(step3 < step2);
  CHECK(step3 > 0.0);
}

TEST_CASE("adam rejects non-finite gradients and keeps parameters finite") {
  auto params = zero_params(NetworkSpec::mlp({1, 1}));
  auto state = AdamState::for_param_count(params.values.size());
  std::vector<double> bad{std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_THROWS_AS(adam_step(state, params, bad, 1e-3), std::invalid_argument);
  bad[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(adam_step(state, params, bad, 1e-3), std::invalid_argument);

  // Huge but finite gradients keep the update bounded by lr.
  std::mt19937_64 rng(17);
  std::vector<double> huge{1e300, -1e300};
  adam_step(state, params, huge, 1e-3);
  for (double v : params.values) CHECK(std::isfinite(v));
}

TEST_CASE("network weights round-trip through the flat file format") {
  std::mt19937_64 rng(18);
  const auto params = init_params(NetworkSpec::mlp({3, 4, 2}), rng);
  const std::string path = "nn_roundtrip_test.nnw";
  save_network(path, params);
  const auto loaded = load_network(path);
  CHECK(loaded.spec == params.spec);
  CHECK(loaded.values == params.values);
  std::remove(path.c_str());
}

TEST_CASE("load rejects files with a bad magic") {
  const std::string path = "nn_badmagic_test.nnw";
  {
    std::ofstream out(path, std::ios::binary);
    out << "not a weights file";
  }
  CHECK_THROWS_AS(load_network(path), std::runtime_error);
  std::remove(path.c_str());
}

}  // TEST_SUITE
