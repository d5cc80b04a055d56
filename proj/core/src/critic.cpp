#include "acopt/critic.hpp"

#include <stdexcept>

namespace acopt {

Critic make_critic(int input_dim, const std::vector<int>& hidden, std::mt19937_64& rng) {
  if (input_dim <= 0) throw std::invalid_argument("make_critic: input_dim must be positive");
  std::vector<int> widths;
  widths.push_back(input_dim);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(1);
  return Critic{init_params(NetworkSpec::mlp(std::move(widths)), rng), input_dim};
}

double predict(const Critic& critic, std::span<const double> encoded) {
  return forward(critic.params, encoded)[0];
}

double predict(const Critic& critic, const Design& design) {
  const std::vector<double> encoded = encode_design(design, critic.input_dim);
  return predict(critic, std::span<const double>(encoded));
}

double critic_loss(const Critic& critic, std::span<const ScoredDesign> batch) {
  if (batch.empty()) throw std::invalid_argument("critic_loss: empty batch");
  double total = 0.0;
  for (const auto& sd : batch) {
    const double r = predict(critic, sd.design) - sd.score;
    total += 0.5 * r * r;
  }
  return total / static_cast<double>(batch.size());
}

double critic_update(Critic& critic, std::span<const ScoredDesign> batch, AdamState& opt,
                     double lr) {
  if (batch.empty()) throw std::invalid_argument("critic_update: empty batch");
  std::vector<double> grad(critic.params.values.size(), 0.0);
  double loss = 0.0;
  for (const auto& sd : batch) {
    const auto encoded = encode_design(sd.design, critic.input_dim);
    const double residual = forward(critic.params, encoded)[0] - sd.score;
    loss += 0.5 * residual * residual;
    const double og[1] = {residual};
    const Gradients g = backward(critic.params, encoded, og);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g.param_grad[i];
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (double& gi : grad) gi *= inv;
  adam_step(opt, critic.params, grad, lr);
  return loss * inv;
}

QFunction as_q_function(const Critic& critic) {
  QFunction q;
  q.value = [&critic](std::span<const double> x) { return predict(critic, x); };
  q.gradient = [&critic](std::span<const double> x) {
    const double og[1] = {1.0};
    return backward(critic.params, x, og).input_grad;
  };
  q.value_and_gradient = [&critic](std::span<const double> x) {
    const double og[1] = {1.0};
    auto [out, grads] = forward_backward(critic.params, x, og);
    return std::make_pair(out[0], std::move(grads.input_grad));
  };
  return q;
}

std::pair<double, std::vector<double>> q_value_and_gradient(const QFunction& q,
                                                            std::span<const double> x) {
  if (q.value_and_gradient) return q.value_and_gradient(x);
  return {q.value(x), q.gradient(x)};
}

}  // namespace acopt
