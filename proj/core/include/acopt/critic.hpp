#pragma once

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "acopt/design.hpp"
#include "acopt/nn.hpp"

namespace acopt {

// Surrogate score model: a network with a single linear output unit over the
// encoded design (discrete designs are one-hot encoded to input_dim).
struct Critic {
  ParamVector params;
  int input_dim = 0;
};

Critic make_critic(int input_dim, const std::vector<int>& hidden, std::mt19937_64& rng);

double predict(const Critic& critic, std::span<const double> encoded);
double predict(const Critic& critic, const Design& design);

// Mean over the batch of 0.5 * (Q(x) - y)^2.
double critic_loss(const Critic& critic, std::span<const ScoredDesign> batch);

// One Adam step on the regression loss gradient; returns the batch loss
// measured before the step.
double critic_update(Critic& critic, std::span<const ScoredDesign> batch, AdamState& opt,
                     double lr);

// Score-function view used by the actor updates: value and gradient with
// respect to the design. Lets tests drive the actors with analytic critics.
struct QFunction {
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
  // Optional fused evaluation; falls back to the two calls above when empty.
  std::function<std::pair<double, std::vector<double>>(std::span<const double>)> value_and_gradient;
};

std::pair<double, std::vector<double>> q_value_and_gradient(const QFunction& q,
                                                            std::span<const double> x);

QFunction as_q_function(const Critic& critic);

}  // namespace acopt
