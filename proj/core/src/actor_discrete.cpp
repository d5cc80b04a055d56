#include "acopt/actor_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acopt/rng.hpp"

namespace acopt {

namespace {
constexpr double kProbFloor = 1e-300;
const std::vector<double> kUnitInput{1.0};
}  // namespace

DiscreteActor make_discrete_actor(int n_designs, const std::vector<int>& hidden,
                                  std::mt19937_64& rng) {
  if (n_designs <= 0) throw std::invalid_argument("make_discrete_actor: n_designs must be positive");
  std::vector<int> widths;
  widths.push_back(1);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(n_designs);
  return DiscreteActor{init_params(NetworkSpec::mlp(std::move(widths)), rng), n_designs};
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty logits");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - m);
    total += probs[i];
  }
  double floored = 0.0;
  for (double& p : probs) {
    p = std::max(p / total, kProbFloor);
    floored += p;
  }
  for (double& p : probs) p /= floored;
  return probs;
}

std::vector<double> design_distribution(const DiscreteActor& actor) {
  return softmax(forward(actor.params, kUnitInput));
}

int sample_category(std::span<const double> probs, std::mt19937_64& rng) {
  const double u = draw_uniform(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

double discrete_objective(std::span<const double> probs, std::span<const double> q_values,
                          double alpha) {
  if (probs.size() != q_values.size()) {
    throw std::invalid_argument("discrete_objective: length mismatch");
  }
  if (alpha < 0.0) throw std::invalid_argument("discrete_objective: alpha must be >= 0");
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    total += probs[i] * (q_values[i] - alpha * std::log(probs[i]));
  }
  return total;
}

std::vector<double> critic_design_values(const Critic& critic, int n_designs) {
  std::vector<double> q(static_cast<std::size_t>(n_designs));
  for (int i = 0; i < n_designs; ++i) {
    q[static_cast<std::size_t>(i)] = predict(critic, Design{CategoryDesign{i, n_designs}});
  }
  return q;
}

double actor_update_discrete(DiscreteActor& actor, std::span<const double> q_values, double alpha,
                             AdamState& opt, double lr) {
  const int n = actor.n_designs;
  if (static_cast<int>(q_values.size()) != n) {
    throw std::invalid_argument("actor_update_discrete: q_values length mismatch");
  }
  const std::vector<double> logits = forward(actor.params, kUnitInput);
  const std::vector<double> probs = softmax(logits);

  // dJ/dz_i through the softmax Jacobian applied to the bracket
  // [Q - alpha*log P - alpha]; the -alpha term has zero expectation under
  // any logit shift but is kept as part of the exact expression.
  std::vector<double> bracket(static_cast<std::size_t>(n));
  double mean_bracket = 0.0;
  for (int i = 0; i < n; ++i) {
    bracket[static_cast<std::size_t>(i)] =
        q_values[static_cast<std::size_t>(i)] -
        alpha * std::log(probs[static_cast<std::size_t>(i)]) - alpha;
    mean_bracket += probs[static_cast<std::size_t>(i)] * bracket[static_cast<std::size_t>(i)];
  }
  std::vector<double> cotangent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cotangent[static_cast<std::size_t>(i)] =
        probs[static_cast<std::size_t>(i)] * (bracket[static_cast<std::size_t>(i)] - mean_bracket);
  }

  Gradients g = backward(actor.params, kUnitInput, cotangent);
  for (double& gi : g.param_grad) gi = -gi;  // ascent
  adam_step(opt, actor.params, g.param_grad, lr);
  return discrete_objective(probs, q_values, alpha);
}

double actor_update_discrete(DiscreteActor& actor, const Critic& critic, double alpha,
                             AdamState& opt, double lr) {
  return actor_update_discrete(actor, critic_design_values(critic, actor.n_designs), alpha, opt,
                               lr);
}

std::vector<double> optimal_distribution(std::span<const double> q_values, double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("optimal_distribution: alpha must be positive");
  }
  std::vector<double> scaled(q_values.size());
  for (std::size_t i = 0; i < q_values.size(); ++i) scaled[i] = q_values[i] / alpha;
  return softmax(scaled);
}

}  // namespace acopt
