#pragma once

#include <random>
#include <span>
#include <vector>

#include "acopt/critic.hpp"
#include "acopt/nn.hpp"

namespace acopt {

// Softmax-categorical policy over a finite design set: the network maps a
// constant scalar input to one logit per design.
struct DiscreteActor {
  ParamVector params;  // output width n_designs
  int n_designs = 0;
};

DiscreteActor make_discrete_actor(int n_designs, const std::vector<int>& hidden,
                                  std::mt19937_64& rng);

// Max-subtracted softmax; entries are floored at 1e-300 (and renormalized)
// so log P stays finite even for logit spreads beyond double range.
std::vector<double> softmax(std::span<const double> logits);

// The actor's current distribution over the design set.
std::vector<double> design_distribution(const DiscreteActor& actor);

int sample_category(std::span<const double> probs, std::mt19937_64& rng);

// Sum over designs of P(x) * (Q(x) - alpha * log P(x)).
double discrete_objective(std::span<const double> probs, std::span<const double> q_values,
                          double alpha);

// One exact-gradient ascent step: the critic is evaluated on every design
// and the full expectation is differentiated, no sampling involved. Returns
// the objective value measured before the step.
double actor_update_discrete(DiscreteActor& actor, std::span<const double> q_values, double alpha,
                             AdamState& opt, double lr);
double actor_update_discrete(DiscreteActor& actor, const Critic& critic, double alpha,
                             AdamState& opt, double lr);

// Critic predictions for all n one-hot designs.
std::vector<double> critic_design_values(const Critic& critic, int n_designs);

// Closed-form maximizer of the entropy-regularized objective:
// P*(x_i) proportional to exp(Q(x_i) / alpha). alpha must be positive; the
// alpha -> 0 argmax limit is excluded because it violates P*(x) > 0.
std::vector<double> optimal_distribution(std::span<const double> q_values, double alpha);

}  // namespace acopt
