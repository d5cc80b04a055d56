#pragma once

#include <random>
#include <span>
#include <vector>

#include "acopt/critic.hpp"
#include "acopt/nn.hpp"

namespace acopt {

// Squashed-Gaussian generator over (-1,1)^d. The network maps a fixed input
// (all-ones by default, standard-normal per sample when gaussian_input is
// set) to concatenated mu and raw log-sigma heads; designs are
// tanh(mu + sigma * xi) with xi ~ N(0, I).
struct ContinuousActor {
  ParamVector params;  // output width 2 * design_dim
  int design_dim = 0;
  int noise_dim = 1;
  double log_sigma_min = -5.0;
  double log_sigma_max = 2.0;
  bool gaussian_input = false;
};

ContinuousActor make_continuous_actor(int design_dim, const std::vector<int>& hidden,
                                      std::mt19937_64& rng, int noise_dim = 1,
                                      bool gaussian_input = false);

struct NoiseSample {
  std::vector<double> xi;         // length design_dim
  std::vector<double> net_input;  // length noise_dim
};

// Draws xi (and the network input when gaussian_input is set) from N(0, I).
NoiseSample draw_noise(const ContinuousActor& actor, std::mt19937_64& rng);

// The constant network input used when gaussian_input is off.
std::vector<double> constant_input(const ContinuousActor& actor);

struct ActorHeads {
  std::vector<double> mu;
  std::vector<double> sigma;  // exp of clamped log-sigma, strictly positive
};

ActorHeads actor_heads(const ContinuousActor& actor, std::span<const double> noise_input);

// x = tanh(mu + sigma * xi), every coordinate strictly inside (-1, 1).
std::vector<double> sample_design(const ContinuousActor& actor, std::span<const double> xi);
std::vector<double> sample_design(const ContinuousActor& actor, const NoiseSample& noise);

// Log-density of the generated design, evaluated along the sampling path
// (never by inverting tanh). The squash correction log(1 - tanh^2(u)) is
// computed as 2*(log 2 - u - softplus(-2u)) which stays finite for large |u|.
double log_density(const ContinuousActor& actor, std::span<const double> xi);
double log_density(const ContinuousActor& actor, const NoiseSample& noise);

// Monte-Carlo estimate of the entropy-regularized objective:
// mean over the batch of Q(x) - alpha * log h(x).
double objective_estimate(const ContinuousActor& actor, const QFunction& q,
                          std::span<const NoiseSample> noise_batch, double alpha);
double objective_estimate(const ContinuousActor& actor, const Critic& critic,
                          std::span<const NoiseSample> noise_batch, double alpha);

// One ascent step on the reparameterized gradient of the Monte-Carlo
// objective above; gradients flow through the design into both the critic
// input and the log-density, the critic itself is frozen. Returns the batch
// objective estimate measured before the step.
double actor_update_continuous(ContinuousActor& actor, const QFunction& q,
                               std::span<const NoiseSample> noise_batch, double alpha,
                               AdamState& opt, double lr);
double actor_update_continuous(ContinuousActor& actor, const Critic& critic,
                               std::span<const NoiseSample> noise_batch, double alpha,
                               AdamState& opt, double lr);

}  // namespace acopt
