#pragma once

#include <cstdint>
#include <span>

#include "acopt/engine.hpp"

namespace acopt {

struct CartPoleState {
  double position = 0.0;          // m
  double velocity = 0.0;          // m/s
  double angle = 0.0;             // rad
  double angular_velocity = 0.0;  // rad/s
};

// One Euler step of the classic cart-pole dynamics; action 0 pushes left,
// action 1 pushes right. Terminates when |angle| > 12 degrees or
// |position| > 2.4 m.
std::pair<CartPoleState, bool> cartpole_step(const CartPoleState& state, int action);

// Episodic return of a linear threshold policy over the 4-dim state plus
// bias: a = 1 if w . s + b > 0 else 0, with (w, b) = 5 * zeta. One episode,
// capped at 200 steps, each step worth +1; the initial state is uniform in
// +-0.05 per coordinate under the given seed.
double policy_return(std::span<const double> zeta, std::uint64_t episode_seed);

constexpr int kCartPoleDesignDim = 5;
constexpr int kCartPoleMaxSteps = 200;

// Black-box adapter: each query averages episodes_per_query fresh episodes
// whose seeds derive deterministically from base_seed and a query counter,
// and reports the mean return scaled to (0, 1] by the step cap.
ContinuousObjective cartpole_objective(std::uint64_t base_seed, int episodes_per_query);

// Raw mean return (unscaled) over n_episodes fixed-seed evaluations.
double cartpole_evaluate(std::span<const double> zeta, std::uint64_t base_seed, int n_episodes);

}  // namespace acopt
