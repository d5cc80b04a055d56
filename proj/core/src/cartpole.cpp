#include "acopt/cartpole.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

namespace acopt {

namespace {

constexpr double kGravity = 9.8;
constexpr double kCartMass = 1.0;
constexpr double kPoleMass = 0.1;
constexpr double kTotalMass = kCartMass + kPoleMass;
constexpr double kHalfLength = 0.5;
constexpr double kPoleMassLength = kPoleMass * kHalfLength;
constexpr double kForceMagnitude = 10.0;
constexpr double kTimeStep = 0.02;
constexpr double kAngleLimit = 12.0 * 2.0 * std::numbers::pi / 360.0;
constexpr double kPositionLimit = 2.4;

// Stable per-episode seed derivation (splitmix64 over the mixed inputs).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::pair<CartPoleState, bool> cartpole_step(const CartPoleState& state, int action) {
  if (action != 0 && action != 1) throw std::invalid_argument("cartpole_step: action must be 0 or 1");
  const double force = action == 1 ? kForceMagnitude : -kForceMagnitude;
  const double cos_theta = std::cos(state.angle);
  const double sin_theta = std::sin(state.angle);

  const double temp =
      (force + kPoleMassLength * state.angular_velocity * state.angular_velocity * sin_theta) /
      kTotalMass;
  const double angular_accel =
      (kGravity * sin_theta - cos_theta * temp) /
      (kHalfLength * (4.0 / 3.0 - kPoleMass * cos_theta * cos_theta / kTotalMass));
  const double linear_accel = temp - kPoleMassLength * angular_accel * cos_theta / kTotalMass;

  CartPoleState next;
  next.position = state.position + kTimeStep * state.velocity;
  next.velocity = state.velocity + kTimeStep * linear_accel;
  next.angle = state.angle + kTimeStep * state.angular_velocity;
  next.angular_velocity = state.angular_velocity + kTimeStep * angular_accel;

  const bool terminated =
      std::abs(next.angle) > kAngleLimit || std::abs(next.position) > kPositionLimit;
  return {next, terminated};
}

double policy_return(std::span<const double> zeta, std::uint64_t episode_seed) {
  if (zeta.size() != kCartPoleDesignDim) {
    throw std::invalid_argument("policy_return: design must have dimension 5");
  }
  std::mt19937_64 rng(episode_seed);
  std::uniform_real_distribution<double> init(-0.05, 0.05);
  CartPoleState state{init(rng), init(rng), init(rng), init(rng)};

  double weights[kCartPoleDesignDim];
  for (int i = 0; i < kCartPoleDesignDim; ++i) weights[i] = 5.0 * zeta[static_cast<std::size_t>(i)];

  double total = 0.0;
  for (int step = 0; step < kCartPoleMaxSteps; ++step) {
    const double activation = weights[0] * state.position + weights[1] * state.velocity +
                              weights[2] * state.angle + weights[3] * state.angular_velocity +
                              weights[4];
    const int action = activation > 0.0 ? 1 : 0;
    auto [next, terminated] = cartpole_step(state, action);
    total += 1.0;
    if (terminated) break;
    state = next;
  }
  return total;
}

ContinuousObjective cartpole_objective(std::uint64_t base_seed, int episodes_per_query) {
  if (episodes_per_query < 1) {
    throw std::invalid_argument("cartpole_objective: episodes_per_query must be >= 1");
  }
  auto counter = std::make_shared<std::uint64_t>(0);
  return [base_seed, episodes_per_query, counter](std::span<const double> zeta) {
    const std::uint64_t query = (*counter)++;
    double total = 0.0;
    for (int e = 0; e < episodes_per_query; ++e) {
      total += policy_return(zeta, mix_seed(base_seed, query * 1000 + static_cast<std::uint64_t>(e)));
    }
    return total / (episodes_per_query * kCartPoleMaxSteps);
  };
}

double cartpole_evaluate(std::span<const double> zeta, std::uint64_t base_seed, int n_episodes) {
  double total = 0.0;
  for (int e = 0; e < n_episodes; ++e) {
    total += policy_return(zeta, mix_seed(base_seed, static_cast<std::uint64_t>(e)));
  }
  return total / n_episodes;
}

}  // namespace acopt
