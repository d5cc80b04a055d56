#include "acopt/actor_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "acopt/rng.hpp"

namespace acopt {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

// log(1 - tanh^2(u)) without cancellation for large |u|.
double log_one_minus_tanh_sq(double u) {
  return 2.0 * (std::numbers::ln2 - u - softplus(-2.0 * u));
}

double squash(double u) {
  double x = std::tanh(u);
  // tanh rounds to +-1 for |u| > ~19; keep designs strictly inside the box.
  if (x >= 1.0) x = std::nextafter(1.0, 0.0);
  if (x <= -1.0) x = std::nextafter(-1.0, 0.0);
  return x;
}

struct Path {
  std::vector<double> raw;    // network output, length 2d
  std::vector<double> mu;     // first d entries
  std::vector<double> sigma;  // exp of clamped log-sigma
  std::vector<double> u;      // mu + sigma * xi
  std::vector<double> x;      // tanh(u)
};

Path compute_path(const ContinuousActor& actor, const NoiseSample& noise) {
  const int d = actor.design_dim;
  if (static_cast<int>(noise.xi.size()) != d) {
    throw std::invalid_argument("actor_continuous: xi length mismatch");
  }
  Path p;
  p.raw = forward(actor.params, noise.net_input);
  p.mu.assign(p.raw.begin(), p.raw.begin() + d);
  p.sigma.resize(static_cast<std::size_t>(d));
  p.u.resize(static_cast<std::size_t>(d));
  p.x.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const double ls = std::clamp(p.raw[static_cast<std::size_t>(d + k)], actor.log_sigma_min,
                                 actor.log_sigma_max);
    p.sigma[static_cast<std::size_t>(k)] = std::exp(ls);
    p.u[static_cast<std::size_t>(k)] =
        p.mu[static_cast<std::size_t>(k)] +
        p.sigma[static_cast<std::size_t>(k)] * noise.xi[static_cast<std::size_t>(k)];
    p.x[static_cast<std::size_t>(k)] = squash(p.u[static_cast<std::size_t>(k)]);
  }
  return p;
}

double path_log_density(const Path& p, std::span<const double> xi) {
  double ld = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    ld += -kHalfLog2Pi - std::log(p.sigma[k]) - 0.5 * xi[k] * xi[k];
    ld -= log_one_minus_tanh_sq(p.u[k]);
  }
  return ld;
}

}  // namespace

ContinuousActor make_continuous_actor(int design_dim, const std::vector<int>& hidden,
                                      std::mt19937_64& rng, int noise_dim, bool gaussian_input) {
  if (design_dim <= 0) throw std::invalid_argument("make_continuous_actor: design_dim must be positive");
  if (noise_dim <= 0) throw std::invalid_argument("make_continuous_actor: noise_dim must be positive");
  std::vector<int> widths;
  widths.push_back(noise_dim);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(2 * design_dim);
  ContinuousActor actor;
  actor.params = init_params(NetworkSpec::mlp(std::move(widths)), rng);
  actor.design_dim = design_dim;
  actor.noise_dim = noise_dim;
  actor.gaussian_input = gaussian_input;
  return actor;
}

std::vector<double> constant_input(const ContinuousActor& actor) {
  return std::vector<double>(static_cast<std::size_t>(actor.noise_dim), 1.0);
}

NoiseSample draw_noise(const ContinuousActor& actor, std::mt19937_64& rng) {
  NoiseSample s;
  s.xi.resize(static_cast<std::size_t>(actor.design_dim));
  for (double& v : s.xi) v = draw_normal(rng);
  if (actor.gaussian_input) {
    s.net_input.resize(static_cast<std::size_t>(actor.noise_dim));
    for (double& v : s.net_input) v = draw_normal(rng);
  } else {
    s.net_input = constant_input(actor);
  }
  return s;
}

ActorHeads actor_heads(const ContinuousActor& actor, std::span<const double> noise_input) {
  const int d = actor.design_dim;
  const auto raw = forward(actor.params, noise_input);
  ActorHeads heads;
  heads.mu.assign(raw.begin(), raw.begin() + d);
  heads.sigma.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const double ls = std::clamp(raw[static_cast<std::size_t>(d + k)], actor.log_sigma_min,
                                 actor.log_sigma_max);
    heads.sigma[static_cast<std::size_t>(k)] = std::exp(ls);
  }
  return heads;
}

std::vector<double> sample_design(const ContinuousActor& actor, const NoiseSample& noise) {
  return compute_path(actor, noise).x;
}

std::vector<double> sample_design(const ContinuousActor& actor, std::span<const double> xi) {
  NoiseSample noise{std::vector<double>(xi.begin(), xi.end()), constant_input(actor)};
  return sample_design(actor, noise);
}

double log_density(const ContinuousActor& actor, const NoiseSample& noise) {
  const Path p = compute_path(actor, noise);
  return path_log_density(p, noise.xi);
}

double log_density(const ContinuousActor& actor, std::span<const double> xi) {
  NoiseSample noise{std::vector<double>(xi.begin(), xi.end()), constant_input(actor)};
  return log_density(actor, noise);
}

double objective_estimate(const ContinuousActor& actor, const QFunction& q,
                          std::span<const NoiseSample> noise_batch, double alpha) {
  if (noise_batch.empty()) throw std::invalid_argument("objective_estimate: empty noise batch");
  if (alpha < 0.0) throw std::invalid_argument("objective_estimate: alpha must be >= 0");
  double total = 0.0;
  for (const auto& noise : noise_batch) {
    const Path p = compute_path(actor, noise);
    total += q.value(p.x) - alpha * path_log_density(p, noise.xi);
  }
  return total / static_cast<double>(noise_batch.size());
}

double objective_estimate(const ContinuousActor& actor, const Critic& critic,
                          std::span<const NoiseSample> noise_batch, double alpha) {
  return objective_estimate(actor, as_q_function(critic), noise_batch, alpha);
}

double actor_update_continuous(ContinuousActor& actor, const QFunction& q,
                               std::span<const NoiseSample> noise_batch, double alpha,
                               AdamState& opt, double lr) {
  if (noise_batch.empty()) throw std::invalid_argument("actor_update_continuous: empty noise batch");
  if (alpha < 0.0) throw std::invalid_argument("actor_update_continuous: alpha must be >= 0");
  const int d = actor.design_dim;
  std::vector<double> grad(actor.params.values.size(), 0.0);
  std::vector<double> cotangent(static_cast<std::size_t>(2 * d), 0.0);
  double objective = 0.0;

  for (const auto& noise : noise_batch) {
    const Path p = compute_path(actor, noise);
    const auto [q_value, dq] = q_value_and_gradient(q, p.x);
    objective += q_value - alpha * path_log_density(p, noise.xi);
    for (int k = 0; k < d; ++k) {
      const std::size_t uk = static_cast<std::size_t>(k);
      const double x = p.x[uk];
      const double sigma = p.sigma[uk];
      const double xi = noise.xi[uk];
      // d/dmu of [Q(x) - alpha*log h]: the squash correction contributes
      // +2x to d(log h)/du, the Gaussian factor none (xi held fixed).
      const double g_mu = dq[uk] * (1.0 - x * x) - 2.0 * alpha * x;
      // d/dsigma picks up the same path term times xi plus the explicit
      // -log sigma term; chain through sigma = exp(raw) inside the clamp.
      const double raw = p.raw[static_cast<std::size_t>(d + k)];
      const bool in_bounds = raw > actor.log_sigma_min && raw < actor.log_sigma_max;
      const double g_raw = in_bounds ? (g_mu * xi * sigma + alpha) : 0.0;
      cotangent[uk] = g_mu;
      cotangent[static_cast<std::size_t>(d + k)] = g_raw;
    }
    const Gradients g = backward(actor.params, noise.net_input, cotangent);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g.param_grad[i];
  }

  // Ascent: feed the negated average gradient to the minimizing Adam step.
  const double scale = -1.0 / static_cast<double>(noise_batch.size());
  for (double& gi : grad) gi *= scale;
  adam_step(opt, actor.params, grad, lr);
  return objective / static_cast<double>(noise_batch.size());
}

double actor_update_continuous(ContinuousActor& actor, const Critic& critic,
                               std::span<const NoiseSample> noise_batch, double alpha,
                               AdamState& opt, double lr) {
  return actor_update_continuous(actor, as_q_function(critic), noise_batch, alpha, opt, lr);
}

}  // namespace acopt
