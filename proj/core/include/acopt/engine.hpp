#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "acopt/actor_continuous.hpp"
#include "acopt/actor_discrete.hpp"
#include "acopt/critic.hpp"
#include "acopt/replay_buffer.hpp"

namespace acopt {

struct RunConfig {
  int episodes = 2000;        // outer iterations, one objective query each
  int rounds_per_phase = 10;  // critic updates then actor updates per episode
  int critic_batch = 64;
  int actor_batch = 64;
  double alpha_initial = 1e-1;
  double alpha_final = 1e-3;
  double lr_actor = 3e-4;
  double lr_critic = 3e-4;
  std::uint64_t seed = 0;
  std::vector<int> actor_hidden{64, 64};
  std::vector<int> critic_hidden{64, 64};
  std::size_t buffer_capacity = 0;  // 0 = unbounded
  // Actor updates are skipped while the critic is still cold; -1 picks
  // max(critic_batch, 10).
  int warmup_episodes = -1;
  int actor_noise_dim = 1;
  bool actor_gaussian_input = false;

  bool operator==(const RunConfig&) const = default;
};

// Throws std::invalid_argument naming the offending field.
void validate_run_config(const RunConfig& config);

int effective_warmup(const RunConfig& config);

// Geometric interpolation from alpha_initial (episode 1) to alpha_final
// (episode M), clamped to [alpha_final, alpha_initial].
double alpha_at(const RunConfig& config, int episode);

// Raised when the black-box objective fails; carries the episode index.
class ObjectiveError : public std::runtime_error {
 public:
  ObjectiveError(int episode, const std::string& message)
      : std::runtime_error("episode " + std::to_string(episode) + ": " + message),
        episode_(episode) {}
  int episode() const { return episode_; }

 private:
  int episode_;
};

struct ReportRow {
  int episode = 0;  // 1-based
  double score = 0.0;
  double best_score = 0.0;
  double alpha = 0.0;
  double critic_loss = 0.0;      // last critic mini-batch loss (NaN before any)
  double actor_objective = 0.0;  // last actor batch objective (NaN before any)
  Design design;                 // the queried design; not part of run.csv
};

struct RunReport {
  std::vector<ReportRow> rows;
  ScoredDesign final_best;
  std::uint64_t seed = 0;
  // Discrete runs also record the final sampling distribution and the
  // energy-based optimum for the final critic at alpha_final.
  std::vector<double> final_p_theta;
  std::vector<double> final_p_star;

  // header: episode,score,best_score,alpha,critic_loss,actor_objective
  void write_run_csv(std::ostream& out) const;
  // header: design_index,p_theta,p_star
  void write_distribution_csv(std::ostream& out) const;
};

using ContinuousObjective = std::function<double(std::span<const double>)>;
using DiscreteObjective = std::function<double(int)>;

// Stepwise driver for Algorithm-style outer loops; each step issues exactly
// one objective query followed by the critic and actor update phases.
class ContinuousOptimizer {
 public:
  ContinuousOptimizer(RunConfig config, int design_dim, ContinuousObjective objective);

  ReportRow step();
  int episodes_done() const { return episode_; }
  const ContinuousActor& actor() const { return actor_; }
  const Critic& critic() const { return critic_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const RunConfig& config() const { return config_; }
  RunReport report() const;

 private:
  RunConfig config_;
  int design_dim_;
  ContinuousObjective objective_;
  std::mt19937_64 rng_;
  ContinuousActor actor_;
  Critic critic_;
  AdamState actor_opt_;
  AdamState critic_opt_;
  ReplayBuffer buffer_;
  std::vector<ReportRow> rows_;
  int episode_ = 0;
  double last_critic_loss_;
  double last_actor_objective_;
};

class DiscreteOptimizer {
 public:
  DiscreteOptimizer(RunConfig config, int n_designs, DiscreteObjective objective);

  ReportRow step();
  int episodes_done() const { return episode_; }
  const DiscreteActor& actor() const { return actor_; }
  const Critic& critic() const { return critic_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const RunConfig& config() const { return config_; }
  RunReport report() const;

 private:
  RunConfig config_;
  int n_designs_;
  DiscreteObjective objective_;
  std::mt19937_64 rng_;
  DiscreteActor actor_;
  Critic critic_;
  AdamState actor_opt_;
  AdamState critic_opt_;
  ReplayBuffer buffer_;
  std::vector<ReportRow> rows_;
  int episode_ = 0;
  double last_critic_loss_;
  double last_actor_objective_;
};

// Full runs: exactly config.episodes objective queries.
RunReport run_continuous(const RunConfig& config, int design_dim,
                         const ContinuousObjective& objective);
RunReport run_discrete(const RunConfig& config, int n_designs, const DiscreteObjective& objective);

}  // namespace acopt
