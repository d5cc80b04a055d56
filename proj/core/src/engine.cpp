#include "acopt/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "acopt/rng.hpp"

namespace acopt {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

RunConfig checked(RunConfig config) {
  validate_run_config(config);
  return config;
}

void append_double(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

double query_objective(const ContinuousObjective& f, std::span<const double> x, int episode) {
  double y = kNan;
  try {
    y = f(x);
  } catch (const std::exception& e) {
    throw ObjectiveError(episode, e.what());
  }
  if (!std::isfinite(y)) throw ObjectiveError(episode, "objective returned a non-finite score");
  return y;
}

double query_objective(const DiscreteObjective& f, int index, int episode) {
  double y = kNan;
  try {
    y = f(index);
  } catch (const std::exception& e) {
    throw ObjectiveError(episode, e.what());
  }
  if (!std::isfinite(y)) throw ObjectiveError(episode, "objective returned a non-finite score");
  return y;
}

}  // namespace

void validate_run_config(const RunConfig& config) {
  if (config.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (config.rounds_per_phase < 0) throw std::invalid_argument("rounds_per_phase must be >= 0");
  if (config.critic_batch < 1) throw std::invalid_argument("critic_batch must be >= 1");
  if (config.actor_batch < 1) throw std::invalid_argument("actor_batch must be >= 1");
  if (!(config.alpha_final > 0.0)) throw std::invalid_argument("alpha_final must be > 0");
  if (!(config.alpha_initial >= config.alpha_final)) {
    throw std::invalid_argument("alpha_initial must be >= alpha_final");
  }
  if (!(config.lr_actor > 0.0)) throw std::invalid_argument("lr_actor must be > 0");
  if (!(config.lr_critic > 0.0)) throw std::invalid_argument("lr_critic must be > 0");
  if (config.actor_noise_dim < 1) throw std::invalid_argument("actor_noise_dim must be >= 1");
  for (int w : config.actor_hidden) {
    if (w < 1) throw std::invalid_argument("actor_hidden widths must be >= 1");
  }
  for (int w : config.critic_hidden) {
    if (w < 1) throw std::invalid_argument("critic_hidden widths must be >= 1");
  }
}

int effective_warmup(const RunConfig& config) {
  if (config.warmup_episodes >= 0) return config.warmup_episodes;
  return std::max(config.critic_batch, 10);
}

double alpha_at(const RunConfig& config, int episode) {
  if (episode < 1 || episode > config.episodes) {
    throw std::invalid_argument("alpha_at: episode out of range");
  }
  const double t = config.episodes > 1
                       ? static_cast<double>(episode - 1) / (config.episodes - 1)
                       : 0.0;
  const double alpha =
      config.alpha_initial * std::pow(config.alpha_final / config.alpha_initial, t);
  return std::clamp(alpha, config.alpha_final, config.alpha_initial);
}

void RunReport::write_run_csv(std::ostream& out) const {
  out << "# seed=" << seed << "\n";
  out << "episode,score,best_score,alpha,critic_loss,actor_objective\n";
  std::string line;
  for (const auto& row : rows) {
    line.clear();
    line += std::to_string(row.episode);
    line += ',';
    append_double(line, row.score);
    line += ',';
    append_double(line, row.best_score);
    line += ',';
    append_double(line, row.alpha);
    line += ',';
    append_double(line, row.critic_loss);
    line += ',';
    append_double(line, row.actor_objective);
    line += '\n';
    out << line;
  }
}

void RunReport::write_distribution_csv(std::ostream& out) const {
  out << "# seed=" << seed << "\n";
  out << "design_index,p_theta,p_star\n";
  std::string line;
  for (std::size_t i = 0; i < final_p_theta.size(); ++i) {
    line.clear();
    line += std::to_string(i);
    line += ',';
    append_double(line, final_p_theta[i]);
    line += ',';
    append_double(line, i < final_p_star.size() ? final_p_star[i] : kNan);
    line += '\n';
    out << line;
  }
}

ContinuousOptimizer::ContinuousOptimizer(RunConfig config, int design_dim,
                                         ContinuousObjective objective)
    : config_(checked(std::move(config))),
      design_dim_(design_dim),
      objective_(std::move(objective)),
      rng_(config_.seed),
      actor_(make_continuous_actor(design_dim, config_.actor_hidden, rng_,
                                   config_.actor_noise_dim, config_.actor_gaussian_input)),
      critic_(make_critic(design_dim, config_.critic_hidden, rng_)),
      actor_opt_(AdamState::for_param_count(actor_.params.values.size())),
      critic_opt_(AdamState::for_param_count(critic_.params.values.size())),
      buffer_(config_.buffer_capacity),
      last_critic_loss_(kNan),
      last_actor_objective_(kNan) {}

ReportRow ContinuousOptimizer::step() {
  if (episode_ >= config_.episodes) {
    throw std::logic_error("ContinuousOptimizer::step: episode budget exhausted");
  }
  const int episode = ++episode_;
  const double alpha = alpha_at(config_, episode);

  // One design, one query.
  const NoiseSample noise = draw_noise(actor_, rng_);
  std::vector<double> x = sample_design(actor_, noise);
  const double y = query_objective(objective_, x, episode);
  buffer_.store(ScoredDesign{Design{x}, y});

  const QFunction q = as_q_function(critic_);
  for (int round = 0; round < config_.rounds_per_phase; ++round) {
    const auto batch = buffer_.sample(static_cast<std::size_t>(config_.critic_batch), rng_);
    last_critic_loss_ = critic_update(critic_, batch, critic_opt_, config_.lr_critic);
  }
  if (episode > effective_warmup(config_)) {
    std::vector<NoiseSample> batch(static_cast<std::size_t>(config_.actor_batch));
    for (int round = 0; round < config_.rounds_per_phase; ++round) {
      for (auto& n : batch) n = draw_noise(actor_, rng_);
      last_actor_objective_ =
          actor_update_continuous(actor_, q, batch, alpha, actor_opt_, config_.lr_actor);
    }
  }

  ReportRow row{episode, y,     buffer_.best().score, alpha, last_critic_loss_,
                last_actor_objective_, Design{std::move(x)}};
  rows_.push_back(row);
  return row;
}

RunReport ContinuousOptimizer::report() const {
  RunReport rep;
  rep.rows = rows_;
  rep.seed = config_.seed;
  if (!buffer_.empty()) rep.final_best = buffer_.best();
  return rep;
}

DiscreteOptimizer::DiscreteOptimizer(RunConfig config, int n_designs, DiscreteObjective objective)
    : config_(checked(std::move(config))),
      n_designs_(n_designs),
      objective_(std::move(objective)),
      rng_(config_.seed),
      actor_(make_discrete_actor(n_designs, config_.actor_hidden, rng_)),
      critic_(make_critic(n_designs, config_.critic_hidden, rng_)),
      actor_opt_(AdamState::for_param_count(actor_.params.values.size())),
      critic_opt_(AdamState::for_param_count(critic_.params.values.size())),
      buffer_(config_.buffer_capacity),
      last_critic_loss_(kNan),
      last_actor_objective_(kNan) {}

ReportRow DiscreteOptimizer::step() {
  if (episode_ >= config_.episodes) {
    throw std::logic_error("DiscreteOptimizer::step: episode budget exhausted");
  }
  const int episode = ++episode_;
  const double alpha = alpha_at(config_, episode);

  const std::vector<double> probs = design_distribution(actor_);
  const int index = sample_category(probs, rng_);
  const double y = query_objective(objective_, index, episode);
  buffer_.store(ScoredDesign{Design{CategoryDesign{index, n_designs_}}, y});

  for (int round = 0; round < config_.rounds_per_phase; ++round) {
    const auto batch = buffer_.sample(static_cast<std::size_t>(config_.critic_batch), rng_);
    last_critic_loss_ = critic_update(critic_, batch, critic_opt_, config_.lr_critic);
  }
  if (episode > effective_warmup(config_)) {
    for (int round = 0; round < config_.rounds_per_phase; ++round) {
      last_actor_objective_ =
          actor_update_discrete(actor_, critic_, alpha, actor_opt_, config_.lr_actor);
    }
  }

  ReportRow row{episode,
                y,
                buffer_.best().score,
                alpha,
                last_critic_loss_,
                last_actor_objective_,
                Design{CategoryDesign{index, n_designs_}}};
  rows_.push_back(row);
  return row;
}

RunReport DiscreteOptimizer::report() const {
  RunReport rep;
  rep.rows = rows_;
  rep.seed = config_.seed;
  if (!buffer_.empty()) rep.final_best = buffer_.best();
  rep.final_p_theta = design_distribution(actor_);
  rep.final_p_star =
      optimal_distribution(critic_design_values(critic_, n_designs_), config_.alpha_final);
  return rep;
}

RunReport run_continuous(const RunConfig& config, int design_dim,
                         const ContinuousObjective& objective) {
  ContinuousOptimizer opt(config, design_dim, objective);
  for (int e = 0; e < config.episodes; ++e) opt.step();
  return opt.report();
}

RunReport run_discrete(const RunConfig& config, int n_designs,
                       const DiscreteObjective& objective) {
  DiscreteOptimizer opt(config, n_designs, objective);
  for (int e = 0; e < config.episodes; ++e) opt.step();
  return opt.report();
}

}  // namespace acopt
