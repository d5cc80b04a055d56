#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "acopt/engine.hpp"

namespace acopt {

// Invalid or inconsistent configuration; the message names the offending
// field. Mapped to exit code 1 by the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { ToyContinuous, ToyDiscrete, AttackFree, AttackPerturb, CartPole };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

// Flat key=value experiment description; see configs/ for annotated files.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ToyContinuous;
  RunConfig run;

  int n_designs = 21;                                  // toy-discrete
  int target_class = 1;                                // attack-*
  int base_class = 6;                                  // attack-perturb
  double noise_level = 0.2;                            // attack-perturb
  std::string classifier_weights = "data/classifier.nnw";  // attack-*
  int episodes_per_query = 5;                          // cartpole

  bool operator==(const ExperimentConfig&) const = default;
};

// Parsing is strict: unknown or malformed keys raise ConfigError naming the
// key. serialize() writes every key in a canonical order so that
// parse(serialize(c)) == c.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig parse_experiment_config_file(const std::string& path);
std::string serialize_experiment_config(const ExperimentConfig& config);

void validate_experiment_config(const ExperimentConfig& config);

// Runs the configured experiment and writes run.csv, best_design.csv and
// the experiment-specific extras (distribution.csv, best_design.pgm) into
// out_dir. Files are staged under a temporary name and atomically renamed.
// Throws ConfigError for configuration problems and ObjectiveError when the
// black box fails mid-run.
void run_experiment(const ExperimentConfig& config, const std::string& out_dir);

// Convenience wrapper: load, optionally override the seed, resolve the
// classifier weights path relative to the config file, run.
void run_experiment_file(const std::string& config_path, const std::string& out_dir,
                         std::optional<std::uint64_t> seed_override = std::nullopt);

// Prints the final best score, the first episode reaching 99% of it, and
// the mean of the last (up to) 100 scores of a run.csv.
void replay_report(const std::string& csv_path, std::ostream& out);

}  // namespace acopt
