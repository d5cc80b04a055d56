// Experiment runner: `acopt run <config> --out <dir>` executes one seeded
// optimization run and writes its CSV/PGM artifacts, `acopt report <csv>`
// summarizes a learning curve, `acopt train-classifier` regenerates the
// bundled digit classifier weights.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "acopt/classifier.hpp"
#include "acopt/engine.hpp"
#include "acopt/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int run_command(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed) {
  try {
    acopt::run_experiment_file(config_path, out_dir, seed);
  } catch (const acopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const acopt::ObjectiveError& e) {
    std::cerr << "objective failure: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int report_command(const std::string& csv_path) {
  try {
    acopt::replay_report(csv_path, std::cout);
  } catch (const acopt::ConfigError& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int train_classifier_command(const std::string& out_path, std::uint64_t seed, int per_class,
                             int epochs) {
  try {
    const acopt::DigitCorpus train = acopt::generate_digit_corpus(per_class, seed);
    const acopt::DigitCorpus held_out = acopt::generate_digit_corpus(per_class / 4, seed + 1);
    acopt::ClassifierTrainOptions options;
    options.epochs = epochs;
    options.seed = seed;
    const acopt::Classifier clf = acopt::train_classifier(train, options);
    const double train_acc = acopt::classifier_accuracy(clf, train);
    const double held_out_acc = acopt::classifier_accuracy(clf, held_out);
    acopt::save_classifier(out_path, clf);
    std::cout << "wrote " << out_path << " (train accuracy " << train_acc << ", held-out accuracy "
              << held_out_acc << ")\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Actor-critic black-box design optimizer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("config", config_path, "Path to the experiment config")->required();
  run->add_option("--out", out_dir, "Output directory");
  std::uint64_t seed_value = 0;
  auto* seed_opt = run->add_option("--seed", seed_value, "Override the config seed");

  std::string csv_path;
  auto* report = app.add_subcommand("report", "Summarize a run.csv learning curve");
  report->add_option("csv", csv_path, "Path to run.csv")->required();

  std::string weights_out = "data/classifier.nnw";
  std::uint64_t train_seed = 2024;
  int per_class = 400;
  int epochs = 40;
  auto* train = app.add_subcommand("train-classifier", "Regenerate the bundled digit classifier");
  train->add_option("--out", weights_out, "Weights file to write");
  train->add_option("--seed", train_seed, "Corpus/training seed");
  train->add_option("--per-class", per_class, "Training images per digit");
  train->add_option("--epochs", epochs, "Training epochs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) {
    if (seed_opt->count() > 0) seed = seed_value;
    return run_command(config_path, out_dir, seed);
  }
  if (report->parsed()) return report_command(csv_path);
  if (train->parsed()) return train_classifier_command(weights_out, train_seed, per_class, epochs);
  return kExitConfig;
}
