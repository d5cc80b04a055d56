#include "acopt/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "acopt/attack.hpp"
#include "acopt/cartpole.hpp"
#include "acopt/classifier.hpp"
#include "acopt/gmm.hpp"

namespace acopt {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_int_list(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<int>(parse_long(key, trim(item))));
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  fs::rename(tmp, path);
}

std::string best_design_csv(const RunReport& report) {
  std::string out = "# seed=" + std::to_string(report.seed) + "\n";
  out += "field,value\n";
  out += "score," + format_double(report.final_best.score) + "\n";
  if (const auto* x = std::get_if<std::vector<double>>(&report.final_best.design)) {
    for (std::size_t i = 0; i < x->size(); ++i) {
      out += "x" + std::to_string(i) + "," + format_double((*x)[i]) + "\n";
    }
  } else {
    const auto& cat = std::get<CategoryDesign>(report.final_best.design);
    out += "category," + std::to_string(cat.index) + "\n";
  }
  return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ToyContinuous: return "toy-continuous";
    case ExperimentKind::ToyDiscrete: return "toy-discrete";
    case ExperimentKind::AttackFree: return "attack-free";
    case ExperimentKind::AttackPerturb: return "attack-perturb";
    case ExperimentKind::CartPole: return "cartpole";
  }
  throw std::logic_error("to_string: bad ExperimentKind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  if (name == "toy-continuous") return ExperimentKind::ToyContinuous;
  if (name == "toy-discrete") return ExperimentKind::ToyDiscrete;
  if (name == "attack-free") return ExperimentKind::AttackFree;
  if (name == "attack-perturb") return ExperimentKind::AttackPerturb;
  if (name == "cartpole") return ExperimentKind::CartPole;
  throw ConfigError("experiment: unknown kind '" + name + "'");
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  bool saw_experiment = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");

    if (key == "experiment") {
      config.kind = experiment_kind_from_string(value);
      saw_experiment = true;
    } else if (key == "episodes") {
      config.run.episodes = static_cast<int>(parse_long(key, value));
    } else if (key == "rounds_per_phase") {
      config.run.rounds_per_phase = static_cast<int>(parse_long(key, value));
    } else if (key == "critic_batch") {
      config.run.critic_batch = static_cast<int>(parse_long(key, value));
    } else if (key == "actor_batch") {
      config.run.actor_batch = static_cast<int>(parse_long(key, value));
    } else if (key == "alpha_initial") {
      config.run.alpha_initial = parse_double(key, value);
    } else if (key == "alpha_final") {
      config.run.alpha_final = parse_double(key, value);
    } else if (key == "lr_actor") {
      config.run.lr_actor = parse_double(key, value);
    } else if (key == "lr_critic") {
      config.run.lr_critic = parse_double(key, value);
    } else if (key == "seed") {
      config.run.seed = static_cast<std::uint64_t>(parse_long(key, value));
    } else if (key == "actor_hidden") {
      config.run.actor_hidden = parse_int_list(key, value);
    } else if (key == "critic_hidden") {
      config.run.critic_hidden = parse_int_list(key, value);
    } else if (key == "buffer_capacity") {
      const long v = parse_long(key, value);
      if (v < 0) throw ConfigError("buffer_capacity: must be >= 0");
      config.run.buffer_capacity = static_cast<std::size_t>(v);
    } else if (key == "warmup_episodes") {
      config.run.warmup_episodes = static_cast<int>(parse_long(key, value));
    } else if (key == "actor_noise_dim") {
      config.run.actor_noise_dim = static_cast<int>(parse_long(key, value));
    } else if (key == "actor_gaussian_input") {
      const long v = parse_long(key, value);
      if (v != 0 && v != 1) throw ConfigError("actor_gaussian_input: expected 0 or 1");
      config.run.actor_gaussian_input = v == 1;
    } else if (key == "n_designs") {
      config.n_designs = static_cast<int>(parse_long(key, value));
    } else if (key == "target_class") {
      config.target_class = static_cast<int>(parse_long(key, value));
    } else if (key == "base_class") {
      config.base_class = static_cast<int>(parse_long(key, value));
    } else if (key == "noise_level") {
      config.noise_level = parse_double(key, value);
    } else if (key == "classifier_weights") {
      config.classifier_weights = value;
    } else if (key == "episodes_per_query") {
      config.episodes_per_query = static_cast<int>(parse_long(key, value));
    } else {
      throw ConfigError(key + ": unknown key");
    }
  }
  if (!saw_experiment) throw ConfigError("experiment: missing required key");
  return config;
}

ExperimentConfig parse_experiment_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file: cannot open " + path);
  return parse_experiment_config(in);
}

std::string serialize_experiment_config(const ExperimentConfig& config) {
  std::string out;
  out += "experiment = " + to_string(config.kind) + "\n";
  out += "episodes = " + std::to_string(config.run.episodes) + "\n";
  out += "rounds_per_phase = " + std::to_string(config.run.rounds_per_phase) + "\n";
  out += "critic_batch = " + std::to_string(config.run.critic_batch) + "\n";
  out += "actor_batch = " + std::to_string(config.run.actor_batch) + "\n";
  out += "alpha_initial = " + format_double(config.run.alpha_initial) + "\n";
  out += "alpha_final = " + format_double(config.run.alpha_final) + "\n";
  out += "lr_actor = " + format_double(config.run.lr_actor) + "\n";
  out += "lr_critic = " + format_double(config.run.lr_critic) + "\n";
  out += "seed = " + std::to_string(config.run.seed) + "\n";
  out += "actor_hidden = " + format_int_list(config.run.actor_hidden) + "\n";
  out += "critic_hidden = " + format_int_list(config.run.critic_hidden) + "\n";
  out += "buffer_capacity = " + std::to_string(config.run.buffer_capacity) + "\n";
  out += "warmup_episodes = " + std::to_string(config.run.warmup_episodes) + "\n";
  out += "actor_noise_dim = " + std::to_string(config.run.actor_noise_dim) + "\n";
  out += "actor_gaussian_input = " + std::string(config.run.actor_gaussian_input ? "1" : "0") + "\n";
  out += "n_designs = " + std::to_string(config.n_designs) + "\n";
  out += "target_class = " + std::to_string(config.target_class) + "\n";
  out += "base_class = " + std::to_string(config.base_class) + "\n";
  out += "noise_level = " + format_double(config.noise_level) + "\n";
  out += "classifier_weights = " + config.classifier_weights + "\n";
  out += "episodes_per_query = " + std::to_string(config.episodes_per_query) + "\n";
  return out;
}

void validate_experiment_config(const ExperimentConfig& config) {
  try {
    validate_run_config(config.run);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  switch (config.kind) {
    case ExperimentKind::ToyDiscrete:
      if (config.n_designs < 1) throw ConfigError("n_designs: must be >= 1");
      break;
    case ExperimentKind::AttackFree:
    case ExperimentKind::AttackPerturb:
      if (config.target_class < 0 || config.target_class > 9) {
        throw ConfigError("target_class: must lie in [0, 9]");
      }
      if (config.kind == ExperimentKind::AttackPerturb) {
        if (config.base_class < 0 || config.base_class > 9) {
          throw ConfigError("base_class: must lie in [0, 9]");
        }
        if (config.base_class == config.target_class) {
          throw ConfigError("base_class: must differ from target_class");
        }
        if (!(config.noise_level > 0.0) || config.noise_level > 1.0) {
          throw ConfigError("noise_level: must lie in (0, 1]");
        }
      }
      if (!fs::exists(config.classifier_weights)) {
        throw ConfigError("classifier_weights: file not found: " + config.classifier_weights);
      }
      break;
    case ExperimentKind::CartPole:
      if (config.episodes_per_query < 1) throw ConfigError("episodes_per_query: must be >= 1");
      break;
    default:
      break;
  }
}

void run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
  validate_experiment_config(config);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  RunReport report;
  std::vector<double> best_image;  // attack variants stash the image to dump

  switch (config.kind) {
    case ExperimentKind::ToyContinuous: {
      report = run_continuous(config.run, 1, gmm_objective(GmmParams{}));
      break;
    }
    case ExperimentKind::ToyDiscrete: {
      GmmParams params;
      auto scalar = [params](double x) { return gmm_score(params, x); };
      report = run_discrete(config.run, config.n_designs,
                            discretize(std::move(scalar), config.n_designs));
      break;
    }
    case ExperimentKind::AttackFree: {
      const Classifier clf = load_classifier(config.classifier_weights);
      AttackSpec spec;
      spec.target_class = config.target_class;
      report = run_continuous(config.run, clf.pixel_count(), attack_objective(clf, spec, false));
      best_image = design_to_image(std::get<std::vector<double>>(report.final_best.design));
      break;
    }
    case ExperimentKind::AttackPerturb: {
      const Classifier clf = load_classifier(config.classifier_weights);
      AttackSpec spec;
      spec.target_class = config.target_class;
      spec.base_class = config.base_class;
      spec.noise_level = config.noise_level;
      spec.base_image = reference_digit(config.base_class);
      report = run_continuous(config.run, clf.pixel_count(), attack_objective(clf, spec, true));
      best_image = perturbed_image(spec, std::get<std::vector<double>>(report.final_best.design));
      break;
    }
    case ExperimentKind::CartPole: {
      report = run_continuous(config.run, kCartPoleDesignDim,
                              cartpole_objective(config.run.seed, config.episodes_per_query));
      break;
    }
  }

  {
    std::ostringstream csv;
    report.write_run_csv(csv);
    write_atomic((dir / "run.csv").string(), csv.str());
  }
  write_atomic((dir / "best_design.csv").string(), best_design_csv(report));
  if (config.kind == ExperimentKind::ToyDiscrete) {
    std::ostringstream csv;
    report.write_distribution_csv(csv);
    write_atomic((dir / "distribution.csv").string(), csv.str());
  }
  if (!best_image.empty()) {
    // write_pgm has no atomic variant; stage and rename like the others.
    const std::string tmp = (dir / "best_design.pgm.tmp").string();
    write_pgm(tmp, best_image, 16, 16, report.seed);
    fs::rename(tmp, (dir / "best_design.pgm").string());
  }
}

void run_experiment_file(const std::string& config_path, const std::string& out_dir,
                         std::optional<std::uint64_t> seed_override) {
  ExperimentConfig config = parse_experiment_config_file(config_path);
  if (seed_override) config.run.seed = *seed_override;
  // Resolve the weights file relative to the config location so configs can
  // be invoked from anywhere.
  if (!config.classifier_weights.empty() && !fs::path(config.classifier_weights).is_absolute()) {
    const fs::path candidate = fs::path(config_path).parent_path() / config.classifier_weights;
    if (fs::exists(candidate)) config.classifier_weights = candidate.string();
  }
  run_experiment(config, out_dir);
}

void replay_report(const std::string& csv_path, std::ostream& out) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("report: cannot open " + csv_path);
  std::string line;
  // Skip provenance comments, then require the run.csv header.
  do {
    if (!std::getline(in, line)) throw ConfigError("report: missing header in " + csv_path);
  } while (!line.empty() && line[0] == '#');
  if (trim(line) != "episode,score,best_score,alpha,critic_loss,actor_objective") {
    throw ConfigError("report: unexpected header in " + csv_path);
  }

  std::vector<int> episodes;
  std::vector<double> scores;
  std::vector<double> best_scores;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      throw ConfigError("report: malformed row at line " + std::to_string(line_no));
    }
    episodes.push_back(static_cast<int>(parse_long("episode", cells[0])));
    scores.push_back(parse_double("score", cells[1]));
    best_scores.push_back(parse_double("best_score", cells[2]));
  }
  if (scores.empty()) throw ConfigError("report: no rows in " + csv_path);

  const double best = best_scores.back();
  int first_reach = episodes.back();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= 0.99 * best) {
      first_reach = episodes[i];
      break;
    }
  }
  const std::size_t tail = std::min<std::size_t>(100, scores.size());
  double tail_mean = 0.0;
  for (std::size_t i = scores.size() - tail; i < scores.size(); ++i) tail_mean += scores[i];
  tail_mean /= static_cast<double>(tail);

  out << "best_score " << format_double(best) << "\n";
  out << "first_episode_at_99pct " << first_reach << "\n";
  out << "mean_last_" << tail << "_scores " << format_double(tail_mean) << "\n";
}

}  // namespace acopt
