#include "acopt/attack.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace acopt {

void AttackSpec::validate(const Classifier& clf, bool perturbation) const {
  if (target_class < 0 || target_class >= Classifier::kClasses) {
    throw std::invalid_argument("AttackSpec: target_class out of range");
  }
  if (!perturbation) return;
  if (base_class < 0 || base_class >= Classifier::kClasses) {
    throw std::invalid_argument("AttackSpec: base_class out of range");
  }
  if (base_class == target_class) {
    throw std::invalid_argument("AttackSpec: target_class must differ from base_class");
  }
  if (!(noise_level > 0.0) || noise_level > 1.0) {
    throw std::invalid_argument("AttackSpec: noise_level must lie in (0, 1]");
  }
  if (static_cast<int>(base_image.size()) != clf.pixel_count()) {
    throw std::invalid_argument("AttackSpec: base_image size mismatch");
  }
  for (double v : base_image) {
    if (v < 0.0 || v > 1.0) {
      throw std::invalid_argument("AttackSpec: base_image values must lie in [0, 1]");
    }
  }
}

std::vector<double> design_to_image(std::span<const double> x) {
  std::vector<double> image(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) image[i] = (x[i] + 1.0) / 2.0;
  return image;
}

double attack_score(const Classifier& clf, const AttackSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != clf.pixel_count()) {
    throw std::invalid_argument("attack_score: design dimension mismatch");
  }
  const auto probs = classify(clf, design_to_image(x));
  return probs[static_cast<std::size_t>(spec.target_class)];
}

std::vector<double> perturbed_image(const AttackSpec& spec, std::span<const double> x) {
  if (x.size() != spec.base_image.size()) {
    throw std::invalid_argument("perturbed_image: design dimension mismatch");
  }
  std::vector<double> image(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double noise = (x[i] + 1.0) / 2.0 * spec.noise_level;
    image[i] = std::clamp(noise + spec.base_image[i], 0.0, 1.0);
  }
  return image;
}

double perturb_score(const Classifier& clf, const AttackSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != clf.pixel_count()) {
    throw std::invalid_argument("perturb_score: design dimension mismatch");
  }
  const auto probs = classify(clf, perturbed_image(spec, x));
  return probs[static_cast<std::size_t>(spec.target_class)];
}

ContinuousObjective attack_objective(const Classifier& clf, const AttackSpec& spec,
                                     bool perturbation) {
  spec.validate(clf, perturbation);
  if (perturbation) {
    return [&clf, spec](std::span<const double> x) { return perturb_score(clf, spec, x); };
  }
  return [&clf, spec](std::span<const double> x) { return attack_score(clf, spec, x); };
}

void write_pgm(const std::string& path, std::span<const double> image, int width, int height,
               std::uint64_t seed) {
  if (static_cast<int>(image.size()) != width * height) {
    throw std::invalid_argument("write_pgm: image size mismatch");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  out << "P2\n# seed=" << seed << "\n" << width << " " << height << "\n255\n";
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double v = std::clamp(image[static_cast<std::size_t>(r * width + c)], 0.0, 1.0);
      out << static_cast<int>(std::lround(v * 255.0));
      out << (c + 1 == width ? '\n' : ' ');
    }
  }
  if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

}  // namespace acopt
