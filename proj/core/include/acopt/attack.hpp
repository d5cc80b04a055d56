#pragma once

#include <span>
#include <string>
#include <vector>

#include "acopt/classifier.hpp"
#include "acopt/engine.hpp"

namespace acopt {

// Target of a classifier attack: maximize the confidence of target_class.
// The perturbation variant adds bounded noise to a fixed base image of a
// different class.
struct AttackSpec {
  int target_class = 1;
  int base_class = 6;              // perturbation variant only
  double noise_level = 0.2;        // delta in (0, 1]
  std::vector<double> base_image;  // values in [0, 1]; empty for the free variant

  void validate(const Classifier& clf, bool perturbation) const;
};

// Maps a design in (-1,1)^(W*H) to an image via (x+1)/2.
std::vector<double> design_to_image(std::span<const double> x);

// Confidence of the target class on the image generated from the design.
double attack_score(const Classifier& clf, const AttackSpec& spec, std::span<const double> x);

// The perturbed image clip((x+1)/2 * delta + base), values clipped to [0,1].
std::vector<double> perturbed_image(const AttackSpec& spec, std::span<const double> x);

// Confidence of the target class on the perturbed base image.
double perturb_score(const Classifier& clf, const AttackSpec& spec, std::span<const double> x);

ContinuousObjective attack_objective(const Classifier& clf, const AttackSpec& spec,
                                     bool perturbation);

// Plain portable graymap (P2), one comment line carrying the seed.
void write_pgm(const std::string& path, std::span<const double> image, int width, int height,
               std::uint64_t seed);

}  // namespace acopt
