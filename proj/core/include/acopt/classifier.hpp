#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "acopt/nn.hpp"

namespace acopt {

// Frozen digit classifier with a softmax head over 10 classes. The network
// itself ends in a linear layer; classify applies the softmax.
struct Classifier {
  static constexpr int kClasses = 10;
  ParamVector params;
  int width = 16;
  int height = 16;

  int pixel_count() const { return width * height; }
};

// Probability vector over the 10 classes; deterministic in the image.
std::vector<double> classify(const Classifier& clf, std::span<const double> image);

int argmax_class(std::span<const double> probs);

// Procedurally rendered 16x16 digits: stencil glyphs with position jitter,
// stroke-intensity jitter, a light blur and additive pixel noise. Entirely
// deterministic in the seed.
struct DigitCorpus {
  std::vector<std::vector<double>> images;  // row-major, values in [0, 1]
  std::vector<int> labels;
};

DigitCorpus generate_digit_corpus(int per_class, std::uint64_t seed);

// One clean rendering of a digit (jitter-free), used as the base image for
// perturbation attacks.
std::vector<double> reference_digit(int label);

struct ClassifierTrainOptions {
  std::vector<int> hidden{32};
  int epochs = 40;
  int batch = 64;
  double lr = 1e-3;
  std::uint64_t seed = 7;
};

// Softmax cross-entropy training with Adam on the bundled network engine.
Classifier train_classifier(const DigitCorpus& train, const ClassifierTrainOptions& options);

double classifier_accuracy(const Classifier& clf, const DigitCorpus& corpus);

// Weights files use the flat network format from nn.hpp.
void save_classifier(const std::string& path, const Classifier& clf);
Classifier load_classifier(const std::string& path);

}  // namespace acopt
