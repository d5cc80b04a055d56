#include "acopt/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "acopt/actor_discrete.hpp"  // softmax
#include "acopt/rng.hpp"

namespace acopt {

namespace {

constexpr int kGlyphRows = 12;
constexpr int kGlyphCols = 8;

// 12x8 stencils, one per digit.
const char* const kGlyphs[10][kGlyphRows] = {
    {"..####..", ".#....#.", ".#....#.", ".#....#.", ".#....#.", ".#....#.", ".#....#.",
     ".#....#.", ".#....#.", ".#....#.", ".#....#.", "..####.."},
    {"...##...", "..###...", ".#.##...", "...##...", "...##...", "...##...", "...##...",
     "...##...", "...##...", "...##...", "...##...", ".######."},
    {"..####..", ".#....#.", "......#.", "......#.", ".....#..", "....#...", "...#....",
     "..#.....", ".#......", ".#......", ".#......", ".######."},
    {"..####..", ".#....#.", "......#.", "......#.", "...###..", "......#.", "......#.",
     "......#.", "......#.", "......#.", ".#....#.", "..####.."},
    {".....#..", "....##..", "...#.#..", "..#..#..", ".#...#..", "#....#..", "########",
     ".....#..", ".....#..", ".....#..", ".....#..", ".....#.."},
    {".######.", ".#......", ".#......", ".#......", ".#####..", "......#.", "......#.",
     "......#.", "......#.", "......#.", ".#....#.", "..####.."},
    {"..####..", ".#....#.", ".#......", ".#......", ".#####..", ".#....#.", ".#....#.",
     ".#....#.", ".#....#.", ".#....#.", ".#....#.", "..####.."},
    {".######.", "......#.", "......#.", ".....#..", ".....#..", "....#...", "....#...",
     "...#....", "...#....", "..#.....", "..#.....", "..#....."},
    {"..####..", ".#....#.", ".#....#.", ".#....#.", "..####..", ".#....#.", ".#....#.",
     ".#....#.", ".#....#.", ".#....#.", ".#....#.", "..####.."},
    {"..####..", ".#....#.", ".#....#.", ".#....#.", ".#....#.", "..#####.", "......#.",
     "......#.", "......#.", "......#.", ".#....#.", "..####.."},
};

constexpr int kSide = 16;

std::vector<double> render_digit(int label, int row_offset, int col_offset, double intensity,
                                 double noise_amplitude, std::mt19937_64* rng) {
  std::vector<double> canvas(kSide * kSide, 0.0);
  for (int r = 0; r < kGlyphRows; ++r) {
    for (int c = 0; c < kGlyphCols; ++c) {
      if (kGlyphs[label][r][c] != '#') continue;
      const int rr = r + row_offset;
      const int cc = c + col_offset;
      if (rr < 0 || rr >= kSide || cc < 0 || cc >= kSide) continue;
      canvas[static_cast<std::size_t>(rr * kSide + cc)] = 1.0;
    }
  }
  // 3x3 box blur with zero padding softens the strokes.
  std::vector<double> blurred(kSide * kSide, 0.0);
  for (int r = 0; r < kSide; ++r) {
    for (int c = 0; c < kSide; ++c) {
      double acc = 0.0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (rr < 0 || rr >= kSide || cc < 0 || cc >= kSide) continue;
          acc += canvas[static_cast<std::size_t>(rr * kSide + cc)];
        }
      }
      blurred[static_cast<std::size_t>(r * kSide + c)] = acc / 9.0;
    }
  }
  for (double& v : blurred) {
    v *= intensity;
    if (rng != nullptr && noise_amplitude > 0.0) {
      v += noise_amplitude * draw_uniform(*rng);
    }
    v = std::clamp(v, 0.0, 1.0);
  }
  return blurred;
}

}  // namespace

std::vector<double> classify(const Classifier& clf, std::span<const double> image) {
  if (static_cast<int>(image.size()) != clf.pixel_count()) {
    throw std::invalid_argument("classify: image size mismatch");
  }
  return softmax(forward(clf.params, image));
}

int argmax_class(std::span<const double> probs) {
  return static_cast<int>(
      std::distance(probs.begin(), std::max_element(probs.begin(), probs.end())));
}

DigitCorpus generate_digit_corpus(int per_class, std::uint64_t seed) {
  if (per_class < 1) throw std::invalid_argument("generate_digit_corpus: per_class must be >= 1");
  std::mt19937_64 rng(seed);
  DigitCorpus corpus;
  corpus.images.reserve(static_cast<std::size_t>(per_class) * 10);
  corpus.labels.reserve(static_cast<std::size_t>(per_class) * 10);
  std::uniform_int_distribution<int> jitter(-2, 2);
  for (int label = 0; label < 10; ++label) {
    for (int i = 0; i < per_class; ++i) {
      const int dr = 2 + jitter(rng);
      const int dc = 4 + jitter(rng);
      const double intensity = 0.7 + 0.3 * draw_uniform(rng);
      corpus.images.push_back(render_digit(label, dr, dc, intensity, 0.10, &rng));
      corpus.labels.push_back(label);
    }
  }
  return corpus;
}

std::vector<double> reference_digit(int label) {
  if (label < 0 || label > 9) throw std::invalid_argument("reference_digit: label out of range");
  return render_digit(label, 2, 4, 1.0, 0.0, nullptr);
}

Classifier train_classifier(const DigitCorpus& train, const ClassifierTrainOptions& options) {
  if (train.images.empty()) throw std::invalid_argument("train_classifier: empty corpus");
  const int pixels = static_cast<int>(train.images.front().size());
  std::mt19937_64 rng(options.seed);

  std::vector<int> widths;
  widths.push_back(pixels);
  widths.insert(widths.end(), options.hidden.begin(), options.hidden.end());
  widths.push_back(Classifier::kClasses);

  Classifier clf;
  clf.params = init_params(NetworkSpec::mlp(std::move(widths)), rng);

  AdamState opt = AdamState::for_param_count(clf.params.values.size());
  std::vector<std::size_t> order(train.images.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> grad(clf.params.values.size(), 0.0);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += options.batch) {
      const std::size_t end = std::min(order.size(), start + options.batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const auto& image = train.images[order[b]];
        const int label = train.labels[order[b]];
        const std::vector<double> probs = softmax(forward(clf.params, image));
        std::vector<double> dlogits = probs;  // softmax cross-entropy gradient
        dlogits[static_cast<std::size_t>(label)] -= 1.0;
        const Gradients g = backward(clf.params, image, dlogits);
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g.param_grad[i];
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (double& gi : grad) gi *= inv;
      adam_step(opt, clf.params, grad, options.lr);
    }
  }
  return clf;
}

double classifier_accuracy(const Classifier& clf, const DigitCorpus& corpus) {
  if (corpus.images.empty()) throw std::invalid_argument("classifier_accuracy: empty corpus");
  int correct = 0;
  for (std::size_t i = 0; i < corpus.images.size(); ++i) {
    if (argmax_class(classify(clf, corpus.images[i])) == corpus.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(corpus.images.size());
}

void save_classifier(const std::string& path, const Classifier& clf) {
  save_network(path, clf.params);
}

Classifier load_classifier(const std::string& path) {
  Classifier clf;
  clf.params = load_network(path);
  if (clf.params.spec.input_width() != clf.pixel_count() ||
      clf.params.spec.output_width() != Classifier::kClasses) {
    throw std::runtime_error("load_classifier: unexpected network shape in " + path);
  }
  return clf;
}

}  // namespace acopt
