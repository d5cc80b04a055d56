#pragma once

#include <span>
#include <variant>
#include <vector>

namespace acopt {

// A category design carries its set size so it can be one-hot encoded
// without extra context.
struct CategoryDesign {
  int index = 0;
  int cardinality = 0;
};

// A point in the design space: a bounded real vector, or one of finitely
// many categories.
using Design = std::variant<std::vector<double>, CategoryDesign>;

inline bool is_discrete(const Design& d) { return std::holds_alternative<CategoryDesign>(d); }

// Critic input encoding: continuous designs pass through, category designs
// become one-hot vectors of width input_dim.
std::vector<double> encode_design(const Design& design, int input_dim);

struct ScoredDesign {
  Design design;
  double score = 0.0;
};

}  // namespace acopt
