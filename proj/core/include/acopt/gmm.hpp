#pragma once

#include <functional>
#include <vector>

#include "acopt/engine.hpp"

namespace acopt {

// Two-component Gaussian mixture density on (-1, 1), the toy benchmark.
struct GmmParams {
  double w1 = 0.51;
  double w2 = 0.49;
  double mu1 = -0.7;
  double mu2 = 0.7;
  double sigma1 = 0.6;
  double sigma2 = 0.6;

  void validate() const;  // sigmas and weights must be positive
};

double gmm_score(const GmmParams& params, double x);  // requires |x| < 1

ContinuousObjective gmm_objective(const GmmParams& params);

// Midpoint grid over (-1, 1): design k of n sits at -1 + 2*(k + 0.5)/n.
double grid_point(int k, int n);

// Wraps a scalar continuous scorer as a finite objective over n designs.
DiscreteObjective discretize(std::function<double(double)> objective, int n);

}  // namespace acopt
