#include "acopt/gmm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace acopt {

void GmmParams::validate() const {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw std::invalid_argument("GmmParams: sigmas must be positive");
  }
  if (!(w1 > 0.0) || !(w2 > 0.0)) {
    throw std::invalid_argument("GmmParams: weights must be positive");
  }
}

namespace {
double gaussian_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}
}  // namespace

double gmm_score(const GmmParams& params, double x) {
  if (!(std::abs(x) < 1.0)) {
    throw std::invalid_argument("gmm_score: design must lie strictly inside (-1, 1)");
  }
  return params.w1 * gaussian_pdf(x, params.mu1, params.sigma1) +
         params.w2 * gaussian_pdf(x, params.mu2, params.sigma2);
}

ContinuousObjective gmm_objective(const GmmParams& params) {
  params.validate();
  return [params](std::span<const double> x) {
    if (x.size() != 1) throw std::invalid_argument("gmm objective: design must be scalar");
    return gmm_score(params, x[0]);
  };
}

double grid_point(int k, int n) {
  return -1.0 + 2.0 * (k + 0.5) / n;
}

DiscreteObjective discretize(std::function<double(double)> objective, int n) {
  if (n < 2) throw std::invalid_argument("discretize: need at least 2 designs");
  return [objective = std::move(objective), n](int k) {
    if (k < 0 || k >= n) throw std::invalid_argument("discretize: design index out of range");
    return objective(grid_point(k, n));
  };
}

}  // namespace acopt
