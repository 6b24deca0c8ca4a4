#include "pfdr/scale_learner.hpp"

#include <cmath>
#include <string>

#include "pfdr/core.hpp"

namespace pfdr {

ScaleLearner::ScaleLearner(double epsilon, double lipschitz)
    : epsilon_(epsilon), lipschitz_(lipschitz), wealth_(epsilon * lipschitz) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ContractError("epsilon must be positive");
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) throw ContractError("G must be positive");
}

double ScaleLearner::predict() const {
  if (z_sum_ == 0.0) return 0.0;
  const double beta = z_sum_ / static_cast<double>(round_);
  return beta * wealth_ / lipschitz_;
}

void ScaleLearner::update(double g) {
  if (!std::isfinite(g)) throw NumericError("scale learner feedback is not finite");
  if (std::abs(g) > lipschitz_) {
    if (std::abs(g) > lipschitz_ * (1.0 + 1e-12)) {
      throw ContractError("scale learner feedback |g| = " + std::to_string(std::abs(g)) +
                          " exceeds G = " + std::to_string(lipschitz_));
    }
    g = std::copysign(lipschitz_, g);
  }
  const double v = predict();
  wealth_ -= g * v;
  origin_regret_ += g * v;
  z_sum_ -= g / lipschitz_;
  ++round_;
}

}  // namespace pfdr
