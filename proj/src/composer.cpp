#include "pfdr/composer.hpp"

#include <cmath>

namespace pfdr {

double default_v_min(double epsilon, double lipschitz, std::uint64_t horizon) {
  if (horizon == 0) throw ContractError("horizon must be positive");
  return epsilon / (lipschitz * static_cast<double>(horizon));
}

ComposedLearner::ComposedLearner(ScaleLearner scale, BallLearner direction, double v_min)
    : scale_(scale), direction_(std::move(direction)), v_min_(v_min) {
  if (!(v_min > 0.0) || !std::isfinite(v_min)) throw ContractError("v_min must be positive");
}

Vector ComposedLearner::predict(RngStream& rng) {
  if (pending_) throw ContractError("composed learner predict called twice without update");
  double v = scale_.predict();
  if (std::abs(v) < v_min_) v = v < 0.0 ? -v_min_ : v_min_;
  last_v_ = v;
  last_b_ = direction_.predict(rng);
  last_w_ = scaled(last_b_, v);
  if (!all_finite(last_w_)) throw NumericError("composed action is not finite");
  pending_ = true;
  return last_w_;
}

void ComposedLearner::update(double observed) {
  if (!pending_) throw ContractError("composed learner update without a matching predict");
  const double g = observed / last_v_;
  direction_.update(g);
  scale_.update(g);
  last_g_ = g;
  pending_ = false;
}

void ComposedLearner::update_first_order(std::span<const double> loss) {
  if (!pending_) throw ContractError("composed learner update without a matching predict");
  update(dot(loss, last_w_));
}

}  // namespace pfdr
