#ifndef PFDR_COMPOSER_HPP
#define PFDR_COMPOSER_HPP

#include <span>

#include "pfdr/ball_learner.hpp"
#include "pfdr/core.hpp"
#include "pfdr/rng.hpp"
#include "pfdr/scale_learner.hpp"

namespace pfdr {

/// Anything the combiner can drive: strict predict/update alternation.
class BaseLearner {
 public:
  virtual ~BaseLearner() = default;

  virtual std::size_t dim() const = 0;
  virtual Vector predict(RngStream& rng) = 0;
  /// Bandit feedback: the scalar loss of the played action, or 0 when this
  /// learner was not selected.
  virtual void update(double observed) = 0;
  /// First-order feedback: the loss vector, or the zero vector when this
  /// learner was not selected.
  virtual void update_first_order(std::span<const double> loss) = 0;
};

/// Scale/direction composition: plays w_t = v_t * b_t and routes
/// g_t = observed / v_t to both sub-learners.
///
/// KT's first bet is exactly zero, so |v_t| is clamped to at least v_min
/// (sign of v_t, +1 at zero). Clamping costs at most G * v_min per round at the
/// origin, so sum_t <loss_t, w_t> <= epsilon * G + G * v_min * T.
class ComposedLearner final : public BaseLearner {
 public:
  ComposedLearner(ScaleLearner scale, BallLearner direction, double v_min);

  std::size_t dim() const override { return direction_.dim(); }
  Vector predict(RngStream& rng) override;
  void update(double observed) override;
  /// Scalarizes to <loss, w_t> and takes the bandit path.
  void update_first_order(std::span<const double> loss) override;

  const ScaleLearner& scale() const { return scale_; }
  const BallLearner& direction() const { return direction_; }
  double v_min() const { return v_min_; }
  double last_scale() const { return last_v_; }
  std::span<const double> last_direction() const { return last_b_; }
  std::span<const double> last_action() const { return last_w_; }
  /// The g routed by the most recent update.
  double last_feedback() const { return last_g_; }

 private:
  ScaleLearner scale_;
  BallLearner direction_;
  double v_min_;
  double last_v_ = 0.0;
  double last_g_ = 0.0;
  Vector last_b_;
  Vector last_w_;
  bool pending_ = false;
};

/// Default clamp floor epsilon / (G * T).
double default_v_min(double epsilon, double lipschitz, std::uint64_t horizon);

}  // namespace pfdr

#endif  // PFDR_COMPOSER_HPP
