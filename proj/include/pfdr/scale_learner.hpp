#ifndef PFDR_SCALE_LEARNER_HPP
#define PFDR_SCALE_LEARNER_HPP

#include <cstdint>

namespace pfdr {

/// One-dimensional Krichevsky-Trofimov coin-betting learner.
///
/// Plays v_t = beta_t * wealth / G with beta_t = (sum_{s<t} -g_s / G) / t.
/// Initial wealth is epsilon * G, so wealth never goes negative and the
/// regret against the origin, sum_t g_t v_t, is at most epsilon * G for any
/// feedback with |g_t| <= G. The bet depends on the feedback only through
/// g / G, so rescaling G and every g_t by the same factor leaves v_t unchanged.
class ScaleLearner {
 public:
  explicit ScaleLearner(double epsilon = 1.0, double lipschitz = 1.0);

  /// Current bet v_t. Does not change state.
  double predict() const;

  /// Feed the linear loss v -> g * v. Requires |g| <= G; a relative overshoot
  /// below 1e-12 (round-off in the caller's division) is clipped.
  void update(double g);

  double epsilon() const { return epsilon_; }
  double lipschitz() const { return lipschitz_; }
  /// 1-based index of the next round.
  std::uint64_t round() const { return round_; }
  double gradient_sum() const { return z_sum_; }
  double wealth() const { return wealth_; }
  /// sum_s g_s v_s accumulated so far.
  double origin_regret() const { return origin_regret_; }

 private:
  double epsilon_;
  double lipschitz_;
  std::uint64_t round_ = 1;
  double z_sum_ = 0.0;
  double wealth_;
  double origin_regret_ = 0.0;
};

}  // namespace pfdr

#endif  // PFDR_SCALE_LEARNER_HPP
