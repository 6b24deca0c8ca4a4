#ifndef PFDR_BALL_LEARNER_HPP
#define PFDR_BALL_LEARNER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pfdr/core.hpp"
#include "pfdr/rng.hpp"

namespace pfdr {

struct Eigenpair {
  double value = 0.0;
  Vector vector;

  bool operator==(const Eigenpair&) const = default;
};

/// Gradient, Hessian and Hessian eigenpairs of the ball barrier
/// R(x) = -log(1 - |x|^2) at an interior point.
struct BarrierGeometry {
  Vector gradient;
  std::vector<Vector> hessian;  // row-major, d x d
  std::vector<Eigenpair> eigenpairs;
};

/// Throws ContractError unless |x| < 1.
BarrierGeometry barrier_geometry(std::span<const double> x);
Vector barrier_gradient(std::span<const double> x);
/// Inverse mirror map: the unique interior y with grad R(y) = theta.
Vector barrier_gradient_inverse(std::span<const double> theta);

/// Block length ceil(T / (1 + S_hat)) for a candidate switch count.
std::uint64_t restart_schedule(std::uint64_t horizon, std::uint64_t switches_hat);

/// Dikin-ellipsoid sample x + sign * lambda_i^{-1/2} u_i.
Vector dikin_point(std::span<const double> x, const Eigenpair& pair, int sign);
/// One-point estimate d * observed * sign * lambda_i^{1/2} u_i.
Vector one_point_estimate(std::size_t dim, const Eigenpair& pair, int sign, double observed);

/// Bandit linear learner over the unit ball: barrier mirror descent with
/// Dikin-ellipsoid exploration, restarted at the origin every block_len rounds.
class BallLearner {
 public:
  BallLearner(std::size_t dim, std::uint64_t block_len, double eta);

  /// Learner tuned for a horizon and a candidate switch count:
  /// eta = eta_c / (d * sqrt(block_len)).
  static BallLearner for_horizon(std::size_t dim, std::uint64_t horizon,
                                 std::uint64_t switches_hat, double eta_c);

  /// Draws the exploration direction and returns b_t with |b_t| < 1.
  Vector predict(RngStream& rng);

  /// Consumes the scalar <loss, b_t> for the cached sample. Zero feedback
  /// leaves the iterate untouched.
  void update(double observed_loss);

  std::span<const double> iterate() const { return x_; }
  std::size_t dim() const { return x_.size(); }
  double eta() const { return eta_; }
  std::uint64_t block_len() const { return block_len_; }
  std::uint64_t round_in_block() const { return t_in_block_; }
  bool awaiting_update() const { return pending_.has_value(); }

  bool operator==(const BallLearner&) const = default;

 private:
  struct Sample {
    std::size_t index = 0;
    int sign = 1;
    Eigenpair pair;

    bool operator==(const Sample&) const = default;
  };

  Vector x_;
  double eta_;
  std::uint64_t block_len_;
  std::uint64_t t_in_block_ = 1;
  std::optional<Sample> pending_;
};

}  // namespace pfdr

#endif  // PFDR_BALL_LEARNER_HPP
