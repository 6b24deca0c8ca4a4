#include "pfdr/ball_learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pfdr {

namespace {

// The mirror inverse is capped below the boundary. At radius 1 - delta the
// outward Dikin point sits about delta^3 / 8 inside the ball, so the cap keeps
// every sample strictly interior in double precision. Reached only when
// |theta| exceeds ~1e4.
constexpr double kMaxRadius = 1.0 - 1e-4;

// 1 - r^2 without cancellation near the boundary.
double slack(double r) { return (1.0 - r) * (1.0 + r); }

// Orthonormal basis whose first column is +-x/|x|, from a Householder reflector.
std::vector<Vector> basis_aligned_with(std::span<const double> x, double r) {
  const std::size_t d = x.size();
  Vector v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = x[i] / r;
  // v = xhat + sign(xhat_0) e_0 keeps the reflector well conditioned.
  v[0] += v[0] >= 0.0 ? 1.0 : -1.0;
  const double vv = dot(v, v);
  std::vector<Vector> columns(d, Vector(d, 0.0));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      columns[j][i] = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vv;
    }
  }
  return columns;
}

}  // namespace

Vector barrier_gradient(std::span<const double> x) {
  const double r = norm(x);
  if (!(r < 1.0)) throw ContractError("barrier point must satisfy |x| < 1, got " + std::to_string(r));
  return scaled(x, 2.0 / slack(r));
}

BarrierGeometry barrier_geometry(std::span<const double> x) {
  BarrierGeometry geo;
  geo.gradient = barrier_gradient(x);
  const std::size_t d = x.size();
  const double r = norm(x);
  const double s = slack(r);
  const double iso = 2.0 / s;
  const double rank_one = 4.0 / (s * s);

  geo.hessian.assign(d, Vector(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      geo.hessian[i][j] = (i == j ? iso : 0.0) + rank_one * x[i] * x[j];
    }
  }

  geo.eigenpairs.reserve(d);
  if (r == 0.0) {
    for (std::size_t i = 0; i < d; ++i) {
      Vector e(d, 0.0);
      e[i] = 1.0;
      geo.eigenpairs.push_back({iso, std::move(e)});
    }
    return geo;
  }
  auto columns = basis_aligned_with(x, r);
  geo.eigenpairs.push_back({iso + rank_one * r * r, std::move(columns[0])});
  for (std::size_t j = 1; j < d; ++j) geo.eigenpairs.push_back({iso, std::move(columns[j])});
  return geo;
}

Vector barrier_gradient_inverse(std::span<const double> theta) {
  if (!all_finite(theta)) throw NumericError("mirror step produced a non-finite dual point");
  const double n = norm(theta);
  if (n == 0.0) return Vector(theta.size(), 0.0);
  if (!std::isfinite(n)) {
    double big = 0.0;
    for (double c : theta) big = std::max(big, std::abs(c));
    const Vector unit = scaled(theta, 1.0 / big);
    return scaled(unit, kMaxRadius / norm(unit));
  }
  // rho = (-1 + sqrt(1 + n^2)) / n, rearranged to avoid cancellation.
  double rho = n / (1.0 + std::sqrt(1.0 + n * n));
  if (rho > kMaxRadius) rho = kMaxRadius;
  return scaled(theta, rho / n);
}

std::uint64_t restart_schedule(std::uint64_t horizon, std::uint64_t switches_hat) {
  if (horizon == 0) throw ContractError("horizon must be positive");
  const std::uint64_t blocks = switches_hat + 1;
  return horizon / blocks + (horizon % blocks != 0 ? 1 : 0);
}

Vector dikin_point(std::span<const double> x, const Eigenpair& pair, int sign) {
  return axpy(x, sign / std::sqrt(pair.value), pair.vector);
}

Vector one_point_estimate(std::size_t dim, const Eigenpair& pair, int sign, double observed) {
  return scaled(pair.vector, static_cast<double>(dim) * observed * sign * std::sqrt(pair.value));
}

BallLearner::BallLearner(std::size_t dim, std::uint64_t block_len, double eta)
    : x_(dim, 0.0), eta_(eta), block_len_(block_len) {
  if (dim == 0 || dim > kMaxDimension) throw ContractError("dimension must be in [1, 64]");
  if (block_len == 0) throw ContractError("block length must be positive");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ContractError("step size must be positive");
}

BallLearner BallLearner::for_horizon(std::size_t dim, std::uint64_t horizon,
                                     std::uint64_t switches_hat, double eta_c) {
  const std::uint64_t len = restart_schedule(horizon, switches_hat);
  const double eta = eta_c / (static_cast<double>(dim) * std::sqrt(static_cast<double>(len)));
  return BallLearner(dim, len, eta);
}

Vector BallLearner::predict(RngStream& rng) {
  const std::size_t d = x_.size();
  const auto i = static_cast<std::size_t>(rng.below(d));
  const int s = rng.sign();
  auto geo = barrier_geometry(x_);
  pending_ = Sample{i, s, std::move(geo.eigenpairs[i])};
  return dikin_point(x_, pending_->pair, s);
}

void BallLearner::update(double observed_loss) {
  if (!pending_) throw ContractError("ball learner update without a matching predict");
  if (!std::isfinite(observed_loss)) throw NumericError("ball learner feedback is not finite");
  if (observed_loss != 0.0) {
    const Vector g_hat = one_point_estimate(x_.size(), pending_->pair, pending_->sign, observed_loss);
    const Vector theta = axpy(barrier_gradient(x_), -eta_, g_hat);
    x_ = barrier_gradient_inverse(theta);
  }
  pending_.reset();
  if (t_in_block_ == block_len_) {
    x_.assign(x_.size(), 0.0);
    t_in_block_ = 1;
  } else {
    ++t_in_block_;
  }
}

}  // namespace pfdr
