#include "pfdr/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "pfdr/ball_learner.hpp"
#include "pfdr/combiner.hpp"
#include "pfdr/harness.hpp"
#include "pfdr/scale_learner.hpp"

namespace pfdr {

namespace {

Vector interior_point(std::size_t d, double max_radius, RngStream& rng) {
  Vector v(d);
  for (double& c : v) c = rng.normal();
  const double n = norm(v);
  const double r = max_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return n > 0.0 ? scaled(v, r / n) : v;
}

Vector unit_ball_vector(std::size_t d, RngStream& rng) { return interior_point(d, 1.0, rng); }

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

CheckResult check_wealth() {
  RngStream rng(11, 0);
  double worst_ratio = -1e300;
  double min_wealth = 1e300;
  for (int seq = 0; seq < 2000; ++seq) {
    ScaleLearner learner(1.0, 1.0);
    const bool adversarial = seq % 2 == 0;
    for (int t = 0; t < 200; ++t) {
      double g = adversarial ? (learner.predict() >= 0.0 ? 1.0 : -1.0) : 2.0 * rng.uniform() - 1.0;
      if (adversarial && rng.uniform() < 0.2) g = -g;
      learner.update(g);
      min_wealth = std::min(min_wealth, learner.wealth());
    }
    worst_ratio = std::max(worst_ratio, learner.origin_regret());
  }
  return {"scale_wealth", min_wealth >= 0.0 && worst_ratio <= 1.0,
          "min wealth " + fmt(min_wealth) + ", max sum g*v " + fmt(worst_ratio) + " (bound 1)"};
}

CheckResult check_unbiased() {
  RngStream rng(12, 0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 1 + rng.below(8);
    const Vector x = interior_point(d, 0.95, rng);
    const Vector loss = unit_ball_vector(d, rng);
    const auto geo = barrier_geometry(x);
    Vector mean(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (int s : {-1, 1}) {
        const Vector b = dikin_point(x, geo.eigenpairs[i], s);
        const Vector g = one_point_estimate(d, geo.eigenpairs[i], s, dot(loss, b));
        mean = axpy(mean, 1.0 / (2.0 * static_cast<double>(d)), g);
      }
    }
    for (std::size_t i = 0; i < d; ++i) worst = std::max(worst, std::abs(mean[i] - loss[i]));
  }
  return {"estimator_unbiased", worst < 1e-12, "max componentwise error " + fmt(worst)};
}

CheckResult check_hessian() {
  RngStream rng(13, 0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 1 + rng.below(6);
    const Vector x = interior_point(d, 0.95, rng);
    const auto geo = barrier_geometry(x);
    const double h = 1e-6 * (1.0 - norm(x));
    double diff = 0.0, ref = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      Vector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Vector gp = barrier_gradient(xp), gm = barrier_gradient(xm);
      for (std::size_t i = 0; i < d; ++i) {
        const double fd = (gp[i] - gm[i]) / (2.0 * h);
        diff += (fd - geo.hessian[i][j]) * (fd - geo.hessian[i][j]);
        ref += geo.hessian[i][j] * geo.hessian[i][j];
      }
    }
    worst = std::max(worst, std::sqrt(diff / ref));
  }
  return {"barrier_hessian", worst < 1e-6, "max relative error vs finite differences " + fmt(worst)};
}

CheckResult check_mirror_step() {
  RngStream rng(14, 0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 1 + rng.below(8);
    const Vector x = interior_point(d, 0.95, rng);
    Vector step(d);
    for (double& c : step) c = 3.0 * rng.normal();
    const Vector theta = axpy(barrier_gradient(x), -1.0, step);
    const Vector back = barrier_gradient(barrier_gradient_inverse(theta));
    for (std::size_t i = 0; i < d; ++i) worst = std::max(worst, std::abs(back[i] - theta[i]));
  }
  return {"mirror_step_exact", worst < 1e-10, "max abs error " + fmt(worst)};
}

CheckResult check_feasibility() {
  RngStream rng(15, 0);
  double max_b = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t d = 1 + rng.below(8);
    const Vector x = interior_point(d, 0.999, rng);
    const auto geo = barrier_geometry(x);
    const std::size_t i = rng.below(d);
    max_b = std::max(max_b, norm(dikin_point(x, geo.eigenpairs[i], rng.sign())));
  }
  BallLearner learner = BallLearner::for_horizon(3, 5000, 0, 0.5);
  RngStream play(16, 0);
  double max_x = 0.0;
  const Vector loss{0.6, -0.8, 0.0};
  for (int t = 0; t < 5000; ++t) {
    const Vector b = learner.predict(play);
    max_b = std::max(max_b, norm(b));
    learner.update(dot(loss, b));
    max_x = std::max(max_x, norm(learner.iterate()));
  }
  return {"feasibility", max_b < 1.0 && max_x < 1.0,
          "min 1 - |b| " + fmt(1.0 - max_b) + ", max |x| " + fmt(max_x)};
}

CheckResult check_routing() {
  AlgorithmParams params;
  params.horizon = 512;
  params.dim = 3;
  Combiner combiner = assemble_theorem_algorithm(params, 17);
  RngStream env(18, 0);
  bool ok = true;
  for (std::uint64_t t = 0; t < params.horizon; ++t) {
    const Vector loss = unit_ball_vector(3, env);
    combiner.play_round([&](std::span<const double> w) { return dot(loss, w); });
    ok = ok && combiner.last_recipients() == 1;
    for (std::size_t i = 0; i < combiner.size(); ++i) {
      if (i != combiner.last_selected() && combiner.last_routed()[i] != 0.0) ok = false;
    }
  }
  return {"exclusive_routing", ok, std::to_string(params.horizon) + " rounds, N = " + std::to_string(combiner.size())};
}

CheckResult check_grid() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t T : {1ULL, 8ULL, 1000ULL, 16384ULL}) {
    const auto grid = build_grid(T);
    for (std::uint64_t s = 1; s + 1 <= T; ++s) {
      if (!covering_candidate(grid, s)) {
        ok = false;
        detail = "T = " + std::to_string(T) + ", S = " + std::to_string(s) + " uncovered";
      }
    }
  }
  return {"grid_covering", ok, ok ? "T in {1, 8, 1000, 16384}" : detail};
}

CheckResult check_origin_regret() {
  RunConfig cfg;
  cfg.environment.T = 2000;
  cfg.environment.d = 3;
  cfg.environment.loss_model = LossModel::sign_flip;
  bool ok = true;
  double worst = -1e300;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto trace = run_one(cfg, seed);
    const double n = static_cast<double>(trace.meta.num_bases);
    const double v_min = default_v_min(cfg.epsilon, cfg.G, cfg.environment.T);
    const double bound = n * (cfg.epsilon * cfg.G + cfg.G * v_min * static_cast<double>(cfg.environment.T));
    worst = std::max(worst, trace.summary.learner_loss / bound);
    ok = ok && trace.summary.learner_loss <= bound;
  }
  return {"origin_regret", ok, "max (sum <l,w>) / bound " + fmt(worst)};
}

CheckResult check_trace() {
  RunConfig cfg;
  cfg.environment.T = 1000;
  cfg.environment.S = 4;
  cfg.environment.loss_model = LossModel::adaptive_punisher;
  const auto trace = run_one(cfg, 5, true);
  const double err = trace_consistency_error(trace);
  return {"trace_consistency", err < 1e-10, "max relative error " + fmt(err)};
}

}  // namespace

std::vector<CheckResult> run_invariant_checks() {
  const std::vector<std::function<CheckResult()>> checks{
      check_wealth,   check_unbiased, check_hessian,       check_mirror_step, check_feasibility,
      check_routing,  check_grid,     check_origin_regret, check_trace};
  std::vector<CheckResult> results;
  for (const auto& c : checks) {
    try {
      results.push_back(c());
    } catch (const std::exception& e) {
      results.push_back({"<check>", false, e.what()});
    }
  }
  return results;
}

}  // namespace pfdr
