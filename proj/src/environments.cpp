#include "pfdr/environments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pfdr {

std::string_view to_string(SwitchPlacement p) {
  switch (p) {
    case SwitchPlacement::evenly_spaced: return "evenly_spaced";
    case SwitchPlacement::uniform_random: return "uniform_random";
  }
  return "?";
}

std::string_view to_string(LossModel m) {
  switch (m) {
    case LossModel::aligned_noisy: return "aligned_noisy";
    case LossModel::adaptive_punisher: return "adaptive_punisher";
    case LossModel::sign_flip: return "sign_flip";
  }
  return "?";
}

SwitchPlacement parse_switch_placement(std::string_view s) {
  if (s == "evenly_spaced") return SwitchPlacement::evenly_spaced;
  if (s == "uniform_random") return SwitchPlacement::uniform_random;
  throw ContractError("switch_placement: unknown value '" + std::string(s) + "'");
}

LossModel parse_loss_model(std::string_view s) {
  if (s == "aligned_noisy") return LossModel::aligned_noisy;
  if (s == "adaptive_punisher") return LossModel::adaptive_punisher;
  if (s == "sign_flip") return LossModel::sign_flip;
  throw ContractError("loss_model: unknown value '" + std::string(s) + "'");
}

void EnvironmentSpec::validate() const {
  if (T == 0) throw ContractError("T: must be positive");
  if (d == 0 || d > kMaxDimension) throw ContractError("d: must be in [1, 64]");
  if (!(G > 0.0) || !std::isfinite(G)) throw ContractError("G: must be positive and finite");
  if (!(M > 0.0) || !std::isfinite(M)) throw ContractError("M: must be positive and finite");
  if (S > T - 1) {
    throw ContractError("S: " + std::to_string(S) + " exceeds T - 1 = " + std::to_string(T - 1));
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ContractError("noise_sigma: must be nonnegative and finite");
  }
}

std::vector<std::uint64_t> change_points(const EnvironmentSpec& spec, RngStream& rng) {
  spec.validate();
  std::vector<std::uint64_t> points;
  points.reserve(spec.S);
  if (spec.switch_placement == SwitchPlacement::evenly_spaced) {
    for (std::uint64_t k = 1; k <= spec.S; ++k) {
      points.push_back(1 + (k * spec.T) / (spec.S + 1));
    }
    return points;
  }
  // Floyd's sampling of S distinct rounds from {2, ..., T}.
  const std::uint64_t pool = spec.T - 1;
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = pool - spec.S; j < pool; ++j) {
    const std::uint64_t r = rng.below(j + 1);
    if (!chosen.insert(r).second) chosen.insert(j);
  }
  for (std::uint64_t r : chosen) points.push_back(r + 2);
  return points;
}

namespace {

Vector sphere_point(std::size_t d, double radius, RngStream& rng) {
  for (;;) {
    Vector v(d);
    for (double& c : v) c = rng.normal();
    const double n = norm(v);
    if (n > 0.0) return scaled(v, radius / n);
  }
}

// Scale v down to norm <= bound; exact zeros pass through.
Vector clip_norm(Vector v, double bound) {
  const double n = norm(v);
  if (n <= bound) return v;
  double factor = bound / n;
  Vector out = scaled(v, factor);
  while (norm(out) > bound) {
    factor = std::nextafter(factor, 0.0);
    out = scaled(v, factor);
  }
  return out;
}

Vector normalized_to(Vector v, double length) {
  const double n = norm(v);
  if (n == 0.0) return v;
  return clip_norm(scaled(v, length / n), length);
}

}  // namespace

ComparatorSequence gen_comparator(const EnvironmentSpec& spec, RngStream& rng) {
  const auto points = change_points(spec, rng);
  std::vector<Vector> seq;
  seq.reserve(spec.T);
  Vector current = sphere_point(spec.d, spec.M, rng);
  std::size_t next = 0;
  for (std::uint64_t t = 1; t <= spec.T; ++t) {
    if (next < points.size() && points[next] == t) {
      Vector fresh = sphere_point(spec.d, spec.M, rng);
      while (fresh == current) fresh = sphere_point(spec.d, spec.M, rng);
      current = std::move(fresh);
      ++next;
    }
    seq.push_back(current);
  }
  return ComparatorSequence(std::move(seq));
}

LossVector gen_loss(const EnvironmentSpec& spec, std::uint64_t t, const ComparatorSequence& comparator,
                    std::span<const Vector> past_plays, RngStream& rng) {
  if (t == 0 || t > spec.T || t > comparator.horizon()) throw ContractError("round out of range");
  const auto u = comparator.at(t - 1);
  const std::size_t d = u.size();
  switch (spec.loss_model) {
    case LossModel::aligned_noisy: {
      Vector loss = scaled(u, -spec.G / std::max(norm(u), spec.M));
      if (spec.noise_sigma > 0.0) {
        for (double& c : loss) c += spec.noise_sigma * rng.normal();
      }
      return LossVector(clip_norm(std::move(loss), spec.G), spec.G);
    }
    case LossModel::adaptive_punisher: {
      Vector mix = scaled(u, -(1.0 - kPunisherBlend));
      if (!past_plays.empty()) mix = axpy(mix, kPunisherBlend, past_plays.back());
      return LossVector(normalized_to(std::move(mix), spec.G), spec.G);
    }
    case LossModel::sign_flip: {
      Vector loss(d, 0.0);
      loss[0] = rng.sign() * spec.G;
      return LossVector(std::move(loss), spec.G);
    }
  }
  throw ContractError("unknown loss model");
}

}  // namespace pfdr
