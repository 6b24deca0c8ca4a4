#include "pfdr/core.hpp"

#include <cmath>
#include <string>

namespace pfdr {

namespace {

void require_same_dim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ContractError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool all_finite(std::span<const double> a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Vector scaled(std::span<const double> a, double factor) {
  Vector out(a.begin(), a.end());
  for (double& v : out) v *= factor;
  return out;
}

Vector axpy(std::span<const double> a, double factor, std::span<const double> b) {
  require_same_dim(a, b);
  Vector out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += factor * b[i];
  return out;
}

LossVector::LossVector(Vector components, double lipschitz) : components_(std::move(components)) {
  if (components_.empty() || components_.size() > kMaxDimension) {
    throw ContractError("loss dimension must be in [1, 64]");
  }
  if (!all_finite(components_)) throw NumericError("loss vector has non-finite components");
  if (norm(components_) > lipschitz) {
    throw ContractError("loss norm " + std::to_string(norm(components_)) + " exceeds G = " +
                        std::to_string(lipschitz));
  }
}

Action::Action(Vector components) : components_(std::move(components)) {
  if (!all_finite(components_)) throw NumericError("action has non-finite components");
}

ComparatorSequence::ComparatorSequence(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
  for (const auto& u : vectors_) {
    if (u.size() != vectors_.front().size()) {
      throw ContractError("comparator vectors must share one dimension");
    }
  }
}

ComparatorStats comparator_stats(const ComparatorSequence& seq) {
  if (seq.horizon() == 0) throw ContractError("comparator sequence is empty");
  ComparatorStats stats;
  const auto& u = seq.vectors();
  stats.max_norm = norm(u[0]);
  for (std::size_t t = 1; t < u.size(); ++t) {
    // Exact component equality.
    if (u[t] != u[t - 1]) ++stats.switches;
    stats.path_length += norm(axpy(u[t - 1], -1.0, u[t]));
    const double n = norm(u[t]);
    if (n > stats.max_norm) stats.max_norm = n;
  }
  return stats;
}

}  // namespace pfdr
