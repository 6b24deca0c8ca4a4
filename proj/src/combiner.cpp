#include "pfdr/combiner.hpp"

#include <algorithm>

namespace pfdr {

CandidateGrid build_grid(std::uint64_t horizon) {
  if (horizon == 0) throw ContractError("horizon must be positive");
  const std::uint64_t cap = 2 * horizon;
  CandidateGrid grid;
  grid.values.push_back(0);
  for (std::uint64_t p = 1;; p *= 2) {
    grid.values.push_back(std::min(p, cap));
    if (p >= cap) break;
  }
  return grid;
}

std::optional<std::uint64_t> covering_candidate(const CandidateGrid& grid, std::uint64_t switches) {
  for (std::uint64_t s_hat : grid.values) {
    if (s_hat <= switches && switches <= 2 * s_hat) return s_hat;
  }
  return std::nullopt;
}

Combiner::Combiner(std::vector<std::unique_ptr<BaseLearner>> bases,
                   std::vector<RngStream> base_streams, RngStream selection, FeedbackMode mode)
    : bases_(std::move(bases)),
      base_streams_(std::move(base_streams)),
      selection_(selection),
      mode_(mode) {
  if (bases_.empty()) throw ContractError("combiner needs at least one base learner");
  if (base_streams_.size() != bases_.size()) {
    throw ContractError("combiner needs one random stream per base learner");
  }
  for (const auto& b : bases_) {
    if (!b) throw ContractError("null base learner");
    if (b->dim() != bases_.front()->dim()) throw ContractError("base learners disagree on dimension");
  }
  routed_.assign(bases_.size(), 0.0);
}

void Combiner::gather() {
  if (pending_) throw ContractError("combiner propose called twice without feedback");
  candidates_.resize(bases_.size());
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    candidates_[i] = bases_[i]->predict(base_streams_[i]);
  }
}

std::span<const double> Combiner::propose() {
  gather();
  selected_ = static_cast<std::size_t>(selection_.below(bases_.size()));
  pending_ = true;
  return candidates_[selected_];
}

std::span<const double> Combiner::propose_with(std::size_t selected) {
  if (selected >= bases_.size()) throw ContractError("forced selection out of range");
  gather();
  selected_ = selected;
  pending_ = true;
  return candidates_[selected_];
}

void Combiner::feedback(double observed) {
  if (!pending_) throw ContractError("combiner feedback without a matching propose");
  if (mode_ != FeedbackMode::bandit) throw ContractError("combiner is in first-order mode");
  recipients_ = 0;
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    const double routed = i == selected_ ? observed : 0.0;
    routed_[i] = routed;
    if (i == selected_) ++recipients_;
    bases_[i]->update(routed);
  }
  pending_ = false;
}

void Combiner::feedback_first_order(std::span<const double> loss) {
  if (!pending_) throw ContractError("combiner feedback without a matching propose");
  if (mode_ != FeedbackMode::first_order) throw ContractError("combiner is in bandit mode");
  const Vector zero(loss.size(), 0.0);
  recipients_ = 0;
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    const std::span<const double> routed = i == selected_ ? loss : std::span<const double>(zero);
    routed_[i] = dot(routed, candidates_[i]);
    if (i == selected_) ++recipients_;
    bases_[i]->update_first_order(routed);
  }
  pending_ = false;
}

double Combiner::play_round(const std::function<double(std::span<const double>)>& observe) {
  const auto w = propose();
  const double observed = observe(w);
  feedback(observed);
  return observed;
}

ComposedLearner make_composed(const AlgorithmParams& params, std::uint64_t switches_hat) {
  const double v_min =
      params.v_min.value_or(default_v_min(params.epsilon, params.lipschitz, params.horizon));
  return ComposedLearner(ScaleLearner(params.epsilon, params.lipschitz),
                         BallLearner::for_horizon(params.dim, params.horizon, switches_hat, params.eta_c),
                         v_min);
}

namespace {

Combiner assemble(const AlgorithmParams& params, std::span<const std::uint64_t> candidates,
                  std::uint64_t seed) {
  std::vector<std::unique_ptr<BaseLearner>> bases;
  std::vector<RngStream> streams;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bases.push_back(std::make_unique<ComposedLearner>(make_composed(params, candidates[i])));
    streams.emplace_back(seed, kBaseStreamOffset + i);
  }
  return Combiner(std::move(bases), std::move(streams), RngStream(seed, kSelectionStream), params.mode);
}

}  // namespace

Combiner assemble_theorem_algorithm(const AlgorithmParams& params, std::uint64_t seed) {
  const CandidateGrid grid = build_grid(params.horizon);
  return assemble(params, grid.values, seed);
}

Combiner assemble_single_base(const AlgorithmParams& params, std::uint64_t switches_hat,
                              std::uint64_t seed) {
  const std::uint64_t one[] = {switches_hat};
  return assemble(params, one, seed);
}

}  // namespace pfdr
