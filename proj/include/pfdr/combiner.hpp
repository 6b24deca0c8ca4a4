#ifndef PFDR_COMBINER_HPP
#define PFDR_COMBINER_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pfdr/composer.hpp"
#include "pfdr/core.hpp"
#include "pfdr/rng.hpp"

namespace pfdr {

enum class FeedbackMode { bandit, first_order };

/// Candidate switch counts {0} U {min(2^n, 2T) : n >= 0}, ascending.
struct CandidateGrid {
  std::vector<std::uint64_t> values;

  std::size_t size() const { return values.size(); }
};

CandidateGrid build_grid(std::uint64_t horizon);

/// Smallest grid value Sh with Sh <= S <= 2 Sh, if any.
std::optional<std::uint64_t> covering_candidate(const CandidateGrid& grid, std::uint64_t switches);

/// Uniform-sampling combination of N base learners.
///
/// Every base predicts every round. One index I_t is drawn uniformly, its
/// action is played, and only base I_t sees the feedback; the others receive
/// zero. The two-phase propose/feedback API lets a caller sit between the
/// learner and the environment; play_round wraps both phases.
class Combiner {
 public:
  Combiner(std::vector<std::unique_ptr<BaseLearner>> bases, std::vector<RngStream> base_streams,
           RngStream selection, FeedbackMode mode = FeedbackMode::bandit);

  std::size_t size() const { return bases_.size(); }
  std::size_t dim() const { return bases_.front()->dim(); }
  FeedbackMode mode() const { return mode_; }

  /// Collects every base action and draws I_t. Returns the played action.
  std::span<const double> propose();
  /// Same, with I_t forced (exhaustive enumeration in tests).
  std::span<const double> propose_with(std::size_t selected);

  /// Bandit mode: observed = <loss_t, w_t>.
  void feedback(double observed);
  /// First-order mode: the full loss vector.
  void feedback_first_order(std::span<const double> loss);

  /// propose + observe + feedback in bandit mode.
  double play_round(const std::function<double(std::span<const double>)>& observe);

  std::size_t last_selected() const { return selected_; }
  const std::vector<Vector>& last_candidates() const { return candidates_; }
  /// Scalar routed to each base in the last round (bandit mode) or the
  /// <routed vector, base action> product (first-order mode).
  const std::vector<double>& last_routed() const { return routed_; }
  /// Number of bases that received a nonzero feedback object last round.
  std::size_t last_recipients() const { return recipients_; }

  const BaseLearner& base(std::size_t i) const { return *bases_.at(i); }

 private:
  void gather();

  std::vector<std::unique_ptr<BaseLearner>> bases_;
  std::vector<RngStream> base_streams_;
  RngStream selection_;
  FeedbackMode mode_;
  std::vector<Vector> candidates_;
  std::vector<double> routed_;
  std::size_t selected_ = 0;
  std::size_t recipients_ = 0;
  bool pending_ = false;
};

struct AlgorithmParams {
  std::uint64_t horizon = 1;
  std::size_t dim = 1;
  double epsilon = 1.0;
  double lipschitz = 1.0;
  double eta_c = 0.5;
  /// Clamp floor; epsilon / (G T) when unset.
  std::optional<double> v_min;
  FeedbackMode mode = FeedbackMode::bandit;
};

// Stream ids under a run seed.
inline constexpr std::uint64_t kSelectionStream = 3;
inline constexpr std::uint64_t kBaseStreamOffset = 100;

ComposedLearner make_composed(const AlgorithmParams& params, std::uint64_t switches_hat);

/// One composed base per grid value, combined by uniform sampling.
Combiner assemble_theorem_algorithm(const AlgorithmParams& params, std::uint64_t seed);

/// A single composed base tuned for switches_hat, behind an N = 1 combiner.
Combiner assemble_single_base(const AlgorithmParams& params, std::uint64_t switches_hat,
                              std::uint64_t seed);

}  // namespace pfdr

#endif  // PFDR_COMBINER_HPP
