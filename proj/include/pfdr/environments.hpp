#ifndef PFDR_ENVIRONMENTS_HPP
#define PFDR_ENVIRONMENTS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfdr/core.hpp"
#include "pfdr/rng.hpp"

namespace pfdr {

enum class SwitchPlacement { evenly_spaced, uniform_random };
enum class LossModel { aligned_noisy, adaptive_punisher, sign_flip };

std::string_view to_string(SwitchPlacement p);
std::string_view to_string(LossModel m);
SwitchPlacement parse_switch_placement(std::string_view s);
LossModel parse_loss_model(std::string_view s);

struct EnvironmentSpec {
  std::uint64_t T = 1024;
  std::size_t d = 3;
  double G = 1.0;
  double M = 1.0;
  std::uint64_t S = 0;
  SwitchPlacement switch_placement = SwitchPlacement::evenly_spaced;
  LossModel loss_model = LossModel::aligned_noisy;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  /// Throws ContractError naming the offending field.
  void validate() const;
};

inline constexpr double kPunisherBlend = 0.5;

// Stream ids under a run seed.
inline constexpr std::uint64_t kComparatorStream = 1;
inline constexpr std::uint64_t kLossStream = 2;

/// 1-based rounds at which the comparator changes, ascending.
std::vector<std::uint64_t> change_points(const EnvironmentSpec& spec, RngStream& rng);

/// Piecewise-constant comparator with exactly spec.S switches; segment values
/// are uniform on the sphere of radius M. Consumes only (spec, rng).
ComparatorSequence gen_comparator(const EnvironmentSpec& spec, RngStream& rng);

/// Loss for 1-based round t. past_plays holds w_1..w_{t-1} (may be empty).
LossVector gen_loss(const EnvironmentSpec& spec, std::uint64_t t, const ComparatorSequence& comparator,
                    std::span<const Vector> past_plays, RngStream& rng);

}  // namespace pfdr

#endif  // PFDR_ENVIRONMENTS_HPP
