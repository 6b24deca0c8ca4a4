#include <cmath>
#include <set>

#include "doctest.h"
#include "pfdr/environments.hpp"

using namespace pfdr;

namespace {

EnvironmentSpec spec_with(std::uint64_t T, std::uint64_t S, LossModel m = LossModel::aligned_noisy) {
  EnvironmentSpec s;
  s.T = T;
  s.S = S;
  s.d = 3;
  s.loss_model = m;
  return s;
}

}  // namespace

TEST_CASE("evenly spaced change points") {
  RngStream rng(1, 1);
  auto s = spec_with(6, 2);
  s.d = 2;
  CHECK(change_points(s, rng) == std::vector<std::uint64_t>{3, 5});
  const auto c = gen_comparator(s, rng);
  CHECK(comparator_stats(c).switches == 2);
}

TEST_CASE("static comparator") {
  RngStream rng(2, 1);
  const auto stats = comparator_stats(gen_comparator(spec_with(50, 0), rng));
  CHECK(stats.switches == 0);
  CHECK(stats.path_length == 0.0);
}

TEST_CASE("generated comparators have exactly S switches and norm M") {
  RngStream seeds(3, 1);
  for (int k = 0; k < 300; ++k) {
    auto s = spec_with(1 + seeds.below(200), 0);
    s.S = seeds.below(s.T);
    s.M = 0.1 + 5 * seeds.uniform();
    s.d = 1 + seeds.below(5);
    s.switch_placement = k % 2 ? SwitchPlacement::uniform_random : SwitchPlacement::evenly_spaced;
    RngStream rng(seeds.next_u64(), kComparatorStream);
    const auto pts = change_points(s, rng);
    CHECK(pts.size() == s.S);
    CHECK(std::set<std::uint64_t>(pts.begin(), pts.end()).size() == s.S);
    for (auto p : pts) {
      CHECK(p >= 2);
      CHECK(p <= s.T);
    }
    RngStream rng2(rng.seed(), kComparatorStream);
    const auto c = gen_comparator(s, rng2);
    const auto stats = comparator_stats(c);
    CHECK(stats.switches == s.S);
    CHECK(stats.max_norm == doctest::Approx(s.M).epsilon(1e-12));
  }
}

TEST_CASE("uniform random placement covers the whole range") {
  auto s = spec_with(10, 3);
  s.switch_placement = SwitchPlacement::uniform_random;
  std::vector<int> hits(11, 0);
  RngStream rng(4, 1);
  const int n = 30000;
  for (int k = 0; k < n; ++k)
    for (auto p : change_points(s, rng)) ++hits[p];
  CHECK(hits[0] == 0);
  CHECK(hits[1] == 0);
  // each of the 9 rounds is chosen with probability 3/9
  for (int t = 2; t <= 10; ++t) CHECK(std::abs(hits[t] - n / 3.0) < 5 * std::sqrt(n * (1 / 3.0) * (2 / 3.0)));
}

TEST_CASE("S above T - 1 is rejected and names the field") {
  RngStream rng(5, 1);
  auto s = spec_with(10, 10);
  try {
    change_points(s, rng);
    FAIL("expected an error");
  } catch (const ContractError& e) {
    CHECK(std::string(e.what()).rfind("S:", 0) == 0);
  }
  CHECK_THROWS_AS(spec_with(0, 0).validate(), ContractError);
  auto bad = spec_with(10, 0);
  bad.noise_sigma = -1;
  CHECK_THROWS_AS(bad.validate(), ContractError);
}

TEST_CASE("aligned loss without noise") {
  RngStream rng(6, 1);
  auto s = spec_with(20, 3);
  s.M = 2.5;
  s.G = 1.5;
  const auto c = gen_comparator(s, rng);
  for (std::uint64_t t = 1; t <= s.T; ++t) {
    const auto l = gen_loss(s, t, c, {}, rng);
    CHECK(dot(l.values(), c.at(t - 1)) == doctest::Approx(-s.G * s.M).epsilon(1e-12));
  }
}

TEST_CASE("losses respect the norm bound under noise") {
  RngStream rng(7, 1);
  for (auto model : {LossModel::aligned_noisy, LossModel::adaptive_punisher, LossModel::sign_flip}) {
    auto s = spec_with(500, 5, model);
    s.noise_sigma = 2.0;
    s.G = 0.7;
    const auto c = gen_comparator(s, rng);
    std::vector<Vector> plays;
    for (std::uint64_t t = 1; t <= s.T; ++t) {
      const auto l = gen_loss(s, t, c, plays, rng);
      CHECK(norm(l.values()) <= s.G);
      plays.push_back({rng.normal() * 100, rng.normal(), rng.normal()});
    }
  }
}

TEST_CASE("adaptive punisher") {
  RngStream rng(8, 1);
  auto s = spec_with(5, 0, LossModel::adaptive_punisher);
  const auto c = gen_comparator(s, rng);
  const auto u = c.at(0);
  const auto first = gen_loss(s, 1, c, {}, rng);
  for (std::size_t i = 0; i < 3; ++i) CHECK(first.values()[i] == doctest::Approx(-u[i] / norm(u)).epsilon(1e-14));
  const std::vector<Vector> zero_play{Vector(3, 0.0)};
  const auto again = gen_loss(s, 2, c, zero_play, rng);
  for (std::size_t i = 0; i < 3; ++i) CHECK(again.values()[i] == doctest::Approx(first.values()[i]).epsilon(1e-14));
  // A large play dominates the blend and the loss points along it.
  const std::vector<Vector> big{scaled(Vector{1, 1, 1}, 1e6)};
  const auto punished = gen_loss(s, 3, c, big, rng);
  CHECK(dot(punished.values(), big[0]) > 0.99 * norm(big[0]));
}

TEST_CASE("sign flip is a fair coin on the first axis") {
  RngStream rng(9, 1);
  auto s = spec_with(20000, 0, LossModel::sign_flip);
  const auto c = gen_comparator(s, rng);
  int plus = 0;
  for (std::uint64_t t = 1; t <= s.T; ++t) {
    const auto l = gen_loss(s, t, c, {}, rng);
    CHECK(std::abs(l.values()[0]) == 1.0);
    CHECK(l.values()[1] == 0.0);
    plus += l.values()[0] > 0;
  }
  CHECK(std::abs(plus - 10000) < 5 * std::sqrt(5000.0));
}

TEST_CASE("same seed, same environment") {
  auto s = spec_with(100, 7, LossModel::aligned_noisy);
  s.noise_sigma = 0.3;
  s.switch_placement = SwitchPlacement::uniform_random;
  RngStream a(10, kComparatorStream), b(10, kComparatorStream);
  const auto ca = gen_comparator(s, a), cb = gen_comparator(s, b);
  CHECK(ca.vectors() == cb.vectors());
  RngStream la(10, kLossStream), lb(10, kLossStream);
  for (std::uint64_t t = 1; t <= s.T; ++t) {
    const auto x = gen_loss(s, t, ca, {}, la), y = gen_loss(s, t, cb, {}, lb);
    CHECK(Vector(x.values().begin(), x.values().end()) == Vector(y.values().begin(), y.values().end()));
  }
}

TEST_CASE("parse round trips") {
  for (auto m : {LossModel::aligned_noisy, LossModel::adaptive_punisher, LossModel::sign_flip})
    CHECK(parse_loss_model(to_string(m)) == m);
  for (auto p : {SwitchPlacement::evenly_spaced, SwitchPlacement::uniform_random})
    CHECK(parse_switch_placement(to_string(p)) == p);
  CHECK_THROWS_AS(parse_loss_model("nope"), ContractError);
}
