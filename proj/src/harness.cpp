#include "pfdr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace pfdr {

namespace {

constexpr double kNormal975 = 1.959963984540054;

// Environment streams are keyed by both the environment's own seed and the
// run seed, so changing environment.seed changes only the environment.
std::uint64_t environment_seed(const EnvironmentSpec& spec, std::uint64_t run_seed) {
  return mix64(spec.seed ^ 0x5DEECE66DULL) ^ run_seed;
}

Combiner make_algorithm(const RunConfig& config, std::uint64_t seed) {
  const AlgorithmParams params = config.algorithm_params();
  switch (config.algorithm.kind) {
    case AlgorithmKind::theorem_combined: return assemble_theorem_algorithm(params, seed);
    case AlgorithmKind::single_base: return assemble_single_base(params, config.algorithm.s_hat, seed);
    case AlgorithmKind::oracle_base: return assemble_single_base(params, config.environment.S, seed);
  }
  throw ContractError("unknown algorithm");
}

std::int64_t s_hat_of(const RunConfig& config) {
  switch (config.algorithm.kind) {
    case AlgorithmKind::theorem_combined: return -1;
    case AlgorithmKind::single_base: return static_cast<std::int64_t>(config.algorithm.s_hat);
    case AlgorithmKind::oracle_base: return static_cast<std::int64_t>(config.environment.S);
  }
  return -1;
}

template <class Player>
RegretTrace play_game(const RunConfig& config, std::uint64_t seed, bool keep_primitives,
                      std::size_t num_bases, Player&& player) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const EnvironmentSpec& spec = config.environment;
  const std::uint64_t env_seed = environment_seed(spec, seed);
  RngStream comparator_rng(env_seed, kComparatorStream);
  RngStream loss_rng(env_seed, kLossStream);
  ComparatorSequence comparator = gen_comparator(spec, comparator_rng);
  const ComparatorStats stats = comparator_stats(comparator);

  RegretTrace trace;
  trace.meta.config_hash = config_hash(config);
  trace.meta.seed = seed;
  trace.meta.algorithm = config.algorithm.id();
  trace.meta.num_bases = num_bases;
  trace.meta.s_true = spec.S;
  trace.meta.s_hat = s_hat_of(config);
  trace.meta.d = spec.d;
  trace.meta.T = spec.T;
  trace.meta.loss_model = std::string(to_string(spec.loss_model));
  trace.cum_regret.reserve(spec.T);

  std::vector<Vector> plays;
  std::vector<Vector> losses;
  plays.reserve(spec.T);
  double cum = 0.0;
  double learner_loss = 0.0;
  for (std::uint64_t t = 1; t <= spec.T; ++t) {
    const auto u = comparator.at(t - 1);
    Vector loss_values;
    double played_loss = 0.0;
    Vector w = player([&](std::span<const double> action) {
      const LossVector loss = gen_loss(spec, t, comparator, plays, loss_rng);
      loss_values.assign(loss.values().begin(), loss.values().end());
      played_loss = dot(loss.values(), action);
      return played_loss;
    });
    const double inst = played_loss - dot(loss_values, u);
    cum += inst;
    learner_loss += played_loss;
    if (!std::isfinite(cum)) {
      throw NumericError("non-finite regret at round " + std::to_string(t) + " (algorithm " +
                         trace.meta.algorithm + ", seed " + std::to_string(seed) + ")");
    }
    trace.cum_regret.push_back(cum);
    if (keep_primitives) losses.push_back(std::move(loss_values));
    plays.push_back(std::move(w));
  }

  trace.summary.final_regret = cum;
  trace.summary.switches = stats.switches;
  trace.summary.path_length = stats.path_length;
  trace.summary.max_norm = stats.max_norm;
  trace.summary.learner_loss = learner_loss;
  trace.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (keep_primitives) {
    trace.primitives = TracePrimitives{std::move(losses), std::move(plays), std::move(comparator)};
  }
  return trace;
}

}  // namespace

RegretTrace run_one(const RunConfig& config, std::uint64_t seed, bool keep_primitives) {
  config.validate();
  Combiner algorithm = make_algorithm(config, seed);
  return play_game(config, seed, keep_primitives, algorithm.size(), [&](const auto& observe) {
    const auto w = algorithm.propose();
    Vector played(w.begin(), w.end());
    algorithm.feedback(observe(played));
    return played;
  });
}

RegretTrace run_origin_player(const RunConfig& config, std::uint64_t seed, bool keep_primitives) {
  const std::size_t d = config.environment.d;
  return play_game(config, seed, keep_primitives, 0, [&](const auto& observe) {
    Vector played(d, 0.0);
    observe(played);
    return played;
  });
}

double trace_consistency_error(const RegretTrace& trace) {
  if (!trace.primitives) throw ContractError("trace was recorded without primitives");
  const auto& p = *trace.primitives;
  double cum = 0.0;
  double worst = 0.0;
  for (std::size_t t = 0; t < trace.cum_regret.size(); ++t) {
    cum += dot(p.losses[t], p.plays[t]) - dot(p.losses[t], p.comparator.at(t));
    const double logged = trace.cum_regret[t];
    worst = std::max(worst, std::abs(cum - logged) / std::max(1.0, std::abs(logged)));
  }
  return worst;
}

std::vector<RunRequest> expand_runs(const std::vector<RunConfig>& configs, std::int64_t seed_offset) {
  std::vector<RunRequest> out;
  std::uint64_t id = 0;
  for (const auto& c : configs) {
    for (std::uint64_t s : c.seeds) {
      out.push_back({c, s + static_cast<std::uint64_t>(seed_offset), id++});
    }
  }
  return out;
}

std::vector<RegretTrace> execute_runs(const std::vector<RunRequest>& requests, unsigned workers) {
  std::vector<RegretTrace> results(requests.size());
  std::vector<std::exception_ptr> errors(requests.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      try {
        results[i] = run_one(requests[i].config, requests[i].seed);
        results[i].meta.run_id = requests[i].run_id;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(requests.size())));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

CellSummary aggregate_values(const std::vector<double>& values) {
  if (values.size() < 2) throw ContractError("aggregation needs at least two runs per cell");
  CellSummary s;
  s.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  s.std_error = sd / std::sqrt(static_cast<double>(s.n));
  s.ci_low = s.mean - kNormal975 * s.std_error;
  s.ci_high = s.mean + kNormal975 * s.std_error;
  return s;
}

CellSummary aggregate(const std::vector<const RegretTrace*>& traces) {
  if (traces.empty()) throw ContractError("cannot aggregate an empty cell");
  std::vector<double> finals;
  for (const auto* t : traces) {
    if (t->meta.T != traces.front()->meta.T) throw ContractError("traces in one cell disagree on T");
    finals.push_back(t->summary.final_regret);
  }
  return aggregate_values(finals);
}

std::vector<CellRow> aggregate_cells(const std::vector<RegretTrace>& traces) {
  using Key = std::tuple<std::string, std::size_t, std::uint64_t, std::uint64_t, std::int64_t, std::string>;
  std::map<Key, std::size_t> index;
  std::vector<CellRow> rows;
  std::vector<std::vector<const RegretTrace*>> members;
  for (const auto& tr : traces) {
    const Key key{tr.meta.algorithm, tr.meta.d, tr.meta.T, tr.meta.s_true, tr.meta.s_hat, tr.meta.loss_model};
    auto [it, inserted] = index.try_emplace(key, rows.size());
    if (inserted) {
      CellRow row;
      row.algorithm = tr.meta.algorithm;
      row.d = tr.meta.d;
      row.T = tr.meta.T;
      row.s_true = tr.meta.s_true;
      row.s_hat = tr.meta.s_hat;
      row.loss_model = tr.meta.loss_model;
      row.num_bases = tr.meta.num_bases;
      rows.push_back(row);
      members.emplace_back();
    }
    members[it->second].push_back(&tr);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].stats = aggregate(members[i]);
  return rows;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw ContractError("scaling fit needs at least three points");
  ScalingFit fit;
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw ContractError("scaling fit needs positive finite x and finite y");
    }
    if (y < 1.0) ++fit.floored;
    lx.push_back(std::log(x));
    ly.push_back(std::log(std::max(y, 1.0)));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw ContractError("scaling fit needs at least two distinct x values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const std::vector<RegretTrace>& traces) {
  out << "run_id,seed,algorithm,d,T,S_true,S_hat,t,cum_regret\n";
  for (const auto& tr : traces) {
    const auto& m = tr.meta;
    std::string prefix = std::to_string(m.run_id) + "," + std::to_string(m.seed) + "," + m.algorithm +
                         "," + std::to_string(m.d) + "," + std::to_string(m.T) + "," +
                         std::to_string(m.s_true) + "," + std::to_string(m.s_hat) + ",";
    for (std::size_t t = 0; t < tr.cum_regret.size(); ++t) {
      out << prefix << (t + 1) << ',' << format_real(tr.cum_regret[t]) << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<CellRow>& rows) {
  out << "algorithm,d,T,S_true,S_hat,loss_model,N,n_runs,mean_final_regret,std_error,ci95_low,ci95_high\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.d << ',' << r.T << ',' << r.s_true << ',' << r.s_hat << ','
        << r.loss_model << ',' << r.num_bases << ',' << r.stats.n << ',' << format_real(r.stats.mean) << ','
        << format_real(r.stats.std_error) << ',' << format_real(r.stats.ci_low) << ','
        << format_real(r.stats.ci_high) << '\n';
  }
}

std::string metadata_json(const std::string& command, const std::string& resolved_config_json,
                          const std::vector<RegretTrace>& traces, unsigned /*workers*/,
                          std::int64_t seed_offset) {
  using nlohmann::json;
  json runs = json::array();
  for (const auto& tr : traces) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(tr.meta.config_hash));
    runs.push_back({{"run_id", tr.meta.run_id},
                    {"seed", tr.meta.seed},
                    {"algorithm", tr.meta.algorithm},
                    {"config_hash", hash},
                    {"N", tr.meta.num_bases},
                    {"S_true", tr.meta.s_true},
                    {"S_hat", tr.meta.s_hat},
                    {"d", tr.meta.d},
                    {"T", tr.meta.T},
                    {"loss_model", tr.meta.loss_model},
                    {"final_regret", format_real(tr.summary.final_regret)},
                    {"S_T", tr.summary.switches},
                    {"P_T", format_real(tr.summary.path_length)},
                    {"M", format_real(tr.summary.max_norm)}});
  }
  // Worker count and wall time are left out so serial and parallel runs
  // produce identical files.
  json meta{{"library", "pfdr"},
            {"version", std::string(kVersion)},
            {"command", command},
            {"seed_offset", seed_offset},
            {"experimental_design", "artifact-defined: horizons, seed counts and noise levels are chosen by "
                                    "this harness, not reproduced from published experiments"},
            {"config", json::parse(resolved_config_json)},
            {"runs", runs}};
  return meta.dump(2) + "\n";
}

std::string sibling_path(const std::string& csv_path, std::string_view suffix, std::string_view ext) {
  std::string stem = csv_path;
  const auto slash = stem.find_last_of('/');
  const auto dot = stem.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) stem.resize(dot);
  return stem + "." + std::string(suffix) + "." + std::string(ext);
}

}  // namespace pfdr
