#ifndef PFDR_HARNESS_HPP
#define PFDR_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pfdr/combiner.hpp"
#include "pfdr/environments.hpp"

namespace pfdr {

inline constexpr std::string_view kVersion = "0.1.0";

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class AlgorithmKind { theorem_combined, single_base, oracle_base };

struct AlgorithmChoice {
  AlgorithmKind kind = AlgorithmKind::theorem_combined;
  std::uint64_t s_hat = 0;  // single_base only

  /// "theorem_combined", "oracle_base" or "single_base:<S_hat>".
  std::string id() const;
  static AlgorithmChoice parse(std::string_view id);
  bool operator==(const AlgorithmChoice&) const = default;
};

struct RunConfig {
  EnvironmentSpec environment;
  AlgorithmChoice algorithm;
  double epsilon = 1.0;
  double G = 1.0;
  double eta_c = 0.5;
  std::optional<double> v_min_override;
  std::vector<std::uint64_t> seeds{0};
  std::string output_path = "results.csv";

  /// Throws ConfigError with the field path.
  void validate() const;
  AlgorithmParams algorithm_params() const;
};

/// A matrix over T, S, d, loss model and algorithm around a base config.
struct SweepConfig {
  RunConfig base;
  std::vector<std::uint64_t> T;
  std::vector<std::uint64_t> S;
  std::vector<std::size_t> d;
  std::vector<LossModel> loss_model;
  std::vector<AlgorithmChoice> algorithm;

  /// One resolved config per cell, in row-major order (T, S, d, loss, algorithm).
  std::vector<RunConfig> cells() const;
};

RunConfig parse_run_config(std::string_view json_text);
SweepConfig parse_sweep_config(std::string_view json_text);
std::string read_text_file(const std::string& path);
/// Canonical JSON of the fully resolved config.
std::string to_json(const RunConfig& config);
std::string to_json(const SweepConfig& config);
std::uint64_t config_hash(const RunConfig& config);

struct TraceMetadata {
  std::uint64_t run_id = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string algorithm;
  std::size_t num_bases = 0;
  std::uint64_t s_true = 0;
  std::int64_t s_hat = -1;  // -1 for theorem_combined
  std::size_t d = 0;
  std::uint64_t T = 0;
  std::string loss_model;
};

struct TraceSummary {
  double final_regret = 0.0;
  std::size_t switches = 0;
  double path_length = 0.0;
  double max_norm = 0.0;
  /// sum_t <loss_t, w_t>: the learner's regret against the origin.
  double learner_loss = 0.0;
  double wall_seconds = 0.0;
};

/// Per-round logs kept for self-consistency checks.
struct TracePrimitives {
  std::vector<Vector> losses;
  std::vector<Vector> plays;
  ComparatorSequence comparator;
};

struct RegretTrace {
  TraceMetadata meta;
  std::vector<double> cum_regret;
  TraceSummary summary;
  std::optional<TracePrimitives> primitives;
};

/// Full game loop for one seed. Throws NumericError on NaN or overflow.
RegretTrace run_one(const RunConfig& config, std::uint64_t seed, bool keep_primitives = false);

/// Learner that always plays the origin; baseline for trace tests.
RegretTrace run_origin_player(const RunConfig& config, std::uint64_t seed, bool keep_primitives = false);

/// Largest |recomputed - logged| / max(1, |logged|) over all rounds.
double trace_consistency_error(const RegretTrace& trace);

struct RunRequest {
  RunConfig config;
  std::uint64_t seed = 0;
  std::uint64_t run_id = 0;
};

/// Every (config, seed) pair in order; seeds are shifted by seed_offset.
std::vector<RunRequest> expand_runs(const std::vector<RunConfig>& configs, std::int64_t seed_offset);

/// Runs requests on up to `workers` threads; results come back in request order.
std::vector<RegretTrace> execute_runs(const std::vector<RunRequest>& requests, unsigned workers);

struct CellSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Final-regret statistics with a 95% normal interval. Needs at least two
/// traces sharing one horizon.
CellSummary aggregate(const std::vector<const RegretTrace*>& traces);
CellSummary aggregate_values(const std::vector<double>& values);

struct CellRow {
  std::string algorithm;
  std::size_t d = 0;
  std::uint64_t T = 0;
  std::uint64_t s_true = 0;
  std::int64_t s_hat = -1;
  std::string loss_model;
  std::size_t num_bases = 0;
  CellSummary stats;
};

/// Groups traces by (algorithm, d, T, S, loss model) in first-seen order.
std::vector<CellRow> aggregate_cells(const std::vector<RegretTrace>& traces);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Points whose regret was below 1 and floored there.
  std::size_t floored = 0;
};

/// Least squares of log(max(y, 1)) on log(x). Needs >= 3 points with x > 0.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points);

/// Decimal with 17 significant digits.
std::string format_real(double v);

void write_trace_csv(std::ostream& out, const std::vector<RegretTrace>& traces);
void write_aggregate_csv(std::ostream& out, const std::vector<CellRow>& rows);
std::string metadata_json(const std::string& command, const std::string& resolved_config_json,
                          const std::vector<RegretTrace>& traces, unsigned workers,
                          std::int64_t seed_offset);

/// Companion path: "out.csv" + suffix "aggregate" -> "out.aggregate.csv".
std::string sibling_path(const std::string& csv_path, std::string_view suffix, std::string_view ext);

}  // namespace pfdr

#endif  // PFDR_HARNESS_HPP
