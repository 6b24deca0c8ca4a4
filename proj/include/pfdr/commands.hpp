#ifndef PFDR_COMMANDS_HPP
#define PFDR_COMMANDS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pfdr/harness.hpp"

namespace pfdr {

struct JobOptions {
  std::string config_path;
  /// Empty: use the config's output_path.
  std::string out_path;
  unsigned workers = 1;
  std::int64_t seed_offset = 0;
  std::function<void(const std::string&)> log;
};

struct JobOutputs {
  std::vector<std::string> files;
};

/// Single config: trace CSV, metadata sidecar, aggregate when >= 2 seeds.
JobOutputs command_run(const JobOptions& options);
/// Matrix config: trace CSV, aggregate CSV, metadata sidecar.
JobOutputs command_sweep(const JobOptions& options);
/// Matrix config: per-figure CSVs (final regret table, mean curves,
/// log-log scaling fits) plus metadata.
JobOutputs command_plotdata(const JobOptions& options);

struct FitRow {
  std::string fit;  // "T_scaling" or "S_scaling"
  std::string algorithm;
  std::string held_fixed;
  ScalingFit result;
  std::size_t points = 0;
};

/// Log-log fits of mean final regret against T (S fixed) and 1 + S (T fixed),
/// for every slice with at least three distinct x values.
std::vector<FitRow> scaling_fits(const std::vector<CellRow>& rows);

}  // namespace pfdr

#endif  // PFDR_COMMANDS_HPP
