#include "pfdr/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

namespace pfdr {

namespace {

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void log_line(const JobOptions& o, const std::string& line) {
  if (o.log) o.log(line);
}

std::string resolve_out(const JobOptions& o, const RunConfig& base) {
  return o.out_path.empty() ? base.output_path : o.out_path;
}

void require_replicates(const SweepConfig& sweep) {
  if (sweep.base.seeds.size() < 2) throw ConfigError("seeds", "a sweep needs at least two seeds per cell");
}

void log_cells(const JobOptions& o, const std::vector<CellRow>& rows) {
  for (const auto& r : rows) {
    log_line(o, r.algorithm + " T=" + std::to_string(r.T) + " S=" + std::to_string(r.s_true) +
                    " d=" + std::to_string(r.d) + " N=" + std::to_string(r.num_bases) +
                    " mean_final_regret=" + format_real(r.stats.mean) +
                    " ci95=[" + format_real(r.stats.ci_low) + ", " + format_real(r.stats.ci_high) + "]");
  }
}

void write_curves(std::ostream& out, const std::vector<RegretTrace>& traces, std::size_t max_points) {
  out << "algorithm,d,T,S_true,S_hat,loss_model,t,mean_cum_regret,std_error\n";
  using Key = std::tuple<std::string, std::size_t, std::uint64_t, std::uint64_t, std::int64_t, std::string>;
  std::map<Key, std::size_t> index;
  std::vector<std::vector<const RegretTrace*>> cells;
  for (const auto& tr : traces) {
    const Key key{tr.meta.algorithm, tr.meta.d, tr.meta.T, tr.meta.s_true, tr.meta.s_hat, tr.meta.loss_model};
    auto [it, inserted] = index.try_emplace(key, cells.size());
    if (inserted) cells.emplace_back();
    cells[it->second].push_back(&tr);
  }
  for (const auto& cell : cells) {
    const auto& m = cell.front()->meta;
    const std::uint64_t T = m.T;
    std::set<std::uint64_t> rounds;
    for (std::size_t k = 1; k <= max_points; ++k) {
      rounds.insert(std::max<std::uint64_t>(1, (k * T) / max_points));
    }
    for (std::uint64_t t : rounds) {
      std::vector<double> values;
      for (const auto* tr : cell) values.push_back(tr->cum_regret[t - 1]);
      double mean = 0.0, se = 0.0;
      if (values.size() >= 2) {
        const auto s = aggregate_values(values);
        mean = s.mean;
        se = s.std_error;
      } else {
        mean = values.front();
      }
      out << m.algorithm << ',' << m.d << ',' << T << ',' << m.s_true << ',' << m.s_hat << ','
          << m.loss_model << ',' << t << ',' << format_real(mean) << ',' << format_real(se) << '\n';
    }
  }
}

}  // namespace

std::vector<FitRow> scaling_fits(const std::vector<CellRow>& rows) {
  std::vector<FitRow> fits;
  // T scaling: group by (algorithm, S, d, loss).
  using TKey = std::tuple<std::string, std::uint64_t, std::size_t, std::string>;
  std::map<TKey, std::vector<std::pair<double, double>>> by_t;
  using SKey = std::tuple<std::string, std::uint64_t, std::size_t, std::string>;
  std::map<SKey, std::vector<std::pair<double, double>>> by_s;
  for (const auto& r : rows) {
    by_t[{r.algorithm, r.s_true, r.d, r.loss_model}].emplace_back(static_cast<double>(r.T), r.stats.mean);
    by_s[{r.algorithm, r.T, r.d, r.loss_model}].emplace_back(1.0 + static_cast<double>(r.s_true), r.stats.mean);
  }
  auto distinct_x = [](const std::vector<std::pair<double, double>>& pts) {
    std::set<double> xs;
    for (const auto& p : pts) xs.insert(p.first);
    return xs.size();
  };
  for (const auto& [key, pts] : by_t) {
    if (distinct_x(pts) < 3) continue;
    const auto& [algo, s, d, loss] = key;
    fits.push_back({"T_scaling", algo,
                    "S=" + std::to_string(s) + " d=" + std::to_string(d) + " loss=" + loss, fit_scaling(pts),
                    pts.size()});
  }
  for (const auto& [key, pts] : by_s) {
    if (distinct_x(pts) < 3) continue;
    const auto& [algo, t, d, loss] = key;
    fits.push_back({"S_scaling", algo,
                    "T=" + std::to_string(t) + " d=" + std::to_string(d) + " loss=" + loss, fit_scaling(pts),
                    pts.size()});
  }
  return fits;
}

JobOutputs command_run(const JobOptions& options) {
  const RunConfig config = parse_run_config(read_text_file(options.config_path));
  const std::string out_path = resolve_out(options, config);
  const auto traces = execute_runs(expand_runs({config}, options.seed_offset), options.workers);
  JobOutputs outputs;
  {
    auto out = open_out(out_path);
    write_trace_csv(out, traces);
    outputs.files.push_back(out_path);
  }
  for (const auto& tr : traces) {
    log_line(options, tr.meta.algorithm + " seed=" + std::to_string(tr.meta.seed) + " N=" +
                          std::to_string(tr.meta.num_bases) +
                          " final_regret=" + format_real(tr.summary.final_regret) +
                          " S_T=" + std::to_string(tr.summary.switches));
  }
  if (traces.size() >= 2) {
    const auto rows = aggregate_cells(traces);
    const auto path = sibling_path(out_path, "aggregate", "csv");
    auto out = open_out(path);
    write_aggregate_csv(out, rows);
    outputs.files.push_back(path);
  }
  const auto meta_path = sibling_path(out_path, "meta", "json");
  auto meta = open_out(meta_path);
  meta << metadata_json("run", to_json(config), traces, options.workers, options.seed_offset);
  outputs.files.push_back(meta_path);
  return outputs;
}

JobOutputs command_sweep(const JobOptions& options) {
  const SweepConfig sweep = parse_sweep_config(read_text_file(options.config_path));
  require_replicates(sweep);
  const std::string out_path = resolve_out(options, sweep.base);
  const auto traces = execute_runs(expand_runs(sweep.cells(), options.seed_offset), options.workers);
  JobOutputs outputs;
  {
    auto out = open_out(out_path);
    write_trace_csv(out, traces);
    outputs.files.push_back(out_path);
  }
  const auto rows = aggregate_cells(traces);
  log_cells(options, rows);
  const auto agg_path = sibling_path(out_path, "aggregate", "csv");
  {
    auto out = open_out(agg_path);
    write_aggregate_csv(out, rows);
    outputs.files.push_back(agg_path);
  }
  const auto meta_path = sibling_path(out_path, "meta", "json");
  auto meta = open_out(meta_path);
  meta << metadata_json("sweep", to_json(sweep), traces, options.workers, options.seed_offset);
  outputs.files.push_back(meta_path);
  return outputs;
}

JobOutputs command_plotdata(const JobOptions& options) {
  const SweepConfig sweep = parse_sweep_config(read_text_file(options.config_path));
  require_replicates(sweep);
  const std::string out_path = resolve_out(options, sweep.base);
  const auto traces = execute_runs(expand_runs(sweep.cells(), options.seed_offset), options.workers);
  const auto rows = aggregate_cells(traces);
  log_cells(options, rows);
  JobOutputs outputs;

  const auto final_path = sibling_path(out_path, "final", "csv");
  {
    auto out = open_out(final_path);
    write_aggregate_csv(out, rows);
    outputs.files.push_back(final_path);
  }
  const auto curves_path = sibling_path(out_path, "curves", "csv");
  {
    auto out = open_out(curves_path);
    write_curves(out, traces, 200);
    outputs.files.push_back(curves_path);
  }
  const auto fits_path = sibling_path(out_path, "fits", "csv");
  {
    auto out = open_out(fits_path);
    out << "fit,algorithm,held_fixed,points,slope,intercept,r_squared,floored_points\n";
    for (const auto& f : scaling_fits(rows)) {
      out << f.fit << ',' << f.algorithm << ',' << f.held_fixed << ',' << f.points << ','
          << format_real(f.result.slope) << ',' << format_real(f.result.intercept) << ','
          << format_real(f.result.r_squared) << ',' << f.result.floored << '\n';
      if (f.result.floored > 0) {
        log_line(options, "warning: " + std::to_string(f.result.floored) + " point(s) of " + f.fit + " " +
                              f.algorithm + " " + f.held_fixed + " had regret < 1 and were floored at 1");
      }
    }
    outputs.files.push_back(fits_path);
  }
  const auto meta_path = sibling_path(out_path, "meta", "json");
  auto meta = open_out(meta_path);
  meta << metadata_json("plotdata", to_json(sweep), traces, options.workers, options.seed_offset);
  outputs.files.push_back(meta_path);
  return outputs;
}

}  // namespace pfdr
