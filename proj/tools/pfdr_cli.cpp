// pfdr command-line front end. Talks to the library only through pfdr.h.
//
//   pfdr run      --config run.json   [--out results.csv] [--workers K] [--seed-offset N]
//   pfdr sweep    --config sweep.json [--out results.csv] [--workers K] [--seed-offset N]
//   pfdr plotdata --config sweep.json [--out figures.csv] [--workers K] [--seed-offset N]
//   pfdr check

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "pfdr/pfdr.h"

namespace {

struct JobFlags {
  std::string config;
  std::string out;
  unsigned workers = 1;
  long long seed_offset = 0;
};

void add_job_flags(CLI::App* cmd, JobFlags& flags) {
  cmd->add_option("--config", flags.config, "Structured (JSON) config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "Result CSV path (default: config output_path)");
  cmd->add_option("--workers", flags.workers, "Parallel runs")->check(CLI::Range(1u, 1024u));
  cmd->add_option("--seed-offset", flags.seed_offset, "Added to every configured seed");
}

void print_line(const char* line, void*) { std::printf("%s\n", line); }

void print_check(const char* name, int passed, const char* detail, void*) {
  std::printf("[%s] %-20s %s\n", passed ? "PASS" : "FAIL", name, detail);
}

int finish(pfdr_status status) {
  if (status != PFDR_OK) {
    std::fprintf(stderr, "error (%s): %s\n", pfdr_status_name(status), pfdr_last_error());
    return static_cast<int>(status);
  }
  return 0;
}

using Command = pfdr_status (*)(const pfdr_job_options*);

int run_job(Command command, const JobFlags& flags) {
  pfdr_job_options options{};
  options.config_path = flags.config.c_str();
  options.out_path = flags.out.empty() ? nullptr : flags.out.c_str();
  options.workers = flags.workers;
  options.seed_offset = flags.seed_offset;
  options.log = print_line;
  return finish(command(&options));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("pfdr ") + pfdr_version() +
               ": parameter-free dynamic regret experiments for unconstrained linear bandits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pfdr_version());

  JobFlags run_flags, sweep_flags, plot_flags;
  auto* run = app.add_subcommand("run", "Play one config for each of its seeds");
  add_job_flags(run, run_flags);
  auto* sweep = app.add_subcommand("sweep", "Run a matrix over T, S, d, loss model and algorithm");
  add_job_flags(sweep, sweep_flags);
  auto* plot = app.add_subcommand("plotdata", "Emit per-figure CSVs (final regret, curves, scaling fits)");
  add_job_flags(plot, plot_flags);
  auto* check = app.add_subcommand("check", "Run the invariant suite");

  CLI11_PARSE(app, argc, argv);

  if (*run) return run_job(pfdr_cmd_run, run_flags);
  if (*sweep) return run_job(pfdr_cmd_sweep, sweep_flags);
  if (*plot) return run_job(pfdr_cmd_plotdata, plot_flags);
  if (*check) return finish(pfdr_cmd_check(print_check, nullptr));
  return 1;
}
