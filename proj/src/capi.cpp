#include <exception>
#include <string>

#include "pfdr/checks.hpp"
#include "pfdr/combiner.hpp"
#include "pfdr/commands.hpp"
#include "pfdr/harness.hpp"
#include "pfdr/pfdr.h"

struct pfdr_learner {
  pfdr::Combiner combiner;
};

struct pfdr_trace {
  pfdr::RegretTrace trace;
};

namespace {

thread_local std::string g_last_error;

pfdr_status fail(pfdr_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps the library's exception hierarchy onto status codes.
template <class Fn>
pfdr_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const pfdr::ConfigError& e) {
    return fail(PFDR_ERR_CONFIG, e.what());
  } catch (const pfdr::ContractError& e) {
    return fail(PFDR_ERR_CONTRACT, e.what());
  } catch (const pfdr::NumericError& e) {
    return fail(PFDR_ERR_NUMERIC, e.what());
  } catch (const pfdr::IoError& e) {
    return fail(PFDR_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(PFDR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PFDR_ERR_INTERNAL, "unknown exception");
  }
}

pfdr::AlgorithmParams to_params(const pfdr_learner_params& p) {
  pfdr::AlgorithmParams params;
  params.horizon = p.horizon;
  params.dim = p.dim;
  params.epsilon = p.epsilon;
  params.lipschitz = p.lipschitz;
  params.eta_c = p.eta_c;
  if (p.v_min > 0.0) params.v_min = p.v_min;
  return params;
}

pfdr::JobOptions to_job(const pfdr_job_options& o) {
  pfdr::JobOptions job;
  job.config_path = o.config_path;
  job.out_path = o.out_path != nullptr ? o.out_path : "";
  job.workers = o.workers == 0 ? 1 : o.workers;
  job.seed_offset = o.seed_offset;
  if (o.log != nullptr) {
    job.log = [fn = o.log, user = o.log_user](const std::string& line) { fn(line.c_str(), user); };
  }
  return job;
}

template <class Command>
pfdr_status run_command(const pfdr_job_options* options, Command&& command) {
  if (options == nullptr || options->config_path == nullptr) {
    return fail(PFDR_ERR_INVALID_ARGUMENT, "options and options->config_path are required");
  }
  return guarded([&] {
    command(to_job(*options));
    return PFDR_OK;
  });
}

}  // namespace

extern "C" {

const char* pfdr_version(void) { return pfdr::kVersion.data(); }

const char* pfdr_last_error(void) { return g_last_error.c_str(); }

const char* pfdr_status_name(pfdr_status status) {
  switch (status) {
    case PFDR_OK: return "ok";
    case PFDR_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case PFDR_ERR_CONTRACT: return "contract_violation";
    case PFDR_ERR_NUMERIC: return "numeric_error";
    case PFDR_ERR_CONFIG: return "config_error";
    case PFDR_ERR_IO: return "io_error";
    case PFDR_ERR_CHECK_FAILED: return "check_failed";
    case PFDR_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

void pfdr_learner_params_default(pfdr_learner_params* params) {
  if (params == nullptr) return;
  *params = pfdr_learner_params{1024, 3, 1.0, 1.0, 0.5, 0.0};
}

pfdr_status pfdr_learner_create_combined(const pfdr_learner_params* params, uint64_t seed, pfdr_learner** out) {
  if (params == nullptr || out == nullptr) return fail(PFDR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new pfdr_learner{pfdr::assemble_theorem_algorithm(to_params(*params), seed)};
    return PFDR_OK;
  });
}

pfdr_status pfdr_learner_create_single(const pfdr_learner_params* params, uint64_t s_hat, uint64_t seed,
                                       pfdr_learner** out) {
  if (params == nullptr || out == nullptr) return fail(PFDR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new pfdr_learner{pfdr::assemble_single_base(to_params(*params), s_hat, seed)};
    return PFDR_OK;
  });
}

void pfdr_learner_destroy(pfdr_learner* learner) { delete learner; }

size_t pfdr_learner_num_bases(const pfdr_learner* learner) {
  return learner != nullptr ? learner->combiner.size() : 0;
}

size_t pfdr_learner_dim(const pfdr_learner* learner) { return learner != nullptr ? learner->combiner.dim() : 0; }

pfdr_status pfdr_learner_predict(pfdr_learner* learner, double* action, size_t dim) {
  if (learner == nullptr || action == nullptr) return fail(PFDR_ERR_INVALID_ARGUMENT, "null argument");
  if (dim != learner->combiner.dim()) {
    return fail(PFDR_ERR_INVALID_ARGUMENT, "action buffer has dimension " + std::to_string(dim) +
                                               ", learner has " + std::to_string(learner->combiner.dim()));
  }
  return guarded([&] {
    const auto w = learner->combiner.propose();
    for (size_t i = 0; i < dim; ++i) action[i] = w[i];
    return PFDR_OK;
  });
}

pfdr_status pfdr_learner_update(pfdr_learner* learner, double observed) {
  if (learner == nullptr) return fail(PFDR_ERR_INVALID_ARGUMENT, "null learner");
  return guarded([&] {
    learner->combiner.feedback(observed);
    return PFDR_OK;
  });
}

pfdr_status pfdr_learner_last_selected(const pfdr_learner* learner, size_t* index) {
  if (learner == nullptr || index == nullptr) return fail(PFDR_ERR_INVALID_ARGUMENT, "null argument");
  *index = learner->combiner.last_selected();
  return PFDR_OK;
}

pfdr_status pfdr_grid(uint64_t horizon, uint64_t* values, size_t capacity, size_t* count) {
  if (count == nullptr) return fail(PFDR_ERR_INVALID_ARGUMENT, "null count");
  return guarded([&] {
    const auto grid = pfdr::build_grid(horizon);
    *count = grid.size();
    if (values == nullptr || capacity < grid.size()) {
      return fail(PFDR_ERR_INVALID_ARGUMENT, "grid needs " + std::to_string(grid.size()) + " slots");
    }
    for (size_t i = 0; i < grid.size(); ++i) values[i] = grid.values[i];
    return PFDR_OK;
  });
}

pfdr_status pfdr_trace_run(const char* config_json, uint64_t seed, pfdr_trace** out) {
  if (config_json == nullptr || out == nullptr) return fail(PFDR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto config = pfdr::parse_run_config(config_json);
    *out = new pfdr_trace{pfdr::run_one(config, seed)};
    return PFDR_OK;
  });
}

void pfdr_trace_destroy(pfdr_trace* trace) { delete trace; }

size_t pfdr_trace_length(const pfdr_trace* trace) { return trace != nullptr ? trace->trace.cum_regret.size() : 0; }

size_t pfdr_trace_num_bases(const pfdr_trace* trace) { return trace != nullptr ? trace->trace.meta.num_bases : 0; }

double pfdr_trace_final_regret(const pfdr_trace* trace) {
  return trace != nullptr ? trace->trace.summary.final_regret : 0.0;
}

double pfdr_trace_learner_loss(const pfdr_trace* trace) {
  return trace != nullptr ? trace->trace.summary.learner_loss : 0.0;
}

pfdr_status pfdr_trace_cum_regret(const pfdr_trace* trace, double* out, size_t capacity) {
  if (trace == nullptr || out == nullptr) return fail(PFDR_ERR_INVALID_ARGUMENT, "null argument");
  const auto& cum = trace->trace.cum_regret;
  if (capacity < cum.size()) {
    return fail(PFDR_ERR_INVALID_ARGUMENT, "buffer needs " + std::to_string(cum.size()) + " slots");
  }
  for (size_t i = 0; i < cum.size(); ++i) out[i] = cum[i];
  return PFDR_OK;
}

pfdr_status pfdr_fit_scaling(const double* x, const double* y, size_t n, double* slope, double* intercept,
                             double* r_squared) {
  if (x == nullptr || y == nullptr) return fail(PFDR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < n; ++i) pts.emplace_back(x[i], y[i]);
    const auto fit = pfdr::fit_scaling(pts);
    if (slope != nullptr) *slope = fit.slope;
    if (intercept != nullptr) *intercept = fit.intercept;
    if (r_squared != nullptr) *r_squared = fit.r_squared;
    return PFDR_OK;
  });
}

pfdr_status pfdr_cmd_run(const pfdr_job_options* options) {
  return run_command(options, [](const pfdr::JobOptions& job) { pfdr::command_run(job); });
}

pfdr_status pfdr_cmd_sweep(const pfdr_job_options* options) {
  return run_command(options, [](const pfdr::JobOptions& job) { pfdr::command_sweep(job); });
}

pfdr_status pfdr_cmd_plotdata(const pfdr_job_options* options) {
  return run_command(options, [](const pfdr::JobOptions& job) { pfdr::command_plotdata(job); });
}

pfdr_status pfdr_cmd_check(pfdr_check_fn report, void* user) {
  return guarded([&] {
    bool all = true;
    for (const auto& r : pfdr::run_invariant_checks()) {
      all = all && r.passed;
      if (report != nullptr) report(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
    }
    if (!all) return fail(PFDR_ERR_CHECK_FAILED, "one or more invariant checks failed");
    return PFDR_OK;
  });
}

}  // extern "C"
