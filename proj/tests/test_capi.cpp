#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pfdr/pfdr.h"

TEST_CASE("version and status names") {
  CHECK(std::string(pfdr_version()) == "0.1.0");
  CHECK(std::string(pfdr_status_name(PFDR_ERR_CONFIG)) == "config_error");
  CHECK(std::string(pfdr_status_name(PFDR_OK)) == "ok");
}

TEST_CASE("learner handle round trip") {
  pfdr_learner_params params;
  pfdr_learner_params_default(&params);
  params.horizon = 100;
  params.dim = 4;
  pfdr_learner* learner = nullptr;
  REQUIRE(pfdr_learner_create_combined(&params, 7, &learner) == PFDR_OK);
  CHECK(pfdr_learner_num_bases(learner) == 10);
  CHECK(pfdr_learner_dim(learner) == 4);
  std::vector<double> w(4);
  const double loss[4] = {0.5, -0.5, 0.1, 0.0};
  for (int t = 0; t < 100; ++t) {
    REQUIRE(pfdr_learner_predict(learner, w.data(), w.size()) == PFDR_OK);
    double obs = 0;
    for (int i = 0; i < 4; ++i) obs += loss[i] * w[i];
    REQUIRE(pfdr_learner_update(learner, obs) == PFDR_OK);
    size_t sel = 99;
    CHECK(pfdr_learner_last_selected(learner, &sel) == PFDR_OK);
    CHECK(sel < 10);
  }
  CHECK(pfdr_learner_predict(learner, w.data(), 3) == PFDR_ERR_INVALID_ARGUMENT);
  CHECK(pfdr_learner_update(learner, 1.0) == PFDR_ERR_CONTRACT);
  CHECK(std::string(pfdr_last_error()).find("without") != std::string::npos);
  pfdr_learner_destroy(learner);

  REQUIRE(pfdr_learner_create_single(&params, 3, 7, &learner) == PFDR_OK);
  CHECK(pfdr_learner_num_bases(learner) == 1);
  pfdr_learner_destroy(learner);

  params.dim = 0;
  CHECK(pfdr_learner_create_combined(&params, 7, &learner) == PFDR_ERR_CONTRACT);
  CHECK(pfdr_learner_create_combined(nullptr, 7, &learner) == PFDR_ERR_INVALID_ARGUMENT);
  pfdr_learner_destroy(nullptr);
}

TEST_CASE("grid") {
  uint64_t values[32];
  size_t count = 0;
  REQUIRE(pfdr_grid(8, values, 32, &count) == PFDR_OK);
  CHECK(count == 6);
  CHECK(values[5] == 16);
  CHECK(pfdr_grid(1000, values, 4, &count) == PFDR_ERR_INVALID_ARGUMENT);
  CHECK(count == 13);
}

TEST_CASE("trace handle") {
  const char* cfg = R"({"environment": {"T": 64, "S": 0, "noise_sigma": 0}, "algorithm": "theorem_combined"})";
  pfdr_trace* trace = nullptr;
  REQUIRE(pfdr_trace_run(cfg, 3, &trace) == PFDR_OK);
  CHECK(pfdr_trace_length(trace) == 64);
  CHECK(pfdr_trace_num_bases(trace) == 9);  // 0, 1, ..., 64, 128
  std::vector<double> cum(64);
  REQUIRE(pfdr_trace_cum_regret(trace, cum.data(), cum.size()) == PFDR_OK);
  CHECK(cum.back() == pfdr_trace_final_regret(trace));
  // Regret = learner loss + T since the comparator loss is -1 every round.
  CHECK(pfdr_trace_final_regret(trace) == doctest::Approx(pfdr_trace_learner_loss(trace) + 64).epsilon(1e-12));
  CHECK(pfdr_trace_cum_regret(trace, cum.data(), 10) == PFDR_ERR_INVALID_ARGUMENT);
  pfdr_trace_destroy(trace);

  CHECK(pfdr_trace_run(R"({"environment": {"T": 4, "S": 9}})", 1, &trace) == PFDR_ERR_CONFIG);
  CHECK(std::string(pfdr_last_error()).rfind("environment.S:", 0) == 0);
  CHECK(pfdr_trace_run("[", 1, &trace) == PFDR_ERR_CONFIG);
}

TEST_CASE("scaling fit") {
  const double x[3] = {100, 10000, 1000000};
  const double y[3] = {10, 100, 1000};
  double slope = 0, intercept = 0, r2 = 0;
  REQUIRE(pfdr_fit_scaling(x, y, 3, &slope, &intercept, &r2) == PFDR_OK);
  CHECK(slope == doctest::Approx(0.5));
  CHECK(r2 == doctest::Approx(1.0));
  CHECK(pfdr_fit_scaling(x, y, 2, &slope, nullptr, nullptr) == PFDR_ERR_CONTRACT);
}

namespace {
void collect(const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); }
void count_checks(const char*, int passed, const char*, void* user) {
  auto* c = static_cast<int*>(user);
  c[0] += 1;
  c[1] += passed;
}
}  // namespace

TEST_CASE("commands") {
  {
    std::ofstream f("capi_run.json");
    f << R"({"environment": {"T": 40, "S": 1}, "seeds": [1, 2], "output_path": "capi_run.csv"})";
  }
  std::vector<std::string> lines;
  pfdr_job_options opts{};
  opts.config_path = "capi_run.json";
  opts.workers = 2;
  opts.log = collect;
  opts.log_user = &lines;
  CHECK(pfdr_cmd_run(&opts) == PFDR_OK);
  CHECK(!lines.empty());
  CHECK(std::ifstream("capi_run.csv").good());
  CHECK(std::ifstream("capi_run.meta.json").good());

  opts.config_path = "does_not_exist.json";
  CHECK(pfdr_cmd_run(&opts) == PFDR_ERR_IO);
  CHECK(pfdr_cmd_sweep(nullptr) == PFDR_ERR_INVALID_ARGUMENT);

  int counts[2] = {0, 0};
  CHECK(pfdr_cmd_check(count_checks, counts) == PFDR_OK);
  CHECK(counts[0] >= 9);
  CHECK(counts[0] == counts[1]);
}
