#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pfdr/commands.hpp"
#include "pfdr/harness.hpp"

using namespace pfdr;

namespace {

RunConfig small_config(LossModel model = LossModel::aligned_noisy) {
  RunConfig c;
  c.environment.T = 200;
  c.environment.d = 3;
  c.environment.S = 3;
  c.environment.loss_model = model;
  c.environment.noise_sigma = 0.1;
  return c;
}

std::string slurp(const std::string& path) { return read_text_file(path); }

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pfdr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("origin player regret") {
  auto c = small_config();
  c.environment.noise_sigma = 0.0;
  c.environment.S = 0;
  c.environment.T = 57;
  const auto tr = run_origin_player(c, 3, true);
  CHECK(tr.summary.final_regret == doctest::Approx(57.0).epsilon(1e-12));
  CHECK(tr.summary.learner_loss == 0.0);
  for (auto model : {LossModel::adaptive_punisher, LossModel::sign_flip}) {
    auto m = small_config(model);
    const auto t2 = run_origin_player(m, 4, true);
    double expected = 0;
    for (std::size_t t = 0; t < m.environment.T; ++t)
      expected -= dot(t2.primitives->losses[t], t2.primitives->comparator.at(t));
    CHECK(t2.summary.final_regret == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("traces are deterministic and self-consistent") {
  for (auto model : {LossModel::aligned_noisy, LossModel::adaptive_punisher, LossModel::sign_flip}) {
    auto c = small_config(model);
    const auto a = run_one(c, 11, true);
    const auto b = run_one(c, 11, true);
    CHECK(a.cum_regret == b.cum_regret);
    CHECK(a.meta.num_bases == 11);  // 0, 1, 2, ..., 256, 400
    CHECK(a.meta.s_hat == -1);
    CHECK(trace_consistency_error(a) < 1e-9);
    CHECK(run_one(c, 12).cum_regret != a.cum_regret);
    CHECK(a.summary.switches == 3);
  }
}

TEST_CASE("oracle and single bases carry their S_hat") {
  auto c = small_config();
  c.algorithm = AlgorithmChoice::parse("oracle_base");
  const auto oracle = run_one(c, 1);
  CHECK(oracle.meta.s_hat == 3);
  CHECK(oracle.meta.num_bases == 1);
  c.algorithm = AlgorithmChoice::parse("single_base:64");
  CHECK(run_one(c, 1).meta.s_hat == 64);
  CHECK(c.algorithm.id() == "single_base:64");
  CHECK_THROWS_AS(AlgorithmChoice::parse("single_base:x"), ConfigError);
  CHECK_THROWS_AS(AlgorithmChoice::parse("best"), ConfigError);
}

TEST_CASE("environment seed changes the environment only") {
  auto c = small_config();
  c.environment.seed = 1;
  const auto a = run_one(c, 5, true);
  c.environment.seed = 2;
  const auto b = run_one(c, 5, true);
  CHECK(a.primitives->comparator.vectors() != b.primitives->comparator.vectors());
}

TEST_CASE("aggregate statistics") {
  const auto s = aggregate_values({10, 14});
  CHECK(s.n == 2);
  CHECK(s.mean == 12.0);
  CHECK(s.std_error == doctest::Approx(2.0));
  CHECK(s.ci_high - s.mean == doctest::Approx(3.92).epsilon(1e-3));
  CHECK(s.mean - s.ci_low == doctest::Approx(3.92).epsilon(1e-3));
  CHECK(aggregate_values({5, 5, 5}).std_error == 0.0);
  CHECK_THROWS_AS(aggregate_values({}), ContractError);

  auto c = small_config();
  const auto a = run_one(c, 1);
  c.environment.T = 100;
  const auto b = run_one(c, 1);
  CHECK_THROWS_AS(aggregate({&a, &b}), ContractError);
  CHECK_THROWS_AS(aggregate({}), ContractError);
}

TEST_CASE("scaling fits") {
  const double c = 3.0;
  auto fit = fit_scaling({{1e2, c * 10}, {1e4, c * 100}, {1e6, c * 1000}});
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_scaling({{1, 7}, {10, 7}, {100, 7}}).slope == doctest::Approx(0.0).scale(1));
  const auto floored = fit_scaling({{1, -5}, {10, 0.5}, {100, 100}});
  CHECK(floored.floored == 2);
  CHECK_THROWS_AS(fit_scaling({{1, 1}, {2, 2}}), ContractError);

  RngStream rng(1, 1);
  for (int k = 0; k < 200; ++k) {
    const double a = 2 * rng.uniform();
    const double scale = 1.5 + 10 * rng.uniform();
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 5; ++i) {
      const double x = std::pow(2.0, 10 + i);
      pts.emplace_back(x, scale * std::pow(x, a) * (1 + 0.01 * (2 * rng.uniform() - 1)));
    }
    CHECK(std::abs(fit_scaling(pts).slope - a) < 0.02);
  }
}

TEST_CASE("format_real round trips with 17 digits") {
  RngStream rng(2, 2);
  for (int k = 0; k < 1000; ++k) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, 20 * rng.uniform() - 10);
    CHECK(std::stod(format_real(v)) == v);
  }
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("config parsing") {
  const auto c = parse_run_config(R"({
    "environment": {"T": 100, "d": 2, "S": 4, "loss_model": "sign_flip",
                    "switch_placement": "uniform_random", "noise_sigma": 0.5, "M": 2},
    "algorithm": "single_base", "S_hat": 8, "epsilon": 0.5, "seeds": [1, 2, 3],
    "output_path": "x.csv"})");
  CHECK(c.environment.T == 100);
  CHECK(c.environment.loss_model == LossModel::sign_flip);
  CHECK(c.environment.switch_placement == SwitchPlacement::uniform_random);
  CHECK(c.algorithm.kind == AlgorithmKind::single_base);
  CHECK(c.algorithm.s_hat == 8);
  CHECK(c.epsilon == 0.5);
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(c.eta_c == 0.5);

  const auto again = parse_run_config(to_json(c));
  CHECK(to_json(again) == to_json(c));
  CHECK(config_hash(again) == config_hash(c));
  auto other = c;
  other.seeds = {9};
  other.output_path = "y.csv";
  CHECK(config_hash(other) == config_hash(c));
  other.eta_c = 0.7;
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("config errors name the field") {
  auto field_of = [](const std::string& text) {
    try {
      parse_run_config(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of(R"({"environment": {"T": 10, "S": 10}})") == "environment.S");
  CHECK(field_of(R"({"environment": {"T": -1}})") == "environment.T");
  CHECK(field_of(R"({"environment": {"loss": 1}})") == "environment.loss");
  CHECK(field_of(R"({"environment": {"loss_model": "x"}})") == "environment.loss_model");
  CHECK(field_of(R"({"algorithm": "single_base"})") == "S_hat");
  CHECK(field_of(R"({"epsilon": 0})") == "epsilon");
  CHECK(field_of(R"({"seeds": []})") == "seeds");
  CHECK(field_of(R"({"seeds": [1, "a"]})") == "seeds[1]");
  CHECK(field_of(R"({"environment": {"G": 2}, "G": 1})") == "G");
  CHECK(field_of(R"({"bogus": 1})") == "bogus");
  CHECK(field_of("{not json") == "<document>");
  CHECK(field_of(R"({"environment": {"T": 10}})") == "<none>");
  CHECK_THROWS_AS(parse_sweep_config(R"({"sweep": {"T": []}})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"sweep": {"algorithm": ["x"]}})"), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"environment": {"T": 8}, "sweep": {"S": [8]}})"), ConfigError);
  CHECK_THROWS_AS(read_text_file("/nonexistent/pfdr.json"), IoError);
}

TEST_CASE("sweep cells are row-major") {
  const auto s = parse_sweep_config(R"({
    "environment": {"d": 2},
    "sweep": {"T": [16, 32], "S": [0, 4], "algorithm": ["theorem_combined", "oracle_base"]}})");
  const auto cells = s.cells();
  REQUIRE(cells.size() == 8);
  CHECK(cells[0].environment.T == 16);
  CHECK(cells[0].environment.S == 0);
  CHECK(cells[1].algorithm.kind == AlgorithmKind::oracle_base);
  CHECK(cells[2].environment.S == 4);
  CHECK(cells[7].environment.T == 32);
  CHECK(parse_sweep_config(to_json(s)).cells().size() == 8);
}

TEST_CASE("parallel execution matches serial") {
  auto c = small_config();
  c.seeds = {1, 2, 3, 4, 5};
  auto c2 = small_config(LossModel::adaptive_punisher);
  c2.seeds = {7, 8};
  const auto requests = expand_runs({c, c2}, 100);
  REQUIRE(requests.size() == 7);
  CHECK(requests[0].seed == 101);
  CHECK(requests[6].run_id == 6);
  const auto serial = execute_runs(requests, 1);
  const auto parallel = execute_runs(requests, 4);
  std::ostringstream a, b;
  write_trace_csv(a, serial);
  write_trace_csv(b, parallel);
  CHECK(a.str() == b.str());
  CHECK(metadata_json("run", to_json(c), serial, 1, 100) == metadata_json("run", to_json(c), parallel, 4, 100));
}

TEST_CASE("numeric errors propagate out of the pool") {
  // A single base on aligned losses bets exponentially and overflows.
  auto c = small_config();
  c.environment.T = 20000;
  c.environment.S = 0;
  c.algorithm = AlgorithmChoice::parse("oracle_base");
  CHECK_THROWS_AS(execute_runs(expand_runs({c}, 0), 2), NumericError);
}

TEST_CASE("trace csv layout") {
  auto c = small_config();
  c.environment.T = 3;
  c.environment.S = 0;
  c.seeds = {4};
  auto traces = execute_runs(expand_runs({c}, 0), 1);
  std::ostringstream out;
  write_trace_csv(out, traces);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "run_id,seed,algorithm,d,T,S_true,S_hat,t,cum_regret");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("0,4,theorem_combined,3,3,0,-1," + std::to_string(rows) + ",", 0) == 0);
  }
  CHECK(rows == 3);
  CHECK(sibling_path("out/results.csv", "aggregate", "csv") == "out/results.aggregate.csv");
  CHECK(sibling_path("a.b/results", "meta", "json") == "a.b/results.meta.json");
}

TEST_CASE("run command writes csv, metadata and aggregate") {
  const auto dir = scratch_dir("run");
  const auto config = dir / "run.json";
  std::ofstream(config) << R"({"environment": {"T": 50, "S": 2}, "seeds": [1, 2, 3]})";
  JobOptions opts;
  opts.config_path = config.string();
  opts.out_path = (dir / "res.csv").string();
  const auto out = command_run(opts);
  CHECK(out.files.size() == 3);
  const auto csv = slurp((dir / "res.csv").string());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 50);
  CHECK(std::filesystem::exists(dir / "res.meta.json"));
  CHECK(std::filesystem::exists(dir / "res.aggregate.csv"));

  opts.workers = 3;
  opts.out_path = (dir / "par.csv").string();
  command_run(opts);
  CHECK(slurp((dir / "par.csv").string()) == csv);
  CHECK(slurp((dir / "par.meta.json").string()) == slurp((dir / "res.meta.json").string()));

  opts.seed_offset = 5;
  opts.out_path = (dir / "shift.csv").string();
  command_run(opts);
  CHECK(slurp((dir / "shift.csv").string()) != csv);
}

TEST_CASE("sweep and plotdata commands") {
  const auto dir = scratch_dir("sweep");
  const auto config = dir / "sweep.json";
  std::ofstream(config) << R"({"environment": {"d": 2, "noise_sigma": 0.1}, "seeds": [1, 2],
    "sweep": {"T": [32, 64, 128], "S": [0, 3, 7], "algorithm": ["theorem_combined", "single_base:4"]}})";
  JobOptions opts;
  opts.config_path = config.string();
  opts.out_path = (dir / "sweep.csv").string();
  command_sweep(opts);
  const auto csv = slurp((dir / "sweep.csv").string());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3 * 2 * (32 + 64 + 128));
  const auto agg = slurp((dir / "sweep.aggregate.csv").string());
  CHECK(std::count(agg.begin(), agg.end(), '\n') == 1 + 18);

  opts.out_path = (dir / "fig.csv").string();
  const auto out = command_plotdata(opts);
  for (const char* name : {"fig.final.csv", "fig.curves.csv", "fig.fits.csv", "fig.meta.json"})
    CHECK(std::filesystem::exists(dir / name));
  const auto fits = slurp((dir / "fig.fits.csv").string());
  CHECK(fits.find("T_scaling") != std::string::npos);
  CHECK(fits.find("S_scaling") != std::string::npos);

  std::ofstream(dir / "one_seed.json") << R"({"seeds": [1], "sweep": {"T": [8]}})";
  opts.config_path = (dir / "one_seed.json").string();
  CHECK_THROWS_AS(command_sweep(opts), ConfigError);
  opts.config_path = (dir / "missing.json").string();
  CHECK_THROWS_AS(command_sweep(opts), IoError);
}
