#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rdode/config.hpp"
#include "rdode/experiments.hpp"
#include "rdode/output.hpp"

using namespace rdode;
using nlohmann::json;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.grid.ncells = 128;
  c.estimator.cq = 0.4;
  c.control.dt_max = 0.004;
  c.control.dt_init = 0.004;
  return c;
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  CHECK(parse_config(emit_config(c)) == c);

  c.params.d = 0.25;
  c.kinetics = Kinetics::power(1.5);
  c.grid = {2.0, 64};
  c.scenario = TheoremScenario{0.2, 0.1, 1.3, 2.2, 2.5};
  c.control.t_end = 1.5;
  c.estimator = {10, 99, 0.7};
  c.dichotomy.d = 0.5;
  c.converge.levels = {64, 128};
  c.sweep.eps = {0.1, 0.2};
  c.outputs.plot_path = "p.svg";
  c.outputs.snapshot_times = {0.1, 0.2};
  CHECK(parse_config(emit_config(c)) == c);

  c.scenario = CustomScenario{"gaussian", 1.3, 0.05, 2.0};
  c.kinetics = Kinetics::saturating();
  CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("config parsing is strict") {
  CHECK_THROWS_AS(parse_config(R"({"params": {"d": 0, "bogus": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"unknown_section": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"params": {"p": "two"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"params": {"p": 0.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"ncells": 7}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"ncells": -8}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"kinetics": {"family": "cubic"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": {"kind": "custom", "alpha": 0.2}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"control": {"dt_init": 1, "dt_max": 0.1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  const auto c = parse_config(R"({"params": {"kappa": 4}, "scenario": {"u0_multiple": 2}})");
  CHECK(c.params.kappa == 4.0);
  CHECK(std::get<TheoremScenario>(c.scenario).u0_multiple == 2.0);
  CHECK(c.grid.ncells == 1024);
}

TEST_CASE("theorem_initial_data hypotheses") {
  const Params prm{0.0, 1.0, 2.0, 1.0, 1.0, 3.0};
  const Grid1D g(1.0, 256);
  const auto ctx = build_bound_context(prm, Kinetics::identity(), g, 0.25, 0.3, 3.0, 0.4);

  auto which = [&](double u0, double v0) {
    try {
      theorem_initial_data(g, 2.0, 0.25, 0.3, u0, v0, ctx);
    } catch (const HypothesisViolation& e) {
      return e.hypothesis();
    }
    return std::string("none");
  };
  CHECK(which(1.1 * ctx.u0_threshold, 2.0 * ctx.R0) == "none");
  CHECK(which(0.5 * ctx.u0_threshold, 2.0 * ctx.R0) == "threshold");
  CHECK(which(1.1 * ctx.u0_threshold, ctx.R0) == "floor");

  const State s = theorem_initial_data(g, 2.0, 0.25, 0.3, 1.1 * ctx.u0_threshold, 3.0, ctx);
  CHECK(envelope_check(s, g, ctx) >= (1.0 - 0.5) * ctx.eps);
  CHECK(s.u[g.origin_index()] == doctest::Approx(1.1 * ctx.u0_threshold * (1.0 - 1e-6)));
  CHECK(s.v.min() == 3.0);
  CHECK(s.v.max() == 3.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(s.u[i] > 0.0);
  CHECK_THROWS_AS(theorem_initial_data(g, 2.0, 0.2, 0.3, 2.0, 3.0, ctx), DomainError);
}

TEST_CASE("context_for picks the largest admissible eps") {
  const auto c = small_config();
  const BoundContext ctx = context_for(c);
  CHECK(std::pow(ctx.eps, 2.0) * ctx.C0 == doctest::Approx(1.5));
  CHECK(ctx.R0 == doctest::Approx(1.5));
  CHECK_FALSE(ctx.cq_empirical);
  CHECK(blowup_time_upper_bound(1.1 * ctx.u0_threshold, ctx).value() < 1.0);
}

TEST_CASE("run_single and output consistency") {
  auto c = small_config();
  c.outputs.snapshot_times = {0.1};
  const RunResult r = run_single(c);
  REQUIRE(r.outcome.status == SimStatus::BlewUp);
  CHECK(r.outcome.snapshots.size() == 1);

  std::ostringstream csv;
  write_trace_csv(csv, r.outcome.trace);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,dt,sup_u,min_v,max_v,mass,envelope_margin,vfloor_margin");
  double min_env = 1e300;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<double> cols;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cols.push_back(std::stod(cell));
    REQUIRE(cols.size() == 8);
    min_env = std::min(min_env, cols[6]);
  }
  CHECK(rows == r.outcome.trace.rows.size());

  const json s = json::parse(summary_json(r, Grid1D(c.grid.L, c.grid.ncells)));
  CHECK(s["status"] == "BlewUp");
  CHECK(s["t_final"].get<double>() == s["blowup_time_estimate"].get<double>());
  CHECK(s["min_margins"]["envelope"].get<double>() == min_env);
  CHECK(s["bound_context"]["eps"].get<double>() == r.ctx->eps);
  CHECK(std::abs(s["blowup_cell_offset"].get<long long>()) <= 2);
}

TEST_CASE("trace CSV writes nan for absent monitors and round-trips doubles") {
  DiagnosticTrace tr;
  tr.rows.push_back({0.1, 0.1, 1.0 / 3.0, 0.5, 1.5, 2.0, {}, 0});
  std::ostringstream os;
  write_trace_csv(os, tr);
  const std::string text = os.str();
  CHECK(text.find(",nan,nan\n") != std::string::npos);
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("custom scenarios") {
  ExperimentConfig c = small_config();
  c.scenario = CustomScenario{"zero", 0.0, 0.1, 1.0};
  c.control.t_end = 0.2;
  const RunResult r = run_single(c, 0.5);
  CHECK(r.outcome.status == SimStatus::Completed);
  CHECK(r.outcome.final_state.u.max() == 0.0);
  CHECK_FALSE(r.ctx.has_value());
  CHECK(r.outcome.trace.monitor_names == std::vector<std::string>{"mass", "vceiling"});

  c.scenario = CustomScenario{"gaussian", 2.0, 0.1, 1.0};
  const State s = initial_state(c, std::nullopt);
  CHECK(s.u[c.grid.ncells / 2] == 2.0);
}

TEST_CASE("dichotomy with kappa = 0 stays bounded under diffusion") {
  ExperimentConfig c = small_config();
  c.params.kappa = 0.0;
  c.scenario = CustomScenario{"gaussian", 1.5, 0.1, 2.0};
  c.control.t_end = 1.0;
  const auto r = run_dichotomy(c);
  CHECK(r.d_used == 1.0);
  CHECK(r.with_diffusion.outcome.status == SimStatus::Completed);
  CHECK(r.max_sup_u_with_diffusion <= r.initial_sup_u * 1.0000001);
  for (const auto& row : r.with_diffusion.outcome.trace.rows) CHECK(row.max_v <= 2.0 + 1e-8);
}

TEST_CASE("zero data completes in both dichotomy runs") {
  ExperimentConfig c = small_config();
  c.scenario = CustomScenario{"zero", 0.0, 0.1, 1.0};
  c.control.t_end = 0.3;
  const auto r = run_dichotomy(c);
  CHECK(r.without_diffusion.outcome.status == SimStatus::Completed);
  CHECK(r.with_diffusion.outcome.status == SimStatus::Completed);
  CHECK(r.without_diffusion.outcome.final_state.u.max() == 0.0);
  CHECK(r.with_diffusion.outcome.final_state.u.max() == 0.0);
}

TEST_CASE("convergence study plumbing") {
  ExperimentConfig c = small_config();
  const auto one = convergence_study(c, {128});
  CHECK(one.rows.size() == 1);
  CHECK(one.differences.empty());
  CHECK(one.rows[0].dt_max == c.control.dt_max);

  c.scenario = CustomScenario{"zero", 0.0, 0.1, 1.0};
  CHECK_THROWS_AS(convergence_study(c, {64}), ConfigError);

  ExperimentConfig tiny = small_config();
  tiny.control.t_end = 0.05;
  const auto flagged = convergence_study(tiny, {64, 128});
  CHECK_FALSE(flagged.rows[0].blowup_time.has_value());
  CHECK(convergence_csv(flagged).find("NoBlowup") != std::string::npos);
}

TEST_CASE("sweep: degenerate point, skipped points, monotone axis") {
  ExperimentConfig c = small_config();
  c.sweep.u0_multiples = {1.1};
  const auto single = parameter_sweep(c);
  REQUIRE(single.size() == 1);
  const auto base = run_dichotomy(c).without_diffusion;
  CHECK(single[0].blowup_time.value() == base.outcome.blowup_time_estimate.value());

  c.sweep.u0_multiples = {1.1, 2.0};
  c.sweep.alpha = {0.25, 0.7};
  const auto rows = parameter_sweep(c);
  REQUIRE(rows.size() == 4);
  int skipped = 0;
  for (const auto& r : rows) {
    if (r.alpha == 0.7) {
      CHECK(r.skipped);
      ++skipped;
    } else {
      CHECK_FALSE(r.skipped);
      CHECK(r.status == SimStatus::BlewUp);
    }
  }
  CHECK(skipped == 2);
  CHECK(rows[0].blowup_time.value() >= rows[1].blowup_time.value());
  CHECK(sweep_csv(rows).find("skipped") != std::string::npos);
}
