// Command-line driver: rdode <subcommand> [--config file] [--out dir] ...
//
// Exit codes: 0 success (a blow-up is a result), 1 configuration or
// hypothesis error, 2 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdode/analysis.hpp"
#include "rdode/config.hpp"
#include "rdode/experiments.hpp"
#include "rdode/integrator.hpp"
#include "rdode/kinetics_ode.hpp"
#include "rdode/output.hpp"

namespace fs = std::filesystem;
using namespace rdode;
using nlohmann::json;

namespace {

struct Globals {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

ExperimentConfig load(const Globals& g) {
  ExperimentConfig c = g.config_path.empty() ? ExperimentConfig{} : load_config(g.config_path);
  if (g.seed) c.estimator.seed = *g.seed;
  return c;
}

fs::path out_path(const Globals& g, const std::string& name) {
  const fs::path p(name);
  return p.is_absolute() ? p : fs::path(g.out_dir) / p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw OutputError("cannot write " + path.string());
  os << text;
}

std::string with_suffix(const std::string& name, const std::string& suffix) {
  const fs::path p(name);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

void emit_run(const Globals& g, const ExperimentConfig& c, const RunResult& r,
              const std::string& suffix) {
  const Grid1D grid(c.grid.L, c.grid.ncells);
  write_trace_csv(out_path(g, with_suffix(c.outputs.trace_path, suffix)).string(),
                  r.outcome.trace);
  write_text(out_path(g, with_suffix(c.outputs.summary_path, suffix)), summary_json(r, grid));
  for (std::size_t k = 0; k < r.outcome.snapshots.size(); ++k) {
    const auto name = c.outputs.snapshot_prefix + suffix + "_" + std::to_string(k) + ".csv";
    write_snapshot_csv(out_path(g, name).string(), grid, r.outcome.snapshots[k]);
  }
  if (c.outputs.plot_path) {
    std::vector<State> states = r.outcome.snapshots;
    if (states.empty()) states = {r.outcome.final_state};
    write_profile_svg(out_path(g, with_suffix(*c.outputs.plot_path, suffix)).string(), grid,
                      states, c.outputs.plot_log_u);
  }
}

void report_run(const std::string& label, const RunResult& r, const Grid1D& grid) {
  const SimOutcome& o = r.outcome;
  std::printf("%s: %s at t = %.10g", label.c_str(), to_string(o.status), o.t_final);
  if (o.blowup_cell) {
    std::printf(" (node offset %lld from x = 0)",
                static_cast<long long>(*o.blowup_cell) -
                    static_cast<long long>(grid.origin_index()));
  }
  std::printf(", %zu steps\n", o.trace.rows.size() - 1);
  if (r.time_bound) std::printf("  blow-up time bound: %.10g\n", *r.time_bound);
  for (const auto& name : o.trace.monitor_names) {
    std::printf("  %-9s min margin %+.6e, violations %zu\n", name.c_str(),
                o.trace.min_margin(name).value_or(NAN), o.trace.violation_count(name));
  }
  if (!o.note.empty()) std::printf("  note: %s\n", o.note.c_str());
}

int status_code(const SimOutcome& o) { return o.status == SimStatus::DtUnderflow ? 2 : 0; }

int cmd_simulate(const Globals& g, std::optional<double> d) {
  const ExperimentConfig c = load(g);
  const RunResult r = run_single(c, d);
  emit_run(g, c, r, "");
  if (!g.quiet) report_run("run", r, Grid1D(c.grid.L, c.grid.ncells));
  return status_code(r.outcome);
}

int cmd_dichotomy(const Globals& g) {
  const ExperimentConfig c = load(g);
  const DichotomyResult r = run_dichotomy(c);
  emit_run(g, c, r.without_diffusion, "_d0");
  emit_run(g, c, r.with_diffusion, "_diffusive");
  const Grid1D grid(c.grid.L, c.grid.ncells);
  json j = {{"d_used", r.d_used},
            {"initial_sup_u", r.initial_sup_u},
            {"max_sup_u_with_diffusion", r.max_sup_u_with_diffusion},
            {"without_diffusion", json::parse(summary_json(r.without_diffusion, grid))},
            {"with_diffusion", json::parse(summary_json(r.with_diffusion, grid))}};
  write_text(out_path(g, "dichotomy.json"), j.dump(2));
  if (!g.quiet) {
    report_run("d = 0", r.without_diffusion, grid);
    report_run("d = " + format_double(r.d_used), r.with_diffusion, grid);
    std::printf("sup u with diffusion: initial %.6g, max %.6g\n", r.initial_sup_u,
                r.max_sup_u_with_diffusion);
  }
  return std::max(status_code(r.without_diffusion.outcome), status_code(r.with_diffusion.outcome));
}

int cmd_bounds(const Globals& g) {
  const ExperimentConfig c = load(g);
  const BoundContext ctx = context_for(c);
  json j = json::parse(bound_context_json(ctx));
  const auto& th = std::get<TheoremScenario>(c.scenario);
  const double u0 = requested_u0_at_0(th, ctx);
  j["u0_at_0"] = u0;
  const auto tb = blowup_time_upper_bound(u0, ctx);
  j["blowup_time_upper_bound"] = tb ? json(*tb) : json(nullptr);
  write_text(out_path(g, "bounds.json"), j.dump(2));
  if (!g.quiet) std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_kinetics(const Globals& g, double u0, double v0, double t_end, double dt,
                 const std::vector<double>& ks) {
  const ExperimentConfig c = load(g);
  const auto traj = kinetic_integrate({u0, v0, 0.0}, c.params, c.kinetics, t_end, dt);
  std::ostringstream csv;
  csv << "t,u,v\n";
  for (const auto& s : traj) {
    csv << format_double(s.t) << ',' << format_double(s.u_bar) << ',' << format_double(s.v_bar)
        << '\n';
  }
  write_text(out_path(g, "kinetics.csv"), csv.str());

  json j;
  j["sum_bound"] = kinetic_sum_bound({u0, v0, 0.0}, c.params);
  j["final"] = {{"t", traj.back().t}, {"u", traj.back().u_bar}, {"v", traj.back().v_bar}};
  json states = json::array();
  try {
    for (const auto& ss : steady_states(c.params, c.kinetics)) {
      const auto res = stationary_residual(ss, c.params, c.kinetics);
      json disp = json::array();
      for (const auto& pt : dispersion_relation(ss, c.params, c.kinetics, ks)) {
        disp.push_back({{"k", pt.k}, {"growth", pt.growth}});
      }
      states.push_back({{"kind", to_string(ss.kind)},
                        {"u", ss.u_bar},
                        {"v", ss.v_bar},
                        {"residual", {res[0], res[1]}},
                        {"dispersion", disp}});
    }
    j["steady_states"] = states;
  } catch (const UnsupportedKinetics& e) {
    j["steady_states"] = nullptr;
    j["steady_states_note"] = e.what();
  }
  write_text(out_path(g, "kinetics.json"), j.dump(2));
  if (!g.quiet) std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_converge(const Globals& g, std::vector<std::size_t> levels) {
  const ExperimentConfig c = load(g);
  if (levels.empty()) levels = c.converge.levels;
  const ConvergenceTable t = convergence_study(c, levels);
  const std::string csv = convergence_csv(t);
  write_text(out_path(g, "converge.csv"), csv);
  if (!g.quiet) std::cout << csv;
  for (const auto& r : t.rows) {
    if (r.status == SimStatus::DtUnderflow) return 2;
  }
  return 0;
}

int cmd_sweep(const Globals& g) {
  const ExperimentConfig c = load(g);
  const std::string csv = sweep_csv(parameter_sweep(c));
  write_text(out_path(g, "sweep.csv"), csv);
  if (!g.quiet) std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reaction-diffusion-ODE blow-up simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "JSON experiment configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "directory for output files");
  auto* seed_opt = app.add_option("--seed", seed, "seed for smoothing-constant sampling");
  app.add_flag("--quiet", g.quiet, "suppress console output");

  auto* sim = app.add_subcommand("simulate", "single run of the configured scenario");
  double d_value = 0.0;
  auto* d_opt = sim->add_option("--d", d_value, "override the diffusion of u")
                    ->check(CLI::NonNegativeNumber);
  auto* dich = app.add_subcommand("dichotomy", "paired runs with d = 0 and d > 0");
  auto* bounds = app.add_subcommand("bounds", "print the derived constants");
  auto* kin = app.add_subcommand("kinetics", "kinetic ODE run, steady states, dispersion");
  double ku0 = 1.0, kv0 = 1.0, kt = 10.0, kdt = 1e-3;
  std::vector<double> ks{0.0, 1.0, 10.0, 100.0, 1000.0};
  kin->add_option("--u0", ku0, "initial u")->check(CLI::NonNegativeNumber);
  kin->add_option("--v0", kv0, "initial v")->check(CLI::NonNegativeNumber);
  kin->add_option("--t-end", kt, "final time")->check(CLI::PositiveNumber);
  kin->add_option("--dt", kdt, "RK4 step")->check(CLI::PositiveNumber);
  kin->add_option("--k", ks, "wavenumbers for the dispersion relation");
  auto* conv = app.add_subcommand("converge", "blow-up time under grid refinement");
  std::vector<std::size_t> levels;
  conv->add_option("--levels", levels, "ncells per level");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over the configured axes");
  auto* cfg = app.add_subcommand("config", "print the effective configuration as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    fs::create_directories(g.out_dir);
    if (*sim) {
      return cmd_simulate(g, d_opt->count() > 0 ? std::optional<double>(d_value) : std::nullopt);
    }
    if (*dich) return cmd_dichotomy(g);
    if (*bounds) return cmd_bounds(g);
    if (*kin) return cmd_kinetics(g, ku0, kv0, kt, kdt, ks);
    if (*conv) return cmd_converge(g, levels);
    if (*sweep) return cmd_sweep(g);
    if (*cfg) {
      std::cout << emit_config(load(g)) << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const HypothesisViolation& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const ConstraintViolation& e) {
    std::cerr << "invalid parameter " << e.what() << '\n';
    return 1;
  } catch (const AlphaInadmissible& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const FloorNotPositive& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const NotIntegrable& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
