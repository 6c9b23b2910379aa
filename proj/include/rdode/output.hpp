#pragma once

// File emission: CSV traces and profiles, JSON summaries, SVG plots.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdode/analysis.hpp"
#include "rdode/experiments.hpp"
#include "rdode/integrator.hpp"

namespace rdode {

class OutputError : public Error {
 public:
  using Error::Error;
};

/// Header `t,dt,sup_u,min_v,max_v,mass,envelope_margin,vfloor_margin`, one
/// row per trace row, 17 significant digits; absent monitors print as nan.
void write_trace_csv(std::ostream& os, const DiagnosticTrace& trace);
void write_trace_csv(const std::string& path, const DiagnosticTrace& trace);

/// Header `x,u,v`, one row per node.
void write_snapshot_csv(std::ostream& os, const Grid1D& grid, const State& s);
void write_snapshot_csv(const std::string& path, const Grid1D& grid, const State& s);

/// JSON summary of a run: status, t_final, blow-up estimate and node,
/// per-monitor minimum margins and violation counts, and the bound context.
std::string summary_json(const RunResult& run, const Grid1D& grid);
std::string bound_context_json(const BoundContext& ctx);

/// Two stacked panels (u and v profiles), one polyline per state.
void write_profile_svg(const std::string& path, const Grid1D& grid,
                       const std::vector<State>& states, bool log_u);

std::string convergence_csv(const ConvergenceTable& table);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Decimal text with 17 significant digits ("nan" for NaN).
std::string format_double(double x);

}  // namespace rdode
