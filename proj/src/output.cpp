#include "rdode/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace rdode {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw OutputError("cannot write " + path);
  return os;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(std::ostream& os, const DiagnosticTrace& trace) {
  const auto env = trace.monitor_index("envelope");
  const auto floor = trace.monitor_index("vfloor");
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  os << "t,dt,sup_u,min_v,max_v,mass,envelope_margin,vfloor_margin\n";
  for (const auto& r : trace.rows) {
    os << format_double(r.t) << ',' << format_double(r.dt) << ',' << format_double(r.sup_u)
       << ',' << format_double(r.min_v) << ',' << format_double(r.max_v) << ','
       << format_double(r.mass) << ',' << format_double(env ? r.margins[*env] : kNaN) << ','
       << format_double(floor ? r.margins[*floor] : kNaN) << '\n';
  }
}

void write_trace_csv(const std::string& path, const DiagnosticTrace& trace) {
  auto os = open_out(path);
  write_trace_csv(os, trace);
}

void write_snapshot_csv(std::ostream& os, const Grid1D& grid, const State& s) {
  check_sizes(s, grid);
  os << "x,u,v\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << format_double(grid.x(i)) << ',' << format_double(s.u[i]) << ','
       << format_double(s.v[i]) << '\n';
  }
}

void write_snapshot_csv(const std::string& path, const Grid1D& grid, const State& s) {
  auto os = open_out(path);
  write_snapshot_csv(os, grid, s);
}

std::string bound_context_json(const BoundContext& ctx) {
  json j = {{"p", ctx.p},
            {"a", ctx.a},
            {"n", ctx.n},
            {"alpha", ctx.alpha},
            {"eps", ctx.eps},
            {"v0_bar", ctx.v0_bar},
            {"q", ctx.q},
            {"Cq", ctx.Cq},
            {"cq_empirical", ctx.cq_empirical},
            {"weighted_norm", ctx.weighted_norm},
            {"R1", ctx.R1},
            {"f_sup_R1", ctx.f_sup_R1},
            {"C0", ctx.C0},
            {"R0", ctx.R0},
            {"F0", ctx.F0},
            {"u0_threshold", ctx.u0_threshold},
            {"Tmax_bound", ctx.Tmax_bound}};
  return j.dump(2);
}

std::string summary_json(const RunResult& run, const Grid1D& grid) {
  const SimOutcome& o = run.outcome;
  json j;
  j["status"] = to_string(o.status);
  j["t_final"] = o.t_final;
  j["blowup_time_estimate"] = opt_json(o.blowup_time_estimate);
  if (o.blowup_cell) {
    j["blowup_cell"] = *o.blowup_cell;
    j["blowup_cell_offset"] = static_cast<long long>(*o.blowup_cell) -
                              static_cast<long long>(grid.origin_index());
    j["blowup_x"] = grid.x(*o.blowup_cell);
  } else {
    j["blowup_cell"] = nullptr;
    j["blowup_cell_offset"] = nullptr;
    j["blowup_x"] = nullptr;
  }
  j["accepted_steps"] = o.trace.rows.empty() ? 0 : o.trace.rows.size() - 1;
  j["rejected_steps"] = o.rejected_steps;
  if (!o.note.empty()) j["note"] = o.note;
  json margins = json::object(), violations = json::object();
  for (const auto& name : o.trace.monitor_names) {
    margins[name] = opt_json(o.trace.min_margin(name));
    violations[name] = o.trace.violation_count(name);
  }
  j["min_margins"] = margins;
  j["violations"] = violations;
  double sup_u = 0.0;
  for (const auto& r : o.trace.rows) sup_u = std::max(sup_u, r.sup_u);
  j["max_sup_u"] = sup_u;
  j["u0_at_0"] = opt_json(run.u0_at_0);
  j["blowup_time_upper_bound"] = opt_json(run.time_bound);
  j["bound_context"] = run.ctx ? json::parse(bound_context_json(*run.ctx)) : json(nullptr);
  return j.dump(2);
}

void write_profile_svg(const std::string& path, const Grid1D& grid,
                       const std::vector<State>& states, bool log_u) {
  constexpr double W = 720, H = 260, pad = 48;
  constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
  auto os = open_out(path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << 2 * H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto panel = [&](int row, const char* label, bool logscale, auto&& pick) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto tf = [&](double y) { return logscale ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto& s : states) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = pick(s)[i];
        if (logscale && !(y > 0.0)) continue;
        lo = std::min(lo, tf(y));
        hi = std::max(hi, tf(y));
      }
    }
    if (!(hi > lo)) {
      lo = std::isfinite(lo) ? lo - 1.0 : 0.0;
      hi = lo + 2.0;
    }
    const double top = row * H + pad / 2, bottom = (row + 1) * H - pad / 2;
    const double L = grid.half_length();
    auto px = [&](double x) { return pad + (W - 2 * pad) * (x + L) / (2 * L); };
    auto py = [&](double y) { return bottom - (bottom - top) * (tf(y) - lo) / (hi - lo); };
    os << "<rect x=\"" << pad << "\" y=\"" << top << "\" width=\"" << W - 2 * pad
       << "\" height=\"" << bottom - top << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<text x=\"6\" y=\"" << top + 12 << "\">" << label << (logscale ? " (log10)" : "")
       << "</text>\n";
    os << "<text x=\"6\" y=\"" << bottom << "\">" << format_double(lo).substr(0, 8)
       << "</text>\n";
    os << "<text x=\"6\" y=\"" << top + 28 << "\">" << format_double(hi).substr(0, 8)
       << "</text>\n";
    for (std::size_t k = 0; k < states.size(); ++k) {
      os << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << palette[k % 8]
         << "\" points=\"";
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = pick(states[k])[i];
        if (logscale && !(y > 0.0)) continue;
        os << px(grid.x(i)) << ',' << py(y) << ' ';
      }
      os << "\"><title>t = " << format_double(states[k].t) << "</title></polyline>\n";
    }
  };
  panel(0, "u", log_u, [](const State& s) -> const Field& { return s.u; });
  panel(1, "v", false, [](const State& s) -> const Field& { return s.v; });
  os << "</svg>\n";
}

std::string convergence_csv(const ConvergenceTable& table) {
  std::ostringstream os;
  os << "ncells,dt_max,status,blowup_time,blowup_cell_offset,envelope_min_margin,"
        "vfloor_min_margin,difference\n";
  std::size_t d = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    os << r.ncells << ',' << format_double(r.dt_max) << ','
       << (r.blowup_time ? to_string(r.status) : "NoBlowup") << ','
       << (r.blowup_time ? format_double(*r.blowup_time) : "nan") << ',';
    if (r.blowup_cell) {
      os << static_cast<long long>(*r.blowup_cell) - static_cast<long long>(r.origin_index);
    } else {
      os << "nan";
    }
    os << ',' << format_double(r.envelope_min_margin) << ','
       << format_double(r.floor_min_margin) << ',';
    const bool has_diff =
        i > 0 && table.rows[i - 1].blowup_time && r.blowup_time && d < table.differences.size();
    os << (has_diff ? format_double(table.differences[d++]) : "nan") << '\n';
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "u0_multiple,eps,alpha,p,status,blowup_time,time_bound,eps_used,u0_at_0,reason\n";
  for (const auto& r : rows) {
    os << format_double(r.u0_multiple) << ',' << format_double(r.eps) << ','
       << format_double(r.alpha) << ',' << format_double(r.p) << ','
       << (r.skipped ? "skipped" : to_string(r.status)) << ','
       << (r.blowup_time ? format_double(*r.blowup_time) : "nan") << ','
       << (r.time_bound ? format_double(*r.time_bound) : "nan") << ','
       << format_double(r.eps_used) << ',' << format_double(r.u0_at_0) << ',';
    std::string reason = r.reason;
    std::replace(reason.begin(), reason.end(), '"', '\'');
    os << '"' << reason << "\"\n";
  }
  return os.str();
}

}  // namespace rdode
