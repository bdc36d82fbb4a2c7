#include "cprsim/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "cprsim/equilibria.hpp"
#include "cprsim/rng.hpp"

namespace cprsim {

namespace {

using Json = nlohmann::ordered_json;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return std::isnan(v) ? "nan" : format_double(v); }

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "nan"; }

std::size_t threads_of(const RunConfig& cfg) { return static_cast<std::size_t>(cfg.sweep.threads); }

std::string key_value_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) out += k + "," + v + "\n";
  return out;
}

std::vector<SeriesRow> trajectory_rows(const Trajectory& t, const std::string& prefix) {
  std::vector<SeriesRow> rows;
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    rows.push_back({t.times[i], prefix + "R", t.states[i].resource, 0.0});
    rows.push_back({t.times[i], prefix + "x", t.states[i].coop_fraction, 0.0});
  }
  return rows;
}

std::string realizations_csv(const EnsembleSummary& e) {
  std::string out = "realization,seed,time,R,x\n";
  for (std::size_t r = 0; r < e.realizations.size(); ++r) {
    for (const auto& s : e.realizations[r]) {
      out += std::to_string(r) + "," + std::to_string(e.seeds[r]) + "," + num(s.time) + "," +
             num(s.resource) + "," + num(s.coop_fraction) + "\n";
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> critical_rows(const CriticalValue& cv) {
  std::string warning = cv.warning.empty() ? "none" : cv.warning;
  for (char& ch : warning) {
    if (ch == ',' || ch == '\n') ch = ';';
  }
  return {{"model", cv.model_tag},
          {"region", to_string(cv.region)},
          {"analytic", opt_num(cv.value)},
          {"warning", warning}};
}

std::vector<OutputFile> run_ode(const RunConfig& cfg) {
  const ModelSpec spec = cfg.model.spec();
  const Trajectory t = integrate(spec, cfg.abm.initial, cfg.integrator);
  return {
      {"ode_trajectory.csv", series_csv(trajectory_rows(t, ""))},
      {"ode_summary.csv", key_value_csv({{"terminal", to_string(t.terminal)},
                                         {"t_final", num(t.times.back())},
                                         {"r_star", num(t.final_state().resource)},
                                         {"x_star", num(t.final_state().coop_fraction)}})},
  };
}

std::vector<OutputFile> run_abm(const RunConfig& cfg) {
  const ModelSpec spec = cfg.model.spec();
  const AbmRun run = run_realization(cfg.abm, spec);
  std::vector<SeriesRow> rows;
  for (const auto& s : run.samples) {
    rows.push_back({s.time, "R", s.resource, 0.0});
    rows.push_back({s.time, "x", s.coop_fraction, 0.0});
  }
  return {{"abm_trajectory.csv", series_csv(rows)}};
}

std::vector<OutputFile> run_ensemble_cmd(const RunConfig& cfg) {
  const ModelSpec spec = cfg.model.spec();
  const EnsembleSummary e = run_ensemble(cfg.abm, spec, cfg.sweep.realizations, threads_of(cfg));
  std::vector<SeriesRow> rows;
  for (std::size_t t = 0; t < e.times.size(); ++t) {
    rows.push_back({e.times[t], "R", e.mean_resource[t], e.stderr_resource[t]});
    rows.push_back({e.times[t], "x", e.mean_coop[t], e.stderr_coop[t]});
  }
  return {{"ensemble.csv", series_csv(rows)}, {"ensemble_realizations.csv", realizations_csv(e)}};
}

std::vector<OutputFile> run_density(const RunConfig& cfg) {
  const ModelSpec spec = cfg.model.spec();
  const DensityGrid d = density_sweep(spec, cfg.sweep.grid, cfg.integrator, threads_of(cfg));
  const EmpiricalCritical emp = empirical_critical(d, cfg.integrator.depletion_floor);

  GridMatrix<double> r = d.r_star;
  GridMatrix<double> x = d.x_star;
  GridMatrix<double> code(r.rows, r.cols);
  for (int i = 0; i < r.rows; ++i) {
    for (int j = 0; j < r.cols; ++j) {
      const Terminal t = d.terminal.at(i, j);
      code.at(i, j) = static_cast<double>(static_cast<int>(t));
      if (t == Terminal::MaxTimeReached) r.at(i, j) = x.at(i, j) = kNan;
    }
  }
  std::vector<double> per_column;
  for (const auto& v : emp.per_column) per_column.push_back(v ? *v : kNan);

  auto summary = critical_rows(critical_value(spec));
  summary.emplace_back("empirical", opt_num(emp.value));
  summary.emplace_back("grid_step", num(cfg.sweep.grid.x0_step()));
  summary.emplace_back("unresolved_cells", std::to_string(emp.unresolved_cells));
  summary.emplace_back("non_monotone_columns", std::to_string(emp.non_monotone_columns.size()));

  return {
      {"density_r_star.csv", matrix_csv(r)},
      {"density_x_star.csv", matrix_csv(x)},
      {"density_terminal.csv", matrix_csv(code)},
      {"density_r0_axis.csv", axis_csv("r0", cfg.sweep.grid.r0_axis())},
      {"density_x0_axis.csv", axis_csv("x0", cfg.sweep.grid.x0_axis())},
      {"density_column_critical.csv", axis_csv("x0_critical", per_column)},
      {"density_critical.csv", key_value_csv(summary)},
  };
}

std::vector<OutputFile> run_critical_map(const RunConfig& cfg) {
  const SweepSection& sw = cfg.sweep;
  const CriticalMap map = critical_map(cfg.model.family, sw.e_c_range, sw.e_d_range,
                                       sw.map_resolution, cfg.model.growth_rate);
  GridMatrix<double> values(map.values.rows, map.values.cols);
  GridMatrix<double> region(map.values.rows, map.values.cols);
  for (int i = 0; i < values.rows; ++i) {
    for (int j = 0; j < values.cols; ++j) {
      const CriticalValue& cv = map.values.at(i, j);
      values.at(i, j) = cv.value ? *cv.value : kNan;
      region.at(i, j) = cv.region == Region::RightTop ? 1.0 : 0.0;
    }
  }
  std::string boundary = "ec,ed\n";
  for (std::size_t i = 0; i < map.e_c_axis.size(); ++i) {
    boundary += num(map.e_c_axis[i]) + "," + num(map.boundary_e_d[i]) + "\n";
  }
  return {
      {"critical_map.csv", matrix_csv(values)},
      {"critical_map_region.csv", matrix_csv(region)},
      {"critical_map_ec_axis.csv", axis_csv("ec", map.e_c_axis)},
      {"critical_map_ed_axis.csv", axis_csv("ed", map.e_d_axis)},
      {"critical_map_boundary.csv", boundary},
  };
}

std::vector<OutputFile> run_equilibria(const RunConfig& cfg) {
  const ModelSpec spec = cfg.model.spec();
  const EquilibriumSet set = stationary_solutions(spec);
  std::string table =
      "label,R,x,boundary_line,exists,stability,lambda1_re,lambda1_im,lambda2_re,lambda2_im\n";
  for (const auto& e : set.points) {
    table += e.label + "," + num(e.state.resource) + "," + num(e.state.coop_fraction) + "," +
             (e.boundary_line ? "1" : "0") + "," + (e.existence_condition_met ? "1" : "0") + "," +
             to_string(e.classification) + "," + num(e.eigenvalues[0].real()) + "," +
             num(e.eigenvalues[0].imag()) + "," + num(e.eigenvalues[1].real()) + "," +
             num(e.eigenvalues[1].imag()) + "\n";
  }
  auto crit = critical_rows(critical_value(spec));
  crit.emplace_back("complete", set.complete ? "1" : "0");
  return {{"equilibria.csv", table}, {"equilibria_critical.csv", key_value_csv(crit)}};
}

std::vector<OutputFile> run_compare(const RunConfig& cfg) {
  const ModelSpec spec = cfg.model.spec();
  const ComparisonBundle b =
      compare_ode_abm(spec, cfg.abm, cfg.sweep.realizations, cfg.integrator, threads_of(cfg));
  std::vector<SeriesRow> rows;
  const auto& e = b.ensemble;
  for (std::size_t t = 0; t < b.times.size(); ++t) {
    const double time = b.times[t];
    rows.push_back({time, "ode_R", b.ode.states[t].resource, 0.0});
    rows.push_back({time, "ode_x", b.ode.states[t].coop_fraction, 0.0});
    rows.push_back({time, "abm_R", e.mean_resource[t], e.stderr_resource[t]});
    rows.push_back({time, "abm_x", e.mean_coop[t], e.stderr_coop[t]});
    rows.push_back({time, "gap_R", b.gap_resource[t], 0.0});
    rows.push_back({time, "gap_x", b.gap_coop[t], 0.0});
  }
  return {
      {"compare.csv", series_csv(rows)},
      {"compare_realizations.csv", realizations_csv(e)},
      {"compare_gaps.csv", key_value_csv({{"max_gap_R", num(b.max_gap_resource)},
                                          {"max_gap_x", num(b.max_gap_coop)},
                                          {"mean_gap_R", num(b.mean_gap_resource)},
                                          {"mean_gap_x", num(b.mean_gap_coop)}})},
  };
}

Json config_json(const RunConfig& cfg) {
  Json j;
  const auto& fp = cfg.model.family;
  Json model = {{"family", to_string(fp.family)},
                {"T", cfg.model.growth_rate},
                {"ec", cfg.model.e_c_hat},
                {"ed", cfg.model.e_d_hat}};
  switch (fp.family) {
    case ModelFamily::Minimal: model["w"] = fp.w; break;
    case ModelFamily::RcLinear: model["c"] = fp.c; break;
    case ModelFamily::ResourceQuadratic:
    case ModelFamily::ConformityQuadratic: model["a"] = fp.a; break;
    case ModelFamily::RcQuadratic: {
      const auto& q = fp.rc_quadratic;
      model["a"] = q.a;
      model["b"] = q.b;
      model["c"] = q.c;
      model["d"] = q.d;
      model["e"] = q.e;
      break;
    }
    default: break;
  }
  j["model"] = model;
  const auto& io = cfg.integrator;
  j["integrator"] = {{"step", io.step_size},           {"max_time", io.max_time},
                     {"steady_tol", io.steady_tol},    {"window", io.window},
                     {"depletion_floor", io.depletion_floor},
                     {"record_interval", io.record_interval}};
  const auto& a = cfg.abm;
  Json abm = {{"n_players", a.n_players},
              {"seed", a.seed},
              {"t_end", a.t_end},
              {"r0", a.initial.resource},
              {"x0", a.initial.coop_fraction},
              {"net", to_string(a.network.kind)},
              {"ba_m", a.network.ba_m},
              {"sw_k", a.network.sw_k},
              {"sw_beta", a.network.sw_beta}};
  if (cfg.e_c_raw) {
    abm["ec_raw"] = *cfg.e_c_raw;
    abm["ed_raw"] = *cfg.e_d_raw;
  }
  j["abm"] = abm;
  const auto& sw = cfg.sweep;
  j["sweep"] = {{"r0_points", sw.grid.r0_points},   {"x0_points", sw.grid.x0_points},
                {"r0_lo", sw.grid.r0_range.lo},     {"r0_hi", sw.grid.r0_range.hi},
                {"x0_lo", sw.grid.x0_range.lo},     {"x0_hi", sw.grid.x0_range.hi},
                {"realizations", sw.realizations},  {"ec_lo", sw.e_c_range.lo},
                {"ec_hi", sw.e_c_range.hi},         {"ed_lo", sw.e_d_range.lo},
                {"ed_hi", sw.e_d_range.hi},         {"map_resolution", sw.map_resolution},
                {"threads", sw.threads}};
  j["output"] = {{"dir", cfg.output.directory}, {"format", cfg.output.format}};
  return j;
}

std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {"ode",        "abm",        "ensemble", "density",
                                                 "critical-map", "equilibria", "compare"};
  return names;
}

std::vector<OutputFile> compute_subcommand(const std::string& name, const RunConfig& cfg) {
  if (name == "ode") return run_ode(cfg);
  if (name == "abm") return run_abm(cfg);
  if (name == "ensemble") return run_ensemble_cmd(cfg);
  if (name == "density") return run_density(cfg);
  if (name == "critical-map") return run_critical_map(cfg);
  if (name == "equilibria") return run_equilibria(cfg);
  if (name == "compare") return run_compare(cfg);
  throw ConfigError("unknown subcommand '" + name + "'");
}

std::string matrix_csv(const GridMatrix<double>& m) {
  std::string out;
  for (int j = 0; j < m.cols; ++j) out += (j ? ",col_" : "col_") + std::to_string(j);
  out += "\n";
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out += ",";
      out += num(m.at(i, j));
    }
    out += "\n";
  }
  return out;
}

std::string axis_csv(const std::string& header, const std::vector<double>& axis) {
  std::string out = header + "\n";
  for (double v : axis) out += num(v) + "\n";
  return out;
}

std::string series_csv(const std::vector<SeriesRow>& rows) {
  std::string out = "time,series,mean,stderr\n";
  for (const auto& r : rows) {
    out += num(r.time) + "," + r.series + "," + num(r.mean) + "," + num(r.stderr_) + "\n";
  }
  return out;
}

void write_files(const std::string& directory, const std::vector<OutputFile>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create output directory " + directory + ": " + ec.message());
  for (const auto& f : files) {
    const fs::path path = fs::path(directory) / f.name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << f.contents;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
  }
}

int run_subcommand(const std::string& name, const RunConfig& cfg, std::ostream& diag) {
  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<OutputFile> files;
  try {
    files = compute_subcommand(name, cfg);
  } catch (const ConfigError& e) {
    diag << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    diag << "computation error: " << e.what() << "\n";
    return kExitComputation;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Json meta;
  meta["subcommand"] = name;
  meta["version"] = CPRSIM_VERSION;
  meta["generator"] = std::string(Rng::kName);
  meta["seed"] = cfg.abm.seed;
  meta["config"] = config_json(cfg);
  meta["defaulted_keys"] = cfg.defaulted;
  Json names = Json::array();
  for (const auto& f : files) names.push_back(f.name);
  meta["files"] = names;
  meta["timing"] = {{"started_utc", utc_timestamp(started)}, {"wall_seconds", wall}};
  files.push_back({"metadata.json", meta.dump(2) + "\n"});

  try {
    write_files(cfg.output.directory, files);
  } catch (const IoError& e) {
    diag << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace cprsim
