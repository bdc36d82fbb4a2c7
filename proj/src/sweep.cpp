#include "cprsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cprsim/parallel.hpp"

namespace cprsim {

namespace {

std::vector<double> linspace(Interval range, int points) {
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    axis[static_cast<std::size_t>(i)] =
        i == points - 1 ? range.hi : range.lo + (range.hi - range.lo) * i / (points - 1);
  }
  return axis;
}

}  // namespace

void GridSpec::validate() const {
  if (r0_points < 2 || x0_points < 2) throw ModelError("grid needs at least 2 points per axis");
  const auto inside = [](Interval v) { return v.lo >= 0.0 && v.hi <= 1.0 && v.lo < v.hi; };
  if (!inside(r0_range) || !inside(x0_range)) {
    throw ModelError("grid ranges must be increasing sub-intervals of [0, 1]");
  }
  if (x0_range.lo <= 0.0 || x0_range.hi >= 1.0) {
    throw ModelError("grid x0 axis must stay strictly inside (0, 1)");
  }
}

std::vector<double> GridSpec::r0_axis() const { return linspace(r0_range, r0_points); }
std::vector<double> GridSpec::x0_axis() const { return linspace(x0_range, x0_points); }
double GridSpec::x0_step() const { return (x0_range.hi - x0_range.lo) / (x0_points - 1); }

bool DensityGrid::sustained(int i, int j, double depletion_floor) const {
  return terminal.at(i, j) == Terminal::Steady && r_star.at(i, j) > depletion_floor;
}

DensityGrid density_sweep(const ModelSpec& spec, const GridSpec& grid,
                          const IntegratorOptions& opts, std::size_t threads) {
  grid.validate();
  opts.validate();
  IntegratorOptions cell_opts = opts;
  cell_opts.record_interval = 0.0;

  DensityGrid out;
  out.grid = grid;
  out.r_star = GridMatrix<double>(grid.r0_points, grid.x0_points);
  out.x_star = GridMatrix<double>(grid.r0_points, grid.x0_points);
  out.terminal = GridMatrix<Terminal>(grid.r0_points, grid.x0_points, Terminal::MaxTimeReached);
  const auto r_axis = grid.r0_axis();
  const auto x_axis = grid.x0_axis();

  const auto cells = static_cast<std::size_t>(grid.r0_points) * grid.x0_points;
  parallel_for(cells, threads, [&](std::size_t cell) {
    const int i = static_cast<int>(cell / grid.x0_points);
    const int j = static_cast<int>(cell % grid.x0_points);
    try {
      const Trajectory t = integrate(spec, SystemState(r_axis[i], x_axis[j]), cell_opts);
      out.r_star.at(i, j) = t.final_state().resource;
      out.x_star.at(i, j) = t.final_state().coop_fraction;
      out.terminal.at(i, j) = t.terminal;
    } catch (const IntegrationError& e) {
      std::ostringstream os;
      os << e.what() << " in cell (R0 = " << r_axis[i] << ", x0 = " << x_axis[j] << ")";
      throw SweepError(os.str(), i, j);
    }
  });
  return out;
}

EmpiricalCritical empirical_critical(const DensityGrid& density, double depletion_floor) {
  EmpiricalCritical out;
  const int rows = density.grid.r0_points;
  const int cols = density.grid.x0_points;
  const auto x_axis = density.grid.x0_axis();
  out.per_column.resize(static_cast<std::size_t>(rows));

  for (int i = 0; i < rows; ++i) {
    // Walk down from the largest x0 while the ray stays sustained.
    std::optional<double> lowest;
    bool broken = false;
    bool saw_failure = false;
    bool non_monotone = false;
    for (int j = cols - 1; j >= 0; --j) {
      const Terminal t = density.terminal.at(i, j);
      if (t == Terminal::MaxTimeReached) {
        ++out.unresolved_cells;
        continue;
      }
      const bool ok = density.sustained(i, j, depletion_floor);
      if (ok && saw_failure) non_monotone = true;
      if (!ok) saw_failure = true;
      if (broken) continue;
      if (ok) {
        lowest = x_axis[static_cast<std::size_t>(j)];
      } else {
        broken = true;
      }
    }
    out.per_column[static_cast<std::size_t>(i)] = lowest;
    if (non_monotone) out.non_monotone_columns.push_back(i);
    if (lowest && (!out.value || *lowest > *out.value)) out.value = lowest;
  }
  return out;
}

ModelFamily parse_family(const std::string& name) {
  if (name == "minimal") return ModelFamily::Minimal;
  if (name == "resource") return ModelFamily::Resource;
  if (name == "conformity") return ModelFamily::Conformity;
  if (name == "rc_linear") return ModelFamily::RcLinear;
  if (name == "resource_quadratic") return ModelFamily::ResourceQuadratic;
  if (name == "conformity_quadratic") return ModelFamily::ConformityQuadratic;
  if (name == "rc_quadratic") return ModelFamily::RcQuadratic;
  throw ModelError("unknown model family '" + name + "'");
}

std::string to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::Minimal: return "minimal";
    case ModelFamily::Resource: return "resource";
    case ModelFamily::Conformity: return "conformity";
    case ModelFamily::RcLinear: return "rc_linear";
    case ModelFamily::ResourceQuadratic: return "resource_quadratic";
    case ModelFamily::ConformityQuadratic: return "conformity_quadratic";
    case ModelFamily::RcQuadratic: return "rc_quadratic";
  }
  return "?";
}

GreedSpec make_greed(const FamilyParams& p) {
  switch (p.family) {
    case ModelFamily::Minimal: return greed::ConstantW{p.w};
    case ModelFamily::Resource: return greed::ResourceLinear{};
    case ModelFamily::Conformity: return greed::ConformityLinear{};
    case ModelFamily::RcLinear: return greed::ResourceConformityLinear{p.c};
    case ModelFamily::ResourceQuadratic: return greed::ResourceQuadratic{p.a};
    case ModelFamily::ConformityQuadratic: return greed::ConformityQuadratic{p.a};
    case ModelFamily::RcQuadratic: return p.rc_quadratic;
  }
  throw ModelError("unhandled model family");
}

CriticalMap critical_map(const FamilyParams& family, Interval e_c_range, Interval e_d_range,
                         int resolution, double growth_rate) {
  if (resolution < 2) throw ModelError("critical map resolution must be at least 2");
  if (!(e_c_range.lo > 0.0 && e_c_range.hi < 1.0 && e_c_range.lo < e_c_range.hi)) {
    throw ModelError("critical map e_c range must lie inside (0, 1)");
  }
  if (!(e_d_range.lo > 1.0 && e_d_range.lo < e_d_range.hi)) {
    throw ModelError("critical map e_d range must lie above 1");
  }
  const GreedSpec greed = make_greed(family);
  CriticalMap out;
  out.e_c_axis = linspace(e_c_range, resolution);
  out.e_d_axis = linspace(e_d_range, resolution);
  out.values = GridMatrix<CriticalValue>(resolution, resolution);
  for (int i = 0; i < resolution; ++i) {
    const double ec = out.e_c_axis[static_cast<std::size_t>(i)];
    out.boundary_e_d.push_back(-ec + 2.0);
    for (int j = 0; j < resolution; ++j) {
      const ModelSpec spec(growth_rate, ec, out.e_d_axis[static_cast<std::size_t>(j)], greed);
      out.values.at(i, j) = critical_value(spec);
    }
  }
  return out;
}

ComparisonBundle compare_ode_abm(const ModelSpec& spec, const AbmConfig& config, int n_real,
                                 const IntegratorOptions& opts, std::size_t threads) {
  if (n_real < 1) throw ModelError("comparison needs at least one realization");
  ComparisonBundle out;
  out.ensemble = run_ensemble(config, spec, n_real, threads);
  out.times = out.ensemble.times;
  const double t_end = out.times.empty() ? 0.0 : out.times.back();
  const double sample_dt = 1.0;
  out.ode = sample_trajectory(spec, config.initial, t_end, sample_dt, opts);

  const std::size_t n = out.times.size();
  for (std::size_t t = 0; t < n; ++t) {
    const double gr = std::abs(out.ensemble.mean_resource[t] - out.ode.states[t].resource);
    const double gx = std::abs(out.ensemble.mean_coop[t] - out.ode.states[t].coop_fraction);
    out.gap_resource.push_back(gr);
    out.gap_coop.push_back(gx);
    out.max_gap_resource = std::max(out.max_gap_resource, gr);
    out.max_gap_coop = std::max(out.max_gap_coop, gx);
    out.mean_gap_resource += gr / static_cast<double>(n);
    out.mean_gap_coop += gx / static_cast<double>(n);
  }
  return out;
}

}  // namespace cprsim
