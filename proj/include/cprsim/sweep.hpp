#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cprsim/abm.hpp"
#include "cprsim/equilibria.hpp"
#include "cprsim/model.hpp"
#include "cprsim/ode.hpp"

namespace cprsim {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Initial-condition lattice. Axis nodes are evenly spaced and include both
/// interval ends. The x axis must stay strictly inside (0, 1).
struct GridSpec {
  int r0_points = 101;
  int x0_points = 101;
  Interval r0_range{0.005, 0.995};
  Interval x0_range{0.005, 0.995};

  void validate() const;
  std::vector<double> r0_axis() const;
  std::vector<double> x0_axis() const;
  double x0_step() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Row-major (r0 index, x0 index) matrix.
template <class T>
struct GridMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  GridMatrix() = default;
  GridMatrix(int r, int c, T fill = T{}) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}
  T& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const T& at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

struct DensityGrid {
  GridSpec grid;
  GridMatrix<double> r_star;
  GridMatrix<double> x_star;
  GridMatrix<Terminal> terminal;

  /// Steady with R* above the depletion floor.
  bool sustained(int i, int j, double depletion_floor) const;
};

/// Integration failure inside a sweep, tagged with the offending cell.
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, int r0_index, int x0_index)
      : std::runtime_error(what), r0_index_(r0_index), x0_index_(x0_index) {}
  int r0_index() const { return r0_index_; }
  int x0_index() const { return x0_index_; }

 private:
  int r0_index_;
  int x0_index_;
};

DensityGrid density_sweep(const ModelSpec& spec, const GridSpec& grid,
                          const IntegratorOptions& opts = {}, std::size_t threads = 0);

struct EmpiricalCritical {
  /// Per R0 column: smallest x0 whose upward ray is sustained. Empty when the
  /// column never qualifies.
  std::vector<std::optional<double>> per_column;
  /// Maximum over qualifying columns; empty when none qualifies.
  std::optional<double> value;
  int unresolved_cells = 0;  // MaxTimeReached cells (skipped, not counted as failures)
  /// Columns where a sustained cell sits below a depleted one at larger x0.
  std::vector<int> non_monotone_columns;
};

/// Reads the threshold off a density grid. MaxTimeReached cells neither
/// qualify nor break an upward ray.
EmpiricalCritical empirical_critical(const DensityGrid& density, double depletion_floor = 1e-6);

enum class ModelFamily {
  Minimal,
  Resource,
  Conformity,
  RcLinear,
  ResourceQuadratic,
  ConformityQuadratic,
  RcQuadratic
};

ModelFamily parse_family(const std::string& name);
std::string to_string(ModelFamily f);

/// Parameters needed to instantiate a greed family at each lattice node.
struct FamilyParams {
  ModelFamily family = ModelFamily::Minimal;
  double w = -1.0;
  double c = 0.0;
  double a = 0.0;
  greed::ResourceConformityQuadratic rc_quadratic{};

  friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

GreedSpec make_greed(const FamilyParams& p);

struct CriticalMap {
  std::vector<double> e_c_axis;
  std::vector<double> e_d_axis;
  GridMatrix<CriticalValue> values;  // rows follow e_c_axis, columns e_d_axis
  // Region boundary e_d = -e_c + 2, sampled on e_c_axis.
  std::vector<double> boundary_e_d;
};

/// Evaluates critical_value() on an (e_c, e_d) lattice. Both ranges include
/// their ends and must satisfy 0 < e_c < 1 < e_d.
CriticalMap critical_map(const FamilyParams& family, Interval e_c_range, Interval e_d_range,
                         int resolution, double growth_rate = 2.0);

struct ComparisonBundle {
  std::vector<double> times;  // shared integer-time axis
  Trajectory ode;             // sampled at the same integer times
  EnsembleSummary ensemble;
  std::vector<double> gap_resource;  // |ensemble mean - ODE| per time
  std::vector<double> gap_coop;
  double max_gap_resource = 0.0;
  double max_gap_coop = 0.0;
  double mean_gap_resource = 0.0;
  double mean_gap_coop = 0.0;
};

ComparisonBundle compare_ode_abm(const ModelSpec& spec, const AbmConfig& config, int n_real,
                                 const IntegratorOptions& opts = {}, std::size_t threads = 0);

}  // namespace cprsim
