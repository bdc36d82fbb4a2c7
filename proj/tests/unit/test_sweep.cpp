#include <cmath>

#include "doctest.h"

#include "cprsim/sweep.hpp"

using namespace cprsim;

namespace {

IntegratorOptions fast_opts() {
  IntegratorOptions o;
  o.step_size = 1e-2;
  o.max_time = 5000;
  return o;
}

GridSpec small_grid(int r, int x) {
  GridSpec g;
  g.r0_points = r;
  g.x0_points = x;
  return g;
}

DensityGrid synthetic(int rows, int cols) {
  DensityGrid d;
  d.grid = small_grid(rows, cols);
  d.r_star = GridMatrix<double>(rows, cols, 0.0);
  d.x_star = GridMatrix<double>(rows, cols, 0.0);
  d.terminal = GridMatrix<Terminal>(rows, cols, Terminal::Depleted);
  return d;
}

void sustain(DensityGrid& d, int i, int j) {
  d.terminal.at(i, j) = Terminal::Steady;
  d.r_star.at(i, j) = 0.3;
}

}  // namespace

TEST_CASE("grid axes") {
  const GridSpec g;
  const auto x = g.x0_axis();
  CHECK(x.size() == 101);
  CHECK(x.front() == 0.005);
  CHECK(x.back() == 0.995);
  CHECK(g.x0_step() == doctest::Approx(0.0099));
  GridSpec bad = g;
  bad.x0_range = {0.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), ModelError);
  bad = g;
  bad.r0_points = 1;
  CHECK_THROWS_AS(bad.validate(), ModelError);
}

TEST_CASE("empirical_critical on synthetic grids") {
  DensityGrid all_dead = synthetic(3, 5);
  CHECK_FALSE(empirical_critical(all_dead).value.has_value());

  DensityGrid d = synthetic(3, 5);
  const auto x = d.grid.x0_axis();
  for (int j = 2; j < 5; ++j) sustain(d, 0, j);
  for (int j = 3; j < 5; ++j) sustain(d, 1, j);
  sustain(d, 2, 4);
  sustain(d, 2, 1);  // isolated sustained cell below a depleted one
  const auto e = empirical_critical(d);
  REQUIRE(e.value.has_value());
  CHECK(*e.value == x[4]);
  CHECK(*e.per_column[0] == x[2]);
  CHECK(*e.per_column[1] == x[3]);
  CHECK(*e.per_column[2] == x[4]);
  CHECK(e.non_monotone_columns == std::vector<int>{2});

  // MaxTimeReached neither qualifies nor breaks the ray
  DensityGrid m = synthetic(1, 5);
  sustain(m, 0, 4);
  m.terminal.at(0, 3) = Terminal::MaxTimeReached;
  sustain(m, 0, 2);
  const auto em = empirical_critical(m);
  CHECK(*em.value == x[2]);
  CHECK(em.unresolved_cells == 1);
}

TEST_CASE("density sweep examples") {
  const auto opts = fast_opts();
  {
    const DensityGrid d = density_sweep(ModelSpec(2.0, 0.7, 1.1, greed::ConstantW{1}), small_grid(6, 6), opts);
    for (auto t : d.terminal.data) CHECK(t == Terminal::Depleted);
  }
  {
    const GridSpec g = small_grid(8, 21);
    const DensityGrid d = density_sweep(ModelSpec(2.0, 0.7, 1.1, greed::ConstantW{-1}), g, opts);
    const auto x = g.x0_axis();
    for (int i = 0; i < g.r0_points; ++i) {
      for (int j = 0; j < g.x0_points; ++j) {
        if (x[j] > 0.25) {
          CHECK(d.terminal.at(i, j) == Terminal::Steady);
          CHECK(d.r_star.at(i, j) == doctest::Approx(0.3).epsilon(1e-4));
        }
      }
    }
  }
  {
    const GridSpec g = small_grid(8, 21);
    const DensityGrid d = density_sweep(ModelSpec(2.0, 0.7, 1.1, greed::ConformityLinear{}), g, opts);
    const auto x = g.x0_axis();
    for (int i = 0; i < g.r0_points; ++i) {
      for (int j = 0; j < g.x0_points; ++j) {
        if (x[j] > 0.5) CHECK(d.sustained(i, j, opts.depletion_floor));
      }
    }
  }
}

TEST_CASE("density sweep is deterministic across thread counts") {
  const ModelSpec spec(2.0, 0.3, 1.1, greed::ResourceLinear{});
  const auto a = density_sweep(spec, small_grid(5, 7), fast_opts(), 1);
  const auto b = density_sweep(spec, small_grid(5, 7), fast_opts(), 4);
  CHECK(a.r_star.data == b.r_star.data);
  CHECK(a.x_star.data == b.x_star.data);
  CHECK(a.terminal.data == b.terminal.data);
}

TEST_CASE("monotone basins for linear models") {
  GridSpec g = small_grid(6, 41);
  g.r0_range = {1e-4, 0.995};
  const std::vector<GreedSpec> specs = {greed::ConstantW{-1}, greed::ConstantW{0},
                                        greed::ResourceLinear{}, greed::ConformityLinear{},
                                        greed::ResourceConformityLinear{0.25}};
  for (const auto& greed : specs) {
    const auto d = density_sweep(ModelSpec(2.0, 0.3, 1.1, greed), g, fast_opts());
    CHECK(empirical_critical(d).non_monotone_columns.empty());
  }
}

TEST_CASE("empirical critical value of the minimal model") {
  GridSpec g = small_grid(11, 101);
  g.r0_range = {1e-4, 0.995};
  const ModelSpec spec(2.0, 0.7, 1.1, greed::ConstantW{-1});
  const auto e = empirical_critical(density_sweep(spec, g, fast_opts()));
  REQUIRE(e.value.has_value());
  CHECK(std::abs(*e.value - 0.25) <= g.x0_step());

  // refining the x axis keeps the estimate within one coarse step
  GridSpec fine = g;
  fine.x0_points = 201;
  const auto f = empirical_critical(density_sweep(spec, fine, fast_opts()));
  CHECK(std::abs(*f.value - *e.value) <= g.x0_step());
}

TEST_CASE("critical map") {
  FamilyParams minimal;
  minimal.w = -1;
  const auto map = critical_map(minimal, {0.1, 0.9}, {1.1, 1.9}, 5);
  CHECK(map.e_c_axis.size() == 5);
  CHECK(std::abs(*map.values.at(1, 3).value - minimal_threshold(0.3, 1.7)) < 1e-12);
  CHECK(map.boundary_e_d[2] == doctest::Approx(1.5));

  const auto at = critical_map(minimal, {0.3, 0.7}, {1.1, 1.5}, 2);
  CHECK(*at.values.at(0, 1).value == doctest::Approx(5.0 / 12.0).epsilon(1e-12));

  FamilyParams conf;
  conf.family = ModelFamily::Conformity;
  const auto cm = critical_map(conf, {0.05, 0.95}, {1.01, 1.99}, 21);
  const auto mm = critical_map(minimal, {0.05, 0.95}, {1.01, 1.99}, 21);
  for (int i = 0; i < 21; ++i) {
    for (int j = 0; j < 21; ++j) {
      if (cm.values.at(i, j).region == Region::RightTop) {
        CHECK(*cm.values.at(i, j).value == *mm.values.at(i, j).value);
      }
    }
  }
  const auto corner = critical_map(minimal, {1e-6, 0.5}, {1.0 + 1e-6, 1.5}, 2);
  CHECK(*corner.values.at(0, 0).value < 1e-5);
  CHECK_THROWS_AS(critical_map(minimal, {0.0, 0.5}, {1.1, 1.5}, 3), ModelError);
}

TEST_CASE("ode / abm comparison") {
  AbmConfig cfg;
  const ModelSpec neutral(2.0, 0.7, 1.1, greed::ConstantW{0});
  const auto b = compare_ode_abm(neutral, cfg, 10);
  REQUIRE(b.times.size() == 51);
  for (std::size_t t = 0; t < b.times.size(); ++t) {
    CHECK(b.ode.states[t].coop_fraction == 0.5);
    const double se = b.ensemble.stderr_coop[t];
    if (t > 0) CHECK(std::abs(b.ensemble.mean_coop[t] - 0.5) < 3 * se);
  }

  const ModelSpec resource(2.0, 0.7, 1.1, greed::ResourceLinear{});
  const auto r = compare_ode_abm(resource, cfg, 10);
  CHECK(r.max_gap_resource < 0.05);
  CHECK(r.max_gap_coop < 0.05);
  CHECK(r.mean_gap_coop <= r.max_gap_coop);
  CHECK_THROWS_AS(compare_ode_abm(resource, cfg, 0), ModelError);
}

TEST_CASE("family parsing") {
  for (auto f : {ModelFamily::Minimal, ModelFamily::Resource, ModelFamily::Conformity,
                 ModelFamily::RcLinear, ModelFamily::ResourceQuadratic,
                 ModelFamily::ConformityQuadratic, ModelFamily::RcQuadratic}) {
    CHECK(parse_family(to_string(f)) == f);
    FamilyParams p;
    p.family = f;
    CHECK(family_name(make_greed(p)) == to_string(f));
  }
  CHECK_THROWS_AS(parse_family("nope"), ModelError);
}
