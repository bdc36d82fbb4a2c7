#include <cmath>
#include <random>

#include "doctest.h"

#include "cprsim/model.hpp"

using namespace cprsim;

namespace {

ModelSpec minimal(double w, double ec = 0.7, double ed = 1.1) {
  return ModelSpec(2.0, ec, ed, greed::ConstantW{w});
}

// Hand-written greed laws, kept apart from the library's polynomial table.
double reference_w(const GreedSpec& g, double r, double x) {
  if (auto p = std::get_if<greed::ConstantW>(&g)) return p->w;
  if (std::holds_alternative<greed::ResourceLinear>(g)) return 2 * r - 1;
  if (std::holds_alternative<greed::ConformityLinear>(g)) return 1 - 2 * x;
  if (auto p = std::get_if<greed::ResourceConformityLinear>(&g)) {
    return (1 - p->c) * r + (-1 - p->c) * x + p->c;
  }
  if (auto p = std::get_if<greed::ResourceQuadratic>(&g)) return p->a * r * r + (2 - p->a) * r - 1;
  if (auto p = std::get_if<greed::ConformityQuadratic>(&g)) return p->a * x * x + (-2 - p->a) * x + 1;
  const auto& q = std::get<greed::ResourceConformityQuadratic>(g);
  return q.a * r * r + q.b * r + q.c * x * x + q.d * x + q.e;
}

std::vector<GreedSpec> sample_specs() {
  return {greed::ConstantW{-1},          greed::ConstantW{0.4},
          greed::ResourceLinear{},       greed::ConformityLinear{},
          greed::ResourceConformityLinear{-0.6}, greed::ResourceConformityLinear{0.25},
          greed::ResourceQuadratic{-2},  greed::ResourceQuadratic{1.5},
          greed::ConformityQuadratic{2}, greed::ConformityQuadratic{-1},
          greed::ResourceConformityQuadratic{}};
}

}  // namespace

TEST_CASE("greed examples") {
  CHECK(greed_eval(greed::ResourceLinear{}, {0.5, 0.3}) == 0.0);
  CHECK(greed_eval(greed::ResourceLinear{}, {0.0, 0.3}) == -1.0);
  CHECK(greed_eval(greed::ResourceConformityLinear{0.25}, {1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(greed_eval(greed::ConformityQuadratic{2.0}, {0.4, 0.5}) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("greed polynomial matches the written laws and stays in [-1, 1]") {
  for (const auto& g : sample_specs()) {
    const auto poly = to_polynomial(g);
    for (int i = 0; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) {
        const double r = i / 40.0, x = j / 40.0;
        const double w = greed_eval(g, {r, x});
        CHECK(std::abs(poly(r, x) - reference_w(g, r, x)) < 1e-14);
        CHECK(std::abs(greed_raw(g, r, x) - reference_w(g, r, x)) < 1e-14);
        CHECK(w >= -1.0);
        CHECK(w <= 1.0);
      }
    }
  }
}

TEST_CASE("greed monotone in R and x where required") {
  const std::vector<GreedSpec> specs = {greed::ResourceLinear{}, greed::ConformityLinear{},
                                        greed::ResourceConformityLinear{0.5},
                                        greed::ResourceQuadratic{2}, greed::ResourceQuadratic{-2},
                                        greed::ConformityQuadratic{2}, greed::ConformityQuadratic{-2},
                                        greed::ResourceConformityQuadratic{}};
  for (const auto& g : specs) {
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 50; ++j) {
        const double r = i / 50.0, x = j / 50.0, h = 0.02;
        CHECK(greed_raw(g, r + h, x) >= greed_raw(g, r, x) - 1e-12);
        CHECK(greed_raw(g, r, x + h) <= greed_raw(g, r, x) + 1e-12);
      }
    }
  }
}

TEST_CASE("boundary values of the quadratic families") {
  for (double a : {-2.0, -0.5, 0.0, 1.0, 2.0}) {
    CHECK(greed_raw(greed::ResourceQuadratic{a}, 0.0, 0.3) == doctest::Approx(-1.0));
    CHECK(greed_raw(greed::ResourceQuadratic{a}, 1.0, 0.3) == doctest::Approx(1.0));
    CHECK(greed_raw(greed::ConformityQuadratic{a}, 0.3, 0.0) == doctest::Approx(1.0));
    CHECK(greed_raw(greed::ConformityQuadratic{a}, 0.3, 1.0) == doctest::Approx(-1.0));
  }
}

TEST_CASE("variant reductions") {
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const SystemState s(i / 20.0, j / 20.0);
      CHECK(greed_eval(greed::ResourceConformityLinear{-1}, s) == doctest::Approx(greed_eval(greed::ResourceLinear{}, s)));
      CHECK(greed_eval(greed::ResourceConformityLinear{1}, s) == doctest::Approx(greed_eval(greed::ConformityLinear{}, s)));
      CHECK(greed_eval(greed::ResourceQuadratic{0}, s) == greed_eval(greed::ResourceLinear{}, s));
      CHECK(greed_eval(greed::ConformityQuadratic{0}, s) == greed_eval(greed::ConformityLinear{}, s));
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(minimal(1.5), ModelError);
  CHECK_THROWS_AS(ModelSpec(2.0, 1.2, 1.5, greed::ResourceLinear{}), ModelError);
  CHECK_THROWS_AS(ModelSpec(2.0, 0.5, 0.9, greed::ResourceLinear{}), ModelError);
  CHECK_THROWS_AS(ModelSpec(0.0, 0.5, 1.5, greed::ResourceLinear{}), ModelError);
  CHECK_THROWS_AS(ModelSpec(2.0, 0.5, 1.5, greed::ResourceConformityLinear{1.2}), ModelError);
  CHECK_THROWS_AS(ModelSpec(2.0, 0.5, 1.5, greed::ResourceQuadratic{2.5}), ModelError);
  // identities c + d + e = -1 and a + b + e = 1
  CHECK_THROWS_AS(ModelSpec(2.0, 0.5, 1.5, greed::ResourceConformityQuadratic{0.5, 0.5, 0.5, 0.5, 0}),
                  ModelError);
  CHECK_NOTHROW(ModelSpec(2.0, 0.5, 1.5, greed::ResourceConformityQuadratic{0.2, 0.8, -0.3, -0.7, 0}));
  CHECK_THROWS_AS(SystemState(1.1, 0.5), ModelError);
  CHECK(SystemState(1.0 + 1e-13, -1e-13) == SystemState(1.0, 0.0));
  CHECK(minimal(-1).carrying_capacity() == 1.0);
}

TEST_CASE("switch probabilities") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double w = 2 * u(gen) - 1, r = u(gen);
    const SystemState s(r, 0.5);
    const double up = switch_probability(w, s, Direction::DtoC);
    const double down = switch_probability(w, s, Direction::CtoD);
    CHECK(up + down == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(up == doctest::Approx(0.5 - w * r / 2));
  }
  CHECK(switch_probability(0.0, {0.8, 0.3}, Direction::DtoC) == 0.5);
  CHECK(switch_probability(0.0, {0.8, 0.3}, Direction::CtoD) == 0.5);
  CHECK(switch_probability(1.0, {1.0, 0.3}, Direction::DtoC) == 0.0);
  CHECK(switch_probability(-1.0, {0.5, 0.3}, Direction::DtoC) == 0.75);
}

TEST_CASE("drift examples") {
  const Drift d = drift(minimal(-1), {0.5, 0.5});
  CHECK(d.d_resource == doctest::Approx(-0.4).epsilon(1e-14));
  CHECK(d.d_coop == doctest::Approx(0.125).epsilon(1e-14));
  for (double x : {0.0, 0.3, 1.0}) {
    const Drift z = drift(ModelSpec(2.0, 0.3, 1.4, greed::ConformityLinear{}), {0.0, x});
    CHECK(z.d_resource == 0.0);
    CHECK(z.d_coop == 0.0);
  }
  for (double w : {-1.0, 0.0, 0.6}) {
    const Drift z = drift(minimal(w), {0.3, 1.0});
    CHECK(std::abs(z.d_resource) < 1e-15);
    CHECK(z.d_coop == 0.0);
  }
}

TEST_CASE("sign law and boundary manifolds") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& g : sample_specs()) {
    const ModelSpec spec(2.0, 0.4, 1.3, g);
    for (int k = 0; k < 500; ++k) {
      const double r = u(gen) * 0.999 + 0.001, x = u(gen) * 0.998 + 0.001;
      const double w = greed_eval(g, {r, x});
      const double dx = drift(spec, {r, x}).d_coop;
      if (std::abs(w) > 1e-12) CHECK((dx > 0) == (w < 0));
      CHECK(drift(spec, {r, 0.0}).d_coop == 0.0);
      CHECK(drift(spec, {r, 1.0}).d_coop == 0.0);
      CHECK(drift(spec, {0.0, x}).d_resource == 0.0);
    }
  }
}

TEST_CASE("family names") {
  CHECK(family_name(greed::ConstantW{0}) == "minimal");
  CHECK(family_name(greed::ResourceConformityQuadratic{}) == "rc_quadratic");
}
