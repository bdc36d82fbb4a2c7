#include "cprsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cprsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_range(double v, double lo, double hi, const char* what) {
  if (!(v >= lo && v <= hi)) {
    std::ostringstream os;
    os << what << " = " << v << " outside [" << lo << ", " << hi << "]";
    throw ModelError(os.str());
  }
}

}  // namespace

void throw_out_of_range(double v, double lo, double hi, const char* what) {
  std::ostringstream os;
  os.precision(17);
  os << what << " = " << v << " violates [" << lo << ", " << hi << "]";
  throw ModelError(os.str());
}

SystemState::SystemState(double r, double x)
    : resource(clamp_checked(r, 0.0, 1.0, "resource")),
      coop_fraction(clamp_checked(x, 0.0, 1.0, "coop_fraction")) {}

std::string family_name(const GreedSpec& spec) {
  return std::visit(overloaded{
                        [](const greed::ConstantW&) { return "minimal"; },
                        [](const greed::ResourceLinear&) { return "resource"; },
                        [](const greed::ConformityLinear&) { return "conformity"; },
                        [](const greed::ResourceConformityLinear&) { return "rc_linear"; },
                        [](const greed::ResourceQuadratic&) { return "resource_quadratic"; },
                        [](const greed::ConformityQuadratic&) { return "conformity_quadratic"; },
                        [](const greed::ResourceConformityQuadratic&) { return "rc_quadratic"; },
                    },
                    spec);
}

void validate(const GreedSpec& spec) {
  std::visit(overloaded{
                 [](const greed::ConstantW& g) { require_range(g.w, -1.0, 1.0, "w"); },
                 [](const greed::ResourceLinear&) {},
                 [](const greed::ConformityLinear&) {},
                 [](const greed::ResourceConformityLinear& g) { require_range(g.c, -1.0, 1.0, "c"); },
                 [](const greed::ResourceQuadratic& g) { require_range(g.a, -2.0, 2.0, "a"); },
                 [](const greed::ConformityQuadratic& g) { require_range(g.a, -2.0, 2.0, "a"); },
                 [](const greed::ResourceConformityQuadratic& g) {
                   for (double v : {g.a, g.b, g.c, g.d, g.e}) {
                     if (!std::isfinite(v)) throw ModelError("quadratic coefficient is not finite");
                   }
                   if (std::abs(g.c + g.d + g.e + 1.0) > kCoefficientTol) {
                     throw ModelError("rc_quadratic coefficients violate c + d + e = -1");
                   }
                   if (std::abs(g.a + g.b + g.e - 1.0) > kCoefficientTol) {
                     throw ModelError("rc_quadratic coefficients violate a + b + e = 1");
                   }
                   // Linear derivatives: sign on [0,1] is fixed by the endpoint values.
                   if (g.b < -kCoefficientTol || 2.0 * g.a + g.b < -kCoefficientTol) {
                     throw ModelError("rc_quadratic greed must be non-decreasing in R");
                   }
                   if (g.d > kCoefficientTol || 2.0 * g.c + g.d > kCoefficientTol) {
                     throw ModelError("rc_quadratic greed must be non-increasing in x");
                   }
                   // Monotone in each argument, so the extremes sit at the corners
                   // f(0,1) = -1 and f(1,0) = 1 already enforced above.
                 },
             },
             spec);
}

GreedPolynomial to_polynomial(const GreedSpec& spec) {
  return std::visit(
      overloaded{
          [](const greed::ConstantW& g) { return GreedPolynomial{0, 0, 0, 0, g.w}; },
          [](const greed::ResourceLinear&) { return GreedPolynomial{0, 2, 0, 0, -1}; },
          [](const greed::ConformityLinear&) { return GreedPolynomial{0, 0, 0, -2, 1}; },
          [](const greed::ResourceConformityLinear& g) {
            return GreedPolynomial{0, 1.0 - g.c, 0, -1.0 - g.c, g.c};
          },
          [](const greed::ResourceQuadratic& g) { return GreedPolynomial{g.a, 2.0 - g.a, 0, 0, -1}; },
          [](const greed::ConformityQuadratic& g) { return GreedPolynomial{0, 0, g.a, -2.0 - g.a, 1}; },
          [](const greed::ResourceConformityQuadratic& g) {
            return GreedPolynomial{g.a, g.b, g.c, g.d, g.e};
          },
      },
      spec);
}

ModelSpec::ModelSpec(double growth_rate, double e_c_hat, double e_d_hat, GreedSpec greed)
    : growth_rate_(growth_rate),
      e_c_hat_(e_c_hat),
      e_d_hat_(e_d_hat),
      greed_(greed),
      poly_(to_polynomial(greed_)) {
  if (!(growth_rate > 0.0) || !std::isfinite(growth_rate)) {
    throw ModelError("growth rate T must be positive");
  }
  if (!(e_c_hat > 0.0 && e_c_hat < 1.0)) {
    throw ModelError("cooperator extraction must satisfy 0 < e_c_hat < 1");
  }
  if (!(e_d_hat > 1.0) || !std::isfinite(e_d_hat)) {
    throw ModelError("defector extraction must satisfy e_d_hat > 1");
  }
  validate(greed_);
}

double greed_raw(const GreedSpec& spec, double r, double x) {
  return std::visit(
      overloaded{
          [](const greed::ConstantW& g) { return g.w; },
          [&](const greed::ResourceLinear&) { return 2.0 * r - 1.0; },
          [&](const greed::ConformityLinear&) { return 1.0 - 2.0 * x; },
          [&](const greed::ResourceConformityLinear& g) {
            return (1.0 - g.c) * r + (-1.0 - g.c) * x + g.c;
          },
          [&](const greed::ResourceQuadratic& g) { return g.a * r * r + (2.0 - g.a) * r - 1.0; },
          [&](const greed::ConformityQuadratic& g) { return g.a * x * x + (-2.0 - g.a) * x + 1.0; },
          [&](const greed::ResourceConformityQuadratic& g) {
            return g.a * r * r + g.b * r + g.c * x * x + g.d * x + g.e;
          },
      },
      spec);
}

double greed_eval(const GreedSpec& spec, const SystemState& state) {
  return clamp_checked(greed_raw(spec, state.resource, state.coop_fraction), -1.0, 1.0, "greed w");
}

double switch_probability(double w, const SystemState& state, Direction direction) {
  const double half_wr = 0.5 * w * state.resource;
  const double p = direction == Direction::DtoC ? 0.5 - half_wr : 0.5 + half_wr;
  return clamp_checked(p, 0.0, 1.0, "switch probability");
}

double Drift::norm() const { return std::sqrt(d_resource * d_resource + d_coop * d_coop); }

}  // namespace cprsim
