#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace cprsim {

/// Raised when a parameter set or state violates a model invariant.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Values within this distance outside their admissible interval are treated
/// as round-off and clamped; anything further is a logic error.
inline constexpr double kClampSlack = 1e-12;

/// Tolerance for the boundary identities of user-supplied quadratic coefficients.
inline constexpr double kCoefficientTol = 1e-9;

[[noreturn]] void throw_out_of_range(double v, double lo, double hi, const char* what);

/// Clamp `v` into [lo, hi]; throws ModelError when it lies further outside
/// than kClampSlack. `what` names the quantity in the error message.
inline double clamp_checked(double v, double lo, double hi, const char* what) {
  if (!(v >= lo - kClampSlack && v <= hi + kClampSlack)) throw_out_of_range(v, lo, hi, what);
  return v < lo ? lo : (v > hi ? hi : v);
}

struct SystemState {
  double resource = 0.0;       // R
  double coop_fraction = 0.0;  // x

  SystemState() = default;
  SystemState(double r, double x);

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

namespace greed {

struct ConstantW {
  double w = 0.0;
  friend bool operator==(const ConstantW&, const ConstantW&) = default;
};
/// w = 2R - 1
struct ResourceLinear {
  friend bool operator==(const ResourceLinear&, const ResourceLinear&) = default;
};
/// w = 1 - 2x
struct ConformityLinear {
  friend bool operator==(const ConformityLinear&, const ConformityLinear&) = default;
};
/// w = (1 - c) R + (-1 - c) x + c
struct ResourceConformityLinear {
  double c = 0.0;
  friend bool operator==(const ResourceConformityLinear&, const ResourceConformityLinear&) = default;
};
/// w = a R^2 + (2 - a) R - 1
struct ResourceQuadratic {
  double a = 0.0;
  friend bool operator==(const ResourceQuadratic&, const ResourceQuadratic&) = default;
};
/// w = a x^2 + (-2 - a) x + 1
struct ConformityQuadratic {
  double a = 0.0;
  friend bool operator==(const ConformityQuadratic&, const ConformityQuadratic&) = default;
};
/// w = a R^2 + b R + c x^2 + d x + e, with c + d + e = -1 and a + b + e = 1.
struct ResourceConformityQuadratic {
  double a = 0.5, b = 0.5, c = -0.5, d = -0.5, e = 0.0;
  friend bool operator==(const ResourceConformityQuadratic&, const ResourceConformityQuadratic&) = default;
};

}  // namespace greed

using GreedSpec = std::variant<greed::ConstantW, greed::ResourceLinear, greed::ConformityLinear,
                               greed::ResourceConformityLinear, greed::ResourceQuadratic,
                               greed::ConformityQuadratic, greed::ResourceConformityQuadratic>;

/// Stable short name of the active greed variant ("minimal", "resource", ...).
/// These are the names accepted by the `model.family` config key.
std::string family_name(const GreedSpec& spec);

/// Throws ModelError if the variant's parameters are out of range.
void validate(const GreedSpec& spec);

/// Every greed family is a special case of
/// w = rr R^2 + r R + xx x^2 + x_ x + k; drift evaluation uses this form.
struct GreedPolynomial {
  double rr = 0.0, r = 0.0, xx = 0.0, x = 0.0, k = 0.0;

  double operator()(double resource, double coop) const {
    return (rr * resource + r) * resource + (xx * coop + x) * coop + k;
  }
};

GreedPolynomial to_polynomial(const GreedSpec& spec);

/// Normalized coupled-system parameters. Carrying capacity is fixed at 1.
class ModelSpec {
 public:
  ModelSpec(double growth_rate, double e_c_hat, double e_d_hat, GreedSpec greed);

  double growth_rate() const { return growth_rate_; }
  double carrying_capacity() const { return 1.0; }
  double e_c_hat() const { return e_c_hat_; }
  double e_d_hat() const { return e_d_hat_; }
  const GreedSpec& greed() const { return greed_; }
  const GreedPolynomial& greed_polynomial() const { return poly_; }

 private:
  double growth_rate_;
  double e_c_hat_;
  double e_d_hat_;
  GreedSpec greed_;
  GreedPolynomial poly_;
};

enum class Direction { DtoC, CtoD };

/// Greed parameter w at the given state, clamped to [-1, 1].
double greed_eval(const GreedSpec& spec, const SystemState& state);

/// Unclamped polynomial form of w; defined for any (r, x), including points
/// just outside the unit square (finite-difference stencils need this).
double greed_raw(const GreedSpec& spec, double resource, double coop_fraction);

/// Replicator switch probability 1/2 -+ wR/2 for D->C / C->D.
double switch_probability(double w, const SystemState& state, Direction direction);

struct Drift {
  double d_resource = 0.0;
  double d_coop = 0.0;

  double norm() const;
};

/// Logistic growth minus extraction, without the T factor:
/// R (1 - R) - R (x e_c + (1 - x) e_d).
inline double resource_balance(const ModelSpec& spec, double resource, double coop_fraction) {
  const double extraction =
      coop_fraction * spec.e_c_hat() + (1.0 - coop_fraction) * spec.e_d_hat();
  return resource * (1.0 - resource) - resource * extraction;
}

/// Polynomial continuation of drift() off the unit square. No clamping.
inline Drift drift_raw(const ModelSpec& spec, double r, double x) {
  const double w = spec.greed_polynomial()(r, x);
  return {spec.growth_rate() * resource_balance(spec, r, x), -w * r * x * (1.0 - x)};
}

/// Right-hand side of the coupled resource / strategy system.
inline Drift drift(const ModelSpec& spec, const SystemState& state) {
  const double r = state.resource;
  const double x = state.coop_fraction;
  const double w = clamp_checked(spec.greed_polynomial()(r, x), -1.0, 1.0, "greed w");
  return {spec.growth_rate() * resource_balance(spec, r, x), -w * r * x * (1.0 - x)};
}

}  // namespace cprsim
