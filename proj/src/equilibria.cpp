#include "cprsim/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <variant>

#include <boost/math/tools/roots.hpp>

namespace cprsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr int kNullclineIntervals = 4096;

double nullcline_resource(const ModelSpec& spec, double x) {
  return 1.0 - x * spec.e_c_hat() - (1.0 - x) * spec.e_d_hat();
}

Equilibrium boundary_family(const ModelSpec& spec) {
  Equilibrium eq = analyze_point(spec, SystemState(0.0, 0.0), "s1");
  eq.boundary_line = true;
  return eq;
}

// Interior fixed points of a quadratic greed family: w(R(x), x) = 0 on the
// resource nullcline, restricted to R > 0 and x < 1.
bool nullcline_roots(const ModelSpec& spec, std::vector<Equilibrium>& out) {
  const double x_lo = minimal_threshold(spec.e_c_hat(), spec.e_d_hat());
  const double x_hi = 1.0;
  auto g = [&](double x) { return greed_raw(spec.greed(), nullcline_resource(spec, x), x); };

  bool converged = true;
  std::vector<double> roots;
  double a = x_lo;
  double ga = g(a);
  for (int i = 1; i <= kNullclineIntervals; ++i) {
    const double b = x_lo + (x_hi - x_lo) * i / kNullclineIntervals;
    const double gb = g(b);
    if (gb == 0.0) {
      roots.push_back(b);
    } else if (ga != 0.0 && (ga < 0.0) != (gb < 0.0)) {
      std::uintmax_t max_iter = 200;
      const auto [lo, hi] = boost::math::tools::toms748_solve(
          g, a, b, ga, gb, boost::math::tools::eps_tolerance<double>(52), max_iter);
      if (max_iter >= 200) converged = false;
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    ga = gb;
  }

  int k = 0;
  for (double x : roots) {
    const double r = nullcline_resource(spec, x);
    if (!(r > 0.0) || x >= 1.0 - 1e-12 || x <= 0.0) continue;
    out.push_back(analyze_point(spec, SystemState(r, x), "root" + std::to_string(++k)));
  }
  return converged;
}

}  // namespace

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    case Stability::NeutralStable: return "NeutralStable";
  }
  return "?";
}

std::string to_string(Region r) {
  switch (r) {
    case Region::RightTop: return "RightTop";
    case Region::LeftBottom: return "LeftBottom";
    case Region::NotApplicable: return "NotApplicable";
  }
  return "?";
}

Matrix2 jacobian(const ModelSpec& spec, const SystemState& state) {
  const double h = kJacobianStep;
  const double r = state.resource;
  const double x = state.coop_fraction;
  const Drift rp = drift_raw(spec, r + h, x);
  const Drift rm = drift_raw(spec, r - h, x);
  const Drift xp = drift_raw(spec, r, x + h);
  const Drift xm = drift_raw(spec, r, x - h);
  Matrix2 j{};
  j[0][0] = (rp.d_resource - rm.d_resource) / (2.0 * h);
  j[0][1] = (xp.d_resource - xm.d_resource) / (2.0 * h);
  j[1][0] = (rp.d_coop - rm.d_coop) / (2.0 * h);
  j[1][1] = (xp.d_coop - xm.d_coop) / (2.0 * h);
  return j;
}

Eigenpair2 eigenvalues(const Matrix2& m) {
  const double tr = m[0][0] + m[1][1];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = 0.25 * tr * tr - det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    // Avoid cancellation: larger-magnitude root first, the other from det.
    const double big = 0.5 * tr + (tr >= 0.0 ? s : -s);
    const double small = big != 0.0 ? det / big : 0.0;
    return {std::complex<double>(std::min(big, small)), std::complex<double>(std::max(big, small))};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(0.5 * tr, -im), std::complex<double>(0.5 * tr, im)};
}

Stability classify(const Eigenpair2& eigen, double tol) {
  const double max_re = std::max(eigen[0].real(), eigen[1].real());
  if (max_re < -tol) return Stability::Stable;
  if (max_re > tol) return Stability::Unstable;
  return Stability::NeutralStable;
}

Stability classify(const ModelSpec&, const Equilibrium& eq) { return classify(eq.eigenvalues); }

Equilibrium analyze_point(const ModelSpec& spec, const SystemState& state, std::string label,
                          bool existence) {
  Equilibrium eq;
  eq.label = std::move(label);
  eq.state = state;
  eq.existence_condition_met = existence;
  eq.eigenvalues = eigenvalues(jacobian(spec, state));
  eq.classification = classify(eq.eigenvalues);
  return eq;
}

EquilibriumSet stationary_solutions(const ModelSpec& spec) {
  EquilibriumSet set;
  set.points.push_back(boundary_family(spec));
  const double ec = spec.e_c_hat();
  const double ed = spec.e_d_hat();
  const SystemState all_coop(1.0 - ec, 1.0);

  std::visit(
      overloaded{
          [&](const greed::ConstantW&) { set.points.push_back(analyze_point(spec, all_coop, "s2")); },
          [&](const greed::ResourceLinear&) {
            const bool exists = ec < 0.5;
            const double x = (1.0 - 2.0 * ed) / (2.0 * ec - 2.0 * ed);
            if (x >= 0.0 && x <= 1.0) {
              set.points.push_back(analyze_point(spec, SystemState(0.5, x), "s2", exists));
            }
            set.points.push_back(analyze_point(spec, all_coop, "s3"));
          },
          [&](const greed::ConformityLinear&) {
            set.points.push_back(analyze_point(spec, all_coop, "s2"));
            const bool exists = ed < 2.0 - ec;
            const double r = 1.0 - 0.5 * ec - 0.5 * ed;
            if (exists) {
              set.points.push_back(analyze_point(spec, SystemState(r, 0.5), "s3", exists));
            }
          },
          [&](const greed::ResourceConformityLinear& g) {
            set.points.push_back(analyze_point(spec, all_coop, "s2"));
            const double c = g.c;
            const double denom = 1.0 + ec - ed + c * (1.0 - ec + ed);
            if (std::abs(denom) > 1e-14) {
              const double x = (1.0 - ed + c * ed) / denom;
              const double r = (1.0 - ed + c * (1.0 - ec)) / denom;
              if (x >= 0.0 && x < 1.0 && r > 0.0 && r <= 1.0) {
                set.points.push_back(analyze_point(spec, SystemState(r, x), "s3"));
              }
            }
          },
          [&](const auto&) {
            set.points.push_back(analyze_point(spec, all_coop, "s2"));
            set.complete = nullcline_roots(spec, set.points);
          },
      },
      spec.greed());
  return set;
}

double minimal_threshold(double e_c_hat, double e_d_hat) {
  return (-1.0 + e_d_hat) / (-e_c_hat + e_d_hat);
}

double conformity_quadratic_root(double a) {
  // Rationalized form of ((2 + a) - sqrt(4 + a^2)) / (2a); finite at a = 0.
  return 2.0 / ((2.0 + a) + std::sqrt(4.0 + a * a));
}

Region region_of(double e_c_hat, double e_d_hat) {
  return e_d_hat >= -e_c_hat + 2.0 ? Region::RightTop : Region::LeftBottom;
}

CriticalValue critical_value(const ModelSpec& spec) {
  const double ec = spec.e_c_hat();
  const double ed = spec.e_d_hat();
  const double xm = minimal_threshold(ec, ed);
  CriticalValue out;
  out.model_tag = family_name(spec.greed());
  std::visit(overloaded{
                 [&](const greed::ConstantW& g) {
                   if (g.w > 0.0) return;
                   out.value = xm;
                 },
                 [&](const greed::ResourceLinear&) { out.value = xm; },
                 [&](const greed::ResourceQuadratic&) { out.value = xm; },
                 [&](const greed::ConformityLinear&) {
                   out.value = std::max(xm, 0.5);
                   out.region = region_of(ec, ed);
                 },
                 [&](const greed::ConformityQuadratic& g) {
                   out.value = std::max(xm, conformity_quadratic_root(g.a));
                   out.region = region_of(ec, ed);
                 },
                 [&](const greed::ResourceConformityLinear& g) {
                   out.value = 0.5 * (1.0 - g.c) * xm + 0.5 * (1.0 + g.c) * std::max(xm, 0.5);
                   out.region = region_of(ec, ed);
                 },
                 [&](const greed::ResourceConformityQuadratic&) {
                   out.warning = "no analytic critical value for the quadratic resource-conformity greed";
                 },
             },
             spec.greed());
  return out;
}

}  // namespace cprsim
