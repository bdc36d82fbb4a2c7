#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cprsim/model.hpp"

namespace cprsim {

enum class Stability { Stable, Unstable, NeutralStable };
enum class Region { RightTop, LeftBottom, NotApplicable };

std::string to_string(Stability s);
std::string to_string(Region r);

/// Eigenvalue real parts within this band of zero count as neutral.
inline constexpr double kNeutralTol = 1e-9;
/// Central-difference step used by jacobian().
inline constexpr double kJacobianStep = 1e-6;

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Eigenpair2 = std::array<std::complex<double>, 2>;

struct Equilibrium {
  std::string label;  // "s1", "s2", "s3" or "root<k>" for numerically found points
  SystemState state;
  // True for the R = 0 line {R = 0, any x}. Its eigen-data is evaluated at
  // state.coop_fraction; stability flips from NeutralStable to Unstable where
  // T (1 - x e_c - (1 - x) e_d) changes sign, i.e. at x_c of the minimal model.
  bool boundary_line = false;
  bool existence_condition_met = true;
  Stability classification = Stability::NeutralStable;
  Eigenpair2 eigenvalues{};
};

struct EquilibriumSet {
  std::vector<Equilibrium> points;
  bool complete = true;  // false when the root finder failed to converge somewhere
};

/// Fixed points of the coupled system. Closed forms for the linear greed
/// families; the quadratic families are solved by bracketing roots of w along
/// the resource nullcline R = 1 - x e_c - (1 - x) e_d. Points whose existence
/// condition fails are still listed (flagged) when a closed form exists.
EquilibriumSet stationary_solutions(const ModelSpec& spec);

/// Central finite-difference Jacobian of drift_raw() at `state`.
Matrix2 jacobian(const ModelSpec& spec, const SystemState& state);

Eigenpair2 eigenvalues(const Matrix2& m);

/// Stability from eigen-data: Stable when both real parts are below -tol
/// (for a real 2x2 matrix this is Det > 0 and Tr < 0), Unstable when one
/// exceeds +tol, NeutralStable otherwise.
Stability classify(const Eigenpair2& eigen, double tol = kNeutralTol);
Stability classify(const ModelSpec& spec, const Equilibrium& eq);

/// Builds a fully populated Equilibrium (Jacobian, eigenvalues, class) at `state`.
Equilibrium analyze_point(const ModelSpec& spec, const SystemState& state, std::string label,
                          bool existence = true);

struct CriticalValue {
  std::optional<double> value;  // empty means Absent
  std::string model_tag;
  Region region = Region::NotApplicable;
  std::string warning;
};

/// (-1 + e_d) / (-e_c + e_d)
double minimal_threshold(double e_c_hat, double e_d_hat);

/// In-range root of a x^2 + (-2 - a) x + 1 on [0, 1] (0.5 at a = 0).
double conformity_quadratic_root(double a);

/// RightTop iff e_d > -e_c + 2; ties go to RightTop.
Region region_of(double e_c_hat, double e_d_hat);

/// Analytic critical cooperator fraction for the active greed family.
CriticalValue critical_value(const ModelSpec& spec);

}  // namespace cprsim
