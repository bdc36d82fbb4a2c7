#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cprsim/model.hpp"

namespace cprsim {

/// Thrown when the integrator produces a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct IntegratorOptions {
  double step_size = 1e-3;
  double max_time = 500.0;
  double steady_tol = 1e-9;  // drift norm below which the state counts as stationary
  double window = 1.0;       // time the drift must stay below steady_tol
  double depletion_floor = 1e-6;
  // Spacing of recorded states in integrate(); 0 keeps only the endpoints.
  double record_interval = 0.0;

  void validate() const;
  friend bool operator==(const IntegratorOptions&, const IntegratorOptions&) = default;
};

enum class Terminal { Steady, Depleted, MaxTimeReached };

std::string to_string(Terminal t);

struct Trajectory {
  std::vector<double> times;
  std::vector<SystemState> states;
  Terminal terminal = Terminal::MaxTimeReached;

  const SystemState& final_state() const { return states.back(); }
};

/// One classical 4th-order Runge-Kutta step; the result is clamped to [0,1]^2.
SystemState step_rk4(const ModelSpec& spec, const SystemState& state, double h);

/// Integrates until the state is stationary for a full window, the resource
/// falls under the depletion floor, or max_time elapses.
Trajectory integrate(const ModelSpec& spec, const SystemState& initial,
                     const IntegratorOptions& opts = {});

/// Fixed-horizon run sampled at multiples of sample_dt (no early stopping).
/// The terminal flag still reports the state at t_end.
Trajectory sample_trajectory(const ModelSpec& spec, const SystemState& initial, double t_end,
                             double sample_dt, const IntegratorOptions& opts = {});

}  // namespace cprsim
