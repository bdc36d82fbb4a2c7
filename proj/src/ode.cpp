#include "cprsim/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cprsim {

namespace {

SystemState raw_state(double r, double x) {
  SystemState s;
  s.resource = std::clamp(r, 0.0, 1.0);
  s.coop_fraction = std::clamp(x, 0.0, 1.0);
  return s;
}

SystemState rk4_from(const ModelSpec& spec, const SystemState& s, const Drift& k1, double h) {
  const Drift k2 = drift(spec, raw_state(s.resource + 0.5 * h * k1.d_resource,
                                         s.coop_fraction + 0.5 * h * k1.d_coop));
  const Drift k3 = drift(spec, raw_state(s.resource + 0.5 * h * k2.d_resource,
                                         s.coop_fraction + 0.5 * h * k2.d_coop));
  const Drift k4 = drift(spec, raw_state(s.resource + h * k3.d_resource,
                                         s.coop_fraction + h * k3.d_coop));
  const double r = s.resource +
                   h / 6.0 * (k1.d_resource + 2.0 * k2.d_resource + 2.0 * k3.d_resource + k4.d_resource);
  const double x = s.coop_fraction +
                   h / 6.0 * (k1.d_coop + 2.0 * k2.d_coop + 2.0 * k3.d_coop + k4.d_coop);
  if (!std::isfinite(r) || !std::isfinite(x)) {
    throw IntegrationError("non-finite RK4 stage", 0.0);
  }
  return raw_state(r, x);
}

[[noreturn]] void rethrow_at(const IntegrationError& e, double t) {
  std::ostringstream os;
  os << e.what() << " at t = " << t;
  throw IntegrationError(os.str(), t);
}

}  // namespace

void IntegratorOptions::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(step_size) || !positive(max_time) || !positive(steady_tol) || !positive(window) ||
      !positive(depletion_floor)) {
    throw ModelError("integrator options must be strictly positive");
  }
  if (!(step_size < window && window < max_time)) {
    throw ModelError("integrator options require step_size < window < max_time");
  }
  if (!(record_interval >= 0.0)) throw ModelError("record_interval must be non-negative");
}

std::string to_string(Terminal t) {
  switch (t) {
    case Terminal::Steady: return "Steady";
    case Terminal::Depleted: return "Depleted";
    case Terminal::MaxTimeReached: return "MaxTimeReached";
  }
  return "?";
}

SystemState step_rk4(const ModelSpec& spec, const SystemState& s, double h) {
  if (!(h > 0.0)) throw ModelError("step size must be positive");
  return rk4_from(spec, s, drift(spec, s), h);
}

Trajectory integrate(const ModelSpec& spec, const SystemState& initial,
                     const IntegratorOptions& opts) {
  opts.validate();
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(initial);

  const double h = opts.step_size;
  const auto max_steps = static_cast<long long>(std::ceil(opts.max_time / h - 1e-9));
  const auto window_steps = static_cast<long long>(std::ceil(opts.window / h - 1e-9));
  const long long record_stride =
      opts.record_interval > 0.0
          ? std::max(1LL, static_cast<long long>(std::llround(opts.record_interval / h)))
          : 0;

  SystemState state = initial;
  long long quiet_steps = 0;  // consecutive steps with drift below steady_tol
  traj.terminal = Terminal::MaxTimeReached;
  long long k = 0;
  for (;; ++k) {
    if (state.resource < opts.depletion_floor) {
      traj.terminal = Terminal::Depleted;
      break;
    }
    const Drift k1 = drift(spec, state);
    if (k1.norm() < opts.steady_tol) {
      if (++quiet_steps > window_steps) {
        traj.terminal = Terminal::Steady;
        break;
      }
    } else {
      quiet_steps = 0;
    }
    if (k == max_steps) break;
    try {
      state = rk4_from(spec, state, k1, h);
    } catch (const IntegrationError& e) {
      rethrow_at(e, static_cast<double>(k) * h);
    }
    if (record_stride > 0 && (k + 1) % record_stride == 0) {
      traj.times.push_back(static_cast<double>(k + 1) * h);
      traj.states.push_back(state);
    }
  }
  if (k > 0 && (record_stride == 0 || k % record_stride != 0)) {
    traj.times.push_back(static_cast<double>(k) * h);
    traj.states.push_back(state);
  }
  return traj;
}

Trajectory sample_trajectory(const ModelSpec& spec, const SystemState& initial, double t_end,
                             double sample_dt, const IntegratorOptions& opts) {
  opts.validate();
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ModelError("t_end must be non-negative");
  if (!(sample_dt >= opts.step_size)) throw ModelError("sample_dt must be at least step_size");

  const auto steps_per_sample =
      std::max(1LL, static_cast<long long>(std::llround(sample_dt / opts.step_size)));
  const double h = sample_dt / static_cast<double>(steps_per_sample);
  const auto n_samples = static_cast<long long>(std::floor(t_end / sample_dt + 1e-9));

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n_samples + 1));
  traj.states.reserve(static_cast<std::size_t>(n_samples + 1));
  traj.times.push_back(0.0);
  traj.states.push_back(initial);

  SystemState state = initial;
  for (long long s = 1; s <= n_samples; ++s) {
    for (long long k = 0; k < steps_per_sample; ++k) {
      const double t = (static_cast<double>(s - 1) * steps_per_sample + k) * h;
      try {
        state = step_rk4(spec, state, h);
      } catch (const IntegrationError& e) {
        rethrow_at(e, t);
      }
    }
    traj.times.push_back(static_cast<double>(s) * sample_dt);
    traj.states.push_back(state);
  }

  if (state.resource < opts.depletion_floor) {
    traj.terminal = Terminal::Depleted;
  } else if (drift(spec, state).norm() < opts.steady_tol) {
    traj.terminal = Terminal::Steady;
  } else {
    traj.terminal = Terminal::MaxTimeReached;
  }
  return traj;
}

}  // namespace cprsim
