#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cprsim/model.hpp"
#include "cprsim/network.hpp"
#include "cprsim/rng.hpp"

namespace cprsim {

enum class Strategy : std::uint8_t { Defect = 0, Cooperate = 1 };

struct AbmConfig {
  int n_players = 500;
  NetworkSpec network{};
  std::uint64_t seed = 1;
  double t_end = 50.0;  // macroscopic time units
  SystemState initial{0.5, 0.5};

  void validate() const;
  friend bool operator==(const AbmConfig&, const AbmConfig&) = default;
};

/// Converts raw per-player extraction rates to normalized form,
/// e_hat = N e / T. Requires 0 < N e_c < T < N e_d.
std::pair<double, double> normalized_extraction(int n_players, double growth_rate, double e_c,
                                                double e_d);

struct AbmSample {
  double time = 0.0;
  double resource = 0.0;
  double coop_fraction = 0.0;
};

struct AbmRun {
  std::vector<Strategy> strategies;
  int n_coop = 0;
  double resource = 0.0;
  long long step_counter = 0;  // micro-steps taken (k)
  std::vector<AbmSample> samples;

  double coop_fraction() const {
    return static_cast<double>(n_coop) / static_cast<double>(strategies.size());
  }
};

/// round-half-up(x0 n) cooperators at uniformly random positions.
std::vector<Strategy> init_population(int n, double x0, Rng& rng);
std::vector<Strategy> init_population(int n, double x0, std::uint64_t seed);

/// One replicator-rule update followed by the discretized resource step.
/// The resource update uses the state before the strategy switch.
void micro_step(AbmRun& run, const ModelSpec& spec, const Network& net, Rng& rng);

/// N micro-steps per unit of macroscopic time; (R, x) sampled after every
/// completed block, i.e. at t = 0, 1, ..., floor(t_end).
AbmRun run_realization(const AbmConfig& config, const ModelSpec& spec);

struct EnsembleSummary {
  std::vector<double> times;
  std::vector<double> mean_resource, stderr_resource;
  std::vector<double> mean_coop, stderr_coop;
  // realizations[r][t]: the raw series behind the statistics.
  std::vector<std::vector<AbmSample>> realizations;
  std::vector<std::uint64_t> seeds;
};

/// Realization r runs with seed stream_seed(config.seed, r); the summary is
/// independent of how realizations are scheduled across threads.
EnsembleSummary run_ensemble(const AbmConfig& config, const ModelSpec& spec, int n_real,
                             std::size_t threads = 0);

}  // namespace cprsim
