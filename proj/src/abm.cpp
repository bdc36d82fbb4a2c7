#include "cprsim/abm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cprsim/parallel.hpp"

namespace cprsim {

namespace {

// Stream indices below this are realizations; the network of realization r
// draws from stream kNetworkStreamOffset + r.
constexpr std::uint64_t kNetworkStreamOffset = 1ULL << 32;

}  // namespace

void AbmConfig::validate() const {
  if (n_players < 2) throw ModelError("abm.n_players must be at least 2");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ModelError("abm.t_end must be non-negative");
}

std::pair<double, double> normalized_extraction(int n_players, double growth_rate, double e_c,
                                                double e_d) {
  const double n = n_players;
  if (!(0.0 < n * e_c && n * e_c < growth_rate && growth_rate < n * e_d)) {
    throw ModelError("raw extraction rates must satisfy 0 < N e_c < T < N e_d");
  }
  return {n * e_c / growth_rate, n * e_d / growth_rate};
}

std::vector<Strategy> init_population(int n, double x0, Rng& rng) {
  if (n < 1) throw ModelError("population size must be positive");
  x0 = clamp_checked(x0, 0.0, 1.0, "x0");
  const auto n_coop = static_cast<int>(std::floor(x0 * n + 0.5));
  std::vector<Strategy> s(static_cast<std::size_t>(n), Strategy::Defect);
  std::fill_n(s.begin(), n_coop, Strategy::Cooperate);
  // Fisher-Yates with the explicit bounded draw.
  for (std::size_t i = s.size() - 1; i > 0; --i) {
    std::swap(s[i], s[rng.below(i + 1)]);
  }
  return s;
}

std::vector<Strategy> init_population(int n, double x0, std::uint64_t seed) {
  Rng rng(seed);
  return init_population(n, x0, rng);
}

void micro_step(AbmRun& run, const ModelSpec& spec, const Network& net, Rng& rng) {
  const auto n = static_cast<int>(run.strategies.size());
  const double r_prev = run.resource;
  const double x_prev = run.coop_fraction();

  const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  const std::size_t deg = net.degree(i);
  if (deg > 0) {
    const int j = net.neighbour(i, rng.below(deg));
    const Strategy si = run.strategies[static_cast<std::size_t>(i)];
    const Strategy sj = run.strategies[static_cast<std::size_t>(j)];
    if (i != j && si != sj) {
      // U = R e with raw e = e_hat T / N; the common factor T / N cancels in
      // (U_j - U_i) / dU_max, and dU_max = e_d - e_c is taken at R = 1.
      const double e_i = si == Strategy::Cooperate ? spec.e_c_hat() : spec.e_d_hat();
      const double e_j = sj == Strategy::Cooperate ? spec.e_c_hat() : spec.e_d_hat();
      const double du_max = spec.e_d_hat() - spec.e_c_hat();
      const double w = greed_eval(spec.greed(), SystemState(r_prev, x_prev));
      const double p = clamp_checked(0.5 + 0.5 * w * (r_prev * e_j - r_prev * e_i) / du_max, 0.0,
                                     1.0, "switch probability");
      if (rng.uniform() < p) {
        run.strategies[static_cast<std::size_t>(i)] = sj;
        run.n_coop += sj == Strategy::Cooperate ? 1 : -1;
      }
    }
  }

  const double next = r_prev + spec.growth_rate() / n * resource_balance(spec, r_prev, x_prev);
  run.resource = std::clamp(next, 0.0, 1.0);
  ++run.step_counter;
}

AbmRun run_realization(const AbmConfig& config, const ModelSpec& spec) {
  config.validate();
  Rng rng(config.seed);
  const Network net =
      build_network(config.network, config.n_players, stream_seed(config.seed, kNetworkStreamOffset));

  AbmRun run;
  run.strategies = init_population(config.n_players, config.initial.coop_fraction, rng);
  run.n_coop = static_cast<int>(
      std::count(run.strategies.begin(), run.strategies.end(), Strategy::Cooperate));
  run.resource = config.initial.resource;

  const auto blocks = static_cast<long long>(std::floor(config.t_end + 1e-9));
  run.samples.reserve(static_cast<std::size_t>(blocks + 1));
  run.samples.push_back({0.0, run.resource, run.coop_fraction()});
  for (long long t = 1; t <= blocks; ++t) {
    for (int k = 0; k < config.n_players; ++k) micro_step(run, spec, net, rng);
    run.samples.push_back({static_cast<double>(t), run.resource, run.coop_fraction()});
  }
  return run;
}

EnsembleSummary run_ensemble(const AbmConfig& config, const ModelSpec& spec, int n_real,
                             std::size_t threads) {
  if (n_real < 1) throw ModelError("ensemble needs at least one realization");
  config.validate();

  EnsembleSummary out;
  out.realizations.resize(static_cast<std::size_t>(n_real));
  out.seeds.resize(static_cast<std::size_t>(n_real));
  for (int r = 0; r < n_real; ++r) {
    out.seeds[static_cast<std::size_t>(r)] = stream_seed(config.seed, static_cast<std::uint64_t>(r));
  }
  parallel_for(static_cast<std::size_t>(n_real), threads, [&](std::size_t r) {
    AbmConfig c = config;
    c.seed = out.seeds[r];
    out.realizations[r] = run_realization(c, spec).samples;
  });

  const std::size_t n_times = out.realizations.front().size();
  const double n = n_real;
  for (std::size_t t = 0; t < n_times; ++t) {
    double sum_r = 0.0, sum_x = 0.0;
    for (const auto& series : out.realizations) {
      sum_r += series[t].resource;
      sum_x += series[t].coop_fraction;
    }
    const double mr = sum_r / n;
    const double mx = sum_x / n;
    double ss_r = 0.0, ss_x = 0.0;
    for (const auto& series : out.realizations) {
      ss_r += (series[t].resource - mr) * (series[t].resource - mr);
      ss_x += (series[t].coop_fraction - mx) * (series[t].coop_fraction - mx);
    }
    const auto stderr_of = [&](double ss) {
      return n_real > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    };
    out.times.push_back(out.realizations.front()[t].time);
    out.mean_resource.push_back(mr);
    out.mean_coop.push_back(mx);
    out.stderr_resource.push_back(stderr_of(ss_r));
    out.stderr_coop.push_back(stderr_of(ss_x));
  }
  return out;
}

}  // namespace cprsim
