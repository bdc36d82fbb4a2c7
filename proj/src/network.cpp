#include "cprsim/network.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "cprsim/model.hpp"
#include "cprsim/rng.hpp"

namespace cprsim {

namespace {

constexpr int kMaxSmallWorldAttempts = 100;

class AdjacencyBuilder {
 public:
  explicit AdjacencyBuilder(int n)
      : n_(n), matrix_(static_cast<std::size_t>(n) * n, 0), lists_(static_cast<std::size_t>(n)) {}

  bool has(int a, int b) const { return matrix_[index(a, b)] != 0; }

  void add(int a, int b) {
    matrix_[index(a, b)] = matrix_[index(b, a)] = 1;
  }
  void remove(int a, int b) {
    matrix_[index(a, b)] = matrix_[index(b, a)] = 0;
  }

  std::vector<std::vector<int>> finish() {
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        if (has(a, b)) lists_[static_cast<std::size_t>(a)].push_back(b);
      }
    }
    return std::move(lists_);
  }

 private:
  std::size_t index(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }

  int n_;
  std::vector<char> matrix_;
  std::vector<std::vector<int>> lists_;
};

Network barabasi_albert(int n, int m, Rng& rng) {
  AdjacencyBuilder adj(n);
  // Each endpoint appears once per incident edge, so uniform picks from this
  // list are degree-proportional.
  std::vector<int> endpoints;
  endpoints.reserve(static_cast<std::size_t>(2 * m) * n);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      adj.add(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }
  std::vector<int> targets;
  for (int node = m; node < n; ++node) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      const int t = endpoints.empty()
                        ? static_cast<int>(rng.below(static_cast<std::uint64_t>(node)))
                        : endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (int t : targets) {
      adj.add(node, t);
      endpoints.push_back(node);
      endpoints.push_back(t);
    }
  }
  return Network::from_adjacency(adj.finish());
}

Network watts_strogatz(int n, int k, double beta, Rng& rng) {
  AdjacencyBuilder adj(n);
  const int half = k / 2;
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j <= half; ++j) adj.add(i, (i + j) % n);
  }
  for (int j = 1; j <= half; ++j) {
    for (int i = 0; i < n; ++i) {
      const int old_target = (i + j) % n;
      if (rng.uniform() >= beta || !adj.has(i, old_target)) continue;
      int degree_i = 0;
      for (int v = 0; v < n; ++v) degree_i += adj.has(i, v) ? 1 : 0;
      if (degree_i >= n - 1) continue;  // nowhere to rewire to
      int target;
      do {
        target = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      } while (target == i || adj.has(i, target));
      adj.remove(i, old_target);
      adj.add(i, target);
    }
  }
  return Network::from_adjacency(adj.finish());
}

}  // namespace

std::string to_string(NetworkKind k) {
  switch (k) {
    case NetworkKind::Complete: return "complete";
    case NetworkKind::BarabasiAlbert: return "ba";
    case NetworkKind::SmallWorld: return "sw";
  }
  return "?";
}

NetworkKind parse_network_kind(const std::string& name) {
  if (name == "complete") return NetworkKind::Complete;
  if (name == "ba") return NetworkKind::BarabasiAlbert;
  if (name == "sw") return NetworkKind::SmallWorld;
  throw ModelError("unknown network kind '" + name + "' (expected complete, ba, sw)");
}

Network Network::complete(int n) {
  Network net;
  net.n_ = n;
  net.complete_ = true;
  return net;
}

Network Network::from_adjacency(std::vector<std::vector<int>> adjacency) {
  Network net;
  net.n_ = static_cast<int>(adjacency.size());
  net.adjacency_ = std::move(adjacency);
  return net;
}

std::size_t Network::degree(int node) const {
  if (complete_) return static_cast<std::size_t>(n_ - 1);
  return adjacency_[static_cast<std::size_t>(node)].size();
}

std::size_t Network::edge_count() const {
  if (complete_) return static_cast<std::size_t>(n_) * (n_ - 1) / 2;
  std::size_t sum = 0;
  for (const auto& row : adjacency_) sum += row.size();
  return sum / 2;
}

std::span<const int> Network::neighbours(int node) const {
  if (complete_) throw std::logic_error("complete network has no explicit adjacency");
  return adjacency_[static_cast<std::size_t>(node)];
}

bool Network::connected() const {
  if (complete_ || n_ <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u : adjacency_[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++visited;
        frontier.push(u);
      }
    }
  }
  return visited == n_;
}

Network build_network(const NetworkSpec& spec, int n, std::uint64_t seed) {
  if (n < 2) throw ModelError("network needs at least 2 nodes");
  Rng rng(seed);
  switch (spec.kind) {
    case NetworkKind::Complete:
      return Network::complete(n);
    case NetworkKind::BarabasiAlbert:
      if (spec.ba_m < 1 || spec.ba_m >= n) throw ModelError("BA network requires 1 <= m < n");
      return barabasi_albert(n, spec.ba_m, rng);
    case NetworkKind::SmallWorld: {
      if (spec.sw_k < 2 || spec.sw_k % 2 != 0 || spec.sw_k >= n) {
        throw ModelError("small-world network requires even k with 2 <= k < n");
      }
      if (!(spec.sw_beta >= 0.0 && spec.sw_beta <= 1.0)) {
        throw ModelError("small-world rewiring probability must lie in [0, 1]");
      }
      for (int attempt = 0; attempt < kMaxSmallWorldAttempts; ++attempt) {
        Network net = watts_strogatz(n, spec.sw_k, spec.sw_beta, rng);
        if (net.connected()) return net;
      }
      throw ModelError("could not draw a connected small-world network");
    }
  }
  throw ModelError("unhandled network kind");
}

}  // namespace cprsim
