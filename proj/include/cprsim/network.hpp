#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cprsim {

enum class NetworkKind { Complete, BarabasiAlbert, SmallWorld };

std::string to_string(NetworkKind k);
NetworkKind parse_network_kind(const std::string& name);

struct NetworkSpec {
  NetworkKind kind = NetworkKind::Complete;
  int ba_m = 50;        // edges per new node
  int sw_k = 100;       // ring neighbours (even)
  double sw_beta = 0.1;  // rewiring probability

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Simple undirected graph. The complete graph is kept implicit.
class Network {
 public:
  static Network complete(int n);
  static Network from_adjacency(std::vector<std::vector<int>> adjacency);

  int size() const { return n_; }
  bool is_complete() const { return complete_; }
  std::size_t degree(int node) const;
  std::size_t edge_count() const;
  /// Only valid for explicit graphs.
  std::span<const int> neighbours(int node) const;
  bool connected() const;

  /// k-th neighbour of `node`, 0 <= k < degree(node).
  int neighbour(int node, std::size_t k) const {
    if (complete_) return static_cast<int>(k) >= node ? static_cast<int>(k) + 1 : static_cast<int>(k);
    return adjacency_[static_cast<std::size_t>(node)][k];
  }

 private:
  int n_ = 0;
  bool complete_ = false;
  std::vector<std::vector<int>> adjacency_;
};

/// Deterministic for a given seed. Barabasi-Albert growth starts from an
/// m-clique; small-world graphs are Watts-Strogatz ring rewires, redrawn
/// until connected.
Network build_network(const NetworkSpec& spec, int n, std::uint64_t seed);

}  // namespace cprsim
