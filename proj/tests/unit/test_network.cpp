#include <algorithm>
#include <set>

#include "doctest.h"

#include "cprsim/network.hpp"
#include "cprsim/model.hpp"

using namespace cprsim;

namespace {

void check_simple(const Network& net) {
  std::size_t degree_sum = 0;
  for (int v = 0; v < net.size(); ++v) {
    const auto nb = net.neighbours(v);
    std::set<int> unique(nb.begin(), nb.end());
    CHECK(unique.size() == nb.size());
    CHECK_FALSE(unique.count(v));
    for (int u : nb) {
      const auto back = net.neighbours(u);
      CHECK(std::find(back.begin(), back.end(), v) != back.end());
    }
    degree_sum += net.degree(v);
  }
  CHECK(degree_sum == 2 * net.edge_count());
}

}  // namespace

TEST_CASE("complete graph") {
  const Network net = build_network({NetworkKind::Complete}, 5, 1);
  for (int v = 0; v < 5; ++v) {
    CHECK(net.degree(v) == 4);
    std::set<int> seen;
    for (std::size_t k = 0; k < 4; ++k) seen.insert(net.neighbour(v, k));
    CHECK(seen.size() == 4);
    CHECK_FALSE(seen.count(v));
  }
  CHECK(net.edge_count() == 10);
  CHECK(net.connected());
}

TEST_CASE("barabasi-albert edge count") {
  NetworkSpec spec{NetworkKind::BarabasiAlbert};
  spec.ba_m = 3;
  const Network net = build_network(spec, 100, 42);
  CHECK(net.edge_count() == 3 * 97 + 3);
  check_simple(net);
  CHECK(net.connected());
  for (int v = 0; v < 100; ++v) CHECK(net.degree(v) >= 3);

  spec.ba_m = 50;
  const Network big = build_network(spec, 500, 7);
  CHECK(big.edge_count() == 50 * 49 / 2 + 50 * 450);
}

TEST_CASE("small-world ring and rewiring") {
  NetworkSpec spec{NetworkKind::SmallWorld};
  spec.sw_k = 4;
  spec.sw_beta = 0.0;
  const Network ring = build_network(spec, 100, 3);
  for (int v = 0; v < 100; ++v) {
    CHECK(ring.degree(v) == 4);
    const auto nb = ring.neighbours(v);
    for (int d : {1, 2}) {
      CHECK(std::find(nb.begin(), nb.end(), (v + d) % 100) != nb.end());
      CHECK(std::find(nb.begin(), nb.end(), (v + 100 - d) % 100) != nb.end());
    }
  }
  spec.sw_beta = 0.3;
  const Network rewired = build_network(spec, 100, 3);
  CHECK(rewired.edge_count() == 200);
  check_simple(rewired);
  CHECK(rewired.connected());
}

TEST_CASE("network determinism and validation") {
  NetworkSpec spec{NetworkKind::BarabasiAlbert};
  spec.ba_m = 4;
  const Network a = build_network(spec, 60, 9), b = build_network(spec, 60, 9);
  for (int v = 0; v < 60; ++v) {
    const auto na = a.neighbours(v), nb = b.neighbours(v);
    CHECK(std::equal(na.begin(), na.end(), nb.begin(), nb.end()));
  }
  spec.ba_m = 60;
  CHECK_THROWS(build_network(spec, 60, 1));
  NetworkSpec sw{NetworkKind::SmallWorld};
  sw.sw_k = 5;
  CHECK_THROWS(build_network(sw, 60, 1));
  CHECK(parse_network_kind("ba") == NetworkKind::BarabasiAlbert);
  CHECK(to_string(NetworkKind::SmallWorld) == "sw");
  CHECK_THROWS(parse_network_kind("grid"));
}
