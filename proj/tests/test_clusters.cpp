#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "invperc/clusters.hpp"
#include "invperc/corner.hpp"
#include "invperc/interchange.hpp"

using namespace invperc;
using namespace invperc::clusters;

namespace {

lattice::LatticeGraph torus(int n) {
  return lattice::build_lattice(lattice::Kind::Z2Torus, {n, n},
                                lattice::Boundary::Periodic);
}

std::vector<char> bernoulli_edges(const lattice::LatticeGraph& g, double p,
                                  std::uint64_t seed) {
  std::vector<char> open(g.edge_count(), 0);
  for (int e = 0; e < g.edge_count(); ++e) {
    auto s = rng::make_stream(seed, "bernoulli.edge", e);
    open[e] = s.next_unit() < p ? 1 : 0;
  }
  return open;
}

// Independent BFS labelling oracle for components.
std::vector<int> bfs_components(const lattice::LatticeGraph& g,
                                const std::vector<char>& open) {
  std::vector<int> label(g.vertex_count(), -1);
  int next = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (label[v] >= 0) continue;
    label[v] = next;
    std::queue<int> q;
    q.push(v);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      auto ns = g.neighbors(u);
      auto es = g.incident_edges(u);
      for (std::size_t i = 0; i < ns.size(); ++i)
        if (open[es[i]] && label[ns[i]] < 0) {
          label[ns[i]] = next;
          q.push(ns[i]);
        }
    }
    ++next;
  }
  return label;
}

}  // namespace

TEST_CASE("components against the BFS oracle") {
  auto g = torus(12);
  SUBCASE("nothing open gives singletons") {
    auto part = components_edges(g, [](int) { return false; });
    CHECK(part.count == g.vertex_count());
  }
  SUBCASE("everything open gives one component") {
    auto part = components_edges(g, [](int) { return true; });
    CHECK(part.count == 1);
    CHECK(part.size[0] == g.vertex_count());
  }
  SUBCASE("random configurations agree with BFS") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      auto open = bernoulli_edges(g, 0.45, seed);
      auto part = components_edges(g, [&](int e) { return open[e] != 0; });
      auto oracle = bfs_components(g, open);
      std::map<int, int> bij;
      for (int v = 0; v < g.vertex_count(); ++v) {
        auto [it, fresh] = bij.insert({oracle[v], part.component[v]});
        CHECK(it->second == part.component[v]);
      }
      long total = 0;
      for (long s : part.size) total += s;
      CHECK(total == g.vertex_count());
    }
  }
}

TEST_CASE("site components mark closed vertices") {
  auto g = torus(8);
  auto part = components_sites(g, [&](int v) { return v % 2 == 0; });
  for (int v = 0; v < g.vertex_count(); ++v)
    CHECK((part.component[v] >= 0) == (v % 2 == 0));
}

TEST_CASE("ends classification from boundary contact") {
  auto g = lattice::build_lattice(lattice::Kind::Z2Window, {10, 10},
                                  lattice::Boundary::Free);
  SUBCASE("full lattice spans two directions") {
    auto part = components_edges(g, [](int) { return true; });
    CHECK(ends_classification(part, 0) == EndsClass::SpanningTwoDirections);
  }
  SUBCASE("interior loop is finite") {
    std::set<int> loop_edges;
    int a = g.vertex_id({4, 4}), b = g.vertex_id({5, 4});
    int c = g.vertex_id({5, 5}), d = g.vertex_id({4, 5});
    loop_edges.insert(g.edge_between(a, b));
    loop_edges.insert(g.edge_between(b, c));
    loop_edges.insert(g.edge_between(c, d));
    loop_edges.insert(g.edge_between(d, a));
    auto part = components_edges(g, [&](int e) { return loop_edges.count(e) > 0; });
    CHECK(ends_classification(part, part.component[a]) == EndsClass::Finite);
  }
  SUBCASE("a full row spans two directions; a half row only one") {
    auto row_edge = [&](int e) {
      return g.edge(e).kind == lattice::EdgeKind::Horizontal &&
             g.coord(g.edge(e).u).y == 3;
    };
    auto part = components_edges(g, row_edge);
    CHECK(ends_classification(part, part.component[g.vertex_id({0, 3})]) ==
          EndsClass::SpanningTwoDirections);
    auto half = [&](int e) {
      return row_edge(e) && g.coord(g.edge(e).u).x < 4;
    };
    auto part2 = components_edges(g, half);
    CHECK(ends_classification(part2, part2.component[g.vertex_id({0, 3})]) ==
          EndsClass::SpanningOneDirection);
  }
}

TEST_CASE("sdrw transition law") {
  auto g = torus(8);
  SUBCASE("isolated vertex stays put") {
    auto s = rng::make_stream(1, "w");
    for (int i = 0; i < 50; ++i)
      CHECK(sdrw_step(g, [](int) { return false; }, 5, s) == 5);
  }
  SUBCASE("fully open neighborhood moves uniformly") {
    auto s = rng::make_stream(2, "w");
    std::map<int, long> counts;
    const long kSteps = 100000;
    for (long i = 0; i < kSteps; ++i)
      ++counts[sdrw_step(g, [](int) { return true; }, 0, s)];
    CHECK(counts.size() == 4);
    for (auto& [v, c] : counts) {
      double dev = std::abs(double(c) / kSteps - 0.25);
      CHECK(dev < 3 * std::sqrt(0.25 * 0.75 / kSteps));
    }
  }
  SUBCASE("empirical frequencies match p(x,y) on a partial neighborhood") {
    auto open = bernoulli_edges(g, 0.5, 7);
    int v = 0;
    int open_deg = 0;
    for (int e : g.incident_edges(v)) open_deg += open[e];
    REQUIRE(open_deg > 0);
    REQUIRE(open_deg < 4);
    auto s = rng::make_stream(3, "w");
    std::map<int, long> counts;
    const long kSteps = 100000;
    for (long i = 0; i < kSteps; ++i)
      ++counts[sdrw_step(g, [&](int e) { return open[e] != 0; }, v, s)];
    double stay = 1.0 - open_deg / 4.0;
    CHECK(std::abs(double(counts[v]) / kSteps - stay) <
          3 * std::sqrt(stay * (1 - stay) / kSteps));
    auto ns = g.neighbors(v);
    auto es = g.incident_edges(v);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (ns[i] == v) continue;
      double expect = open[es[i]] ? 0.25 : 0.0;
      double freq = double(counts.count(ns[i]) ? counts[ns[i]] : 0) / kSteps;
      if (expect == 0.0)
        CHECK(freq == 0.0);
      else
        CHECK(std::abs(freq - expect) < 3 * std::sqrt(expect * (1 - expect) / kSteps));
    }
  }
  SUBCASE("the walk never leaves its starting cluster") {
    auto open = bernoulli_edges(g, 0.4, 9);
    auto part = components_edges(g, [&](int e) { return open[e] != 0; });
    auto s = rng::make_stream(4, "w");
    int v = 17;
    int home = part.component[v];
    for (int i = 0; i < 2000; ++i) {
      v = sdrw_step(g, [&](int e) { return open[e] != 0; }, v, s);
      CHECK(part.component[v] == home);
    }
  }
}

TEST_CASE("ball classes distinguish local configurations and quotient translations") {
  auto g = torus(10);
  auto all_open = [](int) { return true; };
  auto all_closed = [](int) { return false; };
  CHECK(ball_class_edges(g, all_open, 0, 1) != ball_class_edges(g, all_closed, 0, 1));
  CHECK(ball_class_edges(g, all_open, 0, 1) == ball_class_edges(g, all_open, 37, 1));
  auto open = bernoulli_edges(g, 0.5, 3);
  auto pred = [&](int e) { return open[e] != 0; };
  std::set<std::uint64_t> classes;
  for (int v = 0; v < g.vertex_count(); ++v) classes.insert(ball_class_edges(g, pred, v, 1));
  CHECK(classes.size() > 2);
  CHECK(classes.size() <= 16);  // 4 incident-edge bits at r=1
}

TEST_CASE("stationarity: zero steps is trivially identical") {
  auto g = torus(8);
  auto make = [&](std::uint64_t seed) {
    auto open = bernoulli_edges(g, 0.5, 4000 + seed);
    return sdrw_trace(g, [open](int e) { return open[e] != 0; }, 0, 0, 1,
                      rng::make_stream(seed, "walk"));
  };
  auto rep = stationarity_check(make, 0, 400);
  CHECK(!rep.rejected(0.01));
}

TEST_CASE("sdrw on torus bernoulli(1/2) is stationary at step 10") {
  auto g = torus(10);
  auto make = [&](std::uint64_t seed) {
    auto open = bernoulli_edges(g, 0.5, 9000 + seed);
    return sdrw_trace(g, [open](int e) { return open[e] != 0; }, 0, 10, 1,
                      rng::make_stream(seed, "walk"));
  };
  auto rep = stationarity_check(make, 10, 1500);
  CHECK(!rep.rejected(0.01));
}

TEST_CASE("interchange orbit trace is stationary") {
  auto g = torus(6);
  auto make = [&](std::uint64_t seed) {
    auto tl = interchange::generate_timeline(g, 1.0, 7000 + seed);
    auto res = interchange::run_interchange(g, tl, 7000 + seed);
    std::vector<char> used(g.edge_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) used[e] = !tl.rings[e].empty();
    return orbit_trace(g, res.pi, [used](int e) { return used[e] != 0; }, 0, 5, 1);
  };
  auto rep = stationarity_check(make, 5, 1200);
  CHECK(!rep.rejected(0.01));
}

TEST_CASE("density along traces") {
  SUBCASE("constant-true predicate gives density 1") {
    std::vector<char> ind(100, 1);
    auto est = density_along(ind);
    CHECK(est.final_mean == 1.0);
    for (double m : est.prefix_mean) CHECK(m == 1.0);
  }
  SUBCASE("staircase orbit: next-edge-horizontal density is exactly 1/2 at even prefixes") {
    auto cfg = corner::make_constant_config({-300, 300, -300, 300}, +1, +1);
    auto path = corner::trace_path(cfg, {0, 0});
    REQUIRE(path.vertices.size() > 500);
    std::vector<char> ind;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
      ind.push_back(path.vertices[i + 1].y == path.vertices[i].y ? 1 : 0);
    auto est = density_along(ind);
    for (std::size_t n = 2; n <= est.prefix_mean.size(); n += 2)
      CHECK(est.prefix_mean[n - 1] == 0.5);
  }
  SUBCASE("two traces of the same periodic path converge to the same limit") {
    auto cfg = corner::make_constant_config({-200, 200, -200, 200}, +1, +1);
    auto path = corner::trace_path(cfg, {0, 0});
    REQUIRE(path.vertices.size() > 320);
    auto indicators = [&](std::size_t from, std::size_t len) {
      std::vector<char> ind;
      for (std::size_t i = from; i < from + len; ++i)
        ind.push_back(path.vertices[i + 1].y == path.vertices[i].y ? 1 : 0);
      return ind;
    };
    auto a = density_along(indicators(0, 300));
    auto b = density_along(indicators(7, 300));
    CHECK(std::abs(a.final_mean - b.final_mean) < 0.01);
  }
}

TEST_CASE("mass transport identity on the torus") {
  auto g = torus(16);
  auto open = bernoulli_edges(g, 0.5, 21);
  auto pred = [&](int e) { return open[e] != 0; };

  SUBCASE("identity pair function: both sides 1") {
    auto rep = mass_transport_check(g, phi_identity());
    CHECK(rep.send_sum == doctest::Approx(1.0));
    CHECK(rep.receive_sum == doctest::Approx(1.0));
    CHECK(rep.holds());
  }
  SUBCASE("omega adjacency balances exactly") {
    auto rep = mass_transport_check(g, phi_adjacency(g, pred));
    CHECK(rep.holds());
    CHECK(rep.send_sum > 0.0);
  }
  SUBCASE("cluster share balances to 1e-9") {
    auto rep = mass_transport_check(g, phi_cluster_share(g, pred, 3));
    CHECK(rep.holds());
    CHECK(rep.send_sum == doctest::Approx(1.0));  // unit mass split
  }
  SUBCASE("permutation transport: both sides exactly 1") {
    auto tl = interchange::generate_timeline(g, 1.0, 5);
    auto res = interchange::run_interchange(g, tl, 5);
    auto rep = mass_transport_check(g, phi_permutation(res.pi));
    CHECK(rep.send_sum == doctest::Approx(1.0));
    CHECK(rep.receive_sum == doctest::Approx(1.0));
    CHECK(rep.discrepancy == 0.0);
  }
  SUBCASE("range exceeding half the torus is rejected") {
    CHECK_THROWS(mass_transport_check(g, phi_cluster_share(g, pred, 8)));
    auto window = lattice::build_lattice(lattice::Kind::Z2Window, {8, 8},
                                         lattice::Boundary::Free);
    CHECK_THROWS(mass_transport_check(window, phi_identity()));
  }
}
