#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "invperc/loopmodel.hpp"
#include "invperc/random.hpp"

using namespace invperc;
using namespace invperc::loopon;

namespace {

lattice::LatticeGraph hexagon() {
  return lattice::build_lattice(lattice::Kind::HexPatch, {3, 2},
                                lattice::Boundary::Free);
}

lattice::LatticeGraph two_squares() {
  return lattice::build_lattice(lattice::Kind::Z2Window, {3, 2},
                                lattice::Boundary::Free);
}

// Independent brute-force oracle: enumerate subsets directly, check the
// degree condition from scratch, count loops with a fresh DFS.
std::map<std::uint32_t, double> brute_distribution(const lattice::LatticeGraph& g,
                                                   double x, double n) {
  std::map<std::uint32_t, double> weights;
  int m = g.edge_count();
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> deg(g.vertex_count(), 0);
    int edges = 0;
    for (int e = 0; e < m; ++e)
      if (mask & (1u << e)) {
        ++deg[g.edge(e).u];
        ++deg[g.edge(e).v];
        ++edges;
      }
    bool ok = true;
    for (int d : deg)
      if (d != 0 && d != 2) ok = false;
    if (!ok) continue;
    // loop count by DFS over open edges
    std::vector<char> seen(g.vertex_count(), 0);
    int loops = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (seen[v] || deg[v] == 0) continue;
      ++loops;
      std::vector<int> stack{v};
      seen[v] = 1;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        auto ns = g.neighbors(u);
        auto es = g.incident_edges(u);
        for (std::size_t i = 0; i < ns.size(); ++i)
          if ((mask & (1u << es[i])) && !seen[ns[i]]) {
            seen[ns[i]] = 1;
            stack.push_back(ns[i]);
          }
      }
    }
    weights[mask] = std::pow(x, edges) * std::pow(n, loops);
  }
  double z = 0;
  for (auto& [k, w] : weights) z += w;
  for (auto& [k, w] : weights) w /= z;
  return weights;
}

}  // namespace

TEST_CASE("loop config validity") {
  auto g = hexagon();
  std::vector<char> empty(g.edge_count(), 0);
  CHECK(is_loop_config(g, empty));
  std::vector<char> one(g.edge_count(), 0);
  one[0] = 1;
  CHECK(!is_loop_config(g, one));
  std::vector<char> full(g.edge_count(), 1);
  CHECK(is_loop_config(g, full));  // the hexagon cycle
  CHECK(count_loops(g, full) == 1);
  CHECK(count_loops(g, empty) == 0);
}

TEST_CASE("log weights") {
  GibbsParams params{0.7, 2.0};
  CHECK(log_weight(0, 0, params) == 0.0);
  CHECK(log_weight(6, 1, params) ==
        doctest::Approx(6 * std::log(0.7) + std::log(2.0)));
  GibbsParams n_one{0.7, 1.0};
  CHECK(log_weight(6, 1, n_one) == doctest::Approx(6 * std::log(0.7)));
  CHECK(log_weight(4, 1, n_one) == doctest::Approx(4 * std::log(0.7)));
  GibbsParams x_zero{0.0, 2.0};
  CHECK(log_weight(1, 1, x_zero) == -std::numeric_limits<double>::infinity());
  CHECK(log_weight(0, 0, x_zero) == 0.0);
}

TEST_CASE("exact enumeration on the single hexagon") {
  auto g = hexagon();
  REQUIRE(g.faces().size() == 1);
  REQUIRE(g.edge_count() == 6);
  for (auto [x, n] : {std::pair{0.5, 0.5}, std::pair{1.0, 2.0}, std::pair{2.0, 2.0}}) {
    auto en = enumerate_exact(g, {x, n});
    // Only the empty and the full configurations are valid.
    REQUIRE(en.configs.size() == 2);
    double w = std::pow(x, 6) * n;
    double expect_full = w / (1.0 + w);
    CHECK(en.probability_of((1u << 6) - 1) == doctest::Approx(expect_full));
    CHECK(en.probability_of(0) == doctest::Approx(1.0 - expect_full));
    double total = 0;
    for (double p : en.probability) total += p;
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("enumeration matches the independent brute-force oracle") {
  auto g = two_squares();
  REQUIRE(g.edge_count() == 7);
  REQUIRE(g.faces().size() == 2);
  for (auto [x, n] : {std::pair{0.8, 1.5}, std::pair{1.3, 0.6}}) {
    auto oracle = brute_distribution(g, x, n);
    auto en = enumerate_exact(g, {x, n});
    REQUIRE(en.configs.size() == oracle.size());
    for (std::size_t i = 0; i < en.configs.size(); ++i)
      CHECK(en.probability[i] == doctest::Approx(oracle.at(en.configs[i])));
  }
  // x = 0 concentrates on the empty configuration.
  auto en0 = enumerate_exact(g, {0.0, 2.0});
  CHECK(en0.probability_of(0) == doctest::Approx(1.0));
}

TEST_CASE("metropolis flip mechanics") {
  auto g = two_squares();
  LoopConfig cfg(g);
  GibbsParams params{1.0, 1.0};
  auto s = rng::make_stream(3, "test");

  SUBCASE("invalid proposal leaves the configuration unchanged") {
    // Two unit squares sharing only the corner vertex (1,1): opening one
    // and flipping the other would give that vertex degree 4.
    auto grid = lattice::build_lattice(lattice::Kind::Z2Window, {3, 3},
                                       lattice::Boundary::Free);
    REQUIRE(grid.faces().size() == 4);
    LoopConfig gc(grid);
    CHECK(Metropolis::flip(gc, 0, params, s).accepted);  // square at (0,0)
    auto bits = gc.bits();
    auto r = Metropolis::flip(gc, 3, params, s);  // square at (1,1)
    CHECK(!r.proposal_valid);
    CHECK(!r.accepted);
    CHECK(gc.bits() == bits);
    CHECK(gc.consistent());
  }

  SUBCASE("acceptance ratio from the empty configuration is x^6 n on a hexagon") {
    auto hexg = hexagon();
    GibbsParams p2{0.5, 2.0};
    LoopConfig hc(hexg);
    auto r = Metropolis::flip(hc, 0, p2, s);
    CHECK(r.proposal_valid);
    CHECK(r.log_ratio == doctest::Approx(6 * std::log(0.5) + std::log(2.0)));
    CHECK(r.cycle_length == 6);
    CHECK(r.bound_ok);
  }

  SUBCASE("x -> large makes edge-adding flips certain") {
    auto hexg = hexagon();
    LoopConfig hc(hexg);
    auto r = Metropolis::flip(hc, 0, {10.0, 1.0}, s);
    CHECK(r.proposal_valid);
    CHECK(r.accepted);
    CHECK(r.log_ratio > 0);
  }
}

TEST_CASE("long-run frequencies match the exact distribution (TV < 0.01)") {
  auto g = hexagon();
  GibbsParams params{1.0, 2.0};
  auto en = enumerate_exact(g, params);
  LoopConfig cfg(g);
  auto pick = rng::make_stream(11, "face");
  auto coin = rng::make_stream(11, "coin");
  std::map<std::uint32_t, long> counts;
  const long kProposals = 200000;
  for (long i = 0; i < kProposals; ++i) {
    Metropolis::flip(cfg, static_cast<int>(pick.next_below(g.faces().size())),
                     params, coin);
    ++counts[config_mask(cfg)];
  }
  double tv = 0;
  for (std::size_t i = 0; i < en.configs.size(); ++i) {
    double emp = double(counts[en.configs[i]]) / kProposals;
    tv += std::abs(emp - en.probability[i]);
  }
  CHECK(tv / 2 < 0.01);
}

TEST_CASE("detailed balance flows on the two-square patch") {
  auto g = two_squares();
  GibbsParams params{0.9, 1.7};
  LoopConfig cfg(g);
  auto pick = rng::make_stream(5, "face");
  auto coin = rng::make_stream(5, "coin");
  std::map<std::pair<std::uint32_t, std::uint32_t>, long> flows;
  std::uint32_t prev = config_mask(cfg);
  const long kProposals = 400000;
  for (long i = 0; i < kProposals; ++i) {
    Metropolis::flip(cfg, static_cast<int>(pick.next_below(g.faces().size())),
                     params, coin);
    std::uint32_t cur = config_mask(cfg);
    if (cur != prev) ++flows[{prev, cur}];
    prev = cur;
  }
  // Reversibility: empirical flow counts a->b and b->a agree within noise.
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  int checked = 0;
  for (auto& [key, fab] : flows) {
    auto rev = std::pair{key.second, key.first};
    if (seen.count(rev)) continue;
    seen.insert(key);
    long fba = flows.count(rev) ? flows.at(rev) : 0;
    double sigma = std::sqrt(double(fab + fba));
    CHECK(std::abs(double(fab - fba)) < 5 * sigma + 5);
    ++checked;
  }
  CHECK(checked >= 3);
}

TEST_CASE("finite energy bound") {
  CHECK(check_finite_energy_bound(0.0, 6, {1.0, 1.0}));
  CHECK(!check_finite_energy_bound(0.5, 6, {1.0, 1.0}));   // must be exactly 1
  CHECK(!check_finite_energy_bound(-0.5, 6, {1.0, 1.0}));
  // hexagon flip bounds at (x,n): |log ratio| <= 6(|log x| + |log n|)
  for (auto [x, n] : {std::pair{0.5, 2.0}, std::pair{2.0, 0.5}, std::pair{0.5, 0.5}}) {
    double ratio = 6 * std::log(x) + std::log(n);
    CHECK(check_finite_energy_bound(ratio, 6, {x, n}));
  }
  // Every proposal in a long mixed run satisfies the bound.
  auto g = two_squares();
  for (auto [x, n] : {std::pair{0.5, 2.0}, std::pair{2.0, 2.0}, std::pair{0.5, 0.5}}) {
    auto res = run_chain(g, {x, n}, 500, 100, 99);
    CHECK(res.bound_violations == 0);
    CHECK(res.final_config.consistent());
  }
}

TEST_CASE("caches stay consistent through a long chain") {
  auto g = lattice::build_lattice(lattice::Kind::HexPatch, {7, 6},
                                  lattice::Boundary::Free);
  auto res = run_chain(g, {1.2, 2.0}, 50, 10, 123);
  CHECK(res.final_config.consistent());
  CHECK(res.bound_violations == 0);
  CHECK(res.proposals == 50 * static_cast<long>(g.faces().size()));
  REQUIRE(!res.samples.empty());
  for (auto& s : res.samples) {
    CHECK(s.loops >= 0);
    CHECK(s.open_edges >= 0);
    if (s.loops > 0) CHECK(s.longest_loop >= 4);
  }
}

TEST_CASE("trifurcation counting") {
  SUBCASE("loop configurations have none") {
    auto g = hexagon();
    std::vector<char> full(g.edge_count(), 1);
    CHECK(count_trifurcations(g, full) == 0);
  }
  SUBCASE("a Y shape has exactly one") {
    // On a 3x3 window, open the three edges meeting at the center.
    auto g = lattice::build_lattice(lattice::Kind::Z2Window, {3, 3},
                                    lattice::Boundary::Free);
    std::vector<char> open(g.edge_count(), 0);
    int c = g.vertex_id({1, 1});
    int count = 0;
    for (int e : g.incident_edges(c)) {
      if (count == 3) break;
      open[e] = 1;
      ++count;
    }
    REQUIRE(count == 3);
    CHECK(count_trifurcations(g, open) == 1);
  }
  SUBCASE("matches a brute-force recount on random subsets") {
    auto g = lattice::build_lattice(lattice::Kind::Z2Window, {4, 4},
                                    lattice::Boundary::Free);
    auto s = rng::make_stream(7, "tri");
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<char> open(g.edge_count(), 0);
      for (auto& b : open) b = s.next_unit() < 0.45 ? 1 : 0;
      // Oracle: for each vertex, delete it and recount components among
      // its former open-neighbors by DFS over the full remaining graph.
      int oracle = 0;
      for (int v = 0; v < g.vertex_count(); ++v) {
        std::vector<int> nbrs;
        auto ns = g.neighbors(v);
        auto es = g.incident_edges(v);
        for (std::size_t i = 0; i < ns.size(); ++i)
          if (open[es[i]]) nbrs.push_back(ns[i]);
        if (nbrs.size() < 3) continue;
        std::vector<int> label(g.vertex_count(), -1);
        int parts = 0;
        for (int start : nbrs) {
          if (label[start] >= 0) continue;
          ++parts;
          std::vector<int> stack{start};
          label[start] = parts;
          while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            auto uns = g.neighbors(u);
            auto ues = g.incident_edges(u);
            for (std::size_t j = 0; j < uns.size(); ++j)
              if (uns[j] != v && open[ues[j]] && label[uns[j]] < 0) {
                label[uns[j]] = parts;
                stack.push_back(uns[j]);
              }
          }
        }
        if (parts == 3) ++oracle;
      }
      CHECK(count_trifurcations(g, open) == oracle);
    }
  }
}

TEST_CASE("enumeration rejects oversized graphs") {
  auto g = lattice::build_lattice(lattice::Kind::Z2Window, {6, 6},
                                  lattice::Boundary::Free);
  REQUIRE(g.edge_count() > 24);
  CHECK_THROWS(enumerate_exact(g, {1.0, 1.0}));
}
