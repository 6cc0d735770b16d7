#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "invperc/lattice.hpp"

using namespace invperc::lattice;

namespace {

// Independent BFS distance oracle used to cross-check ball().
std::vector<int> bfs_ball_oracle(const LatticeGraph& g, int v, int r) {
  std::map<int, int> dist;
  std::queue<int> q;
  dist[v] = 0;
  q.push(v);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    if (dist[u] == r) continue;
    for (int w : g.neighbors(u))
      if (!dist.count(w) && w != v) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
  }
  std::vector<int> out;
  for (auto& [u, d] : dist) out.push_back(u);
  return out;  // std::map keeps ids sorted
}

}  // namespace

TEST_CASE("z2 torus 4x4 has 16 vertices and 32 edges, all degree 4") {
  auto g = build_lattice(Kind::Z2Torus, {4, 4}, Boundary::Periodic);
  CHECK(g.vertex_count() == 16);
  CHECK(g.edge_count() == 32);
  for (int v = 0; v < g.vertex_count(); ++v) CHECK(g.degree(v) == 4);
}

TEST_CASE("path of 5 vertices has 4 edges") {
  auto g = build_lattice(Kind::PathGraph, {5}, Boundary::Free);
  CHECK(g.vertex_count() == 5);
  CHECK(g.edge_count() == 4);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(2) == 2);
}

TEST_CASE("hex patch interior vertices have degree 3") {
  // Hand enumeration of the 3x3 brick-wall patch: the single interior
  // vertex (1,1) carries left, right, and (since 1+1 is even) an up rung.
  auto g = build_lattice(Kind::HexPatch, {3, 3}, Boundary::Free);
  CHECK(g.vertex_count() == 9);
  int center = g.vertex_id({1, 1});
  CHECK(g.degree(center) == 3);
  std::set<int> nb(g.neighbors(center).begin(), g.neighbors(center).end());
  std::set<int> expect{g.vertex_id({0, 1}), g.vertex_id({2, 1}), g.vertex_id({1, 2})};
  CHECK(nb == expect);

  auto big = build_lattice(Kind::HexPatch, {8, 7}, Boundary::Free);
  for (int y = 1; y < 6; ++y)
    for (int x = 1; x < 7; ++x)
      CHECK(big.degree(big.vertex_id({x, y})) == 3);
}

TEST_CASE("z2 window degrees are 4 in the interior with boundary deficits") {
  auto g = build_lattice(Kind::Z2Window, {6, 5}, Boundary::Free);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 6; ++x) {
      int want = 4 - (x == 0 || x == 5) - (y == 0 || y == 4);
      CHECK(g.degree(g.vertex_id({x, y})) == want);
    }
}

TEST_CASE("neighbor lists are symmetric") {
  for (auto g : {build_lattice(Kind::Z2Torus, {4, 5}, Boundary::Periodic),
                 build_lattice(Kind::HexPatch, {5, 4}, Boundary::Free),
                 build_lattice(Kind::TreeTruncation, {3, 3}, Boundary::Free)}) {
    for (int v = 0; v < g.vertex_count(); ++v)
      for (int w : g.neighbors(v)) {
        CHECK(w != v);
        auto back = g.neighbors(w);
        CHECK(std::count(back.begin(), back.end(), v) == 1);
      }
  }
}

TEST_CASE("vertex ids and coordinates round trip") {
  auto g = build_lattice(Kind::Z2Window, {7, 4}, Boundary::Free);
  for (int v = 0; v < g.vertex_count(); ++v)
    CHECK(g.vertex_id(g.coord(v)) == v);
}

TEST_CASE("translate wraps on the torus and clips on the window") {
  auto torus = build_lattice(Kind::Z2Torus, {4, 4}, Boundary::Periodic);
  CHECK(*translate(torus, {3, 3}, {1, 1}) == Coord{0, 0});
  auto window = build_lattice(Kind::Z2Window, {4, 4}, Boundary::Free);
  CHECK(*translate(window, {0, 0}, {0, 0}) == Coord{0, 0});
  CHECK(!translate(window, {3, 0}, {1, 0}).has_value());
  auto tree = build_lattice(Kind::TreeTruncation, {3, 2}, Boundary::Free);
  CHECK_THROWS(translate(tree, {0, 0}, {1, 0}));
}

TEST_CASE("torus translation is a graph automorphism for every shift") {
  auto g = build_lattice(Kind::Z2Torus, {4, 4}, Boundary::Periodic);
  auto edge_set = [&g](int sx, int sy) {
    std::set<std::pair<int, int>> s;
    for (const Edge& e : g.edges()) {
      int u = g.vertex_id({g.coord(e.u).x + sx, g.coord(e.u).y + sy});
      int v = g.vertex_id({g.coord(e.v).x + sx, g.coord(e.v).y + sy});
      s.insert({std::min(u, v), std::max(u, v)});
    }
    return s;
  };
  auto base = edge_set(0, 0);
  for (int sx = 0; sx < 4; ++sx)
    for (int sy = 0; sy < 4; ++sy) CHECK(edge_set(sx, sy) == base);
}

TEST_CASE("ball semantics") {
  auto g = build_lattice(Kind::Z2Window, {9, 9}, Boundary::Free);
  int center = g.vertex_id({4, 4});
  SUBCASE("radius 0 is the vertex itself") {
    CHECK(ball(g, center, 0) == std::vector<int>{center});
  }
  SUBCASE("radius 1 in the interior is the vertex plus 4 neighbors") {
    auto b = ball(g, center, 1);
    CHECK(b.size() == 5);
    for (int w : g.neighbors(center))
      CHECK(std::count(b.begin(), b.end(), w) == 1);
  }
  SUBCASE("hex interior ball r=2 matches an independent BFS") {
    auto hex = build_lattice(Kind::HexPatch, {9, 9}, Boundary::Free);
    int v = hex.vertex_id({4, 4});
    CHECK(ball(hex, v, 2) == bfs_ball_oracle(hex, v, 2));
    CHECK(ball(hex, v, 3) == bfs_ball_oracle(hex, v, 3));
  }
  SUBCASE("balls are nested and monotone in r") {
    std::size_t prev = 0;
    for (int r = 0; r <= 6; ++r) {
      auto b = ball(g, center, r);
      CHECK(b.size() >= prev);
      if (r > 0) {
        auto inner = ball(g, center, r - 1);
        CHECK(std::includes(b.begin(), b.end(), inner.begin(), inner.end()));
      }
      prev = b.size();
    }
  }
}

TEST_CASE("tree truncation counts and rejects periodic boundary") {
  auto g = build_lattice(Kind::TreeTruncation, {3, 2}, Boundary::Free);
  CHECK(g.vertex_count() == 1 + 3 + 6);
  CHECK(g.edge_count() == 9);
  CHECK(g.degree(0) == 3);
  CHECK_THROWS(build_lattice(Kind::TreeTruncation, {3, 2}, Boundary::Periodic));
}

TEST_CASE("bad dims are rejected") {
  CHECK_THROWS(build_lattice(Kind::Z2Window, {0, 4}, Boundary::Free));
  CHECK_THROWS(build_lattice(Kind::Z2Window, {1 << 16, 1 << 16}, Boundary::Free));
  CHECK_THROWS(build_lattice(Kind::Z2Torus, {2, 4}, Boundary::Periodic));
  CHECK_THROWS(build_lattice(Kind::Z2Torus, {4, 4}, Boundary::Free));
}

TEST_CASE("faces enumerate unit cells") {
  auto g = build_lattice(Kind::Z2Window, {4, 3}, Boundary::Free);
  CHECK(g.faces().size() == 6);
  auto t = build_lattice(Kind::Z2Torus, {4, 3}, Boundary::Periodic);
  CHECK(t.faces().size() == 12);
  auto hx = build_lattice(Kind::HexPatch, {5, 3}, Boundary::Free);
  // anchors (x,y), x+2<5, y+1<3, x+y even: x in {0,1,2}, y in {0,1}
  CHECK(hx.faces().size() == 3);
  for (const Face& f : hx.faces()) {
    CHECK(f.vertices.size() == 6);
    CHECK(f.edges.size() == 6);
  }
}
