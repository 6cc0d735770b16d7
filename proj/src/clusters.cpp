#include "invperc/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>

namespace invperc::clusters {

namespace {

inline std::uint64_t roll(std::uint64_t code, int bit) {
  code = code * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(bit + 1);
  return code ^ (code >> 29);
}

std::uint8_t side_flags(const lattice::LatticeGraph& g, int v) {
  if (!g.has_coords() || g.kind() == lattice::Kind::Z2Torus) return 0;
  auto c = g.coord(v);
  int w = g.dims()[0];
  int h = g.dims().size() > 1 ? g.dims()[1] : 1;
  std::uint8_t f = 0;
  if (c.x == 0) f |= 1;
  if (c.x == w - 1) f |= 2;
  if (c.y == 0) f |= 4;
  if (c.y == h - 1) f |= 8;
  return f;
}

ClusterPartition finalize_partition(const lattice::LatticeGraph& g,
                                    DisjointSets& dsu,
                                    const std::vector<char>& open_vertex) {
  ClusterPartition part;
  part.open_vertex = open_vertex;
  part.component.assign(g.vertex_count(), -1);
  std::vector<int> remap(g.vertex_count(), -1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!open_vertex[v]) continue;
    int r = dsu.find(v);
    if (remap[r] < 0) {
      remap[r] = part.count++;
      part.size.push_back(0);
      part.touch.push_back(0);
    }
    part.component[v] = remap[r];
    ++part.size[remap[r]];
    part.touch[remap[r]] |= side_flags(g, v);
  }
  return part;
}

// Ball offsets relative to v, canonically ordered. On tori offsets are
// wrapped to the centered representative so the code is
// translation-invariant.
std::vector<std::pair<lattice::Coord, int>> relative_ball(
    const lattice::LatticeGraph& g, int v, int r) {
  auto ids = lattice::ball(g, v, r);
  std::vector<std::pair<lattice::Coord, int>> rel;
  rel.reserve(ids.size());
  if (g.has_coords()) {
    auto vc = g.coord(v);
    int w = g.dims()[0];
    int h = g.dims().size() > 1 ? g.dims()[1] : 1;
    for (int u : ids) {
      auto uc = g.coord(u);
      int dx = uc.x - vc.x;
      int dy = uc.y - vc.y;
      if (g.kind() == lattice::Kind::Z2Torus) {
        dx = ((dx % w) + w + w / 2) % w - w / 2;
        dy = ((dy % h) + h + h / 2) % h - h / 2;
      }
      rel.push_back({{dx, dy}, u});
    }
    std::sort(rel.begin(), rel.end(), [](const auto& a, const auto& b) {
      return std::pair(a.first.y, a.first.x) < std::pair(b.first.y, b.first.x);
    });
  } else {
    // No translation structure; fall back to BFS id order.
    for (int u : ids) rel.push_back({{u - v, 0}, u});
  }
  return rel;
}

}  // namespace

ClusterPartition components_edges(const lattice::LatticeGraph& g,
                                  const EdgeOpen& open) {
  DisjointSets dsu(g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e)
    if (open(e)) dsu.unite(g.edge(e).u, g.edge(e).v);
  std::vector<char> all_open(g.vertex_count(), 1);
  return finalize_partition(g, dsu, all_open);
}

ClusterPartition components_sites(const lattice::LatticeGraph& g,
                                  const SiteOpen& open) {
  DisjointSets dsu(g.vertex_count());
  std::vector<char> open_vertex(g.vertex_count(), 0);
  for (int v = 0; v < g.vertex_count(); ++v) open_vertex[v] = open(v) ? 1 : 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    if (open_vertex[ed.u] && open_vertex[ed.v]) dsu.unite(ed.u, ed.v);
  }
  return finalize_partition(g, dsu, open_vertex);
}

EndsClass ends_classification(const ClusterPartition& part, int component) {
  std::uint8_t t = part.touch[component];
  bool two = ((t & 1) && (t & 2)) || ((t & 4) && (t & 8));
  if (two) return EndsClass::SpanningTwoDirections;
  if (t) return EndsClass::SpanningOneDirection;
  return EndsClass::Finite;
}

const char* ends_class_name(EndsClass c) {
  switch (c) {
    case EndsClass::Finite: return "finite";
    case EndsClass::SpanningOneDirection: return "spanning-1-direction";
    case EndsClass::SpanningTwoDirections: return "spanning-2-directions";
  }
  return "?";
}

int sdrw_step(const lattice::LatticeGraph& g, const EdgeOpen& open, int v,
              rng::Stream& stream) {
  int d = g.degree(v);
  if (d == 0) return v;
  int i = static_cast<int>(stream.next_below(d));
  int e = g.incident_edges(v)[i];
  return open(e) ? g.neighbors(v)[i] : v;
}

std::uint64_t ball_class_edges(const lattice::LatticeGraph& g,
                               const EdgeOpen& open, int v, int r) {
  auto rel = relative_ball(g, v, r);
  std::vector<int> local(rel.size());
  for (std::size_t i = 0; i < rel.size(); ++i) local[i] = rel[i].second;
  std::uint64_t code = 0x2545f4914f6cdd1dULL;
  for (std::size_t i = 0; i < rel.size(); ++i)
    for (std::size_t j = i + 1; j < rel.size(); ++j) {
      int e = g.edge_between(local[i], local[j]);
      if (e < 0) continue;
      code = roll(code, open(e) ? 1 : 0);
    }
  return code;
}

std::uint64_t ball_class_sites(const lattice::LatticeGraph& g,
                               const SiteOpen& open, int v, int r) {
  auto rel = relative_ball(g, v, r);
  std::uint64_t code = 0x9d39247e33776d41ULL;
  for (auto& [off, u] : rel) code = roll(code, open(u) ? 1 : 0);
  return code;
}

StationaryTrace sdrw_trace(const lattice::LatticeGraph& g, const EdgeOpen& open,
                           int start, int steps, int ball_radius,
                           rng::Stream stream) {
  StationaryTrace tr;
  tr.kind = TraceKind::Sdrw;
  tr.vertices.reserve(steps + 1);
  tr.observations.reserve(steps + 1);
  int v = start;
  for (int n = 0; n <= steps; ++n) {
    tr.vertices.push_back(v);
    tr.observations.push_back(ball_class_edges(g, open, v, ball_radius));
    if (n < steps) v = sdrw_step(g, open, v, stream);
  }
  return tr;
}

StationaryTrace orbit_trace(const lattice::LatticeGraph& g,
                            const interchange::Permutation& pi,
                            const EdgeOpen& observed, int start, int steps,
                            int ball_radius) {
  StationaryTrace tr;
  tr.kind = TraceKind::PermutationOrbit;
  int v = start;
  for (int n = 0; n <= steps; ++n) {
    tr.vertices.push_back(v);
    tr.observations.push_back(ball_class_edges(g, observed, v, ball_radius));
    if (n < steps) v = pi.forward[v];
  }
  return tr;
}

StationarityReport stationarity_check(
    const std::function<StationaryTrace(std::uint64_t seed)>& make_trace,
    int step, long samples) {
  // Disjoint seed ranges keep the two empirical distributions independent.
  std::map<std::uint64_t, long> at_start, at_step;
  for (long i = 0; i < samples; ++i) {
    auto tr = make_trace(static_cast<std::uint64_t>(2 * i));
    ++at_start[tr.observations.front()];
  }
  for (long i = 0; i < samples; ++i) {
    auto tr = make_trace(static_cast<std::uint64_t>(2 * i + 1));
    ++at_step[tr.observations.at(step)];
  }
  StationarityReport rep;
  rep.samples = samples;
  rep.step = step;
  rep.test = stats::chi_square_two_sample(at_start, at_step);
  return rep;
}

DensityEstimate density_along(const std::vector<char>& indicator) {
  DensityEstimate est;
  est.prefix_mean.reserve(indicator.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < indicator.size(); ++i) {
    sum += indicator[i] ? 1.0 : 0.0;
    est.prefix_mean.push_back(sum / static_cast<double>(i + 1));
  }
  est.final_mean = est.prefix_mean.empty() ? 0.0 : est.prefix_mean.back();
  return est;
}

TransportReport mass_transport_check(const lattice::LatticeGraph& torus,
                                     const TransportFunction& phi) {
  if (torus.kind() != lattice::Kind::Z2Torus)
    throw std::invalid_argument("mass_transport_check: requires a torus");
  if (phi.range > 0) {
    int m = std::min(torus.dims()[0], torus.dims()[1]);
    if (2 * phi.range + 1 > m)
      throw std::invalid_argument("mass_transport_check: wraparound aliasing");
  }
  TransportReport rep;
  double send = 0.0, receive = 0.0;
  for (int u = 0; u < torus.vertex_count(); ++u) {
    phi.sends_from(u, [&](int, double m) { send += m; });
    phi.receives_at(u, [&](int, double m) { receive += m; });
  }
  rep.send_sum = send / torus.vertex_count();
  rep.receive_sum = receive / torus.vertex_count();
  rep.discrepancy = std::abs(rep.send_sum - rep.receive_sum);
  return rep;
}

TransportFunction phi_identity() {
  TransportFunction phi;
  phi.name = "identity";
  phi.range = 0;
  phi.sends_from = [](int x, const MassEmit& emit) { emit(x, 1.0); };
  phi.receives_at = [](int y, const MassEmit& emit) { emit(y, 1.0); };
  return phi;
}

TransportFunction phi_adjacency(const lattice::LatticeGraph& g, EdgeOpen open) {
  TransportFunction phi;
  phi.name = "omega-adjacency";
  phi.range = 1;
  auto emit_open_neighbors = [&g, open](int v, const MassEmit& emit) {
    auto ns = g.neighbors(v);
    auto es = g.incident_edges(v);
    for (std::size_t i = 0; i < ns.size(); ++i)
      if (open(es[i])) emit(ns[i], 1.0);
  };
  phi.sends_from = emit_open_neighbors;
  phi.receives_at = emit_open_neighbors;  // symmetric relation, same route
  return phi;
}

TransportFunction phi_cluster_share(const lattice::LatticeGraph& g,
                                    EdgeOpen open, int r) {
  // C_r(x): vertices within omega-distance r of x, precomputed for every
  // vertex of this configuration.
  auto balls = std::make_shared<std::vector<std::vector<int>>>(g.vertex_count());
  std::vector<int> dist(g.vertex_count(), -1);
  std::vector<int> touched;
  for (int x = 0; x < g.vertex_count(); ++x) {
    std::deque<int> q{x};
    dist[x] = 0;
    touched.assign(1, x);
    auto& ball = (*balls)[x];
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      ball.push_back(u);
      if (dist[u] == r) continue;
      auto ns = g.neighbors(u);
      auto es = g.incident_edges(u);
      for (std::size_t i = 0; i < ns.size(); ++i)
        if (open(es[i]) && dist[ns[i]] < 0) {
          dist[ns[i]] = dist[u] + 1;
          q.push_back(ns[i]);
          touched.push_back(ns[i]);
        }
    }
    for (int u : touched) dist[u] = -1;
  }
  TransportFunction phi;
  phi.name = "cluster-share";
  phi.range = r;
  phi.sends_from = [balls](int x, const MassEmit& emit) {
    double m = 1.0 / static_cast<double>((*balls)[x].size());
    for (int y : (*balls)[x]) emit(y, m);
  };
  // Inverse route: x reaches y within r iff y reaches x within r.
  phi.receives_at = [balls](int y, const MassEmit& emit) {
    for (int x : (*balls)[y])
      emit(x, 1.0 / static_cast<double>((*balls)[x].size()));
  };
  return phi;
}

TransportFunction phi_permutation(const interchange::Permutation& pi) {
  TransportFunction phi;
  phi.name = "permutation-image";
  phi.range = 0;
  phi.sends_from = [&pi](int x, const MassEmit& emit) {
    emit(pi.forward[x], 1.0);
  };
  phi.receives_at = [&pi](int y, const MassEmit& emit) {
    emit(pi.inverse[y], 1.0);
  };
  return phi;
}

}  // namespace invperc::clusters
