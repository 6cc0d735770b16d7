#include "invperc/loopmodel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "invperc/clusters.hpp"

namespace invperc::loopon {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> vertex_degrees(const lattice::LatticeGraph& g,
                                const std::vector<char>& open) {
  std::vector<int> deg(g.vertex_count(), 0);
  for (int e = 0; e < g.edge_count(); ++e)
    if (open[e]) {
      ++deg[g.edge(e).u];
      ++deg[g.edge(e).v];
    }
  return deg;
}

}  // namespace

bool is_loop_config(const lattice::LatticeGraph& g, const std::vector<char>& open) {
  if (static_cast<int>(open.size()) != g.edge_count())
    throw std::invalid_argument("is_loop_config: size mismatch");
  for (int d : vertex_degrees(g, open))
    if (d != 0 && d != 2) return false;
  return true;
}

int count_loops(const lattice::LatticeGraph& g, const std::vector<char>& open) {
  clusters::DisjointSets dsu(g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e)
    if (open[e]) dsu.unite(g.edge(e).u, g.edge(e).v);
  // Count components carrying at least one open edge.
  std::vector<char> counted(g.vertex_count(), 0);
  int loops = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!open[e]) continue;
    int r = dsu.find(g.edge(e).u);
    if (!counted[r]) {
      counted[r] = 1;
      ++loops;
    }
  }
  return loops;
}

LoopConfig::LoopConfig(const lattice::LatticeGraph& g)
    : g_(&g), open_(g.edge_count(), 0), degree_(g.vertex_count(), 0) {}

void LoopConfig::assign(const std::vector<char>& open) {
  if (!is_loop_config(*g_, open))
    throw std::invalid_argument("LoopConfig::assign: not a loop configuration");
  open_ = open;
  degree_ = vertex_degrees(*g_, open_);
  edge_count_ = std::count(open_.begin(), open_.end(), char(1));
  loop_count_ = count_loops(*g_, open_);
}

bool LoopConfig::consistent() const {
  if (degree_ != vertex_degrees(*g_, open_)) return false;
  if (edge_count_ != std::count(open_.begin(), open_.end(), char(1))) return false;
  return loop_count_ == count_loops(*g_, open_);
}

void LoopConfig::flip_edges(const std::vector<int>& edges) {
  for (int e : edges) {
    int d = open_[e] ? -1 : +1;
    open_[e] ^= 1;
    degree_[g_->edge(e).u] += d;
    degree_[g_->edge(e).v] += d;
    edge_count_ += d;
  }
}

double log_weight(long open_edges, int loops, const GibbsParams& params) {
  double lw = 0.0;
  if (open_edges > 0)
    lw += params.edge_weight > 0.0 ? open_edges * std::log(params.edge_weight)
                                   : kNegInf;
  if (loops > 0)
    lw += params.loop_weight > 0.0 ? loops * std::log(params.loop_weight)
                                   : kNegInf;
  return lw;
}

double log_weight(const LoopConfig& cfg, const GibbsParams& params) {
  return log_weight(cfg.open_edge_count(), cfg.loop_count(), params);
}

FlipResult Metropolis::flip(LoopConfig& cfg, int face_index,
                            const GibbsParams& params, rng::Stream& stream) {
  const lattice::LatticeGraph& g = cfg.graph();
  const lattice::Face& face = g.faces().at(face_index);
  FlipResult res;
  res.cycle_length = static_cast<int>(face.edges.size());

  // Degrees after the flip must all be 0 or 2.
  for (std::size_t i = 0; i < face.vertices.size(); ++i) {
    int v = face.vertices[i];
    int e_in = face.edges[(i + face.edges.size() - 1) % face.edges.size()];
    int e_out = face.edges[i];
    int d = cfg.degree(v) + (cfg.open(e_in) ? -1 : +1) + (cfg.open(e_out) ? -1 : +1);
    if (d != 0 && d != 2) return res;
  }
  res.proposal_valid = true;

  double lw_old = log_weight(cfg, params);
  cfg.flip_edges(face.edges);
  int loops_new = count_loops(g, cfg.open_);
  double lw_new = log_weight(cfg.edge_count_, loops_new, params);
  res.log_ratio = lw_new - lw_old;
  res.bound_ok = check_finite_energy_bound(res.log_ratio, res.cycle_length, params);

  bool accept = res.log_ratio >= 0.0 ||
                stream.next_unit() < std::exp(res.log_ratio);
  if (accept) {
    cfg.loop_count_ = loops_new;
    res.accepted = true;
  } else {
    cfg.flip_edges(face.edges);
  }
  assert(cfg.consistent());
  return res;
}

bool check_finite_energy_bound(double log_ratio, int cycle_length,
                               const GibbsParams& params) {
  auto log_min = [](double w) {
    if (w <= 0.0) return kNegInf;
    return std::log(std::min(w, 1.0 / w));
  };
  auto log_max = [](double w) {
    if (w <= 0.0) return -kNegInf;
    return std::log(std::max(w, 1.0 / w));
  };
  double lo = cycle_length * (log_min(params.edge_weight) + log_min(params.loop_weight));
  double hi = cycle_length * (log_max(params.edge_weight) + log_max(params.loop_weight));
  // Tiny float slack; the combinatorial bound itself is exact.
  const double eps = 1e-9 * (1.0 + std::abs(log_ratio));
  return log_ratio >= lo - eps && log_ratio <= hi + eps;
}

Enumeration enumerate_exact(const lattice::LatticeGraph& g,
                            const GibbsParams& params) {
  int m = g.edge_count();
  if (m > 24) throw std::invalid_argument("enumerate_exact: enumeration infeasible beyond 24 edges");

  std::vector<char> open(m, 0);
  std::vector<int> deg(g.vertex_count(), 0);
  int bad = 0;  // vertices with degree not in {0,2}
  auto flip = [&](int e) {
    int d = open[e] ? -1 : +1;
    open[e] ^= 1;
    for (int v : {g.edge(e).u, g.edge(e).v}) {
      bool was_ok = deg[v] == 0 || deg[v] == 2;
      deg[v] += d;
      bool now_ok = deg[v] == 0 || deg[v] == 2;
      bad += (was_ok ? 0 : -1) + (now_ok ? 0 : 1);
    }
  };

  Enumeration en;
  std::vector<double> logw;
  long edges_open = 0;
  // Gray-code walk over all subsets; one edge flip per step.
  std::uint32_t prev_gray = 0;
  for (std::uint64_t i = 0;; ++i) {
    if (bad == 0) {
      en.configs.push_back(prev_gray);
      logw.push_back(log_weight(edges_open, count_loops(g, open), params));
    }
    if (i + 1 >= (1ULL << m)) break;
    std::uint32_t gray = static_cast<std::uint32_t>((i + 1) ^ ((i + 1) >> 1));
    std::uint32_t bit = gray ^ prev_gray;
    int e = __builtin_ctz(bit);
    edges_open += open[e] ? -1 : +1;
    flip(e);
    prev_gray = gray;
  }

  double lw_max = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  en.probability.resize(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) {
    en.probability[i] = std::exp(logw[i] - lw_max);
    z += en.probability[i];
  }
  for (double& p : en.probability) p /= z;
  return en;
}

double Enumeration::probability_of(std::uint32_t mask) const {
  for (std::size_t i = 0; i < configs.size(); ++i)
    if (configs[i] == mask) return probability[i];
  return 0.0;
}

std::uint32_t config_mask(const LoopConfig& cfg) {
  std::uint32_t mask = 0;
  for (int e = 0; e < cfg.graph().edge_count(); ++e)
    if (cfg.open(e)) mask |= 1u << e;
  return mask;
}

int count_trifurcations(const lattice::LatticeGraph& g,
                        const std::vector<char>& open) {
  std::vector<int> deg = vertex_degrees(g, open);
  int count = 0;
  std::vector<int> comp(g.vertex_count(), -1);
  std::vector<int> stack;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (deg[v] < 3) continue;
    // Count components among v's open neighbors after deleting v.
    std::fill(comp.begin(), comp.end(), -1);
    int parts = 0;
    auto ns = g.neighbors(v);
    auto es = g.incident_edges(v);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (!open[es[i]] || comp[ns[i]] >= 0) continue;
      ++parts;
      stack.assign(1, ns[i]);
      comp[ns[i]] = parts;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        auto uns = g.neighbors(u);
        auto ues = g.incident_edges(u);
        for (std::size_t j = 0; j < uns.size(); ++j) {
          int w = uns[j];
          if (w == v || !open[ues[j]] || comp[w] >= 0) continue;
          comp[w] = parts;
          stack.push_back(w);
        }
      }
    }
    if (parts == 3) ++count;
  }
  return count;
}

ChainResult run_chain(const lattice::LatticeGraph& g, const GibbsParams& params,
                      long sweeps, long sample_interval, std::uint64_t seed) {
  if (g.faces().empty()) throw std::invalid_argument("run_chain: lattice has no faces");
  ChainResult res{{}, 0, 0, 0, 0, LoopConfig(g)};
  auto pick = rng::make_stream(seed, "loopon.face");
  auto coin = rng::make_stream(seed, "loopon.accept");
  long faces = static_cast<long>(g.faces().size());
  for (long sweep = 1; sweep <= sweeps; ++sweep) {
    for (long s = 0; s < faces; ++s) {
      int f = static_cast<int>(pick.next_below(faces));
      auto r = Metropolis::flip(res.final_config, f, params, coin);
      ++res.proposals;
      res.accepted += r.accepted;
      res.invalid_proposals += !r.proposal_valid;
      res.bound_violations += r.proposal_valid && !r.bound_ok;
    }
    if (sweep % sample_interval == 0) {
      ChainSample sample;
      sample.sweep = sweep;
      sample.open_edges = res.final_config.open_edge_count();
      sample.loops = res.final_config.loop_count();
      // Longest loop = largest open-edge component (cycles: vertices = edges).
      clusters::DisjointSets dsu(g.vertex_count());
      for (int e = 0; e < g.edge_count(); ++e)
        if (res.final_config.open(e)) dsu.unite(g.edge(e).u, g.edge(e).v);
      int longest = 0;
      for (int e = 0; e < g.edge_count(); ++e)
        if (res.final_config.open(e))
          longest = std::max(longest, dsu.size_of(g.edge(e).u));
      sample.longest_loop = longest;
      res.samples.push_back(sample);
    }
  }
  return res;
}

}  // namespace invperc::loopon
