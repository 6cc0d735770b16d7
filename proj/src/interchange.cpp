#include "invperc/interchange.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace invperc::interchange {

long ClockTimeline::total_rings() const {
  long n = 0;
  for (const auto& r : rings) n += static_cast<long>(r.size());
  return n;
}

ClockTimeline generate_timeline(const lattice::LatticeGraph& g, double beta,
                                std::uint64_t master_seed) {
  if (beta < 0.0) throw std::invalid_argument("generate_timeline: beta must be >= 0");
  ClockTimeline tl;
  tl.beta = beta;
  tl.rings.resize(g.edge_count());
  if (beta == 0.0) return tl;
  for (int e = 0; e < g.edge_count(); ++e) {
    auto s = rng::make_stream(master_seed, "interchange.clock", e);
    tl.rings[e] = rng::poisson_point_process(s, 1.0, beta);
  }
  return tl;
}

Permutation Permutation::identity(int n) {
  Permutation p;
  p.forward.resize(n);
  p.inverse.resize(n);
  for (int i = 0; i < n; ++i) p.forward[i] = p.inverse[i] = i;
  return p;
}

void Permutation::apply_swap(int a, int b) {
  int x1 = inverse[a];
  int x2 = inverse[b];
  forward[x1] = b;
  forward[x2] = a;
  inverse[a] = x2;
  inverse[b] = x1;
}

bool Permutation::is_bijection() const {
  std::vector<char> seen(forward.size(), 0);
  for (std::size_t i = 0; i < forward.size(); ++i) {
    int y = forward[i];
    if (y < 0 || y >= static_cast<int>(forward.size()) || seen[y]) return false;
    if (inverse[y] != static_cast<int>(i)) return false;
    seen[y] = 1;
  }
  return true;
}

int permutation_sign(const Permutation& pi) {
  int n = pi.size();
  std::vector<char> seen(n, 0);
  int cycles = 0;
  for (int v = 0; v < n; ++v) {
    if (seen[v]) continue;
    ++cycles;
    for (int u = v; !seen[u]; u = pi.forward[u]) seen[u] = 1;
  }
  return (n - cycles) % 2 == 0 ? +1 : -1;
}

CycleIndex::CycleIndex(int n, rng::Stream priority_stream) {
  nodes_.resize(n);
  for (int i = 0; i < n; ++i)
    nodes_[i].pri = static_cast<std::uint32_t>(priority_stream.next_u64() >> 32);
}

void CycleIndex::pull(int t) {
  nodes_[t].size = 1 + subtree_size(nodes_[t].left) + subtree_size(nodes_[t].right);
}

void CycleIndex::set_left(int p, int c) {
  nodes_[p].left = c;
  if (c >= 0) nodes_[c].parent = p;
}

void CycleIndex::set_right(int p, int c) {
  nodes_[p].right = c;
  if (c >= 0) nodes_[c].parent = p;
}

int CycleIndex::merge(int a, int b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (nodes_[a].pri > nodes_[b].pri) {
    set_right(a, merge(nodes_[a].right, b));
    pull(a);
    return a;
  }
  set_left(b, merge(a, nodes_[b].left));
  pull(b);
  return b;
}

std::pair<int, int> CycleIndex::split(int t, int k) {
  if (t < 0) return {-1, -1};
  if (k <= subtree_size(nodes_[t].left)) {
    auto [a, b] = split(nodes_[t].left, k);
    set_left(t, b);
    pull(t);
    if (a >= 0) nodes_[a].parent = -1;
    return {a, t};
  }
  auto [a, b] = split(nodes_[t].right, k - subtree_size(nodes_[t].left) - 1);
  set_right(t, a);
  pull(t);
  if (b >= 0) nodes_[b].parent = -1;
  return {t, b};
}

int CycleIndex::root_of(int x) const {
  while (nodes_[x].parent >= 0) x = nodes_[x].parent;
  return x;
}

int CycleIndex::position_of(int x) const {
  int k = subtree_size(nodes_[x].left);
  int cur = x;
  while (nodes_[cur].parent >= 0) {
    int p = nodes_[cur].parent;
    if (nodes_[p].right == cur) k += subtree_size(nodes_[p].left) + 1;
    cur = p;
  }
  return k;
}

int CycleIndex::rotate_front(int root, int x) {
  int k = position_of(x);
  if (k == 0) return root;
  auto [a, b] = split(root, k);
  int r = merge(b, a);
  nodes_[r].parent = -1;
  return r;
}

void CycleIndex::apply_transposition(int u, int v) {
  if (u == v) throw std::invalid_argument("apply_transposition: u and v must differ");
  int ru = root_of(u);
  int rv = root_of(v);
  if (ru == rv) {
    // Same cycle [u, A, v, B]: splits into [u, A] and [v, B].
    int r = rotate_front(ru, u);
    int k = position_of(v);
    auto [a, b] = split(r, k);
    if (a >= 0) nodes_[a].parent = -1;
    if (b >= 0) nodes_[b].parent = -1;
  } else {
    // Distinct cycles [u, A] and [v, B] merge into [u, A, v, B].
    int a = rotate_front(ru, u);
    int b = rotate_front(rv, v);
    int r = merge(a, b);
    nodes_[r].parent = -1;
  }
}

std::vector<int> CycleIndex::cycle_of(int v) const {
  int root = root_of(v);
  int n = nodes_[root].size;
  std::vector<int> seq;
  seq.reserve(n);
  std::vector<int> stack;
  int cur = root;
  while (cur >= 0 || !stack.empty()) {
    while (cur >= 0) {
      stack.push_back(cur);
      cur = nodes_[cur].left;
    }
    cur = stack.back();
    stack.pop_back();
    seq.push_back(cur);
    cur = nodes_[cur].right;
  }
  int k = position_of(v);
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = seq[(k + i) % n];
  return out;
}

std::map<int, long> CycleIndex::cycle_length_histogram() const {
  std::map<int, long> hist;
  std::vector<char> seen(nodes_.size(), 0);
  for (int v = 0; v < static_cast<int>(nodes_.size()); ++v) {
    int r = root_of(v);
    if (!seen[r]) {
      seen[r] = 1;
      ++hist[nodes_[r].size];
    }
  }
  return hist;
}

InterchangeResult run_interchange(const lattice::LatticeGraph& g,
                                  const ClockTimeline& timeline,
                                  std::uint64_t master_seed) {
  if (static_cast<int>(timeline.rings.size()) != g.edge_count())
    throw std::invalid_argument("run_interchange: timeline does not match graph");

  std::vector<std::pair<double, int>> events;
  events.reserve(timeline.total_rings());
  for (int e = 0; e < g.edge_count(); ++e)
    for (double t : timeline.rings[e]) events.push_back({t, e});
  // Global order by (time, edge id); the id component makes float ties
  // deterministic.
  std::sort(events.begin(), events.end());

  InterchangeResult res{
      Permutation::identity(g.vertex_count()),
      CycleIndex(g.vertex_count(),
                 rng::make_stream(master_seed, "interchange.treap")),
      static_cast<long>(events.size())};

  for (auto& [t, e] : events) {
    const lattice::Edge& ed = g.edge(e);
    res.pi.apply_swap(ed.u, ed.v);
    res.cycles.apply_transposition(ed.u, ed.v);
    assert(res.pi.inverse[res.pi.forward[ed.u]] == ed.u);
  }
  if (!res.pi.is_bijection())
    throw std::logic_error("run_interchange: permutation lost bijectivity");
  return res;
}

}  // namespace invperc::interchange
