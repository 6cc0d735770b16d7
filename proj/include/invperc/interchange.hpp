#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "invperc/lattice.hpp"
#include "invperc/random.hpp"

namespace invperc::interchange {

// Per-edge Poisson clock rings in (0, beta].
struct ClockTimeline {
  double beta = 0.0;
  std::vector<std::vector<double>> rings;  // indexed by edge id
  long total_rings() const;
};

ClockTimeline generate_timeline(const lattice::LatticeGraph& g, double beta,
                                std::uint64_t master_seed);

// The permutation accumulated by swapping occupants at clock rings:
// forward maps start position to end position.
struct Permutation {
  std::vector<int> forward;
  std::vector<int> inverse;

  static Permutation identity(int n);
  int size() const { return static_cast<int>(forward.size()); }
  // pi <- tau_{a,b} o pi (a ring on edge {a,b} swaps the occupants).
  void apply_swap(int a, int b);
  bool is_bijection() const;
};

int permutation_sign(const Permutation& pi);

// Treap with implicit keys, one tree per permutation cycle; reading a tree
// in order gives the orbit. A transposition is a split or a merge, O(log n)
// expected. Node i is permanently the handle of vertex i.
class CycleIndex {
 public:
  CycleIndex(int n, rng::Stream priority_stream);

  int size() const { return static_cast<int>(nodes_.size()); }
  void apply_transposition(int u, int v);
  bool same_cycle(int u, int v) const { return root_of(u) == root_of(v); }
  int cycle_length(int v) const { return nodes_[root_of(v)].size; }
  // The orbit of v in cyclic order, starting at v.
  std::vector<int> cycle_of(int v) const;
  std::map<int, long> cycle_length_histogram() const;
  // Representative vertex (tree root) of v's cycle; stable between updates.
  int cycle_root(int v) const { return root_of(v); }

 private:
  struct Node {
    int left = -1;
    int right = -1;
    int parent = -1;
    int size = 1;
    std::uint32_t pri = 0;
  };
  std::vector<Node> nodes_;

  int subtree_size(int t) const { return t < 0 ? 0 : nodes_[t].size; }
  void pull(int t);
  void set_left(int p, int c);
  void set_right(int p, int c);
  int merge(int a, int b);
  std::pair<int, int> split(int t, int k);
  int root_of(int x) const;
  int position_of(int x) const;
  int rotate_front(int root, int x);
};

struct InterchangeResult {
  Permutation pi;
  CycleIndex cycles;
  long ring_count = 0;
};

// Applies all rings in global (time, edge id) order to the identity.
InterchangeResult run_interchange(const lattice::LatticeGraph& g,
                                  const ClockTimeline& timeline,
                                  std::uint64_t master_seed);

}  // namespace invperc::interchange
