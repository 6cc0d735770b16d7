#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "invperc/interchange.hpp"
#include "invperc/lattice.hpp"
#include "invperc/random.hpp"
#include "invperc/stats.hpp"

namespace invperc::clusters {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
  }
  int size_of(int a) { return size_[find(a)]; }
  int element_count() const { return static_cast<int>(parent_.size()); }
  int component_count() const {
    return static_cast<int>(parent_.size()) + components_;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int components_ = 0;  // delta below element count
};

using EdgeOpen = std::function<bool(int edge_id)>;
using SiteOpen = std::function<bool(int vertex_id)>;

// Union-find partition of the open subgraph, with window-side contact
// flags as the finite stand-in for escape directions.
struct ClusterPartition {
  std::vector<int> component;  // dense component id per vertex
  int count = 0;
  std::vector<long> size;
  std::vector<std::uint8_t> touch;  // bit 0 left, 1 right, 2 bottom, 3 top
  // For site percolation, closed vertices get component -1.
  std::vector<char> open_vertex;
};

ClusterPartition components_edges(const lattice::LatticeGraph& g,
                                  const EdgeOpen& open);
ClusterPartition components_sites(const lattice::LatticeGraph& g,
                                  const SiteOpen& open);

enum class EndsClass { Finite, SpanningOneDirection, SpanningTwoDirections };
EndsClass ends_classification(const ClusterPartition& part, int component);
const char* ends_class_name(EndsClass c);

// One SDRW move: pick a uniform ambient neighbor, travel only across an
// open edge, otherwise stay.
int sdrw_step(const lattice::LatticeGraph& g, const EdgeOpen& open, int v,
              rng::Stream& stream);

// Canonical code of the radius-r configuration ball at v: open bits of
// the edges (or sites) within the ball, serialized in a fixed relative
// coordinate order. Translations are quotiented; axes stay distinguished.
std::uint64_t ball_class_edges(const lattice::LatticeGraph& g,
                               const EdgeOpen& open, int v, int r);
std::uint64_t ball_class_sites(const lattice::LatticeGraph& g,
                               const SiteOpen& open, int v, int r);

enum class TraceKind { Sdrw, PermutationOrbit };

struct StationaryTrace {
  TraceKind kind = TraceKind::Sdrw;
  std::vector<int> vertices;
  std::vector<std::uint64_t> observations;  // ball class per step
};

StationaryTrace sdrw_trace(const lattice::LatticeGraph& g, const EdgeOpen& open,
                           int start, int steps, int ball_radius,
                           rng::Stream stream);
StationaryTrace orbit_trace(const lattice::LatticeGraph& g,
                            const interchange::Permutation& pi,
                            const EdgeOpen& observed, int start, int steps,
                            int ball_radius);

// Chi-square comparison of the ball-class distribution at step 0 vs step m
// across independently sampled configurations.
struct StationarityReport {
  stats::TwoSampleResult test;
  long samples = 0;
  int step = 0;
  bool rejected(double alpha) const { return test.rejected(alpha); }
};

StationarityReport stationarity_check(
    const std::function<StationaryTrace(std::uint64_t seed)>& make_trace,
    int step, long samples);

// Cesaro averages of an indicator sequence along a trace.
struct DensityEstimate {
  std::vector<double> prefix_mean;
  double final_mean = 0.0;
};

DensityEstimate density_along(const std::vector<char>& indicator);

// Mass transport pair function. The two enumerations must describe the
// same phi through independent routes (forward vs inverse), and must be
// configuration-covariant. range > 0 is the interaction radius used for
// the wraparound guard; 0 marks intrinsically finite support (e.g. a
// permutation image).
using MassEmit = std::function<void(int vertex, double mass)>;

struct TransportFunction {
  std::string name;
  int range = 1;
  std::function<void(int x, const MassEmit&)> sends_from;
  std::function<void(int y, const MassEmit&)> receives_at;
};

struct TransportReport {
  double send_sum = 0.0;     // (1/|V|) sum_u sum_x phi(x, u)
  double receive_sum = 0.0;  // (1/|V|) sum_u sum_y phi(u, y)
  double discrepancy = 0.0;
  bool holds(double tol = 1e-9) const { return discrepancy <= tol; }
};

// Exact identity check on a torus: the two sums are accumulated through
// the independent send/receive passes and compared per configuration.
TransportReport mass_transport_check(const lattice::LatticeGraph& torus,
                                     const TransportFunction& phi);

// Built-in transport functions.
TransportFunction phi_identity();
TransportFunction phi_adjacency(const lattice::LatticeGraph& g, EdgeOpen open);
// Splits unit mass among the cluster vertices within graph radius r of the
// sender (in the open subgraph).
TransportFunction phi_cluster_share(const lattice::LatticeGraph& g,
                                    EdgeOpen open, int r);
TransportFunction phi_permutation(const interchange::Permutation& pi);

}  // namespace invperc::clusters
