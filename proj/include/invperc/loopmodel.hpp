#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "invperc/lattice.hpp"
#include "invperc/random.hpp"

namespace invperc::loopon {

// Finite-volume Gibbs weights x^{|omega|} n^{l(omega)} with free boundary:
// l counts the nonempty connected components (all loops on our patches).
struct GibbsParams {
  double edge_weight = 1.0;  // x
  double loop_weight = 1.0;  // n
};

bool is_loop_config(const lattice::LatticeGraph& g, const std::vector<char>& open);
int count_loops(const lattice::LatticeGraph& g, const std::vector<char>& open);

// Edge subset in which every vertex has degree 0 or 2, with cached
// degree/edge/loop counts kept consistent across flips.
class LoopConfig {
 public:
  explicit LoopConfig(const lattice::LatticeGraph& g);

  const lattice::LatticeGraph& graph() const { return *g_; }
  bool open(int e) const { return open_[e] != 0; }
  const std::vector<char>& bits() const { return open_; }
  int degree(int v) const { return degree_[v]; }
  long open_edge_count() const { return edge_count_; }
  int loop_count() const { return loop_count_; }

  // Replaces the whole edge set; throws unless it is a loop configuration.
  void assign(const std::vector<char>& open);
  bool consistent() const;  // caches vs fresh recount

  friend struct Metropolis;

 private:
  const lattice::LatticeGraph* g_;
  std::vector<char> open_;
  std::vector<int> degree_;
  long edge_count_ = 0;
  int loop_count_ = 0;

  void flip_edges(const std::vector<int>& edges);
};

// log of x^{|omega|} n^{l(omega)}; zero-weight cases map to -infinity.
double log_weight(long open_edges, int loops, const GibbsParams& params);
double log_weight(const LoopConfig& cfg, const GibbsParams& params);

struct FlipResult {
  bool proposal_valid = false;
  bool accepted = false;
  double log_ratio = 0.0;
  int cycle_length = 0;  // k = |gamma|
  bool bound_ok = true;  // finite-energy ratio bound on this proposal
};

struct Metropolis {
  // Proposes omega ^ gamma for the given face; accepts with
  // min(1, weight ratio). The configuration is mutated on acceptance.
  static FlipResult flip(LoopConfig& cfg, int face_index,
                         const GibbsParams& params, rng::Stream& stream);
};

// min(x,1/x)^k min(n,1/n)^k <= ratio <= max(x,1/x)^k max(n,1/n)^k,
// checked in the log domain for a valid symmetric-difference flip.
bool check_finite_energy_bound(double log_ratio, int cycle_length,
                               const GibbsParams& params);

// Exact distribution over all valid configurations (edge-set bitmask
// keyed), feasible up to 24 edges.
struct Enumeration {
  std::vector<std::uint32_t> configs;  // bitmask over edge ids
  std::vector<double> probability;
  double probability_of(std::uint32_t mask) const;
};

Enumeration enumerate_exact(const lattice::LatticeGraph& g,
                            const GibbsParams& params);

std::uint32_t config_mask(const LoopConfig& cfg);

// Vertices whose removal splits their component into exactly three parts.
int count_trifurcations(const lattice::LatticeGraph& g,
                        const std::vector<char>& open);

struct ChainSample {
  long sweep = 0;
  long open_edges = 0;
  int loops = 0;
  int longest_loop = 0;
};

struct ChainResult {
  std::vector<ChainSample> samples;
  long proposals = 0;
  long accepted = 0;
  long invalid_proposals = 0;
  long bound_violations = 0;
  LoopConfig final_config;
};

// Random-scan face-flip chain; one sweep is |faces| proposals. Samples are
// recorded every sample_interval sweeps.
ChainResult run_chain(const lattice::LatticeGraph& g, const GibbsParams& params,
                      long sweeps, long sample_interval, std::uint64_t seed);

}  // namespace invperc::loopon
