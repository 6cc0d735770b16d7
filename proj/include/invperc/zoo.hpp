#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "invperc/lattice.hpp"
#include "invperc/random.hpp"
#include "invperc/stats.hpp"

namespace invperc::zoo {

enum class AnimalKind { Singleton, FixedShape, Worm, Box };

// Law of one lattice animal: a finite connected vertex set containing the
// origin offset. Unbounded size laws are truncated at cap, with the tail
// mass reported.
struct AnimalDistribution {
  AnimalKind kind = AnimalKind::Singleton;
  std::vector<lattice::Coord> shape;  // FixedShape offsets
  double geom_p = 0.5;                // worm/box geometric parameter
  int cap = 64;

  std::vector<lattice::Coord> sample(rng::Stream& s) const;
  double truncated_tail_mass() const;
  std::string describe() const;

  static AnimalDistribution singleton();
  static AnimalDistribution fixed_shape(std::vector<lattice::Coord> offsets);
  static AnimalDistribution worm_geometric(double p, int cap = 64);
  static AnimalDistribution box_geometric(double p, int cap = 16);
  // "singleton" | "worm:geom:P[:CAP]" | "box:geom:P[:CAP]" |
  // "shape:DX,DY;DX,DY;..."
  static std::optional<AnimalDistribution> parse(const std::string& text);
};

struct Placement {
  int anchor = -1;
  int index = 0;
  bool clipped = false;
};

struct ZooConfig {
  const lattice::LatticeGraph* g = nullptr;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::vector<char> occupied;
  std::vector<int> count;  // psi_v per anchor
  long placement_count = 0;
  long clipped_count = 0;
  std::vector<Placement> audit;  // populated when auditing

  double occupied_fraction() const;
};

// Poisson(lambda) independent animals anchored at every vertex; anchor
// counts come from a unit-rate arrival clock, so configurations with the
// same seed are monotone-coupled across lambda.
ZooConfig generate_zoo(const lattice::LatticeGraph& g, double lambda,
                       const AnimalDistribution& dist, std::uint64_t seed,
                       bool audit = false);

// One extra animal dropped at every vertex along the path.
ZooConfig insert_animal_surgery(const ZooConfig& cfg,
                                const std::vector<int>& path,
                                const AnimalDistribution& dist);

struct BernoulliReport {
  double occupancy = 0.0;  // zoo empirical occupied fraction
  double expected = 0.0;   // 1 - exp(-lambda) for singletons
  double sigma = 0.0;
  bool occupancy_ok = false;      // within 3 sigma
  double pair_correlation_z = 0.0;  // neighbor occupancy correlation z-score
  bool correlation_ok = false;
  stats::TwoSampleResult cluster_histogram;  // zoo vs direct Bernoulli
  bool histogram_ok = false;  // not rejected at alpha = 0.01
};

// Singleton zoo against an independently generated Bernoulli(1-e^-lambda)
// site percolation: occupancy, two-point decorrelation, cluster-size
// histogram comparison.
BernoulliReport reduce_to_bernoulli_check(const lattice::LatticeGraph& g,
                                          double lambda, int samples,
                                          std::uint64_t seed);

}  // namespace invperc::zoo
