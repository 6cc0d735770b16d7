#include "invperc/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "invperc/clusters.hpp"

namespace invperc::zoo {

namespace {

long sample_geometric(rng::Stream& s, double p, int cap) {
  // P(K = k) = p (1-p)^k on {0,1,...}, truncated at cap.
  double u = s.next_unit_open();
  long k = static_cast<long>(std::floor(std::log(u) / std::log(1.0 - p)));
  return std::min<long>(std::max<long>(k, 0), cap);
}

bool offsets_connected(const std::vector<lattice::Coord>& shape) {
  if (shape.empty()) return false;
  std::set<std::pair<int, int>> cells;
  for (auto c : shape) cells.insert({c.x, c.y});
  std::deque<std::pair<int, int>> q{*cells.begin()};
  std::set<std::pair<int, int>> seen{*cells.begin()};
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      std::pair<int, int> nb{x + dx, y + dy};
      if (cells.count(nb) && !seen.count(nb)) {
        seen.insert(nb);
        q.push_back(nb);
      }
    }
  }
  return seen.size() == cells.size();
}

}  // namespace

std::vector<lattice::Coord> AnimalDistribution::sample(rng::Stream& s) const {
  switch (kind) {
    case AnimalKind::Singleton:
      return {{0, 0}};
    case AnimalKind::FixedShape:
      return shape;
    case AnimalKind::Worm: {
      long steps = sample_geometric(s, geom_p, cap);
      std::vector<lattice::Coord> out{{0, 0}};
      std::set<std::pair<int, int>> seen{{0, 0}};
      int x = 0, y = 0;
      for (long i = 0; i < steps; ++i) {
        switch (s.next_below(4)) {
          case 0: ++x; break;
          case 1: --x; break;
          case 2: ++y; break;
          default: --y; break;
        }
        if (seen.insert({x, y}).second) out.push_back({x, y});
      }
      return out;
    }
    case AnimalKind::Box: {
      long side = 1 + sample_geometric(s, geom_p, cap - 1);
      std::vector<lattice::Coord> out;
      out.reserve(side * side);
      for (int dy = 0; dy < side; ++dy)
        for (int dx = 0; dx < side; ++dx) out.push_back({dx, dy});
      return out;
    }
  }
  return {{0, 0}};
}

double AnimalDistribution::truncated_tail_mass() const {
  if (kind == AnimalKind::Worm) return std::pow(1.0 - geom_p, cap + 1);
  if (kind == AnimalKind::Box) return std::pow(1.0 - geom_p, cap);
  return 0.0;
}

std::string AnimalDistribution::describe() const {
  std::ostringstream os;
  switch (kind) {
    case AnimalKind::Singleton: os << "singleton"; break;
    case AnimalKind::FixedShape: {
      os << "shape:";
      for (std::size_t i = 0; i < shape.size(); ++i)
        os << (i ? ";" : "") << shape[i].x << "," << shape[i].y;
      break;
    }
    case AnimalKind::Worm: os << "worm:geom:" << geom_p << ":" << cap; break;
    case AnimalKind::Box: os << "box:geom:" << geom_p << ":" << cap; break;
  }
  return os.str();
}

AnimalDistribution AnimalDistribution::singleton() { return {}; }

AnimalDistribution AnimalDistribution::fixed_shape(std::vector<lattice::Coord> offsets) {
  AnimalDistribution d;
  d.kind = AnimalKind::FixedShape;
  d.shape = std::move(offsets);
  bool has_origin = false;
  for (auto c : d.shape) has_origin |= (c.x == 0 && c.y == 0);
  if (!has_origin || !offsets_connected(d.shape))
    throw std::invalid_argument("fixed_shape: offsets must be connected and contain the origin");
  return d;
}

AnimalDistribution AnimalDistribution::worm_geometric(double p, int cap) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("worm_geometric: p outside (0,1)");
  AnimalDistribution d;
  d.kind = AnimalKind::Worm;
  d.geom_p = p;
  d.cap = cap;
  return d;
}

AnimalDistribution AnimalDistribution::box_geometric(double p, int cap) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("box_geometric: p outside (0,1)");
  AnimalDistribution d;
  d.kind = AnimalKind::Box;
  d.geom_p = p;
  d.cap = cap;
  return d;
}

std::optional<AnimalDistribution> AnimalDistribution::parse(const std::string& text) {
  if (text == "singleton") return singleton();
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, sep)) parts.push_back(item);
    return parts;
  };
  try {
    auto parts = split(text, ':');
    if (parts.size() >= 3 && (parts[0] == "worm" || parts[0] == "box") &&
        parts[1] == "geom") {
      double p = std::stod(parts[2]);
      int cap = parts.size() > 3 ? std::stoi(parts[3])
                                 : (parts[0] == "worm" ? 64 : 16);
      return parts[0] == "worm" ? worm_geometric(p, cap) : box_geometric(p, cap);
    }
    if (parts.size() == 2 && parts[0] == "shape") {
      std::vector<lattice::Coord> offsets;
      for (auto& cell : split(parts[1], ';')) {
        auto xy = split(cell, ',');
        if (xy.size() != 2) return std::nullopt;
        offsets.push_back({std::stoi(xy[0]), std::stoi(xy[1])});
      }
      return fixed_shape(offsets);
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

double ZooConfig::occupied_fraction() const {
  if (occupied.empty()) return 0.0;
  long n = std::count(occupied.begin(), occupied.end(), char(1));
  return static_cast<double>(n) / static_cast<double>(occupied.size());
}

ZooConfig generate_zoo(const lattice::LatticeGraph& g, double lambda,
                       const AnimalDistribution& dist, std::uint64_t seed,
                       bool audit) {
  if (lambda < 0.0) throw std::invalid_argument("generate_zoo: lambda must be >= 0");
  if (!g.has_coords())
    throw std::invalid_argument("generate_zoo: requires a planar-coordinate lattice");
  ZooConfig cfg;
  cfg.g = &g;
  cfg.lambda = lambda;
  cfg.seed = seed;
  cfg.occupied.assign(g.vertex_count(), 0);
  cfg.count.assign(g.vertex_count(), 0);
  bool torus = g.kind() == lattice::Kind::Z2Torus;

  for (int v = 0; v < g.vertex_count(); ++v) {
    if (lambda > 0.0) {
      auto clock = rng::make_stream(seed, "zoo.count", v);
      cfg.count[v] =
          static_cast<int>(rng::poisson_point_process(clock, 1.0, lambda).size());
    }
    auto anchor = g.coord(v);
    for (int i = 0; i < cfg.count[v]; ++i) {
      auto draw = rng::make_stream(seed, "zoo.animal", v, i);
      bool clipped = false;
      for (auto off : dist.sample(draw)) {
        lattice::Coord c{anchor.x + off.x, anchor.y + off.y};
        if (torus) {
          cfg.occupied[g.vertex_id(c)] = 1;
        } else if (g.coord_in_range(c)) {
          cfg.occupied[g.vertex_id(c)] = 1;
        } else {
          clipped = true;
        }
      }
      ++cfg.placement_count;
      cfg.clipped_count += clipped;
      if (audit) cfg.audit.push_back({v, i, clipped});
    }
  }
  return cfg;
}

ZooConfig insert_animal_surgery(const ZooConfig& cfg,
                                const std::vector<int>& path,
                                const AnimalDistribution& dist) {
  ZooConfig out = cfg;
  const lattice::LatticeGraph& g = *cfg.g;
  bool torus = g.kind() == lattice::Kind::Z2Torus;
  for (int v : path) {
    int i = out.count[v];  // psi_v -> psi_v + 1, next placement stream
    auto draw = rng::make_stream(cfg.seed, "zoo.animal", v, i);
    auto anchor = g.coord(v);
    bool clipped = false;
    for (auto off : dist.sample(draw)) {
      lattice::Coord c{anchor.x + off.x, anchor.y + off.y};
      if (torus) {
        out.occupied[g.vertex_id(c)] = 1;
      } else if (g.coord_in_range(c)) {
        out.occupied[g.vertex_id(c)] = 1;
      } else {
        clipped = true;
      }
    }
    ++out.count[v];
    ++out.placement_count;
    out.clipped_count += clipped;
    if (!cfg.audit.empty() || !out.audit.empty()) out.audit.push_back({v, i, clipped});
  }
  return out;
}

BernoulliReport reduce_to_bernoulli_check(const lattice::LatticeGraph& g,
                                          double lambda, int samples,
                                          std::uint64_t seed) {
  BernoulliReport rep;
  rep.expected = 1.0 - std::exp(-lambda);
  auto dist = AnimalDistribution::singleton();

  long occupied = 0, total = 0;
  double sum_xy = 0.0, sum_x = 0.0, sum_y = 0.0;
  long pairs = 0;
  std::map<std::uint64_t, long> zoo_hist, bern_hist;

  for (int rep_i = 0; rep_i < samples; ++rep_i) {
    auto zoo_cfg = generate_zoo(g, lambda, dist, seed + 2 * rep_i);
    for (char c : zoo_cfg.occupied) occupied += c;
    total += g.vertex_count();

    // Neighbor-pair correlation across the first horizontal edge direction.
    for (int e = 0; e < g.edge_count(); ++e) {
      if (g.edge(e).kind != lattice::EdgeKind::Horizontal) continue;
      double a = zoo_cfg.occupied[g.edge(e).u];
      double b = zoo_cfg.occupied[g.edge(e).v];
      sum_xy += a * b;
      sum_x += a;
      sum_y += b;
      ++pairs;
    }

    auto part = clusters::components_sites(
        g, [&](int v) { return zoo_cfg.occupied[v] != 0; });
    for (int c = 0; c < part.count; ++c) ++zoo_hist[std::min<long>(part.size[c], 20)];

    // Independent Bernoulli generator with the matched density.
    std::vector<char> bern(g.vertex_count(), 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
      auto s = rng::make_stream(seed + 2 * rep_i + 1, "bernoulli.site", v);
      bern[v] = s.next_unit() < rep.expected ? 1 : 0;
    }
    auto bpart = clusters::components_sites(g, [&](int v) { return bern[v] != 0; });
    for (int c = 0; c < bpart.count; ++c) ++bern_hist[std::min<long>(bpart.size[c], 20)];
  }

  rep.occupancy = static_cast<double>(occupied) / static_cast<double>(total);
  rep.sigma = std::sqrt(rep.expected * (1.0 - rep.expected) / static_cast<double>(total));
  rep.occupancy_ok = std::abs(rep.occupancy - rep.expected) < 3 * rep.sigma;

  double n = static_cast<double>(pairs);
  double mx = sum_x / n, my = sum_y / n;
  double cov = sum_xy / n - mx * my;
  double var = rep.expected * (1.0 - rep.expected);
  double corr = var > 0 ? cov / var : 0.0;
  rep.pair_correlation_z = corr * std::sqrt(n);
  rep.correlation_ok = std::abs(rep.pair_correlation_z) < 3.0;

  rep.cluster_histogram = stats::chi_square_two_sample(zoo_hist, bern_hist);
  rep.histogram_ok = !rep.cluster_histogram.rejected(0.01);
  return rep;
}

}  // namespace invperc::zoo
