#include "invperc/verify.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "invperc/clusters.hpp"
#include "invperc/corner.hpp"
#include "invperc/interchange.hpp"
#include "invperc/loopmodel.hpp"
#include "invperc/zoo.hpp"

namespace invperc::verify {

namespace {

using lattice::Boundary;
using lattice::Kind;

Check check(const std::string& name, bool pass, const std::string& detail = "") {
  return Check{name, pass, detail};
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

SuiteResult corner_invariants(int scale) {
  SuiteResult res{"corner-invariants", {}};
  long deg = 0, constancy = 0, step = 0, collisions = 0, spanning = 0;
  int seeds = 8 * scale;
  for (int seed = 0; seed < seeds; ++seed) {
    corner::Window w{-64, 64, -64, 64};
    auto cfg = corner::generate_corner(w, 0.2, 0.8, seed);
    deg += corner::count_degree_violations(cfg);
    auto rep = corner::height_bijection_check(cfg);
    constancy += rep.constancy_violations;
    step += rep.step_rule_violations;
    collisions += rep.collision_count;
    spanning += rep.spanning_count;
  }
  res.checks.push_back(check("interior-degree-2", deg == 0, num(deg) + " violations"));
  res.checks.push_back(
      check("height-level-constancy", constancy == 0, num(constancy) + " violations"));
  res.checks.push_back(check("height-step-rule", step == 0, num(step) + " violations"));
  res.checks.push_back(check("level-injectivity", collisions == 0,
                             num(collisions) + " collisions over " +
                                 num(spanning) + " spanning paths"));
  return res;
}

SuiteResult treap_oracle(int scale) {
  SuiteResult res{"treap-oracle", {}};
  long mismatches = 0, events = 0, sign_errors = 0;
  int instances = 40 * scale;
  for (int inst = 0; inst < instances; ++inst) {
    auto s = rng::make_stream(9000 + inst, "verify.events");
    int side = 3 + static_cast<int>(s.next_below(5));
    auto g = lattice::build_lattice(Kind::Z2Window, {side, side}, Boundary::Free);
    auto tl = interchange::generate_timeline(g, 1.5, inst);
    auto run = interchange::run_interchange(g, tl, inst);
    // partition vs brute-force orbits of the composed permutation
    std::vector<int> label(g.vertex_count(), -1);
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (label[v] >= 0) continue;
      for (int u = v; label[u] < 0; u = run.pi.forward[u]) label[u] = v;
    }
    std::map<int, int> root_to_label;
    for (int v = 0; v < g.vertex_count(); ++v) {
      auto [it, fresh] = root_to_label.insert({run.cycles.cycle_root(v), label[v]});
      if (it->second != label[v]) ++mismatches;
    }
    events += run.ring_count;
    int expect = run.ring_count % 2 == 0 ? 1 : -1;
    sign_errors += interchange::permutation_sign(run.pi) != expect;
  }
  res.checks.push_back(check("cycle-partition-vs-orbits", mismatches == 0,
                             num(mismatches) + " mismatches over " + num(events) +
                                 " events"));
  res.checks.push_back(
      check("sign-equals-ring-parity", sign_errors == 0, num(sign_errors) + " errors"));
  return res;
}

SuiteResult loopon_enumeration(int scale) {
  SuiteResult res{"loopon-enumeration", {}};
  auto g = lattice::build_lattice(Kind::HexPatch, {3, 2}, Boundary::Free);
  double worst_tv = 0.0;
  long bound_violations = 0;
  for (auto [x, n] : {std::pair{0.5, 2.0}, std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    loopon::GibbsParams params{x, n};
    auto en = loopon::enumerate_exact(g, params);
    loopon::LoopConfig cfg(g);
    auto pick = rng::make_stream(31, "verify.face");
    auto coin = rng::make_stream(31, "verify.coin");
    std::map<std::uint32_t, long> counts;
    long proposals = 50000L * scale;
    for (long i = 0; i < proposals; ++i) {
      auto r = loopon::Metropolis::flip(
          cfg, static_cast<int>(pick.next_below(g.faces().size())), params, coin);
      bound_violations += r.proposal_valid && !r.bound_ok;
      ++counts[loopon::config_mask(cfg)];
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < en.configs.size(); ++i)
      tv += std::abs(double(counts[en.configs[i]]) / proposals - en.probability[i]);
    worst_tv = std::max(worst_tv, tv / 2);
  }
  res.checks.push_back(check("hexagon-tv-distance", worst_tv < 0.01,
                             "TV = " + num(worst_tv)));
  res.checks.push_back(check("finite-energy-bound", bound_violations == 0,
                             num(bound_violations) + " violations"));
  return res;
}

SuiteResult mass_transport(int scale) {
  SuiteResult res{"mass-transport", {}};
  auto g = lattice::build_lattice(Kind::Z2Torus, {32, 32}, Boundary::Periodic);
  double worst = 0.0;
  int configs = 5 * scale;
  for (int seed = 0; seed < configs; ++seed) {
    std::vector<char> open(g.edge_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) {
      auto s = rng::make_stream(seed, "verify.bern", e);
      open[e] = s.next_unit() < 0.5 ? 1 : 0;
    }
    auto pred = [&open](int e) { return open[e] != 0; };
    for (auto phi : {clusters::phi_identity(), clusters::phi_adjacency(g, pred),
                     clusters::phi_cluster_share(g, pred, 3)}) {
      auto rep = clusters::mass_transport_check(g, phi);
      worst = std::max(worst, rep.discrepancy);
    }
  }
  res.checks.push_back(check("send-equals-receive", worst <= 1e-9,
                             "max discrepancy = " + num(worst)));
  return res;
}

SuiteResult stationarity(int scale) {
  SuiteResult res{"stationarity", {}};
  auto g = lattice::build_lattice(Kind::Z2Torus, {10, 10}, Boundary::Periodic);
  long samples = 600L * scale;
  auto make_sdrw = [&](std::uint64_t seed) {
    std::vector<char> open(g.edge_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) {
      auto s = rng::make_stream(4000 + seed, "verify.bern", e);
      open[e] = s.next_unit() < 0.5 ? 1 : 0;
    }
    return clusters::sdrw_trace(g, [open](int e) { return open[e] != 0; }, 0, 10, 1,
                                rng::make_stream(seed, "verify.walk"));
  };
  auto rep = clusters::stationarity_check(make_sdrw, 10, samples);
  res.checks.push_back(check("sdrw-ball-classes", !rep.rejected(0.005),
                             "p = " + num(rep.test.omnibus.p_value)));

  auto t6 = lattice::build_lattice(Kind::Z2Torus, {6, 6}, Boundary::Periodic);
  auto make_orbit = [&](std::uint64_t seed) {
    auto tl = interchange::generate_timeline(t6, 1.0, 8000 + seed);
    auto run = interchange::run_interchange(t6, tl, 8000 + seed);
    std::vector<char> used(t6.edge_count(), 0);
    for (int e = 0; e < t6.edge_count(); ++e) used[e] = !tl.rings[e].empty();
    return clusters::orbit_trace(t6, run.pi, [used](int e) { return used[e] != 0; },
                                 0, 5, 1);
  };
  auto rep2 = clusters::stationarity_check(make_orbit, 5, samples);
  res.checks.push_back(check("orbit-ball-classes", !rep2.rejected(0.005),
                             "p = " + num(rep2.test.omnibus.p_value)));
  return res;
}

SuiteResult zoo_occupancy(int scale) {
  SuiteResult res{"zoo-occupancy", {}};
  auto g = lattice::build_lattice(Kind::Z2Torus, {48, 48}, Boundary::Periodic);
  auto rep = zoo::reduce_to_bernoulli_check(g, 0.4, 12 * scale, 77);
  res.checks.push_back(check("singleton-occupancy", rep.occupancy_ok,
                             num(rep.occupancy) + " vs " + num(rep.expected)));
  res.checks.push_back(check("pair-decorrelation", rep.correlation_ok,
                             "z = " + num(rep.pair_correlation_z)));
  res.checks.push_back(check("cluster-histogram", rep.histogram_ok,
                             "p = " + num(rep.cluster_histogram.omnibus.p_value)));
  bool monotone = true;
  auto worm = zoo::AnimalDistribution::worm_geometric(0.3);
  for (int seed = 0; seed < 4 * scale && monotone; ++seed) {
    auto lo = zoo::generate_zoo(g, 0.2, worm, seed);
    auto hi = zoo::generate_zoo(g, 0.5, worm, seed);
    for (int v = 0; v < g.vertex_count(); ++v)
      if (lo.occupied[v] > hi.occupied[v]) monotone = false;
  }
  res.checks.push_back(check("coupled-monotonicity", monotone));
  return res;
}

SuiteResult surgery(int scale) {
  SuiteResult res{"surgery", {}};
  int merged = 0, found = 0, locality_failures = 0;
  int seeds = 60 * scale;
  for (int seed = 0; seed < seeds; ++seed) {
    corner::Window w{-96, 96, -288, 288};
    auto cfg = corner::generate_corner(w, 0.2, 0.8, seed);
    auto out = corner::surgery_experiment(cfg, 0, 8);
    locality_failures += !out.outside_identical;
    found += out.designees_found;
    merged += out.merged;
  }
  res.checks.push_back(check("resample-locality", locality_failures == 0,
                             num(locality_failures) + " failures"));
  res.checks.push_back(check("merges-occur", merged > 0,
                             num(merged) + " merges over " + num(found) +
                                 " designated pairs"));
  return res;
}

SuiteResult density(int scale) {
  SuiteResult res{"density", {}};
  (void)scale;
  auto cfg = corner::make_constant_config({-400, 400, -400, 400}, +1, +1);
  auto path = corner::trace_path(cfg, {0, 0});
  std::vector<char> ind;
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
    ind.push_back(path.vertices[i + 1].y == path.vertices[i].y ? 1 : 0);
  auto est = clusters::density_along(ind);
  bool exact_half = true;
  for (std::size_t n = 2; n <= est.prefix_mean.size(); n += 2)
    if (est.prefix_mean[n - 1] != 0.5) exact_half = false;
  res.checks.push_back(check("staircase-horizontal-density", exact_half,
                             "final = " + num(est.final_mean)));
  return res;
}

}  // namespace

bool SuiteResult::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json SuiteResult::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks)
    checks_json.push_back(
        {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"suite", suite}, {"pass", pass()}, {"checks", checks_json}};
}

std::vector<std::string> suite_names() {
  return {"corner-invariants", "treap-oracle",  "loopon-enumeration",
          "mass-transport",    "stationarity",  "zoo-occupancy",
          "surgery",           "density"};
}

std::vector<SuiteResult> run_suites(const std::string& name, int scale) {
  std::vector<SuiteResult> out;
  auto dispatch = [&](const std::string& n) {
    if (n == "corner-invariants") return corner_invariants(scale);
    if (n == "treap-oracle") return treap_oracle(scale);
    if (n == "loopon-enumeration") return loopon_enumeration(scale);
    if (n == "mass-transport") return mass_transport(scale);
    if (n == "stationarity") return stationarity(scale);
    if (n == "zoo-occupancy") return zoo_occupancy(scale);
    if (n == "surgery") return surgery(scale);
    if (n == "density") return density(scale);
    throw std::invalid_argument("unknown verification suite: " + n);
  };
  if (name == "all") {
    for (auto& n : suite_names()) out.push_back(dispatch(n));
  } else {
    out.push_back(dispatch(name));
  }
  return out;
}

}  // namespace invperc::verify
