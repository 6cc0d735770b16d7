#include "invperc/runconfig.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>
#include <thread>

#include "invperc/clusters.hpp"
#include "invperc/corner.hpp"
#include "invperc/interchange.hpp"
#include "invperc/lattice.hpp"
#include "invperc/loopmodel.hpp"
#include "invperc/svg.hpp"
#include "invperc/zoo.hpp"

namespace invperc::cli {

namespace {

using nlohmann::json;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool has_analysis(const RunConfig& cfg, const std::string& name) {
  return std::find(cfg.analyses.begin(), cfg.analyses.end(), name) !=
         cfg.analyses.end();
}

lattice::LatticeGraph build_graph(const std::string& kind_name,
                                  const std::vector<int>& dims) {
  auto kind = lattice::kind_from_name(kind_name);
  if (!kind) throw std::invalid_argument("unknown lattice kind: " + kind_name);
  auto boundary = *kind == lattice::Kind::Z2Torus ? lattice::Boundary::Periodic
                                                  : lattice::Boundary::Free;
  return lattice::build_lattice(*kind, dims, boundary);
}

corner::Window centered_window(const std::vector<int>& dims) {
  int w = dims.at(0), h = dims.at(1);
  return corner::Window{-w / 2, w - w / 2, -h / 2, h - h / 2};
}

// --- scene builders -------------------------------------------------------

struct Frame {
  double unit, margin;
  int height_cells;
  double x(double cx) const { return margin + cx * unit; }
  double y(double cy) const { return margin + (height_cells - cy) * unit; }
};

Frame make_frame(int w_cells, int h_cells) {
  double unit = std::max(2.0, std::min(12.0, 1024.0 / std::max(w_cells, h_cells)));
  return Frame{unit, unit, h_cells};
}

std::string corner_scene(const corner::CornerConfig& cc, const std::string& style) {
  const corner::Window& w = cc.win;
  Frame fr = make_frame(w.width(), w.height());
  svg::Document doc(fr.x(w.width()) + fr.margin, fr.y(-1) + fr.margin);
  bool by_height = style == "heights";
  corner::Components comp;
  corner::HeightField hf;
  std::vector<long long> level;
  if (by_height) {
    comp = corner::window_components(cc);
    hf = corner::compute_height(cc);
    level.assign(comp.count, 0);
    std::vector<char> seen(comp.count, 0);
    for (int y = w.y0 + 1; y < w.y1; ++y)
      for (int x = w.x0 + 1; x < w.x1; ++x) {
        int c = comp.label_at(x, y);
        if (!seen[c]) {
          seen[c] = 1;
          level[c] = hf.cluster_level_at({x, y});
        }
      }
  }
  for (int y = w.y0; y < w.y1; ++y)
    for (int x = w.x0; x < w.x1; ++x) {
      double cx = x - w.x0, cy = y - w.y0;
      std::string color = "#202020";
      if (by_height) color = svg::palette_color(level[comp.label_at(x, y)]);
      if (cc.horizontal_open(x, y))
        doc.line(fr.x(cx), fr.y(cy), fr.x(cx + 1), fr.y(cy), color, fr.unit * 0.22);
      if (cc.vertical_open(x, y))
        doc.line(fr.x(cx), fr.y(cy), fr.x(cx), fr.y(cy + 1), color, fr.unit * 0.22);
    }
  return doc.str();
}

void draw_vertex_grid(svg::Document& doc, const Frame& fr,
                      const lattice::LatticeGraph& g) {
  if (g.vertex_count() > 40000) return;
  for (int v = 0; v < g.vertex_count(); ++v) {
    auto c = g.coord(v);
    doc.circle(fr.x(c.x), fr.y(c.y), fr.unit * 0.08, "#c8c8c8");
  }
}

std::string edge_scene(const lattice::LatticeGraph& g,
                       const std::vector<char>& open) {
  int w = g.dims()[0], h = g.dims().size() > 1 ? g.dims()[1] : 1;
  Frame fr = make_frame(w, h);
  svg::Document doc(fr.x(w) + fr.margin, fr.y(-1) + fr.margin);
  draw_vertex_grid(doc, fr, g);
  bool torus = g.kind() == lattice::Kind::Z2Torus;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!open[e]) continue;
    auto a = g.coord(g.edge(e).u);
    auto b = g.coord(g.edge(e).v);
    if (torus && (std::abs(a.x - b.x) > 1 || std::abs(a.y - b.y) > 1))
      continue;  // wrap edges are omitted from the picture
    doc.line(fr.x(a.x), fr.y(a.y), fr.x(b.x), fr.y(b.y), "#202020", fr.unit * 0.22);
  }
  return doc.str();
}

std::string site_scene(const lattice::LatticeGraph& g,
                       const std::vector<char>& occupied) {
  int w = g.dims()[0], h = g.dims().size() > 1 ? g.dims()[1] : 1;
  Frame fr = make_frame(w, h);
  svg::Document doc(fr.x(w) + fr.margin, fr.y(-1) + fr.margin);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!occupied[v]) continue;
    auto c = g.coord(v);
    doc.rect(fr.x(c.x) - fr.unit / 2, fr.y(c.y) - fr.unit / 2, fr.unit, fr.unit,
             "#2a4d8f");
  }
  return doc.str();
}

std::string interchange_scene(const lattice::LatticeGraph& g,
                              const interchange::InterchangeResult& res) {
  int w = g.dims()[0], h = g.dims().size() > 1 ? g.dims()[1] : 1;
  Frame fr = make_frame(w, h);
  svg::Document doc(fr.x(w) + fr.margin, fr.y(-1) + fr.margin);
  draw_vertex_grid(doc, fr, g);
  // the two longest cycles, each closed through its permutation orbit
  std::vector<std::pair<int, int>> cycles;  // (length, representative)
  std::vector<char> seen(g.vertex_count(), 0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    int r = res.cycles.cycle_root(v);
    if (!seen[r]) {
      seen[r] = 1;
      cycles.push_back({res.cycles.cycle_length(v), v});
    }
  }
  std::sort(cycles.begin(), cycles.end(),
            [](auto a, auto b) { return a.first > b.first; });
  for (std::size_t k = 0; k < std::min<std::size_t>(2, cycles.size()); ++k) {
    if (cycles[k].first < 2) break;
    auto orbit = res.cycles.cycle_of(cycles[k].second);
    std::vector<std::pair<double, double>> pts;
    for (int v : orbit) {
      auto c = g.coord(v);
      pts.push_back({fr.x(c.x), fr.y(c.y)});
    }
    pts.push_back(pts.front());
    doc.polyline(pts, k == 0 ? "#d62728" : "#1f77b4", fr.unit * 0.18);
  }
  return doc.str();
}

// --- per-model runs -------------------------------------------------------

json corner_header(const RunConfig& cfg, std::uint64_t seed) {
  auto w = centered_window(cfg.dims);
  return json{{"model", "corner"},
              {"kind", "z2_window"},
              {"dims", cfg.dims},
              {"window", {w.x0, w.x1, w.y0, w.y1}},
              {"p", cfg.p},
              {"q", cfg.q},
              {"seed", seed},
              {"payload", "corner_signs"}};
}

void run_corner(const RunConfig& cfg, std::uint64_t seed, ResultBundle& out) {
  auto window = centered_window(cfg.dims);
  auto cc = corner::generate_corner(window, cfg.p, cfg.q, seed);
  json rep;
  rep["seed"] = seed;
  rep["degree_violations"] = corner::count_degree_violations(cc);

  bool want_heights = has_analysis(cfg, "heights");
  bool want_slope = has_analysis(cfg, "slope");
  bool want_parity = has_analysis(cfg, "parity");
  bool want_signs = has_analysis(cfg, "signs");
  bool want_surgery = has_analysis(cfg, "surgery");

  corner::HeightReport hr;
  if (want_heights || want_slope || want_parity || want_signs) {
    hr = corner::height_bijection_check(cc);
    rep["spanning_paths"] = hr.spanning_count;
  }
  if (want_heights) {
    rep["height_constancy_violations"] = hr.constancy_violations;
    rep["height_step_violations"] = hr.step_rule_violations;
    rep["level_collisions"] = hr.collision_count;
    io::Csv t({"seed", "component", "level", "size"});
    for (auto& sp : hr.spanning)
      t.row({std::to_string(seed), std::to_string(sp.component),
             std::to_string(sp.level), std::to_string(sp.size)});
    out.tables["heights"] += t.body();
  }
  if (want_slope) {
    io::Csv t({"seed", "component", "level", "length", "dx", "dy", "slope"});
    stats::Accumulator acc;
    for (auto& sp : hr.spanning) {
      auto path = corner::trace_path(cc, sp.left_contact);
      // a spanning component may be clipped into several window pieces;
      // only a piece crossing the full width carries the slope
      if (!path.spans_horizontally(cc.win)) continue;
      auto sr = corner::slope_statistic(path, 100);
      if (sr.status != corner::SlopeResult::Status::Ok) continue;
      acc.add(sr.slope);
      t.row({std::to_string(seed), std::to_string(sp.component),
             std::to_string(sp.level), std::to_string(sr.length),
             std::to_string(sr.dx), std::to_string(sr.dy),
             io::fmt_double(sr.slope)});
    }
    out.tables["slope"] += t.body();
    rep["slope_mean"] = acc.count() ? acc.mean() : 0.0;
    rep["slope_paths"] = acc.count();
    if (cfg.q != 0.5) rep["slope_theoretical"] = corner::theoretical_slope(cfg.p, cfg.q);
  }
  if (want_parity && cfg.q != 0.5) {
    io::Csv t({"seed", "component", "even_horizontal", "even_vertical",
               "odd_horizontal", "odd_vertical", "violations"});
    long violations = 0;
    for (auto& sp : hr.spanning) {
      auto path = corner::trace_path(cc, sp.left_contact);
      auto pr = corner::parity_check(cc, path);
      violations += pr.violations;
      t.row({std::to_string(seed), std::to_string(sp.component),
             std::to_string(pr.even_horizontal), std::to_string(pr.even_vertical),
             std::to_string(pr.odd_horizontal), std::to_string(pr.odd_vertical),
             std::to_string(pr.violations)});
    }
    out.tables["parity"] += t.body();
    rep["parity_violations"] = violations;
  }
  if (want_signs && !hr.spanning.empty()) {
    auto path = corner::trace_path(cc, hr.spanning.front().left_contact);
    auto sp = corner::sign_process(path);
    io::Csv t({"seed", "step", "sign", "prefix_mean"});
    for (std::size_t i = 0; i < sp.even_steps.size(); ++i)
      t.row({std::to_string(seed), std::to_string(2 * i),
             std::to_string(sp.even_steps[i]), io::fmt_double(sp.prefix_mean[i])});
    out.tables["signs"] += t.body();
  }
  if (want_surgery) {
    auto so = corner::surgery_experiment(cc, 0, 8);
    rep["surgery"] = json{{"outside_identical", so.outside_identical},
                          {"designees_found", so.designees_found},
                          {"merged", so.merged},
                          {"height_matched", so.height_matched},
                          {"level_u_before", so.level_u_before},
                          {"level_v_before", so.level_v_before},
                          {"level_u_after", so.level_u_after},
                          {"level_v_after", so.level_v_after}};
  }
  out.report["replicas"].push_back(rep);

  if (!cfg.render_path.empty() && !out.scene)
    out.scene = corner_scene(cc, "heights");
  if (!cfg.save_path.empty() && seed == cfg.seed) {
    std::vector<char> bits;
    for (auto s : cc.xi) bits.push_back(s > 0 ? 1 : 0);
    for (auto s : cc.eta) bits.push_back(s > 0 ? 1 : 0);
    io::save_config(cfg.save_path, corner_header(cfg, seed), bits);
  }
}

void run_interchange_model(const RunConfig& cfg, std::uint64_t seed,
                           ResultBundle& out) {
  auto g = build_graph(cfg.lattice_kind, cfg.dims);
  auto tl = interchange::generate_timeline(g, cfg.beta, seed);
  auto res = interchange::run_interchange(g, tl, seed);

  // cycles sorted by (length desc, representative)
  std::vector<std::pair<int, int>> cycles;
  std::vector<char> seen(g.vertex_count(), 0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    int r = res.cycles.cycle_root(v);
    if (!seen[r]) {
      seen[r] = 1;
      cycles.push_back({-res.cycles.cycle_length(v), v});
    }
  }
  std::sort(cycles.begin(), cycles.end());

  io::Csv t(cfg.emit_cycles
                ? std::vector<std::string>{"seed", "cycle_id", "length", "vertices"}
                : std::vector<std::string>{"seed", "cycle_id", "length"});
  int id = 0;
  for (auto& [neg_len, v] : cycles) {
    if (cfg.emit_cycles) {
      std::string verts;
      for (int u : res.cycles.cycle_of(v)) {
        if (!verts.empty()) verts += ' ';
        verts += std::to_string(u);
      }
      t.row({std::to_string(seed), std::to_string(id), std::to_string(-neg_len), verts});
    } else {
      t.row({std::to_string(seed), std::to_string(id), std::to_string(-neg_len)});
    }
    ++id;
  }
  out.tables["cycles"] += t.body();

  json rep;
  rep["seed"] = seed;
  rep["ring_count"] = res.ring_count;
  rep["cycle_count"] = id;
  rep["sign"] = interchange::permutation_sign(res.pi);
  rep["sign_matches_ring_parity"] =
      interchange::permutation_sign(res.pi) == (res.ring_count % 2 == 0 ? 1 : -1);
  json hist = json::object();
  for (auto& [len, count] : res.cycles.cycle_length_histogram())
    hist[std::to_string(len)] = count;
  rep["cycle_length_histogram"] = hist;
  out.report["replicas"].push_back(rep);

  if (!cfg.render_path.empty() && !out.scene)
    out.scene = interchange_scene(g, res);
  if (!cfg.save_path.empty() && seed == cfg.seed) {
    std::vector<char> used(g.edge_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) used[e] = !tl.rings[e].empty();
    io::save_config(cfg.save_path,
                    json{{"model", "interchange"},
                         {"kind", cfg.lattice_kind},
                         {"dims", cfg.dims},
                         {"beta", cfg.beta},
                         {"seed", seed},
                         {"payload", "edge_bits"}},
                    used);
  }
}

void run_loopon(const RunConfig& cfg, std::uint64_t seed, ResultBundle& out) {
  auto g = build_graph(cfg.lattice_kind, cfg.dims);
  auto res = loopon::run_chain(g, {cfg.x, cfg.n}, cfg.sweeps, cfg.sample_interval,
                               seed);
  io::Csv t({"seed", "sweep", "open_edges", "loops", "longest_loop"});
  for (auto& s : res.samples)
    t.row({std::to_string(seed), std::to_string(s.sweep),
           std::to_string(s.open_edges), std::to_string(s.loops),
           std::to_string(s.longest_loop)});
  out.tables["stats"] += t.body();

  json rep;
  rep["seed"] = seed;
  rep["proposals"] = res.proposals;
  rep["accepted"] = res.accepted;
  rep["invalid_proposals"] = res.invalid_proposals;
  rep["bound_violations"] = res.bound_violations;
  rep["final_edges"] = res.final_config.open_edge_count();
  rep["final_loops"] = res.final_config.loop_count();
  out.report["replicas"].push_back(rep);

  if (!cfg.render_path.empty() && !out.scene)
    out.scene = edge_scene(g, res.final_config.bits());
  if (!cfg.save_path.empty() && seed == cfg.seed)
    io::save_config(cfg.save_path,
                    json{{"model", "loopon"},
                         {"kind", cfg.lattice_kind},
                         {"dims", cfg.dims},
                         {"x", cfg.x},
                         {"n", cfg.n},
                         {"sweeps", cfg.sweeps},
                         {"seed", seed},
                         {"payload", "edge_bits"}},
                    res.final_config.bits());
}

void run_zoo(const RunConfig& cfg, std::uint64_t seed, ResultBundle& out) {
  auto g = build_graph(cfg.lattice_kind, cfg.dims);
  auto dist = zoo::AnimalDistribution::parse(cfg.animal);
  if (!dist) throw std::invalid_argument("invalid animal distribution: " + cfg.animal);
  bool audit = has_analysis(cfg, "audit");
  auto zc = zoo::generate_zoo(g, cfg.lambda, *dist, seed, audit);

  json rep;
  rep["seed"] = seed;
  rep["occupied_fraction"] = zc.occupied_fraction();
  rep["placements"] = zc.placement_count;
  rep["clipped_placements"] = zc.clipped_count;
  rep["animal"] = dist->describe();
  rep["truncated_tail_mass"] = dist->truncated_tail_mass();

  auto part = clusters::components_sites(g, [&](int v) { return zc.occupied[v] != 0; });
  std::map<long, long> hist;
  for (int c = 0; c < part.count; ++c) ++hist[part.size[c]];
  io::Csv t({"seed", "cluster_size", "count"});
  for (auto& [size, count] : hist)
    t.row({std::to_string(seed), std::to_string(size), std::to_string(count)});
  out.tables["clusters"] += t.body();
  rep["cluster_count"] = part.count;
  rep["largest_cluster"] =
      part.count ? *std::max_element(part.size.begin(), part.size.end()) : 0;

  if (has_analysis(cfg, "bernoulli") && dist->kind == zoo::AnimalKind::Singleton) {
    auto br = zoo::reduce_to_bernoulli_check(g, cfg.lambda, 20, seed + 1);
    rep["bernoulli_reduction"] = json{{"occupancy", br.occupancy},
                                      {"expected", br.expected},
                                      {"occupancy_ok", br.occupancy_ok},
                                      {"correlation_ok", br.correlation_ok},
                                      {"histogram_ok", br.histogram_ok}};
  }
  out.report["replicas"].push_back(rep);

  if (!cfg.render_path.empty() && !out.scene) out.scene = site_scene(g, zc.occupied);
  if (!cfg.save_path.empty() && seed == cfg.seed)
    io::save_config(cfg.save_path,
                    json{{"model", "zoo"},
                         {"kind", cfg.lattice_kind},
                         {"dims", cfg.dims},
                         {"lambda", cfg.lambda},
                         {"animal", dist->describe()},
                         {"seed", seed},
                         {"payload", "site_bits"}},
                    zc.occupied);
}

}  // namespace

json RunConfig::to_json() const {
  return json{{"model", model},
              {"lattice", {{"kind", lattice_kind}, {"dims", dims}}},
              {"params",
               {{"beta", beta},
                {"p", p},
                {"q", q},
                {"x", x},
                {"n", n},
                {"sweeps", sweeps},
                {"sample_interval", sample_interval},
                {"lambda", lambda},
                {"animal", animal}}},
              {"seed", seed},
              {"analyses", analyses},
              {"out", out},
              {"format", format},
              {"replicas", replicas},
              {"jobs", jobs},
              {"emit_cycles", emit_cycles},
              {"save", save_path},
              {"render", render_path}};
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig cfg;
  cfg.model = j.value("model", "");
  if (j.contains("lattice")) {
    cfg.lattice_kind = j["lattice"].value("kind", "z2_window");
    cfg.dims = j["lattice"].value("dims", std::vector<int>{});
  }
  if (j.contains("params")) {
    const auto& p = j["params"];
    cfg.beta = p.value("beta", 1.0);
    cfg.p = p.value("p", 0.5);
    cfg.q = p.value("q", 0.5);
    cfg.x = p.value("x", 1.0);
    cfg.n = p.value("n", 1.0);
    cfg.sweeps = p.value("sweeps", 1000L);
    cfg.sample_interval = p.value("sample_interval", 10L);
    cfg.lambda = p.value("lambda", 0.1);
    cfg.animal = p.value("animal", "singleton");
  }
  cfg.seed = j.value("seed", 0ULL);
  cfg.analyses = j.value("analyses", std::vector<std::string>{});
  cfg.out = j.value("out", "");
  cfg.format = j.value("format", "csv");
  cfg.replicas = j.value("replicas", 1);
  cfg.jobs = j.value("jobs", 1);
  cfg.emit_cycles = j.value("emit_cycles", false);
  cfg.save_path = j.value("save", "");
  cfg.render_path = j.value("render", "");
  return cfg;
}

std::optional<std::string> RunConfig::validate() const {
  if (model != "interchange" && model != "corner" && model != "loopon" &&
      model != "zoo")
    return "model";
  auto kind = lattice::kind_from_name(lattice_kind);
  if (!kind) return "lattice";
  if (model == "loopon" && *kind != lattice::Kind::HexPatch &&
      *kind != lattice::Kind::Z2Window && *kind != lattice::Kind::Z2Torus)
    return "lattice";
  if (model == "zoo" && *kind == lattice::Kind::TreeTruncation) return "lattice";
  if (dims.empty()) return "dims";
  for (int d : dims)
    if (d <= 0) return "dims";
  if (model == "corner") {
    if (dims.size() != 2) return "dims";
    if (!(p > 0.0 && p < 1.0)) return "p";
    if (!(q > 0.0 && q < 1.0)) return "q";
  }
  if (model == "interchange" && beta < 0.0) return "beta";
  if (model == "loopon") {
    if (x < 0.0) return "x";
    if (n < 0.0) return "n";
    if (sweeps <= 0) return "sweeps";
    if (sample_interval <= 0) return "sample_interval";
  }
  if (model == "zoo") {
    if (lambda < 0.0) return "lambda";
    if (!zoo::AnimalDistribution::parse(animal)) return "animal";
  }
  if (replicas < 1) return "replicas";
  if (jobs < 1) return "jobs";
  if (format != "csv" && format != "json") return "format";
  return std::nullopt;
}

json ResultBundle::to_json() const {
  json j;
  j["header"] = header;
  j["report"] = report;
  return j;
}

ResultBundle run(const RunConfig& cfg) {
  if (auto bad = cfg.validate())
    throw std::invalid_argument("invalid run configuration: field '" + *bad + "'");

  ResultBundle bundle;
  bundle.report["replicas"] = json::array();

  // Replicas fan out over worker threads; bundles merge in seed order.
  std::vector<ResultBundle> partial(cfg.replicas);
  std::vector<std::string> errors(cfg.replicas);
  auto worker = [&](int idx) {
    try {
      partial[idx].report["replicas"] = json::array();
      std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(idx);
      if (cfg.model == "corner") run_corner(cfg, seed, partial[idx]);
      else if (cfg.model == "interchange") run_interchange_model(cfg, seed, partial[idx]);
      else if (cfg.model == "loopon") run_loopon(cfg, seed, partial[idx]);
      else run_zoo(cfg, seed, partial[idx]);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  };
  if (cfg.jobs <= 1 || cfg.replicas == 1) {
    for (int i = 0; i < cfg.replicas; ++i) worker(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    int threads = std::min(cfg.jobs, cfg.replicas);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < cfg.replicas; i = next.fetch_add(1))
          worker(i);
      });
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < cfg.replicas; ++i)
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);

  for (int i = 0; i < cfg.replicas; ++i) {
    for (auto& [name, body] : partial[i].tables) {
      if (bundle.tables.count(name)) {
        // drop the duplicate header row
        auto pos = body.find('\n');
        bundle.tables[name] += body.substr(pos + 1);
      } else {
        bundle.tables[name] = body;
      }
    }
    for (auto& rep : partial[i].report["replicas"])
      bundle.report["replicas"].push_back(rep);
    if (!bundle.scene && partial[i].scene) bundle.scene = partial[i].scene;
  }

  bundle.header = json{{"tool", "invperc"},
                       {"version", kVersion},
                       {"config", cfg.to_json()},
                       {"seed", cfg.seed},
                       {"timestamp", iso_timestamp()}};
  return bundle;
}

namespace {

std::string strip_known_extension(const std::string& path) {
  for (const char* ext : {".csv", ".json", ".svg", ".png"}) {
    std::string e = ext;
    if (path.size() > e.size() &&
        path.compare(path.size() - e.size(), e.size(), e) == 0)
      return path.substr(0, path.size() - e.size());
  }
  return path;
}

}  // namespace

std::vector<std::string> persist(const ResultBundle& bundle, const RunConfig& cfg) {
  if (cfg.out.empty()) throw std::invalid_argument("persist: empty output path");
  std::vector<std::string> written;
  std::string stem = strip_known_extension(cfg.out);

  json doc = bundle.to_json();
  if (cfg.format == "json") {
    // tables travel inside the report instead of as separate files
    doc["tables"] = json::object();
    for (auto& [name, body] : bundle.tables) doc["tables"][name] = body;
  } else {
    bool single_csv_out = cfg.out.size() > 4 &&
                          cfg.out.compare(cfg.out.size() - 4, 4, ".csv") == 0 &&
                          bundle.tables.size() == 1;
    for (auto& [name, body] : bundle.tables) {
      std::string path = single_csv_out ? cfg.out : stem + "." + name + ".csv";
      io::atomic_write(path, body);
      written.push_back(path);
    }
  }
  std::string report_path = stem + ".json";
  io::atomic_write(report_path, doc.dump(2) + "\n");
  written.push_back(report_path);
  if (bundle.scene) {
    std::string scene_path =
        cfg.render_path.empty() ? stem + ".svg" : cfg.render_path;
    io::atomic_write(scene_path, *bundle.scene);
    written.push_back(scene_path);
  }
  return written;
}

ResultBundle analyze(const io::SavedConfig& saved,
                     const std::vector<std::string>& analyses) {
  ResultBundle out;
  const json& h = saved.header;
  std::string model = h.value("model", "");
  std::string payload = h.value("payload", "");
  out.report["model"] = model;

  auto want = [&](const std::string& a) {
    return analyses.empty() ||
           std::find(analyses.begin(), analyses.end(), a) != analyses.end();
  };

  if (payload == "corner_signs") {
    auto wdims = h.at("window");
    corner::Window w{wdims[0], wdims[1], wdims[2], wdims[3]};
    corner::CornerConfig cc;
    cc.win = w;
    cc.p = h.value("p", 0.5);
    cc.q = h.value("q", 0.5);
    cc.xi.resize(w.width());
    cc.eta.resize(w.height());
    for (int i = 0; i < w.width(); ++i) cc.xi[i] = saved.bits.at(i) ? 1 : -1;
    for (int i = 0; i < w.height(); ++i)
      cc.eta[i] = saved.bits.at(w.width() + i) ? 1 : -1;

    if (want("components")) {
      auto comp = corner::window_components(cc);
      out.report["component_count"] = comp.count;
      io::Csv t({"component", "size", "spans_horizontally", "spans_vertically"});
      for (int c = 0; c < comp.count; ++c)
        t.row({std::to_string(c), std::to_string(comp.size[c]),
               comp.spans_horizontally(c) ? "1" : "0",
               comp.spans_vertically(c) ? "1" : "0"});
      out.tables["components"] = t.body();
    }
    if (want("heights")) {
      auto hr = corner::height_bijection_check(cc);
      out.report["heights"] = json{{"spanning", hr.spanning_count},
                                   {"collisions", hr.collision_count},
                                   {"constancy_violations", hr.constancy_violations},
                                   {"step_violations", hr.step_rule_violations}};
    }
    out.report["degree_violations"] = corner::count_degree_violations(cc);
    return out;
  }

  auto g = build_graph(h.value("kind", "z2_window"),
                       h.value("dims", std::vector<int>{}));
  bool site = payload == "site_bits";
  if ((site && static_cast<int>(saved.bits.size()) != g.vertex_count()) ||
      (!site && static_cast<int>(saved.bits.size()) != g.edge_count()))
    throw std::runtime_error("analyze: payload does not match the lattice");
  const std::vector<char>& bits = saved.bits;

  clusters::ClusterPartition part =
      site ? clusters::components_sites(g, [&](int v) { return bits[v] != 0; })
           : clusters::components_edges(g, [&](int e) { return bits[e] != 0; });
  if (want("components")) {
    out.report["component_count"] = part.count;
    std::map<std::string, long> class_hist;
    io::Csv t({"component", "size", "ends_class"});
    for (int c = 0; c < part.count; ++c) {
      const char* cls = clusters::ends_class_name(clusters::ends_classification(part, c));
      ++class_hist[cls];
      t.row({std::to_string(c), std::to_string(part.size[c]), cls});
    }
    out.tables["components"] = t.body();
    out.report["ends_classes"] = class_hist;
  }
  if (want("mtp") && g.kind() == lattice::Kind::Z2Torus) {
    clusters::EdgeOpen open_edge =
        site ? clusters::EdgeOpen([&g, &bits](int e) {
            return bits[g.edge(e).u] != 0 && bits[g.edge(e).v] != 0;
          })
             : clusters::EdgeOpen([&bits](int e) { return bits[e] != 0; });
    json mtp = json::array();
    for (auto phi : {clusters::phi_identity(), clusters::phi_adjacency(g, open_edge),
                     clusters::phi_cluster_share(g, open_edge, 3)}) {
      auto rep = clusters::mass_transport_check(g, phi);
      mtp.push_back(json{{"phi", phi.name},
                         {"send", rep.send_sum},
                         {"receive", rep.receive_sum},
                         {"discrepancy", rep.discrepancy},
                         {"holds", rep.holds()}});
    }
    out.report["mass_transport"] = mtp;
  }
  return out;
}

std::string render_saved(const io::SavedConfig& saved, const std::string& style) {
  const json& h = saved.header;
  std::string payload = h.value("payload", "");
  if (payload == "corner_signs") {
    auto wdims = h.at("window");
    corner::Window w{wdims[0], wdims[1], wdims[2], wdims[3]};
    corner::CornerConfig cc;
    cc.win = w;
    cc.p = h.value("p", 0.5);
    cc.q = h.value("q", 0.5);
    cc.xi.resize(w.width());
    cc.eta.resize(w.height());
    for (int i = 0; i < w.width(); ++i) cc.xi[i] = saved.bits.at(i) ? 1 : -1;
    for (int i = 0; i < w.height(); ++i)
      cc.eta[i] = saved.bits.at(w.width() + i) ? 1 : -1;
    return corner_scene(cc, style);
  }
  auto g = build_graph(h.value("kind", "z2_window"),
                       h.value("dims", std::vector<int>{}));
  if (payload == "site_bits") return site_scene(g, saved.bits);
  return edge_scene(g, saved.bits);
}

}  // namespace invperc::cli
