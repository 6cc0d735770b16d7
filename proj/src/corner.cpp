#include "invperc/corner.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "invperc/clusters.hpp"

namespace invperc::corner {

namespace {

inline int parity_of(int x, int y) { return ((x + y) % 2 + 2) % 2; }

}  // namespace

bool CornerConfig::vertical_open(int x, int y) const {
  if (!win.contains(x, y) || !win.contains(x, y + 1)) return false;
  int s = xi_at(x);
  return parity_of(x, y) == 1 ? s == 1 : s == -1;
}

bool CornerConfig::horizontal_open(int x, int y) const {
  if (!win.contains(x, y) || !win.contains(x + 1, y)) return false;
  int s = eta_at(y);
  return parity_of(x, y) == 1 ? s == 1 : s == -1;
}

int CornerConfig::degree(int x, int y) const {
  return vertical_open(x, y) + vertical_open(x, y - 1) + horizontal_open(x, y) +
         horizontal_open(x - 1, y);
}

int CornerConfig::open_neighbors(Vertex v, Vertex out[2]) const {
  int n = 0;
  if (vertical_open(v.x, v.y)) out[n++] = {v.x, v.y + 1};
  if (vertical_open(v.x, v.y - 1)) out[n++] = {v.x, v.y - 1};
  if (n < 2 && horizontal_open(v.x, v.y)) out[n++] = {v.x + 1, v.y};
  if (n < 2 && horizontal_open(v.x - 1, v.y)) out[n++] = {v.x - 1, v.y};
  return n;
}

CornerConfig generate_corner(Window win, double p, double q,
                             std::uint64_t master_seed,
                             std::uint32_t generation) {
  if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
    throw std::invalid_argument("generate_corner: p, q must lie in (0,1)");
  if (win.width() <= 0 || win.height() <= 0)
    throw std::invalid_argument("generate_corner: empty window");
  CornerConfig cfg;
  cfg.win = win;
  cfg.p = p;
  cfg.q = q;
  cfg.seed = master_seed;
  cfg.xi.resize(win.width());
  cfg.eta.resize(win.height());
  // One stream per column/row so surgeries are pure key substitutions.
  for (int x = win.x0; x < win.x1; ++x) {
    auto s = rng::make_stream(master_seed, "corner.xi", rng::signed_key(x), generation);
    cfg.xi[x - win.x0] = static_cast<std::int8_t>(s.next_signed_bernoulli(p));
  }
  for (int y = win.y0; y < win.y1; ++y) {
    auto s = rng::make_stream(master_seed, "corner.eta", rng::signed_key(y), generation);
    cfg.eta[y - win.y0] = static_cast<std::int8_t>(s.next_signed_bernoulli(q));
  }
  return cfg;
}

CornerConfig make_constant_config(Window win, int xi_sign, int eta_sign) {
  CornerConfig cfg;
  cfg.win = win;
  cfg.p = xi_sign > 0 ? 1.0 : 0.0;  // degenerate, injected directly
  cfg.q = eta_sign > 0 ? 1.0 : 0.0;
  cfg.xi.assign(win.width(), static_cast<std::int8_t>(xi_sign));
  cfg.eta.assign(win.height(), static_cast<std::int8_t>(eta_sign));
  return cfg;
}

CornerConfig resample_columns(const CornerConfig& cfg, int col_lo, int col_hi,
                              std::uint32_t generation) {
  CornerConfig out = cfg;
  int lo = std::max(col_lo, cfg.win.x0);
  int hi = std::min(col_hi, cfg.win.x1 - 1);
  for (int x = lo; x <= hi; ++x) {
    auto s = rng::make_stream(cfg.seed, "corner.xi", rng::signed_key(x), generation);
    out.xi[x - cfg.win.x0] = static_cast<std::int8_t>(s.next_signed_bernoulli(cfg.p));
  }
  return out;
}

long long HeightField::square_height(int n, int m) const {
  long long s = walk_x(n) + walk_y(m);
  return parity_of(n, m) == 0 ? s / 2 : (s + 1) / 2;
}

long long HeightField::cluster_level_at(Vertex v) const {
  long long h = square_height(v.x, v.y);
  h = std::min(h, square_height(v.x - 1, v.y));
  h = std::min(h, square_height(v.x - 1, v.y - 1));
  h = std::min(h, square_height(v.x, v.y - 1));
  return h;
}

HeightField compute_height(const CornerConfig& cfg) {
  if (!cfg.win.contains_origin())
    throw std::invalid_argument("compute_height: window must contain the origin");
  HeightField hf;
  hf.win = cfg.win;
  hf.x_walk.resize(cfg.win.width());
  hf.y_walk.resize(cfg.win.height());
  // X_n - X_{n-1} = xi_n, anchored at X_0 = 0 (same for Y with eta).
  hf.x_walk[0 - cfg.win.x0] = 0;
  for (int n = 1; n < cfg.win.x1; ++n)
    hf.x_walk[n - cfg.win.x0] = hf.x_walk[n - 1 - cfg.win.x0] + cfg.xi_at(n);
  for (int n = -1; n >= cfg.win.x0; --n)
    hf.x_walk[n - cfg.win.x0] = hf.x_walk[n + 1 - cfg.win.x0] - cfg.xi_at(n + 1);
  hf.y_walk[0 - cfg.win.y0] = 0;
  for (int m = 1; m < cfg.win.y1; ++m)
    hf.y_walk[m - cfg.win.y0] = hf.y_walk[m - 1 - cfg.win.y0] + cfg.eta_at(m);
  for (int m = -1; m >= cfg.win.y0; --m)
    hf.y_walk[m - cfg.win.y0] = hf.y_walk[m + 1 - cfg.win.y0] - cfg.eta_at(m + 1);
  return hf;
}

long long TracedPath::dx() const {
  if (vertices.size() < 2) return 0;
  return vertices.back().x - vertices.front().x;
}

long long TracedPath::dy() const {
  if (vertices.size() < 2) return 0;
  return vertices.back().y - vertices.front().y;
}

bool TracedPath::touches_left(const Window& w) const {
  for (const Vertex& v : vertices)
    if (v.x == w.x0) return true;
  return false;
}
bool TracedPath::touches_right(const Window& w) const {
  for (const Vertex& v : vertices)
    if (v.x == w.x1 - 1) return true;
  return false;
}
bool TracedPath::touches_top(const Window& w) const {
  for (const Vertex& v : vertices)
    if (v.y == w.y1 - 1) return true;
  return false;
}
bool TracedPath::touches_bottom(const Window& w) const {
  for (const Vertex& v : vertices)
    if (v.y == w.y0) return true;
  return false;
}

TracedPath trace_path(const CornerConfig& cfg, Vertex v, long long max_steps) {
  if (!cfg.win.contains(v.x, v.y))
    throw std::invalid_argument("trace_path: start outside window");
  TracedPath path;
  Vertex nb[2];
  int n0 = cfg.open_neighbors(v, nb);
  path.vertices.push_back(v);
  if (n0 == 0) return path;

  auto walk = [&](Vertex prev, Vertex cur, std::vector<Vertex>& out) -> bool {
    // Follows the degree-<=2 structure; returns true if it closed a loop.
    for (long long step = 0; step < max_steps; ++step) {
      Vertex cand[2];
      int k = cfg.open_neighbors(cur, cand);
      Vertex next;
      bool found = false;
      for (int i = 0; i < k; ++i)
        if (!(cand[i] == prev)) {
          next = cand[i];
          found = true;
          break;
        }
      if (!found) return false;  // dead end at the window boundary
      if (next == v) return true;
      out.push_back(next);
      prev = cur;
      cur = next;
    }
    return false;
  };

  std::vector<Vertex> forward{nb[0]};
  path.is_loop = walk(v, nb[0], forward);
  if (path.is_loop) {
    path.vertices.insert(path.vertices.end(), forward.begin(), forward.end());
  } else {
    std::vector<Vertex> backward;
    if (n0 > 1) {
      backward.push_back(nb[1]);
      walk(v, nb[1], backward);
    }
    std::reverse(backward.begin(), backward.end());
    path.vertices = std::move(backward);
    path.vertices.push_back(v);
    path.vertices.insert(path.vertices.end(), forward.begin(), forward.end());
  }

  if (!path.is_loop && path.dx() < 0)
    std::reverse(path.vertices.begin(), path.vertices.end());
  path.oriented_positive = !path.is_loop && path.dx() > 0;
  return path;
}

SlopeResult slope_statistic(const TracedPath& path, long long min_length) {
  SlopeResult r;
  r.length = path.length();
  r.dx = path.dx();
  r.dy = path.dy();
  if (path.is_loop || r.length < min_length) {
    r.status = SlopeResult::Status::TooShort;
    return r;
  }
  if (r.dx == 0) {
    r.status = SlopeResult::Status::Vertical;
    return r;
  }
  r.status = SlopeResult::Status::Ok;
  r.slope = static_cast<double>(r.dy) / static_cast<double>(r.dx);
  return r;
}

double theoretical_slope(double p, double q) {
  if (q == 0.5)
    throw std::invalid_argument("theoretical_slope: q = 1/2 is the vertical regime");
  return (2.0 * p - 1.0) / (1.0 - 2.0 * q);
}

ParityReport parity_check(const CornerConfig& cfg, const TracedPath& path) {
  if (cfg.q == 0.5) throw std::invalid_argument("parity_check: requires q != 1/2");
  ParityReport rep;
  rep.expected_even_vertical = cfg.q > 0.5;
  if (path.is_loop) {
    rep.skipped_loop = true;
    return rep;
  }
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    const Vertex& a = path.vertices[i];
    const Vertex& b = path.vertices[i + 1];
    bool horizontal = a.y == b.y;
    if (a.parity() == 0) {
      ++(horizontal ? rep.even_horizontal : rep.even_vertical);
      if (horizontal == rep.expected_even_vertical) ++rep.violations;
    } else {
      ++(horizontal ? rep.odd_horizontal : rep.odd_vertical);
      if (horizontal != rep.expected_even_vertical) ++rep.violations;
    }
  }
  return rep;
}

Components window_components(const CornerConfig& cfg) {
  const int w = cfg.win.width();
  const long long n = cfg.win.cells();
  clusters::DisjointSets dsu(static_cast<int>(n));
  auto cell = [&](int x, int y) {
    return static_cast<int>((y - cfg.win.y0) * static_cast<long long>(w) +
                            (x - cfg.win.x0));
  };
  for (int y = cfg.win.y0; y < cfg.win.y1; ++y)
    for (int x = cfg.win.x0; x < cfg.win.x1; ++x) {
      if (cfg.horizontal_open(x, y)) dsu.unite(cell(x, y), cell(x + 1, y));
      if (cfg.vertical_open(x, y)) dsu.unite(cell(x, y), cell(x, y + 1));
    }
  Components comp;
  comp.win = cfg.win;
  comp.label.assign(n, -1);
  std::vector<int> remap(n, -1);
  for (long long i = 0; i < n; ++i) {
    int r = dsu.find(static_cast<int>(i));
    if (remap[r] < 0) {
      remap[r] = comp.count++;
      comp.size.push_back(0);
      comp.touch.push_back(0);
    }
    comp.label[i] = remap[r];
    ++comp.size[remap[r]];
  }
  for (int y = cfg.win.y0; y < cfg.win.y1; ++y) {
    comp.touch[comp.label_at(cfg.win.x0, y)] |= 1;
    comp.touch[comp.label_at(cfg.win.x1 - 1, y)] |= 2;
  }
  for (int x = cfg.win.x0; x < cfg.win.x1; ++x) {
    comp.touch[comp.label_at(x, cfg.win.y0)] |= 4;
    comp.touch[comp.label_at(x, cfg.win.y1 - 1)] |= 8;
  }
  return comp;
}

long count_degree_violations(const CornerConfig& cfg) {
  long bad = 0;
  for (int y = cfg.win.y0 + 1; y + 1 < cfg.win.y1; ++y)
    for (int x = cfg.win.x0 + 1; x + 1 < cfg.win.x1; ++x)
      if (cfg.degree(x, y) != 2) ++bad;
  return bad;
}

HeightReport height_bijection_check(const CornerConfig& cfg) {
  HeightReport rep;
  auto hf = compute_height(cfg);
  auto comp = window_components(cfg);

  // Step rule: an open edge separates heights differing by exactly 1 with
  // the black (even-cornered) square lower; a closed in-window edge
  // separates equal heights.
  for (int y = cfg.win.y0; y < cfg.win.y1; ++y)
    for (int x = cfg.win.x0; x < cfg.win.x1; ++x) {
      if (y + 1 < cfg.win.y1 && x > cfg.win.x0) {
        // vertical edge {(x,y),(x,y+1)}: squares (x-1,y) | (x,y)
        long long left = hf.square_height(x - 1, y);
        long long right = hf.square_height(x, y);
        if (cfg.vertical_open(x, y)) {
          long long black = parity_of(x - 1, y) == 0 ? left : right;
          long long white = parity_of(x - 1, y) == 0 ? right : left;
          if (white - black != 1) ++rep.step_rule_violations;
        } else if (left != right) {
          ++rep.step_rule_violations;
        }
      }
      if (x + 1 < cfg.win.x1 && y > cfg.win.y0) {
        // horizontal edge {(x,y),(x+1,y)}: squares (x,y-1) | (x,y)
        long long below = hf.square_height(x, y - 1);
        long long above = hf.square_height(x, y);
        if (cfg.horizontal_open(x, y)) {
          long long black = parity_of(x, y - 1) == 0 ? below : above;
          long long white = parity_of(x, y - 1) == 0 ? above : below;
          if (white - black != 1) ++rep.step_rule_violations;
        } else if (below != above) {
          ++rep.step_rule_violations;
        }
      }
    }

  // Per-component level constancy over interior even vertices.
  std::vector<long long> level(comp.count, 0);
  std::vector<char> seen(comp.count, 0);
  for (int y = cfg.win.y0 + 1; y < cfg.win.y1; ++y)
    for (int x = cfg.win.x0 + 1; x < cfg.win.x1; ++x) {
      if (parity_of(x, y) != 0) continue;
      int c = comp.label_at(x, y);
      long long h = hf.cluster_level_at({x, y});
      if (!seen[c]) {
        seen[c] = 1;
        level[c] = h;
      } else if (level[c] != h) {
        ++rep.constancy_violations;
      }
    }

  // Spanning paths and level injectivity.
  std::vector<Vertex> left_contact(comp.count), right_contact(comp.count);
  std::vector<char> has_left(comp.count, 0), has_right(comp.count, 0);
  for (int y = cfg.win.y0; y < cfg.win.y1; ++y) {
    int cl = comp.label_at(cfg.win.x0, y);
    if (!has_left[cl]) {
      has_left[cl] = 1;
      left_contact[cl] = {cfg.win.x0, y};
    }
    int cr = comp.label_at(cfg.win.x1 - 1, y);
    if (!has_right[cr]) {
      has_right[cr] = 1;
      right_contact[cr] = {cfg.win.x1 - 1, y};
    }
  }
  std::map<long long, int> level_count;
  for (int c = 0; c < comp.count; ++c) {
    if (!comp.spans_horizontally(c) || comp.size[c] < 2) continue;
    if (!seen[c]) continue;  // no interior even vertex to read a level from
    SpanningPath sp;
    sp.component = c;
    sp.level = level[c];
    sp.left_contact = left_contact[c];
    sp.right_contact = right_contact[c];
    sp.size = comp.size[c];
    rep.spanning.push_back(sp);
    ++rep.spanning_count;
    ++level_count[level[c]];
  }
  for (auto& [h, k] : level_count)
    if (k > 1) rep.collision_count += k - 1;
  return rep;
}

SurgeryOutcome surgery_experiment(const CornerConfig& cfg, int col_lo,
                                  int col_hi, std::uint32_t generation) {
  SurgeryOutcome out;
  CornerConfig cfg2 =
      col_lo > col_hi ? cfg : resample_columns(cfg, col_lo, col_hi, generation);

  // Locality: horizontal edges share eta wholesale; vertical edges depend
  // only on their own column's xi.
  out.outside_identical = true;
  for (int y = cfg.win.y0; y < cfg.win.y1 && out.outside_identical; ++y)
    for (int x = cfg.win.x0; x < cfg.win.x1; ++x) {
      if (cfg.horizontal_open(x, y) != cfg2.horizontal_open(x, y)) {
        out.outside_identical = false;
        break;
      }
      if (x >= col_lo && x <= col_hi) continue;
      if (cfg.vertical_open(x, y) != cfg2.vertical_open(x, y)) {
        out.outside_identical = false;
        break;
      }
    }

  // Designate two spanning paths with adjacent levels near 0, their
  // contacts clear of the resampled columns.
  auto rep = height_bijection_check(cfg);
  std::vector<const SpanningPath*> sorted;
  for (const auto& sp : rep.spanning) sorted.push_back(&sp);
  std::sort(sorted.begin(), sorted.end(),
            [](const SpanningPath* a, const SpanningPath* b) {
              return a->level < b->level;
            });
  const SpanningPath* pa = nullptr;
  const SpanningPath* pb = nullptr;
  long long best = std::numeric_limits<long long>::max();
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    long long gap = sorted[i + 1]->level - sorted[i]->level;
    if (gap == 0) continue;
    long long center = std::abs(sorted[i]->level + sorted[i + 1]->level);
    long long score = gap * 1000000 + center;
    if (score < best) {
      best = score;
      pa = sorted[i];
      pb = sorted[i + 1];
    }
  }
  if (!pa || !pb) return out;
  out.designees_found = true;
  out.u = pa->left_contact;
  out.v = pb->right_contact;
  out.level_u_before = pa->level;
  out.level_v_before = pb->level;

  auto hf2 = compute_height(cfg2);
  auto comp2 = window_components(cfg2);
  auto level_of_component = [&](int c, long long& level_out) {
    for (int y = cfg.win.y0 + 1; y < cfg.win.y1; ++y)
      for (int x = cfg.win.x0 + 1; x < cfg.win.x1; ++x)
        if (parity_of(x, y) == 0 && comp2.label_at(x, y) == c) {
          level_out = hf2.cluster_level_at({x, y});
          return;
        }
  };
  int cu = comp2.label_at(out.u.x, out.u.y);
  int cv = comp2.label_at(out.v.x, out.v.y);
  level_of_component(cu, out.level_u_after);
  level_of_component(cv, out.level_v_after);
  out.height_matched = out.level_u_after == out.level_v_after;
  out.merged = cu == cv;
  return out;
}

SignProcess sign_process(const TracedPath& path) {
  SignProcess sp;
  std::size_t edges = path.vertices.size() >= 2
                          ? path.vertices.size() - (path.is_loop ? 0 : 1)
                          : 0;
  sp.signs.reserve(edges);
  for (std::size_t i = 0; i < edges; ++i) {
    const Vertex& a = path.vertices[i];
    const Vertex& b = path.vertices[(i + 1) % path.vertices.size()];
    bool up_or_right = b.x > a.x || b.y > a.y;
    sp.signs.push_back(up_or_right ? +1 : -1);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < sp.signs.size(); i += 2) {
    sp.even_steps.push_back(sp.signs[i]);
    sum += sp.signs[i];
    sp.prefix_mean.push_back(sum / static_cast<double>(sp.even_steps.size()));
  }
  return sp;
}

}  // namespace invperc::corner
