#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "invperc/random.hpp"

namespace invperc::corner {

// Half-open window [x0,x1) x [y0,y1) in signed Z^2 coordinates. Height
// computations anchor prefix walks at 0, so windows must straddle the
// origin for those.
struct Window {
  int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool contains(int x, int y) const {
    return x >= x0 && x < x1 && y >= y0 && y < y1;
  }
  bool contains_origin() const { return contains(0, 0); }
  long long cells() const { return 1LL * width() * height(); }
};

struct Vertex {
  int x = 0, y = 0;
  int parity() const { return ((x + y) % 2 + 2) % 2; }  // 0 = even
  bool operator==(const Vertex&) const = default;
};

// Column/row sign sequences and the induced 2-regular edge set.
//
// Edge rules (columns index xi, rows index eta; a column-indexed
// horizontal rule could not be 2-regular):
//   vertical {(x,y),(x,y+1)} open iff (x,y) odd and xi_x=+1, or even and xi_x=-1
//   horizontal {(x,y),(x+1,y)} open iff (x,y) odd and eta_y=+1, or even and eta_y=-1
struct CornerConfig {
  Window win;
  std::vector<std::int8_t> xi;   // xi[x - win.x0]
  std::vector<std::int8_t> eta;  // eta[y - win.y0]
  double p = 0.5, q = 0.5;
  std::uint64_t seed = 0;

  int xi_at(int x) const { return xi[x - win.x0]; }
  int eta_at(int y) const { return eta[y - win.y0]; }

  // Both endpoints must lie in the window for an edge to exist here.
  bool vertical_open(int x, int y) const;    // {(x,y),(x,y+1)}
  bool horizontal_open(int x, int y) const;  // {(x,y),(x+1,y)}
  int degree(int x, int y) const;
  // Interior = all four incident edges representable in the window.
  bool is_interior(int x, int y) const {
    return x > win.x0 && x + 1 < win.x1 && y > win.y0 && y + 1 < win.y1;
  }
  // Up to two open neighbors of (x,y) inside the window.
  int open_neighbors(Vertex v, Vertex out[2]) const;
};

CornerConfig generate_corner(Window win, double p, double q,
                             std::uint64_t master_seed,
                             std::uint32_t generation = 0);

// Injected deterministic configuration (e.g. the xi=+1, eta=+1 staircase).
CornerConfig make_constant_config(Window win, int xi_sign, int eta_sign);

// Redraws xi on columns [col_lo, col_hi] from generation-tagged streams;
// everything else is shared bit-for-bit.
CornerConfig resample_columns(const CornerConfig& cfg, int col_lo, int col_hi,
                              std::uint32_t generation);

// Prefix walks X, Y anchored at 0 and the dual-square height
// H(n+1/2, m+1/2), integer-valued.
struct HeightField {
  Window win;
  std::vector<long long> x_walk;  // X[n - win.x0], n in [x0, x1)
  std::vector<long long> y_walk;

  long long walk_x(int n) const { return x_walk[n - win.x0]; }
  long long walk_y(int m) const { return y_walk[m - win.y0]; }
  // Height of the square with bottom-left corner (n,m).
  long long square_height(int n, int m) const;
  // Level of the cluster through an interior vertex: the smaller of the
  // two height values adjacent to the cluster (min over the 4 squares
  // around the vertex).
  long long cluster_level_at(Vertex v) const;
};

HeightField compute_height(const CornerConfig& cfg);

struct TracedPath {
  std::vector<Vertex> vertices;
  bool is_loop = false;
  // True when the path was ordered so the net first-coordinate
  // displacement is positive.
  bool oriented_positive = false;
  long long dx() const;
  long long dy() const;
  long long length() const {  // edge count
    if (vertices.size() < 2) return 0;
    return static_cast<long long>(vertices.size()) - (is_loop ? 0 : 1);
  }
  bool touches_left(const Window& w) const;
  bool touches_right(const Window& w) const;
  bool touches_top(const Window& w) const;
  bool touches_bottom(const Window& w) const;
  bool spans_horizontally(const Window& w) const {
    return !is_loop && touches_left(w) && touches_right(w);
  }
  bool spans_vertically(const Window& w) const {
    return !is_loop && touches_top(w) && touches_bottom(w);
  }
};

TracedPath trace_path(const CornerConfig& cfg, Vertex v,
                      long long max_steps = 1LL << 40);

struct SlopeResult {
  enum class Status { Ok, TooShort, Vertical };
  Status status = Status::TooShort;
  double slope = 0.0;
  long long dx = 0, dy = 0;
  long long length = 0;
};

SlopeResult slope_statistic(const TracedPath& path, long long min_length = 1000);

double theoretical_slope(double p, double q);  // (2p-1)/(1-2q), q != 1/2

// Outgoing-edge type at each vertex of an oriented path, split by vertex
// parity. Under the row-indexed edge rule the positive-direction edge at
// even vertices of a spanning path is vertical when q > 1/2 and horizontal
// when q < 1/2 (the labels transpose relative to the column-indexed rule).
struct ParityReport {
  long even_horizontal = 0;
  long even_vertical = 0;
  long odd_horizontal = 0;
  long odd_vertical = 0;
  bool expected_even_vertical = false;
  long violations = 0;
  bool skipped_loop = false;
};

ParityReport parity_check(const CornerConfig& cfg, const TracedPath& path);

// Window component decomposition of the open subgraph.
struct Components {
  Window win;
  std::vector<int> label;  // per cell, component id (dense, from 0)
  int count = 0;
  std::vector<long> size;
  std::vector<std::uint8_t> touch;  // bit 0 left, 1 right, 2 bottom, 3 top
  int label_at(int x, int y) const {
    return label[(y - win.y0) * static_cast<long long>(win.width()) + (x - win.x0)];
  }
  bool spans_horizontally(int c) const { return (touch[c] & 1) && (touch[c] & 2); }
  bool spans_vertically(int c) const { return (touch[c] & 4) && (touch[c] & 8); }
};

Components window_components(const CornerConfig& cfg);

struct SpanningPath {
  int component = -1;
  long long level = 0;
  Vertex left_contact;   // a vertex on the left boundary column
  Vertex right_contact;  // a vertex on the right boundary column
  long size = 0;
};

struct HeightReport {
  long spanning_count = 0;
  long collision_count = 0;          // spanning component pairs sharing a level
  long constancy_violations = 0;     // even vertices of a component disagreeing
  long step_rule_violations = 0;     // open/closed edge height-step failures
  std::vector<SpanningPath> spanning;
};

// Verifies per-cluster level constancy at even vertices, the +-1 step rule
// across open edges (equality across closed ones), and level injectivity
// among horizontally spanning paths.
HeightReport height_bijection_check(const CornerConfig& cfg);

long count_degree_violations(const CornerConfig& cfg);  // interior degree != 2

struct SurgeryOutcome {
  bool outside_identical = false;
  bool designees_found = false;
  Vertex u, v;  // designated representatives on distinct spanning paths
  long long level_u_before = 0, level_v_before = 0;
  long long level_u_after = 0, level_v_after = 0;
  bool height_matched = false;  // equal levels after resampling
  bool merged = false;          // same window component after resampling
};

// Resamples xi on [col_lo, col_hi]; designates two spanning paths of cfg
// with adjacent levels and reports whether they merged in the resampled
// configuration.
SurgeryOutcome surgery_experiment(const CornerConfig& cfg, int col_lo,
                                  int col_hi, std::uint32_t generation = 1);

// sgn(e_i): +1 when edge e_i of the oriented path goes up or right.
struct SignProcess {
  std::vector<int> signs;        // per edge, path order
  std::vector<int> even_steps;   // sgn(e_0), sgn(e_2), ...
  std::vector<double> prefix_mean;  // running mean of even_steps
};

SignProcess sign_process(const TracedPath& path);

}  // namespace invperc::corner
