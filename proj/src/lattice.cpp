#include "invperc/lattice.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace invperc::lattice {

namespace {

constexpr long long kMaxVertices = 1LL << 30;

int wrap(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Z2Window: return "z2_window";
    case Kind::Z2Torus: return "z2_torus";
    case Kind::HexPatch: return "hex_patch";
    case Kind::PathGraph: return "path";
    case Kind::TreeTruncation: return "tree";
  }
  return "?";
}

std::optional<Kind> kind_from_name(const std::string& name) {
  if (name == "z2_window") return Kind::Z2Window;
  if (name == "z2_torus") return Kind::Z2Torus;
  if (name == "hex_patch" || name == "hex") return Kind::HexPatch;
  if (name == "path") return Kind::PathGraph;
  if (name == "tree") return Kind::TreeTruncation;
  return std::nullopt;
}

bool LatticeGraph::has_coords() const {
  return kind_ != Kind::TreeTruncation;
}

Coord LatticeGraph::coord(int v) const {
  if (!has_coords()) throw std::logic_error("coord: kind has no planar coordinates");
  int w = dims_[0];
  return {v % w, v / w};
}

bool LatticeGraph::coord_in_range(Coord c) const {
  if (!has_coords()) return false;
  int w = dims_[0];
  int h = dims_.size() > 1 ? dims_[1] : 1;
  return c.x >= 0 && c.x < w && c.y >= 0 && c.y < h;
}

int LatticeGraph::vertex_id(Coord c) const {
  if (!has_coords()) throw std::logic_error("vertex_id: kind has no planar coordinates");
  int w = dims_[0];
  int h = dims_.size() > 1 ? dims_[1] : 1;
  if (kind_ == Kind::Z2Torus) return wrap(c.y, h) * w + wrap(c.x, w);
  if (!coord_in_range(c)) throw std::out_of_range("vertex_id: coordinate outside window");
  return c.y * w + c.x;
}

int LatticeGraph::edge_between(int u, int v) const {
  auto es = incident_edges(u);
  auto ns = neighbors(u);
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (ns[i] == v) return es[i];
  return -1;
}

void LatticeGraph::finish_adjacency() {
  adj_offset_.assign(vertex_count_ + 1, 0);
  for (const Edge& e : edges_) {
    ++adj_offset_[e.u + 1];
    ++adj_offset_[e.v + 1];
  }
  for (int i = 0; i < vertex_count_; ++i) adj_offset_[i + 1] += adj_offset_[i];
  adj_vertex_.resize(edges_.size() * 2);
  adj_edge_.resize(edges_.size() * 2);
  std::vector<int> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const Edge& ed = edges_[e];
    adj_vertex_[cursor[ed.u]] = ed.v;
    adj_edge_[cursor[ed.u]++] = e;
    adj_vertex_[cursor[ed.v]] = ed.u;
    adj_edge_[cursor[ed.v]++] = e;
  }
}

void LatticeGraph::build_faces() {
  auto close_face = [this](Face& f) {
    for (std::size_t i = 0; i < f.vertices.size(); ++i) {
      int u = f.vertices[i];
      int v = f.vertices[(i + 1) % f.vertices.size()];
      int e = edge_between(u, v);
      if (e < 0) throw std::logic_error("build_faces: missing boundary edge");
      f.edges.push_back(e);
    }
  };
  int w = dims_[0];
  int h = dims_.size() > 1 ? dims_[1] : 1;
  if (kind_ == Kind::Z2Window || kind_ == Kind::Z2Torus) {
    bool torus = kind_ == Kind::Z2Torus;
    int xmax = torus ? w : w - 1;
    int ymax = torus ? h : h - 1;
    for (int y = 0; y < ymax; ++y)
      for (int x = 0; x < xmax; ++x) {
        Face f;
        f.vertices = {vertex_id({x, y}), vertex_id({x + 1, y}),
                      vertex_id({x + 1, y + 1}), vertex_id({x, y + 1})};
        close_face(f);
        faces_.push_back(std::move(f));
      }
  } else if (kind_ == Kind::HexPatch) {
    for (int y = 0; y + 1 < h; ++y)
      for (int x = 0; x + 2 < w; ++x) {
        if ((x + y) % 2 != 0) continue;  // hexagon anchored at a rung column
        Face f;
        f.vertices = {vertex_id({x, y}),     vertex_id({x + 1, y}),
                      vertex_id({x + 2, y}), vertex_id({x + 2, y + 1}),
                      vertex_id({x + 1, y + 1}), vertex_id({x, y + 1})};
        close_face(f);
        faces_.push_back(std::move(f));
      }
  }
}

LatticeGraph build_lattice(Kind kind, const std::vector<int>& dims,
                           Boundary boundary) {
  LatticeGraph g;
  g.kind_ = kind;
  g.boundary_ = boundary;
  g.dims_ = dims;

  for (int d : dims)
    if (d <= 0) throw std::invalid_argument("build_lattice: dims must be positive");

  auto expect_dims = [&](std::size_t n) {
    if (dims.size() != n)
      throw std::invalid_argument("build_lattice: wrong number of dims for kind");
  };

  switch (kind) {
    case Kind::Z2Window:
    case Kind::HexPatch: {
      expect_dims(2);
      if (boundary != Boundary::Free)
        throw std::invalid_argument("build_lattice: kind requires free boundary");
      long long n = 1LL * dims[0] * dims[1];
      if (n > kMaxVertices) throw std::invalid_argument("build_lattice: dims overflow id space");
      int w = dims[0], h = dims[1];
      g.vertex_count_ = static_cast<int>(n);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          int id = y * w + x;
          if (x + 1 < w)
            g.edges_.push_back({id, id + 1, EdgeKind::Horizontal});
          bool rung = kind == Kind::Z2Window || (x + y) % 2 == 0;
          if (y + 1 < h && rung)
            g.edges_.push_back({id, id + w, EdgeKind::Vertical});
        }
      break;
    }
    case Kind::Z2Torus: {
      expect_dims(2);
      if (boundary != Boundary::Periodic)
        throw std::invalid_argument("build_lattice: torus requires periodic boundary");
      if (dims[0] < 3 || dims[1] < 3)
        throw std::invalid_argument("build_lattice: torus dims must be >= 3");
      long long n = 1LL * dims[0] * dims[1];
      if (n > kMaxVertices) throw std::invalid_argument("build_lattice: dims overflow id space");
      int w = dims[0], h = dims[1];
      g.vertex_count_ = static_cast<int>(n);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          int id = y * w + x;
          g.edges_.push_back({id, y * w + (x + 1) % w, EdgeKind::Horizontal});
          g.edges_.push_back({id, ((y + 1) % h) * w + x, EdgeKind::Vertical});
        }
      break;
    }
    case Kind::PathGraph: {
      expect_dims(1);
      if (boundary != Boundary::Free)
        throw std::invalid_argument("build_lattice: path requires free boundary");
      if (dims[0] > kMaxVertices) throw std::invalid_argument("build_lattice: dims overflow id space");
      g.dims_ = {dims[0], 1};
      g.vertex_count_ = dims[0];
      for (int i = 0; i + 1 < dims[0]; ++i)
        g.edges_.push_back({i, i + 1, EdgeKind::Horizontal});
      break;
    }
    case Kind::TreeTruncation: {
      expect_dims(2);
      if (boundary != Boundary::Free)
        throw std::invalid_argument("build_lattice: periodic boundary undefined on tree truncation");
      int d = dims[0], depth = dims[1];
      if (d < 2) throw std::invalid_argument("build_lattice: tree branching must be >= 2");
      // Count vertices of the depth-truncated d-regular tree.
      long long n = 1, layer = 1;
      for (int r = 1; r <= depth; ++r) {
        layer *= (r == 1 ? d : d - 1);
        n += layer;
        if (n > kMaxVertices) throw std::invalid_argument("build_lattice: dims overflow id space");
      }
      g.vertex_count_ = static_cast<int>(n);
      // BFS order: children of vertex i are appended consecutively.
      int next = 1;
      std::deque<std::pair<int, int>> frontier;  // (vertex, depth)
      frontier.push_back({0, 0});
      while (!frontier.empty()) {
        auto [v, r] = frontier.front();
        frontier.pop_front();
        if (r == depth) continue;
        int nchild = (v == 0) ? d : d - 1;
        for (int c = 0; c < nchild; ++c) {
          g.edges_.push_back({v, next, EdgeKind::Other});
          frontier.push_back({next, r + 1});
          ++next;
        }
      }
      break;
    }
  }

  g.finish_adjacency();
  g.build_faces();
  return g;
}

std::optional<Coord> translate(const LatticeGraph& g, Coord v, Coord shift) {
  Coord t{v.x + shift.x, v.y + shift.y};
  switch (g.kind()) {
    case Kind::Z2Torus:
      return Coord{wrap(t.x, g.dims()[0]), wrap(t.y, g.dims()[1])};
    case Kind::Z2Window:
      if (!g.coord_in_range(t)) return std::nullopt;  // escapes window
      return t;
    default:
      throw std::invalid_argument("translate: kind does not support translation");
  }
}

std::vector<int> ball(const LatticeGraph& g, int v, int r) {
  if (r < 0) throw std::invalid_argument("ball: radius must be >= 0");
  std::vector<int> dist(g.vertex_count(), -1);
  std::deque<int> queue;
  dist[v] = 0;
  queue.push_back(v);
  std::vector<int> out;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    out.push_back(u);
    if (dist[u] == r) continue;
    for (int w : g.neighbors(u))
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace invperc::lattice
