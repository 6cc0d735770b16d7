#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace invperc::lattice {

enum class Kind { Z2Window, Z2Torus, HexPatch, PathGraph, TreeTruncation };
enum class Boundary { Free, Periodic };
enum class EdgeKind : std::uint8_t { Horizontal, Vertical, Other };

const char* kind_name(Kind k);
std::optional<Kind> kind_from_name(const std::string& name);

struct Coord {
  int x = 0;
  int y = 0;
  // 0 for even vertices (x+y even), 1 for odd.
  int parity() const { return ((x + y) % 2 + 2) % 2; }
  bool operator==(const Coord&) const = default;
};

struct Edge {
  int u = -1;
  int v = -1;
  EdgeKind kind = EdgeKind::Other;
};

// A bounded face of the embedding (unit squares on Z2, hexagons on the
// brick-wall patch), listed as a closed vertex cycle plus its edge ids.
struct Face {
  std::vector<int> vertices;
  std::vector<int> edges;
};

// Immutable after construction; safe to share across threads.
class LatticeGraph {
 public:
  Kind kind() const { return kind_; }
  Boundary boundary() const { return boundary_; }
  const std::vector<int>& dims() const { return dims_; }
  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  int degree(int v) const { return adj_offset_[v + 1] - adj_offset_[v]; }
  std::span<const int> neighbors(int v) const {
    return {adj_vertex_.data() + adj_offset_[v],
            adj_vertex_.data() + adj_offset_[v + 1]};
  }
  std::span<const int> incident_edges(int v) const {
    return {adj_edge_.data() + adj_offset_[v],
            adj_edge_.data() + adj_offset_[v + 1]};
  }
  // -1 when u and v are not adjacent.
  int edge_between(int u, int v) const;

  bool has_coords() const;
  Coord coord(int v) const;
  // Torus wraps; other coordinate kinds require the coordinate in range.
  int vertex_id(Coord c) const;
  bool coord_in_range(Coord c) const;

  const std::vector<Face>& faces() const { return faces_; }

  friend LatticeGraph build_lattice(Kind kind, const std::vector<int>& dims,
                                    Boundary boundary);

 private:
  Kind kind_ = Kind::Z2Window;
  Boundary boundary_ = Boundary::Free;
  std::vector<int> dims_;
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> adj_offset_;
  std::vector<int> adj_vertex_;
  std::vector<int> adj_edge_;
  std::vector<Face> faces_;

  void finish_adjacency();
  void build_faces();
};

LatticeGraph build_lattice(Kind kind, const std::vector<int>& dims,
                           Boundary boundary);

// Translation action where the kind supports it (Z2Window clips to the
// window and reports escape as nullopt; Z2Torus wraps).
std::optional<Coord> translate(const LatticeGraph& g, Coord v, Coord shift);

// Vertices at graph distance <= r from v, sorted by id.
std::vector<int> ball(const LatticeGraph& g, int v, int r);

}  // namespace invperc::lattice
