#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "honeycomb/algebra.hpp"

namespace honeycomb {

enum class GeometryKind { hyperbolic, euclidean };

std::string to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(const std::string& s);

struct SchlafliSymbol {
  int p = 0, q = 0, r = 0;

  void validate() const;
  GeometryKind kind() const;
  std::string str() const;  // "{p,q,r}"
  std::string digits() const;  // "pqr"
  bool operator==(const SchlafliSymbol& o) const { return p == o.p && q == o.q && r == o.r; }
  bool operator!=(const SchlafliSymbol& o) const { return !(*this == o); }
};

SchlafliSymbol parse_symbol(const std::string& text);

RealMatrix gram_matrix(const SchlafliSymbol& sym);

struct MirrorSet {
  std::array<Vec4, 4> normals;
  RealMatrix gram;

  RealMatrix reflection(int i) const;
};

MirrorSet mirrors_from_gram(const RealMatrix& gram);

// Matrices act on column vectors and products apply the right factor first.
// With P = r0 r3, X = r0 r2, R = r2 r1 the edge-fixing product XP has
// order r; XR fixes f0 and its conjugate RX has order p.
struct GeneratorTriple {
  SchlafliSymbol symbol;
  GeometryKind kind = GeometryKind::hyperbolic;
  RealMatrix P, R, X;
  std::array<RealMatrix, 4> reflections;
  std::vector<int> p_word, r_word, x_word;

  Vec4 cell_center{};
  Vec4 neighbor_center{};
  Vec4 face_center0{}, face_center1{}, face_center2{};
  Vec4 edge_midpoint{};

  int edge_product_order = 0;  // order of X*P
  int face_product_order = 0;  // order of R*X
};

GeneratorTriple generator_triple(const SchlafliSymbol& sym);

struct CellCombinatorics {
  GeneratorTriple triple;
  GroupEnumeration<RealMatrix> rotations;
  std::vector<Vec4> face_centers;
  std::vector<std::size_t> face_rotation;  // index into rotations of I_f
  std::vector<std::array<int, 2>> edges;    // sorted face pairs
  std::vector<Vec4> edge_midpoints;
  std::vector<std::vector<int>> edge_cycles;  // face f glued to itself by I_f P I_f^-1, cell closure

  int face_count() const { return static_cast<int>(face_centers.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  const RealMatrix& face_isometry(int f) const { return rotations.elements.at(face_rotation.at(f)); }
  int face_at(const Vec4& center, double eps = 1e-6) const;  // -1 if none
  int edge_at(const Vec4& midpoint, double eps = 1e-6) const;
  // Index of the face whose center is the image of face f0 under h.
  int face_of_rotation(const RealMatrix& h) const;
  std::vector<int> faces_opposite() const;
};

CellCombinatorics cell_combinatorics(const GeneratorTriple& triple);

struct Gluing {
  int type;
  int face;
  const RealMatrix* matrix;
};
using GluingFn = std::function<Gluing(int type, int face)>;

struct EdgeWalk {
  std::vector<int> faces;
  std::vector<int> types;
  RealMatrix product;
};

// frame: stop when the walk returns to the start type and edge with identity
// holonomy (fixed periodic schemas). cell: stop when the holonomy maps the
// start cell and edge onto themselves (self-glued regular cell).
enum class Closure { frame, cell };

// Walks around edge `edge` of a cell of type `type`, starting through the
// lower-indexed face of the edge.
EdgeWalk walk_edge_cycle(const CellCombinatorics& cell, int type, int edge, const GluingFn& glue, int max_steps,
                         Closure closure = Closure::frame);

bool is_rigid_motion(const RealMatrix& m, double eps = kGeomEps);
bool is_isometry(GeometryKind kind, const RealMatrix& m, double eps = kGeomEps);

}  // namespace honeycomb
