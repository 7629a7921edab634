#include "honeycomb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace honeycomb {

namespace {

constexpr double kPointEps = 1e-6;

bool platonic(int p, int q) {
  return (p == 3 && (q == 3 || q == 4 || q == 5)) || (q == 3 && (p == 4 || p == 5));
}

double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Vector Euclidean-orthogonal to a, b and c.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 w{};
  for (int j = 0; j < 4; ++j) {
    std::array<std::array<double, 3>, 3> m{};
    int col = 0;
    for (int k = 0; k < 4; ++k) {
      if (k == j) continue;
      m[0][col] = a[k];
      m[1][col] = b[k];
      m[2][col] = c[k];
      ++col;
    }
    w[j] = ((j % 2) ? -1.0 : 1.0) * det3(m);
  }
  return w;
}

Vec4 lower(const Vec4& v) { return {v[0], v[1], v[2], -v[3]}; }

// Point of H^3 lying on the three given mirrors.
Vec4 mirror_intersection(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 v = cross4(lower(a), lower(b), lower(c));
  double n = minkowski_dot(v, v);
  if (n < 0) {
    double s = 1.0 / std::sqrt(-n);
    if (v[3] < 0) s = -s;
    for (auto& x : v) x *= s;
  } else if (v[3] < 0) {
    for (auto& x : v) x = -x;
  }
  return v;
}

RealMatrix affine_reflection(const std::array<double, 3>& n, double d) {
  RealMatrix m = real_identity();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) -= 2 * n[i] * n[j];
    m(i, 3) = 2 * d * n[i];
  }
  return m;
}

std::vector<std::vector<int>> reflection_words() {
  std::vector<std::vector<int>> out;
  for (int len : {2, 4}) {
    std::vector<int> w(len, 0);
    int total = 1;
    for (int i = 0; i < len; ++i) total *= 4;
    for (int code = 0; code < total; ++code) {
      int c = code;
      for (int i = len - 1; i >= 0; --i) {
        w[i] = c % 4;
        c /= 4;
      }
      bool ok = true;
      for (int i = 1; i < len; ++i) ok = ok && w[i] != w[i - 1];
      if (ok) out.push_back(w);
    }
  }
  return out;
}

bool fixes_center(const RealMatrix& m) {
  for (int i = 0; i < 3; ++i)
    if (std::fabs(m(i, 3)) > kGeomEps || std::fabs(m(3, i)) > kGeomEps) return false;
  return std::fabs(m(3, 3) - 1.0) <= kGeomEps;
}

}  // namespace

std::string to_string(GeometryKind kind) { return kind == GeometryKind::hyperbolic ? "hyperbolic" : "euclidean"; }

GeometryKind geometry_kind_from_string(const std::string& s) {
  if (s == "hyperbolic") return GeometryKind::hyperbolic;
  if (s == "euclidean") return GeometryKind::euclidean;
  throw ParseError("unknown geometry kind '" + s + "'");
}

void SchlafliSymbol::validate() const {
  if (p < 3 || q < 3 || r < 3) throw InvalidSymbol(str() + ": entries must be at least 3");
  if (!platonic(p, q)) throw InvalidSymbol(str() + ": {p,q} is not a Platonic solid");
  double lhs = std::sin(std::numbers::pi / p) * std::sin(std::numbers::pi / r);
  double rhs = std::cos(std::numbers::pi / q);
  if (lhs > rhs + 1e-12) throw InvalidSymbol(str() + " is spherical");
  if (std::fabs(lhs - rhs) <= 1e-12 && !(p == 4 && q == 3 && r == 4))
    throw InvalidSymbol(str() + ": only {4,3,4} is supported among Euclidean symbols");
}

GeometryKind SchlafliSymbol::kind() const {
  return (p == 4 && q == 3 && r == 4) ? GeometryKind::euclidean : GeometryKind::hyperbolic;
}

std::string SchlafliSymbol::str() const {
  return "{" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) + "}";
}

std::string SchlafliSymbol::digits() const { return std::to_string(p) + std::to_string(q) + std::to_string(r); }

SchlafliSymbol parse_symbol(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != '{' && c != '}' && c != ' ') t += c;
  SchlafliSymbol s;
  std::istringstream is(t);
  char c1 = 0, c2 = 0;
  if (t.find(',') != std::string::npos) {
    if (!(is >> s.p >> c1 >> s.q >> c2 >> s.r) || c1 != ',' || c2 != ',' || !is.eof())
      throw InvalidSymbol("cannot parse symbol '" + text + "'");
  } else if (t.size() == 3 && std::all_of(t.begin(), t.end(), ::isdigit)) {
    s = {t[0] - '0', t[1] - '0', t[2] - '0'};
  } else {
    throw InvalidSymbol("cannot parse symbol '" + text + "'");
  }
  s.validate();
  return s;
}

RealMatrix gram_matrix(const SchlafliSymbol& sym) {
  sym.validate();
  RealMatrix g = real_identity();
  const double pi = std::numbers::pi;
  g(0, 1) = g(1, 0) = -std::cos(pi / sym.p);
  g(1, 2) = g(2, 1) = -std::cos(pi / sym.q);
  g(2, 3) = g(3, 2) = -std::cos(pi / sym.r);
  return g;
}

RealMatrix MirrorSet::reflection(int i) const {
  // x -> x - 2 <x,n> n
  const Vec4& n = normals.at(i);
  Vec4 an = lower(n);
  RealMatrix m = real_identity();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) -= 2 * n[r] * an[c];
  return m;
}

MirrorSet mirrors_from_gram(const RealMatrix& g) {
  double l[3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = g(i, j);
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (s <= 0) throw DegenerateForm("leading 3x3 block is not positive definite");
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  MirrorSet m;
  m.gram = g;
  for (int i = 0; i < 3; ++i) m.normals[i] = {l[i][0], l[i][1], l[i][2], 0.0};
  double a[3];
  for (int i = 0; i < 3; ++i) {
    double s = g(3, i);
    for (int k = 0; k < i; ++k) s -= l[i][k] * a[k];
    a[i] = s / l[i][i];
  }
  double t = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] - 1.0;
  if (std::fabs(t) <= 1e-12) throw DegenerateForm("Gram matrix is degenerate (Euclidean symbol)");
  if (t < 0) throw DegenerateForm("Gram matrix is positive definite (spherical symbol)");
  m.normals[3] = {a[0], a[1], a[2], std::sqrt(t)};
  return m;
}

GeneratorTriple generator_triple(const SchlafliSymbol& sym) {
  sym.validate();
  GeneratorTriple g;
  g.symbol = sym;
  g.kind = sym.kind();
  std::array<Vec4, 4> vertex;  // vertex[i] lies on every mirror except i
  if (g.kind == GeometryKind::euclidean) {
    const double h = std::sqrt(0.5);
    g.reflections[0] = affine_reflection({0, 1, 0}, 0);
    g.reflections[1] = affine_reflection({h, -h, 0}, 0);
    g.reflections[2] = affine_reflection({h, 0, -h}, 0);
    g.reflections[3] = affine_reflection({0, 0, 1}, 0.5);
    vertex = {Vec4{0.5, 0.5, 0.5, 1}, Vec4{0.5, 0, 0.5, 1}, Vec4{0, 0, 0.5, 1}, Vec4{0, 0, 0, 1}};
  } else {
    MirrorSet ms = mirrors_from_gram(gram_matrix(sym));
    for (int i = 0; i < 4; ++i) g.reflections[i] = ms.reflection(i);
    const auto& n = ms.normals;
    vertex = {mirror_intersection(n[1], n[2], n[3]), mirror_intersection(n[0], n[2], n[3]),
              mirror_intersection(n[0], n[1], n[3]), mirror_intersection(n[0], n[1], n[2])};
  }
  g.cell_center = vertex[3];
  g.face_center0 = vertex[2];
  g.edge_midpoint = vertex[1];
  g.neighbor_center = act(g.reflections[3], g.cell_center);
  g.face_center1 = act(g.reflections[2], g.face_center0);

  auto words = reflection_words();
  std::vector<RealMatrix> mats;
  for (const auto& w : words) mats.push_back(word_product(std::vector<RealMatrix>(g.reflections.begin(), g.reflections.end()), w));

  auto order = [](const RealMatrix& m, int want) { return element_order(m, want) == want; };
  std::vector<std::size_t> ps, xs, rs;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const RealMatrix& m = mats[i];
    if (order(m, 2) && vec_eq_within(act(m, g.cell_center), g.neighbor_center, kPointEps) &&
        vec_eq_within(act(m, g.edge_midpoint), g.edge_midpoint, kPointEps))
      ps.push_back(i);
    if (!fixes_center(m)) continue;
    if (order(m, 2) && vec_eq_within(act(m, g.face_center0), g.face_center1, kPointEps) &&
        vec_eq_within(act(m, g.face_center1), g.face_center0, kPointEps))
      xs.push_back(i);
    bool cycles_f0_f1 = vec_eq_within(act(m, g.face_center1), g.face_center0, kPointEps) ||
                        vec_eq_within(act(m, g.face_center0), g.face_center1, kPointEps);
    if (order(m, sym.q) && cycles_f0_f1 &&
        vec_eq_within(act(m, vertex[0]), vertex[0], kPointEps * 10))
      rs.push_back(i);
  }
  for (std::size_t pi : ps)
    for (std::size_t xi : xs)
      for (std::size_t ri : rs) {
        const RealMatrix &P = mats[pi], &X = mats[xi], &R = mats[ri];
        if (!eq_within(X * P, R * P * X * R, kGeomEps)) continue;
        if (element_order(X * P, sym.r) != sym.r) continue;
        if (element_order(R * X, sym.p) != sym.p) continue;
        g.P = P;
        g.X = X;
        g.R = R;
        g.p_word = words[pi];
        g.x_word = words[xi];
        g.r_word = words[ri];
        g.edge_product_order = sym.r;
        g.face_product_order = sym.p;
        // f2 is the third face around v, on the far side of f0 from f1.
        g.face_center2 = vec_eq_within(act(R, g.face_center1), g.face_center0, kPointEps) ? act(R, g.face_center0)
                                                                                         : act(R.inverse(), g.face_center0);
        if (g.kind == GeometryKind::hyperbolic &&
            !(is_minkowski_isometry(P) && is_minkowski_isometry(X) && is_minkowski_isometry(R)))
          throw SearchFailed("generators are not isometries");
        return g;
      }
  throw SearchFailed("no reflection product realizes the generators of " + sym.str());
}

int CellCombinatorics::face_at(const Vec4& center, double eps) const {
  for (int i = 0; i < face_count(); ++i)
    if (vec_eq_within(face_centers[i], center, eps)) return i;
  return -1;
}

int CellCombinatorics::edge_at(const Vec4& midpoint, double eps) const {
  for (int i = 0; i < edge_count(); ++i)
    if (vec_eq_within(edge_midpoints[i], midpoint, eps)) return i;
  return -1;
}

int CellCombinatorics::face_of_rotation(const RealMatrix& h) const { return face_at(act(h, triple.face_center0)); }

std::vector<int> CellCombinatorics::faces_opposite() const {
  std::vector<int> out(face_count(), -1);
  for (int i = 0; i < face_count(); ++i) {
    Vec4 c = face_centers[i];
    for (int k = 0; k < 3; ++k) c[k] = -c[k];
    out[i] = face_at(c);
  }
  return out;
}

CellCombinatorics cell_combinatorics(const GeneratorTriple& triple) {
  CellCombinatorics cell;
  cell.triple = triple;
  cell.rotations = generate_group<RealMatrix>({triple.X, triple.R}, 1000);
  for (std::size_t i = 0; i < cell.rotations.size(); ++i) {
    const RealMatrix& h = cell.rotations.elements[i];
    Vec4 fc = act(h, triple.face_center0);
    if (cell.face_at(fc) < 0) {
      cell.face_centers.push_back(fc);
      cell.face_rotation.push_back(i);
    }
  }
  for (std::size_t i = 0; i < cell.rotations.size(); ++i) {
    const RealMatrix& h = cell.rotations.elements[i];
    Vec4 em = act(h, triple.edge_midpoint);
    if (cell.edge_at(em) >= 0) continue;
    int a = cell.face_at(act(h, triple.face_center0));
    int b = cell.face_at(act(h, triple.face_center1));
    if (a < 0 || b < 0 || a == b) throw SearchFailed("edge faces not found");
    cell.edge_midpoints.push_back(em);
    cell.edges.push_back({std::min(a, b), std::max(a, b)});
  }
  if (cell.rotations.size() != 2 * cell.edges.size()) throw SearchFailed("rotation group size does not match edge count");

  std::vector<RealMatrix> gl;
  for (int f = 0; f < cell.face_count(); ++f)
    gl.push_back(cell.face_isometry(f) * triple.P * cell.face_isometry(f).inverse());
  GluingFn glue = [&](int, int f) { return Gluing{0, f, &gl[f]}; };
  for (int e = 0; e < cell.edge_count(); ++e) {
    EdgeWalk w = walk_edge_cycle(cell, 0, e, glue, 4 * triple.symbol.r, Closure::cell);
    if (static_cast<int>(w.faces.size()) != triple.symbol.r) throw CycleOpen("regular edge cycle has wrong length");
    cell.edge_cycles.push_back(w.faces);
  }
  return cell;
}

EdgeWalk walk_edge_cycle(const CellCombinatorics& cell, int type, int edge, const GluingFn& glue, int max_steps,
                         Closure closure) {
  EdgeWalk walk;
  walk.product = real_identity();
  int cur_type = type;
  int cur_edge = edge;
  int face = cell.edges.at(edge)[0];
  for (int step = 0; step < max_steps; ++step) {
    walk.faces.push_back(face);
    walk.types.push_back(cur_type);
    Gluing g = glue(cur_type, face);
    walk.product = walk.product * (*g.matrix);
    Vec4 em = act(g.matrix->inverse(), cell.edge_midpoints[cur_edge]);
    int next_edge = cell.edge_at(em);
    if (next_edge < 0) throw CycleOpen("edge image is not an edge of the neighboring cell");
    const auto& ef = cell.edges[next_edge];
    if (ef[0] != g.face && ef[1] != g.face) throw CycleOpen("edge image does not lie on the entry face");
    cur_type = g.type;
    cur_edge = next_edge;
    face = ef[0] == g.face ? ef[1] : ef[0];
    double tol = kGeomEps * (1.0 + max_abs(walk.product));
    if (cur_type != type) continue;
    if (closure == Closure::frame) {
      if (cur_edge == edge && g.face == cell.edges[edge][1] && eq_within(walk.product, real_identity(), tol)) return walk;
    } else {
      const Vec4& o = cell.triple.cell_center;
      const Vec4& m = cell.edge_midpoints[edge];
      if (vec_eq_within(act(walk.product, o), o, 1e-6) && vec_eq_within(act(walk.product, cell.edge_midpoints[cur_edge]), m, 1e-6))
        return walk;
    }
  }
  throw CycleOpen("edge cycle did not close within " + std::to_string(max_steps) + " steps");
}

bool is_rigid_motion(const RealMatrix& m, double eps) {
  for (int j = 0; j < 3; ++j)
    if (std::fabs(m(3, j)) > eps) return false;
  if (std::fabs(m(3, 3) - 1.0) > eps) return false;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += m(k, i) * m(k, j);
      if (std::fabs(s - (i == j ? 1.0 : 0.0)) > eps) return false;
    }
  return true;
}

bool is_isometry(GeometryKind kind, const RealMatrix& m, double eps) {
  if (kind == GeometryKind::euclidean) return is_rigid_motion(m, eps);
  return is_minkowski_isometry(m, eps);
}

}  // namespace honeycomb
