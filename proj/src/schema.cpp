#include "honeycomb/schema.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>

#include "json.hpp"

namespace honeycomb {

using nlohmann::json;

std::shared_ptr<const CellCombinatorics> cell_for(const SchlafliSymbol& sym) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const CellCombinatorics>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{sym.p, sym.q, sym.r}];
  if (!slot) slot = std::make_shared<CellCombinatorics>(cell_combinatorics(generator_triple(sym)));
  return slot;
}

HoneycombSchema::HoneycombSchema(SchlafliSymbol symbol, std::vector<std::vector<FaceRef>> pairing,
                                 std::vector<std::vector<RealMatrix>> gluing)
    : symbol_(symbol), cell_(cell_for(symbol)), pairing_(std::move(pairing)), gluing_(std::move(gluing)) {
  if (pairing_.empty()) throw Error("schema needs at least one tile type");
  if (pairing_.size() != gluing_.size()) throw Error("pairing and gluing tables differ in size");
  gluing_inv_.resize(gluing_.size());
  for (std::size_t t = 0; t < gluing_.size(); ++t) {
    if (pairing_[t].size() != gluing_[t].size()) throw Error("pairing and gluing tables differ in size");
    for (const auto& m : gluing_[t]) gluing_inv_[t].push_back(m.inverse());
  }
}

int HoneycombSchema::max_face_count() const {
  int m = 0;
  for (int t = 0; t < type_count(); ++t) m = std::max(m, face_count(t));
  return m;
}

GluingFn HoneycombSchema::gluing_fn() const {
  return [this](int t, int f) {
    const FaceRef& r = paired(t, f);
    return Gluing{r.type, r.face, &gluing(t, f)};
  };
}

const std::vector<std::vector<int>>& HoneycombSchema::edge_cycles(int t) const {
  if (!cycles_ready_) {
    std::vector<std::vector<std::vector<int>>> all;
    for (int u = 0; u < type_count(); ++u) all.push_back(edge_cycles_for(*this, u));
    cycles_ = std::move(all);
    cycles_ready_ = true;
  }
  return cycles_.at(t);
}

std::vector<std::vector<int>> edge_cycles_for(const HoneycombSchema& schema, int t) {
  const CellCombinatorics& cell = schema.cell();
  if (schema.face_count(t) != cell.face_count()) throw CycleOpen("type face count does not match the cell");
  std::vector<std::vector<int>> out;
  GluingFn glue = schema.gluing_fn();
  for (int e = 0; e < cell.edge_count(); ++e)
    out.push_back(walk_edge_cycle(cell, t, e, glue, 4 * schema.symbol().r).faces);
  return out;
}

std::string ValidationReport::str() const {
  if (ok()) return "valid";
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.kind;
    if (v.type >= 0) os << " t=" << v.type;
    if (v.face >= 0) os << " f=" << v.face;
    if (v.edge >= 0) os << " edge=" << v.edge;
    if (!v.detail.empty()) os << ": " << v.detail;
    os << "\n";
  }
  return os.str();
}

ValidationReport validate(const HoneycombSchema& s) {
  ValidationReport rep;
  auto add = [&](std::string kind, int t, int f, int e, std::string detail) {
    rep.violations.push_back({std::move(kind), t, f, e, std::move(detail)});
  };
  const CellCombinatorics& cell = s.cell();
  bool shape_ok = true;
  for (int t = 0; t < s.type_count(); ++t) {
    if (s.face_count(t) != cell.face_count()) {
      add("shape", t, -1, -1, "expected " + std::to_string(cell.face_count()) + " faces");
      shape_ok = false;
      continue;
    }
    for (int f = 0; f < s.face_count(t); ++f) {
      const FaceRef& r = s.paired(t, f);
      if (r.type < 0 || r.type >= s.type_count() || r.face < 0 || r.face >= cell.face_count()) {
        add("shape", t, f, -1, "pairing target out of range");
        shape_ok = false;
      }
    }
  }
  if (!shape_ok) return rep;
  const double eps = kGeomEps;
  for (int t = 0; t < s.type_count(); ++t)
    for (int f = 0; f < s.face_count(t); ++f) {
      const FaceRef& r = s.paired(t, f);
      const RealMatrix& c = s.gluing(t, f);
      double scale = 1.0 + max_abs(c);
      if (s.paired(r.type, r.face) != FaceRef{t, f}) add("involution", t, f, -1, "pairing is not involutive");
      if (!eq_within(s.gluing(r.type, r.face), s.gluing_inverse(t, f), eps * scale * scale))
        add("inverse", t, f, -1, "C of the paired face is not the inverse");
      if (!is_isometry(s.geometry(), c, eps)) add("isometry", t, f, -1, "gluing map does not preserve the metric");
      if (c.determinant() <= 0) add("orientation", t, f, -1, "gluing map reverses orientation");
      if (!vec_eq_within(act(c, cell.face_centers[r.face]), cell.face_centers[f], 1e-6))
        add("face_match", t, f, -1, "C does not carry the paired face onto this face");
    }
  if (!rep.ok()) return rep;
  GluingFn glue = s.gluing_fn();
  for (int t = 0; t < s.type_count(); ++t)
    for (int e = 0; e < cell.edge_count(); ++e) {
      try {
        EdgeWalk w = walk_edge_cycle(cell, t, e, glue, 4 * s.symbol().r);
        if (static_cast<int>(w.faces.size()) != s.symbol().r)
          add("cycle", t, -1, e, "edge cycle has length " + std::to_string(w.faces.size()));
      } catch (const CycleOpen& ex) {
        add("cycle", t, -1, e, ex.what());
      }
    }
  return rep;
}

HoneycombSchema builtin_torus_434() {
  SchlafliSymbol sym{4, 3, 4};
  auto cell = cell_for(sym);
  auto opp = cell->faces_opposite();
  std::vector<std::vector<FaceRef>> pairing(1);
  std::vector<std::vector<RealMatrix>> gluing(1);
  for (int f = 0; f < cell->face_count(); ++f) {
    pairing[0].push_back({0, opp[f]});
    RealMatrix m = real_identity();
    for (int k = 0; k < 3; ++k) m(k, 3) = std::round(2 * cell->face_centers[f][k]);
    gluing[0].push_back(m);
  }
  return HoneycombSchema(sym, std::move(pairing), std::move(gluing));
}

HoneycombSchema builtin_seifert_weber_535() {
  SchlafliSymbol sym{5, 3, 5};
  auto cell = cell_for(sym);
  const GeneratorTriple& g = cell->triple;
  auto opp = cell->faces_opposite();
  const int nf = cell->face_count();
  RealMatrix s = g.X * g.R;  // rotation about the center of f0
  std::vector<RealMatrix> spow{real_identity()};
  for (int k = 1; k < sym.p; ++k) spow.push_back(spow.back() * s);
  std::vector<int> lows;
  for (int f = 0; f < nf; ++f)
    if (f < opp[f]) lows.push_back(f);
  // C_f = I_f P s^-k I_opp^-1 for a twist k per opposite pair; choose the
  // first twist vector (lexicographic) whose edge cycles close with length 5.
  std::vector<int> k(lows.size(), 0);
  auto build = [&]() {
    std::vector<std::vector<FaceRef>> pairing(1, std::vector<FaceRef>(nf));
    std::vector<std::vector<RealMatrix>> gluing(1, std::vector<RealMatrix>(nf));
    for (std::size_t i = 0; i < lows.size(); ++i) {
      int f = lows[i], o = opp[f];
      RealMatrix c = cell->face_isometry(f) * g.P * spow[(sym.p - k[i]) % sym.p] * cell->face_isometry(o).inverse();
      pairing[0][f] = {0, o};
      pairing[0][o] = {0, f};
      gluing[0][f] = c;
      gluing[0][o] = c.inverse();
    }
    return HoneycombSchema(sym, std::move(pairing), std::move(gluing));
  };
  while (true) {
    HoneycombSchema cand = build();
    bool ok = true;
    GluingFn glue = cand.gluing_fn();
    for (int e = 0; e < cell->edge_count() && ok; ++e) {
      try {
        ok = static_cast<int>(walk_edge_cycle(*cell, 0, e, glue, sym.r).faces.size()) == sym.r;
      } catch (const CycleOpen&) {
        ok = false;
      }
    }
    if (ok) return cand;
    std::size_t i = k.size();
    while (i > 0 && ++k[i - 1] == sym.p) k[--i] = 0;
    if (i == 0) break;
  }
  throw SearchFailed("no opposite-face twist closes the dodecahedral edge cycles");
}

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string schema_to_json(const HoneycombSchema& s) {
  std::ostringstream os;
  os << "{\n  \"geometry\": \"" << to_string(s.geometry()) << "\",\n  \"matrices\": [";
  bool first = true;
  for (int t = 0; t < s.type_count(); ++t)
    for (int f = 0; f < s.face_count(t); ++f) {
      os << (first ? "\n" : ",\n") << "    [" << t << ", " << f << ", [";
      first = false;
      const auto& e = s.gluing(t, f).entries();
      for (int i = 0; i < 16; ++i) os << (i ? ", " : "") << format_real(e[i]);
      os << "]]";
    }
  os << "\n  ],\n  \"pairings\": [";
  std::vector<std::array<int, 4>> rows;
  for (int t = 0; t < s.type_count(); ++t)
    for (int f = 0; f < s.face_count(t); ++f) rows.push_back({t, f, s.paired(t, f).type, s.paired(t, f).face});
  std::sort(rows.begin(), rows.end());
  first = true;
  for (const auto& r : rows) {
    os << (first ? "" : ", ") << "[" << r[0] << ", " << r[1] << ", " << r[2] << ", " << r[3] << "]";
    first = false;
  }
  os << "],\n  \"symbol\": [" << s.symbol().p << ", " << s.symbol().q << ", " << s.symbol().r << "],\n  \"types\": [";
  for (int t = 0; t < s.type_count(); ++t) os << (t ? ", " : "") << "{\"faces\": " << s.face_count(t) << "}";
  os << "]\n}\n";
  return os.str();
}

HoneycombSchema schema_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("schema: ") + e.what());
  }
  try {
    auto sym_a = j.at("symbol").get<std::vector<int>>();
    if (sym_a.size() != 3) throw ParseError("schema: symbol must have three entries");
    SchlafliSymbol sym{sym_a[0], sym_a[1], sym_a[2]};
    sym.validate();
    if (j.contains("geometry") && geometry_kind_from_string(j.at("geometry").get<std::string>()) != sym.kind())
      throw ParseError("schema: geometry does not match the symbol");
    const auto& types = j.at("types");
    if (!types.is_array() || types.empty()) throw ParseError("schema: types must be a non-empty array");
    int nt = static_cast<int>(types.size());
    std::vector<std::vector<FaceRef>> pairing(nt);
    std::vector<std::vector<RealMatrix>> gluing(nt);
    std::vector<std::vector<bool>> seen_p(nt), seen_m(nt);
    for (int t = 0; t < nt; ++t) {
      int nf = types[t].at("faces").get<int>();
      if (nf <= 0 || nf > 64) throw ParseError("schema: bad face count for type " + std::to_string(t));
      pairing[t].assign(nf, FaceRef{});
      gluing[t].assign(nf, real_identity());
      seen_p[t].assign(nf, false);
      seen_m[t].assign(nf, false);
    }
    auto check_tf = [&](int t, int f, const std::string& where) {
      if (t < 0 || t >= nt || f < 0 || f >= static_cast<int>(pairing[t].size()))
        throw ParseError("schema: " + where + " refers to a missing face (" + std::to_string(t) + "," + std::to_string(f) + ")");
    };
    for (const auto& row : j.at("pairings")) {
      auto r = row.get<std::vector<int>>();
      if (r.size() != 4) throw ParseError("schema: pairing rows have four entries");
      check_tf(r[0], r[1], "pairing");
      check_tf(r[2], r[3], "pairing");
      pairing[r[0]][r[1]] = {r[2], r[3]};
      seen_p[r[0]][r[1]] = true;
      if (!seen_p[r[2]][r[3]]) {
        pairing[r[2]][r[3]] = {r[0], r[1]};
      }
    }
    for (const auto& row : j.at("matrices")) {
      if (!row.is_array() || row.size() != 3) throw ParseError("schema: matrix rows are [t, f, [16 reals]]");
      int t = row[0].get<int>(), f = row[1].get<int>();
      check_tf(t, f, "matrix");
      auto e = row[2].get<std::vector<double>>();
      if (e.size() != 16) throw ParseError("schema: matrices need 16 entries");
      std::array<double, 16> a;
      std::copy(e.begin(), e.end(), a.begin());
      gluing[t][f] = RealMatrix(a);
      seen_m[t][f] = true;
    }
    for (int t = 0; t < nt; ++t)
      for (std::size_t f = 0; f < pairing[t].size(); ++f) {
        if (pairing[t][f].type < 0) throw ParseError("schema: face (" + std::to_string(t) + "," + std::to_string(f) + ") is unpaired");
        if (!seen_m[t][f]) {
          const FaceRef& r = pairing[t][f];
          if (!seen_m[r.type][r.face])
            throw ParseError("schema: no matrix for face (" + std::to_string(t) + "," + std::to_string(f) + ")");
          gluing[t][f] = gluing[r.type][r.face].inverse();
        }
      }
    return HoneycombSchema(sym, std::move(pairing), std::move(gluing));
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema: ") + e.what());
  } catch (const InvalidSymbol& e) {
    throw ParseError(std::string("schema: ") + e.what());
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t schema_hash(const HoneycombSchema& schema) { return fnv1a64(schema_to_json(schema)); }

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::uint64_t parse_hash_hex(const std::string& s) {
  if (s.empty() || s.size() > 16 || s.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
    throw ParseError("bad hash '" + s + "'");
  return std::stoull(s, nullptr, 16);
}

}  // namespace honeycomb
