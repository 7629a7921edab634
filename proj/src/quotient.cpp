#include "honeycomb/quotient.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "json.hpp"

namespace honeycomb {

namespace {

using Vec3 = std::array<FieldElement, 3>;

FieldElement dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

std::vector<FieldElement> field_elements(const FiniteField& F) {
  std::vector<FieldElement> out;
  for (std::uint32_t c = 0; c < F.size(); ++c) out.push_back(F.from_code(c));
  return out;
}

// O(3, F) embedded as block matrices diag(M, 1).
std::vector<FieldMatrix> orthogonal_group(const FiniteField& F) {
  auto els = field_elements(F);
  std::vector<Vec3> unit;
  for (const auto& a : els)
    for (const auto& b : els)
      for (const auto& c : els) {
        Vec3 v{a, b, c};
        if (dot3(v, v) == F.one()) unit.push_back(v);
      }
  std::vector<FieldMatrix> out;
  FieldMatrix id = field_identity(F);
  for (const auto& r0 : unit)
    for (const auto& r1 : unit) {
      if (!dot3(r0, r1).is_zero()) continue;
      for (const auto& r2 : unit) {
        if (!dot3(r0, r2).is_zero() || !dot3(r1, r2).is_zero()) continue;
        FieldMatrix m = id;
        for (int j = 0; j < 3; ++j) {
          m(0, j) = r0[j];
          m(1, j) = r1[j];
          m(2, j) = r2[j];
        }
        out.push_back(m);
      }
    }
  return out;
}

int order_of(const FieldMatrix& m, int cap = 512) { return element_order(m, cap).value_or(0); }

// Real H and H' agree as enumerations: same size and the same right
// multiplication table for both generators.
bool same_enumeration(const GroupEnumeration<RealMatrix>& h, const GroupEnumeration<FieldMatrix>& hp) {
  if (h.size() != hp.size()) return false;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h.words[i] != hp.words[i]) return false;
    for (int g = 0; g < 2; ++g)
      if (h.times_generator(i, g) != hp.times_generator(i, g)) return false;
  }
  return true;
}

// Solutions of the linear system M -> {X M - R M X R, M - A M^T A} = 0,
// solved over the prime field so the p = 2 ring case works as well.
std::vector<FieldMatrix> involution_candidates(const FiniteField& F, const FieldMatrix& X, const FieldMatrix& R,
                                               std::size_t cap) {
  const std::uint32_t p = F.prime();
  const int deg = F.degree();
  FieldMatrix A = minkowski_form(F);
  FieldMatrix XR = X * R;
  std::vector<FieldMatrix> units;
  for (int k = 0; k < 16; ++k)
    for (int c = 0; c < deg; ++c) {
      FieldMatrix E = FieldMatrix::filled(F.zero());
      E(k / 4, k % 4) = F.element(c == 0, c == 1);
      units.push_back(E);
    }
  const int nvar = static_cast<int>(units.size());
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<std::array<FieldMatrix, 2>> images;
  for (const auto& E : units) images.push_back({X * E - R * E * XR, E - A * E.transpose() * A});
  for (int which = 0; which < 2; ++which)
    for (int e = 0; e < 16; ++e)
      for (int c = 0; c < deg; ++c) {
        std::vector<std::uint32_t> row(nvar);
        for (int v = 0; v < nvar; ++v) {
          const FieldElement& x = images[v][which].entries()[e];
          row[v] = c == 0 ? x.a() : x.b();
        }
        rows.push_back(std::move(row));
      }
  auto inv_mod = [p](std::uint32_t x) {
    for (std::uint32_t y = 1; y < p; ++y)
      if (x * y % p == 1) return y;
    throw DivisionByZero("no inverse mod p");
  };
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (int c = 0; c < nvar && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    std::uint32_t iv = inv_mod(rows[r][c]);
    for (auto& x : rows[r]) x = x * iv % p;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c] == 0) continue;
      std::uint32_t f = rows[o][c];
      for (int k = 0; k < nvar; ++k) rows[o][k] = (rows[o][k] + (p - f) * rows[r][k]) % p;
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<FieldMatrix> basis;
  for (int fr = 0; fr < nvar; ++fr) {
    if (std::find(pivot_col.begin(), pivot_col.end(), fr) != pivot_col.end()) continue;
    FieldMatrix M = units[fr];
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      if (rows[i][fr]) M = M + units[pivot_col[i]].scaled(F.element(p - rows[i][fr]));
    basis.push_back(M);
  }
  std::size_t d = basis.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (total > cap / p) throw CapExceeded("P' solution space too large (dimension " + std::to_string(d) + " over F_" + std::to_string(p) + ")");
    total *= p;
  }
  std::vector<FieldMatrix> out;
  FieldMatrix id = field_identity(F);
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t x = n;
    FieldMatrix M = FieldMatrix::filled(F.zero());
    for (std::size_t i = 0; i < d; ++i) {
      std::uint32_t c = static_cast<std::uint32_t>(x % p);
      x /= p;
      if (c) M = M + basis[i].scaled(F.element(c));
    }
    if (M == id || !(M * M == id)) continue;
    out.push_back(M);
  }
  return out;
}

FieldMatrix conj(const FieldMatrix& g, const FieldMatrix& m, const FieldMatrix& ginv) { return g * m * ginv; }

struct Raw {
  std::vector<std::vector<FaceRef>> pairing;
  std::vector<std::vector<RealMatrix>> gluing;
};

// Types are orbits of cosets under left multiplication by K (elements of G').
Raw build_tables(const ManifoldDescription& m, const std::vector<std::size_t>& kelems, CosetFormula formula) {
  const auto cell = cell_for(m.triple.symbol);
  const auto& G = m.group;
  const FieldMatrix& Pp = m.triple.P;
  int ncos = m.cells();
  std::vector<int> orbit_of(ncos, -1);
  std::vector<int> orbit_rep;
  for (int c = 0; c < ncos; ++c) {
    if (orbit_of[c] >= 0) continue;
    int id = static_cast<int>(orbit_rep.size());
    orbit_rep.push_back(c);
    for (std::size_t k : kelems) orbit_of[m.coset_of[m.mul(k, m.coset_rep[c])]] = id;
  }
  Raw raw;
  int ntypes = static_cast<int>(orbit_rep.size());
  int nf = cell->face_count();
  raw.pairing.assign(ntypes, std::vector<FaceRef>(nf));
  raw.gluing.assign(ntypes, std::vector<RealMatrix>(nf));
  for (int t = 0; t < ntypes; ++t) {
    const FieldMatrix& g = G.elements[m.coset_rep[orbit_rep[t]]];
    for (int f = 0; f < nf; ++f) {
      std::size_t ir = cell->face_rotation[f];
      const FieldMatrix& phiI = m.triple.rotations.elements[ir];
      FieldMatrix x = formula == CosetFormula::rep_I_P ? g * phiI * Pp : g * Pp * phiI;
      std::size_t xi = G.index_of(x);
      int tp = orbit_of[m.coset_of[xi]];
      const FieldMatrix& gp = G.elements[m.coset_rep[orbit_rep[tp]]];
      std::optional<std::size_t> hidx;
      for (std::size_t k : kelems) {
        FieldMatrix h = (G.elements[k] * gp).inverse() * x;
        hidx = m.triple.rotations.find(h);
        if (hidx) break;
      }
      if (!hidx) throw LocalStructureViolation("neighbor element outside its coset");
      const RealMatrix& h = cell->rotations.elements[*hidx];
      const RealMatrix& I = cell->face_isometry(f);
      const RealMatrix& P = cell->triple.P;
      RealMatrix C = formula == CosetFormula::rep_I_P ? I * P * h.inverse() : P * I * h.inverse();
      raw.pairing[t][f] = FaceRef{tp, cell->face_of_rotation(h)};
      raw.gluing[t][f] = C;
    }
  }
  return raw;
}

std::vector<std::size_t> trivial_subgroup(const ManifoldDescription& m) { return {m.group.index_of(m.group.elements[0])}; }

}  // namespace

std::string to_string(CosetFormula f) { return f == CosetFormula::rep_I_P ? "rep*I*P" : "rep*P*I"; }

bool is_good_triple(const SchlafliSymbol& sym, const FieldMatrix& P, const FieldMatrix& X, const FieldMatrix& R,
                    std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  const FiniteField& F = P(0, 0).field();
  FieldMatrix A = minkowski_form(F);
  for (const FieldMatrix* M : {&P, &X, &R})
    if (!(M->inverse() == A * M->transpose() * A)) return fail("not an isometry of the form");
  for (const FieldMatrix* M : {&X, &R})
    for (int i = 0; i < 3; ++i)
      if (!(*M)(3, i).is_zero() || !(*M)(i, 3).is_zero() || (*M)(3, 3) != F.one()) return fail("block form violated");
  if (order_of(P) != 2 || order_of(X) != 2) return fail("P' or X' is not an involution");
  if (order_of(X * P) != sym.r) return fail("X'P' has the wrong order");
  if (order_of(R) != sym.q) return fail("R' has the wrong order");
  if (order_of(R * X) != sym.p) return fail("R'X' has the wrong order");
  if (!(X * P == R * P * X * R)) return fail("relation X'P' = R'P'X'R' fails");
  const auto cell = cell_for(sym);
  GroupEnumeration<FieldMatrix> hp;
  try {
    hp = generate_group<FieldMatrix>({X, R}, cell->rotations.size() + 1);
  } catch (const CapExceeded&) {
    return fail("H' larger than H");
  }
  if (!same_enumeration(cell->rotations, hp)) return fail("H' is not isomorphic to H via the generators");
  return true;
}

std::vector<GoodTriple> find_good_triples(const SchlafliSymbol& sym, FieldSpec fs, const GoodTripleOptions& opt) {
  sym.validate();
  if (opt.limit < 1) throw Error("limit must be at least 1");
  const FiniteField& F = FiniteField::get(fs.prime, fs.degree);
  const auto cell = cell_for(sym);
  auto O3 = orthogonal_group(F);

  std::vector<FieldMatrix> inverses;
  std::vector<int> orders;
  for (const auto& g : O3) {
    inverses.push_back(g.inverse());
    orders.push_back(order_of(g));
  }
  auto has_order = [&](int k) { return std::find(orders.begin(), orders.end(), k) != orders.end(); };
  for (int k : {2, sym.p, sym.q})
    if (!has_order(k)) throw NoRoots("O(3, " + F.name() + ") has no rotation of order " + std::to_string(k));

  // Involution class representatives.
  std::vector<std::size_t> x_reps;
  std::unordered_set<FieldKey, KeyHash> seen_inv;
  for (std::size_t i = 0; i < O3.size(); ++i) {
    if (orders[i] != 2 || seen_inv.count(field_key(O3[i]))) continue;
    x_reps.push_back(i);
    for (std::size_t g = 0; g < O3.size(); ++g) seen_inv.insert(field_key(conj(O3[g], O3[i], inverses[g])));
  }

  std::map<std::uint64_t, GoodTriple> found;
  for (std::size_t xi : x_reps) {
    const FieldMatrix& X = O3[xi];
    std::vector<std::size_t> centralizer;
    for (std::size_t g = 0; g < O3.size(); ++g)
      if (conj(O3[g], X, inverses[g]) == X) centralizer.push_back(g);
    std::unordered_set<FieldKey, KeyHash> seen_r;
    for (std::size_t ri = 0; ri < O3.size(); ++ri) {
      if (orders[ri] != sym.q) continue;
      const FieldMatrix& R = O3[ri];
      if (seen_r.count(field_key(R))) continue;
      for (std::size_t g : centralizer) seen_r.insert(field_key(conj(O3[g], R, inverses[g])));
      if (order_of(R * X) != sym.p) continue;
      GroupEnumeration<FieldMatrix> hp;
      try {
        hp = generate_group<FieldMatrix>({X, R}, cell->rotations.size() + 1);
      } catch (const CapExceeded&) {
        continue;
      }
      if (!same_enumeration(cell->rotations, hp)) continue;
      for (const FieldMatrix& P : involution_candidates(F, X, R, opt.candidate_cap)) {
        if (order_of(X * P) != sym.r) continue;
        if (!is_good_triple(sym, P, X, R)) continue;
        GoodTriple t{sym, fs, P, X, R, hp};
        ManifoldDescription m;
        try {
          m = enumerate_cells(t, opt.group_cap);
        } catch (const CapExceeded&) {
          continue;
        }
        found.emplace(m.canonical_hash, std::move(t));
      }
    }
  }
  std::vector<GoodTriple> out;
  for (auto& [h, t] : found) {
    if (out.size() >= opt.limit) break;
    out.push_back(std::move(t));
  }
  return out;
}

ManifoldDescription enumerate_cells(const GoodTriple& triple, std::size_t cap) {
  ManifoldDescription m;
  m.triple = triple;
  m.group = generate_group<FieldMatrix>({triple.P, triple.X, triple.R}, cap);
  const auto& H = triple.rotations;
  m.coset_of.assign(m.group.size(), -1);
  for (std::size_t i = 0; i < m.group.size(); ++i) {
    if (m.coset_of[i] >= 0) continue;
    int id = static_cast<int>(m.coset_rep.size());
    m.coset_rep.push_back(i);
    for (const FieldMatrix& h : H.elements) m.coset_of[m.group.index_of(m.group.elements[i] * h)] = id;
  }
  if (m.group.size() != m.coset_rep.size() * H.size()) throw Error("coset partition is inconsistent");
  Raw raw = build_tables(m, trivial_subgroup(m), m.formula);
  m.canonical_hash = schema_hash(HoneycombSchema(triple.symbol, raw.pairing, raw.gluing));
  return m;
}

std::vector<QuotientGroup> find_quotients(const ManifoldDescription& m, const QuotientOptions& opt) {
  const auto& G = m.group;
  std::size_t n = G.size();
  std::size_t hsize = m.triple.rotations.size();
  std::size_t one = trivial_subgroup(m)[0];

  // Elements of G' with a fixed point: conjugates of nontrivial rotations.
  std::vector<char> bad(n, 0);
  for (std::size_t rep : m.coset_rep) {
    std::size_t rinv = m.inverse(rep);
    for (const FieldMatrix& h : m.triple.rotations.elements) {
      std::size_t x = G.index_of(G.elements[rep] * h * G.elements[rinv]);
      if (x != one) bad[x] = 1;
    }
  }

  std::size_t work = 0;
  auto closure = [&](const std::vector<std::size_t>& gens) -> std::optional<std::vector<std::size_t>> {
    std::vector<std::size_t> elems{one};
    std::unordered_set<std::size_t> in{one};
    for (std::size_t head = 0; head < elems.size(); ++head)
      for (std::size_t g : gens) {
        std::size_t x = m.mul(elems[head], g);
        if (++work > opt.cap * 1000) throw CapExceeded("quotient search exceeds its work cap");
        if (bad[x]) return std::nullopt;
        if (in.insert(x).second) elems.push_back(x);
      }
    std::sort(elems.begin(), elems.end());
    return elems;
  };

  std::vector<QuotientGroup> out;
  out.push_back({{}, {one}, m.cells()});
  std::set<int> counts{m.cells()};
  std::set<std::vector<std::size_t>> seen;
  auto consider = [&](const std::vector<std::size_t>& gens) {
    auto k = closure(gens);
    if (!k || !seen.insert(*k).second) return;
    if ((n / hsize) % k->size() != 0) return;
    int cells = static_cast<int>(n / hsize / k->size());
    if (!counts.insert(cells).second) return;
    out.push_back({gens, *k, cells});
  };
  for (std::size_t a = 0; a < n; ++a)
    if (a != one && !bad[a]) consider({a});
  if (n <= opt.pair_group_limit)
    for (std::size_t a = 0; a < n; ++a) {
      if (a == one || bad[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b)
        if (b != one && !bad[b]) consider({a, b});
    }
  std::stable_sort(out.begin() + 1, out.end(), [](const QuotientGroup& x, const QuotientGroup& y) { return x.cells > y.cells; });
  return out;
}

bool local_structure_ok(const SchemaPtr& schema, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  int r = schema->symbol().r;
  for (int t = 0; t < schema->type_count(); ++t) {
    CellStore store(schema);
    CellId root = store.new_root(t);
    store.ensure_ball(root, 2);
    const auto& cycles = schema->edge_cycles(t);
    for (std::size_t e = 0; e < cycles.size(); ++e) {
      std::set<CellId> around;
      CellId c = root;
      for (int f : cycles[e]) {
        around.insert(c);
        c = store.resolve(c, f);
      }
      if (c != root) return fail("edge " + std::to_string(e) + " of type " + std::to_string(t) + " does not close");
      if (static_cast<int>(around.size()) != r)
        return fail("edge " + std::to_string(e) + " of type " + std::to_string(t) + " has " + std::to_string(around.size()) +
                    " cells around it");
    }
  }
  return true;
}

HoneycombSchema schema_from_manifold(const ManifoldDescription& m, const QuotientGroup* k, CosetFormula* used) {
  std::vector<std::size_t> kelems = k ? k->elements : trivial_subgroup(m);
  std::string diag;
  for (CosetFormula formula : {CosetFormula::rep_I_P, CosetFormula::rep_P_I}) {
    try {
      Raw raw = build_tables(m, kelems, formula);
      auto schema = std::make_shared<HoneycombSchema>(m.triple.symbol, raw.pairing, raw.gluing);
      ValidationReport rep = validate(*schema);
      if (!rep.ok()) {
        diag += to_string(formula) + ": " + rep.str();
        continue;
      }
      std::string why;
      if (!local_structure_ok(schema, &why)) {
        diag += to_string(formula) + ": " + why + "\n";
        continue;
      }
      if (used) *used = formula;
      return *schema;
    } catch (const Error& e) {
      diag += to_string(formula) + ": " + e.what() + "\n";
    }
  }
  throw LocalStructureViolation("no coset formula yields a valid schema\n" + diag);
}

std::string report_to_json(const ManifoldReport& r) {
  nlohmann::ordered_json j;
  j["symbol"] = {r.symbol.p, r.symbol.q, r.symbol.r};
  j["prime"] = r.field.prime;
  j["field_size"] = r.field.size();
  j["cells"] = r.cells;
  j["quotients"] = r.quotients;
  j["canonical_hash"] = hash_hex(r.canonical_hash);
  if (!r.formula.empty()) j["coset_formula"] = r.formula;
  return j.dump(2) + "\n";
}

}  // namespace honeycomb
