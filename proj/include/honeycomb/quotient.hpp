#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "honeycomb/graph.hpp"
#include "honeycomb/schema.hpp"

namespace honeycomb {

struct FieldSpec {
  std::uint32_t prime = 0;
  int degree = 1;
  std::uint32_t size() const { return degree == 1 ? prime : prime * prime; }
};

// Finite-field images P', X', R' of the real generators. H' = <X', R'> is
// enumerated with the same generator order as the real rotation group H, so
// the isomorphism phi maps the i-th element of H to the i-th element of H'.
struct GoodTriple {
  SchlafliSymbol symbol;
  FieldSpec field;
  FieldMatrix P, X, R;
  GroupEnumeration<FieldMatrix> rotations;
};

struct GoodTripleOptions {
  std::size_t limit = 8;
  std::size_t group_cap = 200000;      // cap on |G'|
  std::size_t candidate_cap = 20000000;  // cap on P' candidates per (X', R') pair
};

// Checks orders, relation, block form, isometry and the H' isomorphism.
bool is_good_triple(const SchlafliSymbol& sym, const FieldMatrix& P, const FieldMatrix& X, const FieldMatrix& R,
                    std::string* why = nullptr);

std::vector<GoodTriple> find_good_triples(const SchlafliSymbol& sym, FieldSpec field, const GoodTripleOptions& opt = {});

enum class CosetFormula { rep_I_P, rep_P_I };
std::string to_string(CosetFormula f);

struct ManifoldDescription {
  GoodTriple triple;
  GroupEnumeration<FieldMatrix> group;   // G' = <P', X', R'>
  std::vector<int> coset_of;             // per element of G'
  std::vector<std::size_t> coset_rep;    // element index of each coset representative
  CosetFormula formula = CosetFormula::rep_I_P;
  std::uint64_t canonical_hash = 0;

  int cells() const { return static_cast<int>(coset_rep.size()); }
  std::size_t mul(std::size_t a, std::size_t b) const { return group.index_of(group.elements[a] * group.elements[b]); }
  std::size_t inverse(std::size_t a) const { return group.index_of(group.elements[a].inverse()); }
};

ManifoldDescription enumerate_cells(const GoodTriple& triple, std::size_t cap = 200000);

struct QuotientGroup {
  std::vector<std::size_t> generators;  // element indices in G'
  std::vector<std::size_t> elements;    // sorted element indices of K'
  int cells = 0;
};

struct QuotientOptions {
  std::size_t cap = 200000;          // cap on subgroup closure work
  std::size_t pair_group_limit = 4000;  // search generator pairs only when |G'| is at most this
};

// Free quotients K' (1 or 2 generators), one per distinct cell count, in
// decreasing order of cells; the trivial subgroup comes first.
std::vector<QuotientGroup> find_quotients(const ManifoldDescription& m, const QuotientOptions& opt = {});

// Validates the result; tries the mirrored coset formula if the first fails.
HoneycombSchema schema_from_manifold(const ManifoldDescription& m, const QuotientGroup* k = nullptr,
                                     CosetFormula* used = nullptr);

struct ManifoldReport {
  SchlafliSymbol symbol;
  FieldSpec field;
  int cells = 0;
  std::vector<int> quotients;
  std::uint64_t canonical_hash = 0;
  std::string formula;
};

std::string report_to_json(const ManifoldReport& r);

// Checks that r distinct universal-cover cells surround every edge of each
// root type within a radius-2 ball.
bool local_structure_ok(const SchemaPtr& schema, std::string* why = nullptr);

}  // namespace honeycomb
