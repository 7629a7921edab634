#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "honeycomb/geometry.hpp"

namespace honeycomb {

struct FaceRef {
  int type = -1;
  int face = -1;
  auto operator<=>(const FaceRef&) const = default;
};

// Shared, cached combinatorics of the regular {p,q} cell of a symbol.
std::shared_ptr<const CellCombinatorics> cell_for(const SchlafliSymbol& sym);

class HoneycombSchema {
 public:
  HoneycombSchema(SchlafliSymbol symbol, std::vector<std::vector<FaceRef>> pairing,
                  std::vector<std::vector<RealMatrix>> gluing);

  const SchlafliSymbol& symbol() const { return symbol_; }
  GeometryKind geometry() const { return symbol_.kind(); }
  const CellCombinatorics& cell() const { return *cell_; }

  int type_count() const { return static_cast<int>(pairing_.size()); }
  int face_count(int t) const { return static_cast<int>(pairing_.at(t).size()); }
  int max_face_count() const;
  const FaceRef& paired(int t, int f) const { return pairing_.at(t).at(f); }
  int neighbor_type(int t, int f) const { return paired(t, f).type; }
  const RealMatrix& gluing(int t, int f) const { return gluing_.at(t).at(f); }
  const RealMatrix& gluing_inverse(int t, int f) const { return gluing_inv_.at(t).at(f); }

  const std::vector<std::vector<FaceRef>>& pairings() const { return pairing_; }
  const std::vector<std::vector<RealMatrix>>& gluings() const { return gluing_; }

  // Edge cycles per type, computed on first use. Throws CycleOpen.
  const std::vector<std::vector<int>>& edge_cycles(int t) const;

  GluingFn gluing_fn() const;

 private:
  SchlafliSymbol symbol_;
  std::shared_ptr<const CellCombinatorics> cell_;
  std::vector<std::vector<FaceRef>> pairing_;
  std::vector<std::vector<RealMatrix>> gluing_;
  std::vector<std::vector<RealMatrix>> gluing_inv_;
  mutable std::vector<std::vector<std::vector<int>>> cycles_;
  mutable bool cycles_ready_ = false;
};

using SchemaPtr = std::shared_ptr<const HoneycombSchema>;

struct Violation {
  std::string kind;  // shape, involution, inverse, isometry, orientation, face_match, cycle
  int type = -1;
  int face = -1;
  int edge = -1;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

ValidationReport validate(const HoneycombSchema& schema);

std::vector<std::vector<int>> edge_cycles_for(const HoneycombSchema& schema, int t);

HoneycombSchema builtin_torus_434();
HoneycombSchema builtin_seifert_weber_535();

std::string schema_to_json(const HoneycombSchema& schema);
HoneycombSchema schema_from_json(const std::string& text);
std::uint64_t schema_hash(const HoneycombSchema& schema);
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);
std::uint64_t parse_hash_hex(const std::string& s);

std::string format_real(double x);

}  // namespace honeycomb
