#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "honeycomb/graph.hpp"
#include "honeycomb/schema.hpp"

namespace honeycomb {

enum class RuleKind { parent, child, side };

// Side rules carry the face path p and the relative distances d (|p| == |d|).
struct Rule {
  RuleKind kind = RuleKind::parent;
  int child = -1;
  std::vector<int> path;
  std::vector<int> dist;

  static Rule make_parent() { return {}; }
  static Rule make_child(int q) { return {RuleKind::child, q, {}, {}}; }
  static Rule make_side(std::vector<int> p, std::vector<int> d) { return {RuleKind::side, -1, std::move(p), std::move(d)}; }
  bool operator==(const Rule&) const = default;
  auto operator<=>(const Rule&) const = default;
};

struct RtsState {
  int type = 0;
  std::vector<Rule> rules;
  bool operator==(const RtsState&) const = default;
};

struct Rts {
  SchlafliSymbol symbol;
  std::uint64_t schema_hash = 0;
  std::vector<RtsState> states;
  std::vector<int> roots;  // root state per tile type

  int state_count() const { return static_cast<int>(states.size()); }
  int parent_face(int q) const;  // -1 for root states
  bool operator==(const Rts& o) const {
    return symbol == o.symbol && schema_hash == o.schema_hash && states == o.states && roots == o.roots;
  }
};

// Structural checks against the schema: shapes, parent faces, Child/Parent
// back links, Side shape (d_1 = -1, trailing child moves), reachability.
// Throws ParseError, SchemaMismatch or ParentRuleViolation.
void validate_structure(const Rts& rts, const HoneycombSchema& schema);

// Renumbers states in shortlex order of their first tree word.
Rts canonicalize(const Rts& rts);

std::string serialize(const Rts& rts);
Rts deserialize(const std::string& text);

struct Word {
  int root = 0;  // tile type of the root cell
  std::vector<int> faces;

  std::size_t size() const { return faces.size(); }
  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;
  std::string str() const;
};

struct WordHash {
  std::size_t operator()(const Word& w) const;
};

class DistanceViolation : public Error {
 public:
  DistanceViolation(const std::string& what, Word witness, int step)
      : Error("DistanceViolation: " + what), witness(std::move(witness)), step(step) {}
  Word witness;
  int step;
};

// Word-level navigation over an ExtendedRts with memoized neighbor queries.
class WordNavigator {
 public:
  WordNavigator(const Rts& rts, SchemaPtr schema, std::size_t budget = 10000);

  // State reached by w, or -1 if w leaves the tree language.
  int state_of(const Word& w) const;
  int type_of(const Word& w) const;
  bool in_language(const Word& w) const { return state_of(w) >= 0; }

  // Throws DistanceViolation, BudgetExceeded, Error (w not in L).
  Word neighbor(const Word& w, int f);

  const Rts& rts() const { return rts_; }
  const HoneycombSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }

 private:
  Word step(const Word& w, int f, std::size_t& spent);

  const Rts& rts_;
  SchemaPtr schema_;
  std::size_t budget_;
  std::unordered_map<Word, std::vector<Word>, WordHash> memo_;
};

using NodeId = std::int32_t;

struct RtsNode {
  NodeId id = -1;
  int state = 0;
  int type = 0;
  NodeId parent = -1;
  int depth = 0;
  Word word;
  RealMatrix isometry;
  std::vector<NodeId> links;
};

// Lazy generation of the honeycomb from an Rts: Child creates, Side follows
// its path; links are stored both ways.
class RtsGenerator {
 public:
  RtsGenerator(const Rts& rts, SchemaPtr schema, std::size_t budget = 10000);

  NodeId root(int type);
  NodeId neighbor(NodeId n, int f);
  NodeId follow(NodeId n, const std::vector<int>& path);
  const RtsNode& node(NodeId n) const { return nodes_.at(n); }
  std::size_t size() const { return nodes_.size(); }

  // All nodes with depth <= radius below the root of `type`, in BFS order.
  std::vector<NodeId> expand(int type, int radius);

 private:
  NodeId resolve(NodeId n, int f, std::size_t& spent);

  const Rts& rts_;
  SchemaPtr schema_;
  std::size_t budget_;
  std::vector<RtsNode> nodes_;
  std::vector<NodeId> roots_;
};

std::vector<BigInt> coordination_from_rts(const Rts& rts, int root_type, int k);

enum class GeometryModel { poincare_ball, hyperboloid };
GeometryModel geometry_model_from_string(const std::string& s);

std::string export_geometry(const HoneycombSchema& schema, const Rts& rts, int radius, GeometryModel model,
                            int root_type = 0);

}  // namespace honeycomb
