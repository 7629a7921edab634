#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "honeycomb/graph.hpp"
#include "honeycomb/rts.hpp"
#include "honeycomb/verifier.hpp"

namespace honeycomb {

struct FaceTag {
  RuleKind kind = RuleKind::parent;
  std::vector<int> path;
  std::vector<int> dist;
  auto operator<=>(const FaceTag&) const = default;
};

struct LearnerConfig {
  int max_iterations = 30;
  int ball_radius = 4;
  int suffix_check_l = 3;
  bool subtree_reuse = true;
  VerifyOptions verify;
  GraphConfig graph;
  std::function<void(const std::string&)> log;
};

// Reads the keys max_iterations, ball_radius, suffix_check_l, subtree_reuse.
LearnerConfig learner_config_from_json(const std::string& text);

struct LearnResult {
  Rts rts;
  int iterations = 0;
  int ball_radius = 0;
  std::size_t samples = 0;
  std::vector<std::string> log;
};

// One lazily grown cell graph per root type. Faces of cells at distance
// <= radius are classified from exact distances.
class SampleGraph {
 public:
  SampleGraph(SchemaPtr schema, GraphConfig config = {});

  void grow(int radius);
  int radius() const { return radius_; }
  int type_count() const { return static_cast<int>(stores_.size()); }
  CellStore& store(int root_type) { return *stores_.at(root_type); }

  int parent_face(int r, CellId c);  // throws NoParent at the root
  CellId parent(int r, CellId c);
  FaceTag classify(int r, CellId c, int f);
  std::vector<FaceTag> classify(int r, CellId c);
  Word word_of(int r, CellId c);
  CellId cell_of(const Word& w);  // follows faces geometrically

  // Cached tags when reuse is on; cleared otherwise.
  std::vector<int> tag_ids(int r, CellId c, bool reuse);
  const FaceTag& tag(int id) const { return tags_.at(id); }

 private:
  std::vector<int> side_path(int r, CellId c, CellId target, std::vector<int>& dist);

  SchemaPtr schema_;
  std::vector<std::unique_ptr<CellStore>> stores_;
  int radius_ = -1;
  std::map<FaceTag, int> tag_index_;
  std::vector<FaceTag> tags_;
  std::vector<std::vector<std::vector<int>>> tag_cache_;
};

struct Candidate {
  Rts rts;
  std::vector<std::pair<int, CellId>> representatives;  // per state: (root type, cell)
  int refinement_levels = 0;
};

// Classifies every cell of the ball, refines signatures until the child
// map is well defined and reads rules off the closest representatives.
// Throws InsufficientSamples if the ball is too small.
Candidate candidate_rts(SampleGraph& g, bool reuse = true);

// Checks closest words of the candidate against the graph and every
// neighbor query on suffix contexts of length <= l. Returns the offending
// word or nullopt.
std::optional<Word> preverify(const Rts& rts, SampleGraph& g, int l, std::string* why = nullptr);

LearnResult learn(const SchemaPtr& schema, const LearnerConfig& config = {});

}  // namespace honeycomb
