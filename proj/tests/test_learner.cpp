#include <gtest/gtest.h>

#include "honeycomb/learner.hpp"
#include "support.hpp"

using namespace honeycomb;
using namespace honeycomb::testing;

namespace {

SchemaPtr q336() { return one_cell_quotient({3, 3, 6}, 3); }

}  // namespace

TEST(SampleGraph, ParentFaceOfRootThrows) {
  SampleGraph g(torus());
  g.grow(2);
  EXPECT_THROW(g.parent_face(0, g.store(0).root()), NoParent);
}

TEST(SampleGraph, DepthOneCellsPointBackToRoot) {
  SampleGraph g(torus());
  g.grow(2);
  CellStore& s = g.store(0);
  for (int f = 0; f < 6; ++f) {
    CellId c = s.neighbor(s.root(), f);
    int pf = g.parent_face(0, c);
    EXPECT_EQ(s.neighbor(c, pf), s.root());
    EXPECT_EQ(g.classify(0, s.root(), f).kind, RuleKind::child);
  }
}

TEST(SampleGraph, ParentFacesAgreeWithExactDistances) {
  SampleGraph g(q336());
  g.grow(5);
  CellStore& s = g.store(0);
  auto exact = s.bfs_from(s.root(), 7);
  for (const auto& [c, d] : exact) {
    if (d == 0 || d > 5) continue;
    int expect = -1;
    for (int f = 0; f < s.schema().face_count(s.type(c)); ++f) {
      auto it = exact.find(s.neighbor(c, f));
      if (it != exact.end() && it->second == d - 1) {
        expect = f;
        break;
      }
    }
    EXPECT_EQ(g.parent_face(0, c), expect);
  }
}

TEST(SampleGraph, SidePathsReplay) {
  SampleGraph g(q336());
  g.grow(5);
  CellStore& s = g.store(0);
  int checked = 0;
  for (CellId c = 0; c < static_cast<CellId>(s.size()); ++c) {
    if (s.dist(c) > 4) continue;
    for (int f = 0; f < s.schema().face_count(s.type(c)); ++f) {
      FaceTag t = g.classify(0, c, f);
      if (t.kind != RuleKind::side) continue;
      ASSERT_EQ(t.path.size(), t.dist.size());
      EXPECT_EQ(t.dist[0], -1);
      CellId x = c;
      for (std::size_t i = 0; i < t.path.size(); ++i) {
        x = s.resolve(x, t.path[i]);
        EXPECT_EQ(s.dist(x) - s.dist(c), t.dist[i]);
        if (i + 3 <= t.path.size() && i > 0) {
          EXPECT_LT(t.dist[i], 0);
        }
      }
      EXPECT_EQ(x, s.neighbor(c, f));
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(SampleGraph, TagsAreStableUnderGrowth) {
  SampleGraph small(q336()), big(q336());
  small.grow(4);
  big.grow(5);
  CellStore& a = small.store(0);
  for (CellId c = 0; c < static_cast<CellId>(a.size()); ++c) {
    if (a.dist(c) > 4) continue;
    CellId d = big.store(0).lookup(a.type(c), a.cell(c).isometry);
    ASSERT_NE(d, kNoCell);
    EXPECT_EQ(small.classify(0, c), big.classify(0, d));
  }
}

TEST(SampleGraph, TagsIndependentOfConstructionOrder) {
  SampleGraph direct(q336()), stepwise(q336());
  direct.grow(5);
  for (int r : {1, 2, 3, 4, 5}) stepwise.grow(r);
  CellStore& a = direct.store(0);
  CellStore& b = stepwise.store(0);
  int compared = 0;
  for (CellId c = 0; c < static_cast<CellId>(a.size()); ++c) {
    if (a.dist(c) > 5) continue;
    CellId d = b.lookup(a.type(c), a.cell(c).isometry);
    ASSERT_NE(d, kNoCell);
    EXPECT_EQ(direct.classify(0, c), stepwise.classify(0, d));
    ++compared;
  }
  EXPECT_EQ(compared, 1 + 4 + 12 + 30 + 72 + 168);
}

TEST(Candidate, SingleLevelOnSmallBall) {
  SampleGraph g(torus());
  g.grow(5);
  Candidate c = candidate_rts(g);
  EXPECT_NO_THROW(validate_structure(c.rts, *torus()));
  EXPECT_EQ(c.representatives.size(), static_cast<std::size_t>(c.rts.state_count()));
}

TEST(Candidate, TooSmallBallIsInsufficient) {
  SampleGraph g(torus());
  g.grow(2);
  EXPECT_THROW(candidate_rts(g), InsufficientSamples);
}

TEST(Candidate, RegeneratesSampleClassifications) {
  SampleGraph g(q336());
  g.grow(6);
  Candidate c = candidate_rts(g);
  WordNavigator nav(c.rts, q336());
  CellStore& s = g.store(0);
  for (CellId x = 0; x < static_cast<CellId>(s.size()); ++x) {
    if (s.dist(x) > 4) continue;
    Word w = g.word_of(0, x);
    int q = nav.state_of(w);
    ASSERT_GE(q, 0) << w.str();
    auto tags = g.classify(0, x);
    for (int f = 0; f < static_cast<int>(tags.size()); ++f) {
      EXPECT_EQ(tags[f].kind, c.rts.states[q].rules[f].kind);
      if (tags[f].kind == RuleKind::side) {
        EXPECT_EQ(tags[f].path, c.rts.states[q].rules[f].path);
      }
    }
  }
}

TEST(Preverify, LearnedIsClean) {
  SampleGraph g(torus());
  g.grow(5);
  Candidate c = candidate_rts(g);
  EXPECT_FALSE(preverify(c.rts, g, 3).has_value());
  EXPECT_FALSE(preverify(c.rts, g, 0).has_value());
}

TEST(Preverify, CorruptedSidePathGivesCounterexample) {
  SampleGraph g(torus());
  g.grow(5);
  Candidate c = candidate_rts(g);
  bool changed = false;
  for (auto& s : c.rts.states)
    for (Rule& r : s.rules)
      if (!changed && r.kind == RuleKind::side && r.path.size() >= 2) {
        r.path.back() = (r.path.back() + 1) % 6;
        changed = true;
      }
  ASSERT_TRUE(changed);
  std::string why;
  EXPECT_TRUE(preverify(c.rts, g, 3, &why).has_value());
  EXPECT_FALSE(why.empty());
}

TEST(Learn, TorusIsDeterministic) {
  LearnResult a = learn(torus());
  LearnResult b = learn(torus());
  EXPECT_EQ(serialize(a.rts), serialize(b.rts));
  EXPECT_TRUE(verify(a.rts, torus()).ok);
  EXPECT_FALSE(a.log.empty());
}

TEST(Learn, SubtreeReuseIsPureOptimization) {
  LearnerConfig off;
  off.subtree_reuse = false;
  EXPECT_EQ(serialize(learn(q336()).rts), serialize(learn(q336(), off).rts));
}

TEST(Learn, IterationCap) {
  LearnerConfig cfg;
  cfg.max_iterations = 1;
  cfg.ball_radius = 2;
  EXPECT_THROW(learn(torus(), cfg), IterationCapExceeded);
}

TEST(Learn, ConfigParsing) {
  LearnerConfig c = learner_config_from_json(R"({"max_iterations": 5, "ball_radius": 6, "suffix_check_l": 2, "subtree_reuse": false})");
  EXPECT_EQ(c.max_iterations, 5);
  EXPECT_EQ(c.ball_radius, 6);
  EXPECT_EQ(c.suffix_check_l, 2);
  EXPECT_FALSE(c.subtree_reuse);
  EXPECT_THROW(learner_config_from_json(R"({"radius": 3})"), ParseError);
  EXPECT_THROW(learner_config_from_json(R"({"ball_radius": "x"})"), ParseError);
  EXPECT_THROW(learner_config_from_json("[1]"), ParseError);
}

TEST(Learn, Quotient336Sequence) {
  const Rts& rts = learned(q336());
  std::vector<BigInt> expect{1, 4, 12, 30, 72, 168, 390};
  EXPECT_EQ(coordination_from_rts(rts, 0, 6), expect);
}
