#include <gtest/gtest.h>

#include <random>

#include "honeycomb/graph.hpp"
#include "support.hpp"

using namespace honeycomb;
using namespace honeycomb::testing;

TEST(CellStore, TorusShellsMatchLattice) {
  auto seq = coordination_by_bfs(torus(), 0, 8);
  for (int k = 0; k <= 8; ++k) EXPECT_EQ(seq[k], cubic_shell(k)) << "k=" << k;
}

TEST(CellStore, SeifertWeberFirstShells) {
  // Twelve neighbors; no two share the same isometry.
  auto seq = coordination_by_bfs(seifert_weber(), 0, 2);
  EXPECT_EQ(seq[0], 1);
  EXPECT_EQ(seq[1], 12);
  EXPECT_GT(seq[2], 12 * 4);
}

namespace {

void check_round_trip(const SchemaPtr& schema, int radius, unsigned seed) {
  CellStore store(schema);
  CellId root = store.new_root(0);
  store.ensure_ball(root, radius);
  std::mt19937 rng(seed);
  std::vector<CellId> inner;
  for (CellId c = 0; c < static_cast<CellId>(store.size()); ++c)
    if (store.dist(c) < radius) inner.push_back(c);
  ASSERT_FALSE(inner.empty());
  for (int i = 0; i < 1000; ++i) {
    CellId c = inner[rng() % inner.size()];
    int f = static_cast<int>(rng() % schema->face_count(store.type(c)));
    CellId n = store.resolve(c, f);
    FaceRef back = schema->paired(store.type(c), f);
    EXPECT_EQ(store.type(n), back.type);
    EXPECT_EQ(store.resolve(n, back.face), c);
  }
}

}  // namespace

TEST(CellStore, ResolveRoundTrip) {
  check_round_trip(torus(), 5, 1);
  check_round_trip(seifert_weber(), 3, 2);
}

TEST(CellStore, DistancesAreExactInsideBall) {
  CellStore store(torus());
  CellId root = store.new_root(0);
  store.ensure_ball(root, 6);
  auto exact = store.bfs_from(root, 6);
  for (const auto& [c, d] : exact) EXPECT_EQ(store.dist(c), d);
}

TEST(CellStore, LookupFindsExistingCells) {
  CellStore store(torus());
  CellId root = store.new_root(0);
  CellId n = store.resolve(root, 2);
  EXPECT_EQ(store.lookup(store.type(n), store.cell(n).isometry), n);
  EXPECT_EQ(store.peek(n, 5), store.neighbor(n, 5));
}

TEST(IsometryTable, ToleranceAndAmbiguity) {
  IsometryTable table;
  RealMatrix a = torus()->gluing(0, 0);
  int id = table.id_of(a);
  EXPECT_EQ(table.id_of(a), id);
  RealMatrix close = a;
  close(0, 3) += 1e-9;
  EXPECT_EQ(table.id_of(close), id);
  RealMatrix near = a;
  near(0, 3) += 1e-4;
  EXPECT_THROW(table.id_of(near), PrecisionAmbiguity);
  EXPECT_EQ(table.id_of(real_identity()), 1);
  EXPECT_EQ(table.size(), 2u);
  EXPECT_FALSE(table.find(torus()->gluing(0, 1)).has_value());
}

TEST(JoinSequence, Formatting) {
  std::vector<BigInt> s{1, 6, 18};
  EXPECT_EQ(join_sequence(s), "1, 6, 18");
  EXPECT_EQ(join_sequence(s, ","), "1,6,18");
}
