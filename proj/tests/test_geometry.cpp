#include <gtest/gtest.h>

#include "honeycomb/geometry.hpp"

using namespace honeycomb;

namespace {

struct Platonic {
  int p, q, faces, edges, rotations;
};

// {p,q} cell: F = 4p/(4 - (p-2)(q-2)) ... via Euler: V - E + F = 2, pF = 2E = qV.
Platonic platonic(int p, int q) {
  int denom = 2 * p + 2 * q - p * q;
  int edges = 2 * p * q / denom;
  int faces = 2 * edges / p;
  return {p, q, faces, edges, 2 * edges};
}

}  // namespace

TEST(Symbol, KindAndValidation) {
  EXPECT_EQ((SchlafliSymbol{4, 3, 4}).kind(), GeometryKind::euclidean);
  EXPECT_EQ((SchlafliSymbol{5, 3, 5}).kind(), GeometryKind::hyperbolic);
  EXPECT_EQ((SchlafliSymbol{3, 3, 6}).kind(), GeometryKind::hyperbolic);
  EXPECT_THROW((SchlafliSymbol{3, 3, 3}).validate(), InvalidSymbol);
  EXPECT_THROW((SchlafliSymbol{2, 3, 4}).validate(), InvalidSymbol);
  EXPECT_THROW((SchlafliSymbol{6, 3, 3}).validate(), InvalidSymbol);
  EXPECT_THROW((SchlafliSymbol{3, 6, 3}).validate(), InvalidSymbol);
}

TEST(Symbol, Parsing) {
  EXPECT_EQ(parse_symbol("4,3,5"), (SchlafliSymbol{4, 3, 5}));
  EXPECT_EQ(parse_symbol("{3,5,3}"), (SchlafliSymbol{3, 5, 3}));
  EXPECT_EQ(parse_symbol("336"), (SchlafliSymbol{3, 3, 6}));
  EXPECT_THROW(parse_symbol("4;3;5"), InvalidSymbol);
  EXPECT_EQ((SchlafliSymbol{4, 3, 5}).str(), "{4,3,5}");
}

class TripleTest : public ::testing::TestWithParam<SchlafliSymbol> {};

TEST_P(TripleTest, GeneratorOrders) {
  SchlafliSymbol s = GetParam();
  GeneratorTriple g = generator_triple(s);
  EXPECT_TRUE(is_identity(g.P * g.P));
  EXPECT_TRUE(is_identity(g.X * g.X));
  EXPECT_FALSE(is_identity(g.P));
  EXPECT_EQ(element_order(g.R, 100), s.q);
  EXPECT_EQ(element_order(g.X * g.P, 100), s.r);
  EXPECT_EQ(element_order(g.R * g.X, 100), s.p);
  EXPECT_EQ(g.edge_product_order, s.r);
  EXPECT_EQ(g.face_product_order, s.p);
  for (const RealMatrix* m : {&g.P, &g.X, &g.R}) EXPECT_TRUE(is_isometry(g.kind, *m));
}

TEST_P(TripleTest, CellCombinatoricsMatchEuler) {
  SchlafliSymbol s = GetParam();
  CellCombinatorics c = cell_combinatorics(generator_triple(s));
  Platonic expect = platonic(s.p, s.q);
  EXPECT_EQ(c.face_count(), expect.faces);
  EXPECT_EQ(c.edge_count(), expect.edges);
  EXPECT_EQ(static_cast<int>(c.rotations.size()), expect.rotations);
  for (const auto& cycle : c.edge_cycles) EXPECT_EQ(static_cast<int>(cycle.size()), s.r);
  for (int f = 0; f < c.face_count(); ++f) EXPECT_EQ(c.face_at(c.face_centers[f]), f);
  // Every face borders exactly p edges.
  std::vector<int> degree(c.face_count(), 0);
  for (auto e : c.edges) {
    ++degree[e[0]];
    ++degree[e[1]];
  }
  for (int d : degree) EXPECT_EQ(d, s.p);
}

INSTANTIATE_TEST_SUITE_P(Symbols, TripleTest,
                         ::testing::Values(SchlafliSymbol{4, 3, 4}, SchlafliSymbol{3, 3, 6}, SchlafliSymbol{3, 4, 4},
                                           SchlafliSymbol{4, 3, 6}, SchlafliSymbol{5, 3, 5}, SchlafliSymbol{3, 5, 3},
                                           SchlafliSymbol{4, 3, 5}, SchlafliSymbol{5, 3, 4}, SchlafliSymbol{5, 3, 6}));

TEST(Geometry, CellCenterIsFixedByRotations) {
  GeneratorTriple g = generator_triple({5, 3, 5});
  EXPECT_TRUE(vec_eq_within(act(g.R, g.cell_center), g.cell_center, 1e-9));
  EXPECT_TRUE(vec_eq_within(act(g.X, g.cell_center), g.cell_center, 1e-9));
  EXPECT_FALSE(vec_eq_within(act(g.P, g.cell_center), g.cell_center, 1e-6));
  EXPECT_TRUE(vec_eq_within(act(g.P, g.cell_center), g.neighbor_center, 1e-9));
}
