#include <gtest/gtest.h>

#include <set>

#include "honeycomb/quotient.hpp"
#include "support.hpp"
#include "json.hpp"

using namespace honeycomb;

namespace {

const ManifoldDescription& manifold_336() {
  static ManifoldDescription m = [] {
    auto triples = find_good_triples({3, 3, 6}, FieldSpec{3, 1});
    return enumerate_cells(triples.at(0), 200000);
  }();
  return m;
}

}  // namespace

TEST(GoodTriple, FoundTriplesAreGood) {
  auto triples = find_good_triples({3, 3, 6}, FieldSpec{3, 1});
  ASSERT_FALSE(triples.empty());
  for (const auto& t : triples) {
    std::string why;
    EXPECT_TRUE(is_good_triple(t.symbol, t.P, t.X, t.R, &why)) << why;
    EXPECT_TRUE(is_identity(t.P * t.P));
  }
}

TEST(GoodTriple, SwappedGeneratorsAreRejected) {
  auto triples = find_good_triples({3, 3, 6}, FieldSpec{3, 1});
  ASSERT_FALSE(triples.empty());
  const auto& t = triples[0];
  EXPECT_FALSE(is_good_triple(t.symbol, t.X, t.P, t.R));
  EXPECT_FALSE(is_good_triple(t.symbol, t.P, t.X, t.R * t.R));
}

TEST(GoodTriple, MissingElementOrdersRaiseNoRoots) {
  // O(3) over F_2 has no element of order 5.
  EXPECT_THROW(find_good_triples({5, 3, 5}, FieldSpec{2, 1}), NoRoots);
}

TEST(Manifold, CosetsPartitionTheGroup) {
  const ManifoldDescription& m = manifold_336();
  EXPECT_EQ(m.cells(), 10);
  std::vector<int> count(m.cells(), 0);
  for (int c : m.coset_of) ++count[c];
  for (int c : count) EXPECT_EQ(static_cast<std::size_t>(c), m.triple.rotations.size());
  EXPECT_EQ(m.group.size(), m.triple.rotations.size() * 10);
}

TEST(Manifold, QuotientsAreFreeAndDivideCells) {
  const ManifoldDescription& m = manifold_336();
  auto qs = find_quotients(m);
  ASSERT_FALSE(qs.empty());
  EXPECT_EQ(qs.front().cells, 10);
  std::set<int> cells;
  for (const auto& q : qs) {
    cells.insert(q.cells);
    EXPECT_EQ(10 % q.cells, 0);
    EXPECT_EQ(q.elements.size() * q.cells, 10u);
  }
  EXPECT_TRUE(cells.count(5));
  EXPECT_TRUE(cells.count(1));
}

TEST(Manifold, SchemasValidateAndHaveLocalStructure) {
  const ManifoldDescription& m = manifold_336();
  for (const auto& q : find_quotients(m)) {
    auto s = std::make_shared<HoneycombSchema>(schema_from_manifold(m, &q));
    EXPECT_EQ(s->type_count(), q.cells);
    EXPECT_TRUE(validate(*s).ok()) << validate(*s).str();
    std::string why;
    EXPECT_TRUE(local_structure_ok(s, &why)) << why;
  }
}

TEST(Manifold, ReportJson) {
  const ManifoldDescription& m = manifold_336();
  ManifoldReport r{{3, 3, 6}, FieldSpec{3, 1}, m.cells(), {5, 2, 1}, m.canonical_hash, to_string(m.formula)};
  auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_EQ(j["cells"], 10);
  EXPECT_EQ(j["prime"], 3);
  EXPECT_EQ(j["quotients"].size(), 3u);
}

TEST(Manifold, DeterministicHash) {
  auto a = enumerate_cells(find_good_triples({3, 3, 6}, FieldSpec{3, 1}).at(0), 200000);
  EXPECT_EQ(a.canonical_hash, manifold_336().canonical_hash);
}
