#include <gtest/gtest.h>

#include "honeycomb/schema.hpp"
#include "support.hpp"

using namespace honeycomb;
using honeycomb::testing::seifert_weber;
using honeycomb::testing::torus;

TEST(Schema, BuiltinsValidate) {
  EXPECT_TRUE(validate(*torus()).ok()) << validate(*torus()).str();
  EXPECT_TRUE(validate(*seifert_weber()).ok()) << validate(*seifert_weber()).str();
  EXPECT_EQ(torus()->type_count(), 1);
  EXPECT_EQ(torus()->face_count(0), 6);
  EXPECT_EQ(seifert_weber()->face_count(0), 12);
}

TEST(Schema, TorusPairsOppositeFaces) {
  const HoneycombSchema& s = *torus();
  std::vector<int> opposite = s.cell().faces_opposite();
  for (int f = 0; f < 6; ++f) EXPECT_EQ(s.paired(0, f).face, opposite[f]);
}

TEST(Schema, EdgeCyclesHaveLengthR) {
  for (const SchemaPtr& s : {torus(), seifert_weber()}) {
    const auto& cycles = s->edge_cycles(0);
    EXPECT_EQ(static_cast<int>(cycles.size()), s->cell().edge_count());
    for (const auto& c : cycles) EXPECT_EQ(static_cast<int>(c.size()), s->symbol().r);
  }
}

TEST(Schema, JsonRoundTripKeepsHash) {
  for (const SchemaPtr& s : {torus(), seifert_weber()}) {
    std::string text = schema_to_json(*s);
    HoneycombSchema back = schema_from_json(text);
    EXPECT_EQ(schema_hash(back), schema_hash(*s));
    EXPECT_EQ(schema_to_json(back), text);
  }
  EXPECT_NE(schema_hash(*torus()), schema_hash(*seifert_weber()));
}

TEST(Schema, MalformedJsonIsParseError) {
  EXPECT_THROW(schema_from_json("{"), ParseError);
  EXPECT_THROW(schema_from_json("{\"symbol\": [4,3]}"), ParseError);
  EXPECT_THROW(schema_from_json("[]"), ParseError);
}

TEST(Schema, BrokenPairingIsReported) {
  const HoneycombSchema& s = *torus();
  std::vector<std::vector<FaceRef>> pairing{{}};
  std::vector<std::vector<RealMatrix>> gluing{{}};
  for (int f = 0; f < 6; ++f) {
    pairing[0].push_back(s.paired(0, f));
    gluing[0].push_back(s.gluing(0, f));
  }
  std::swap(pairing[0][0], pairing[0][1]);
  HoneycombSchema bad(s.symbol(), pairing, gluing);
  ValidationReport rep = validate(bad);
  EXPECT_FALSE(rep.ok());
  EXPECT_NE(rep.str().find("involution"), std::string::npos);
}

TEST(Schema, NonIsometricGluingIsReported) {
  const HoneycombSchema& s = *seifert_weber();
  std::vector<std::vector<FaceRef>> pairing{{}};
  std::vector<std::vector<RealMatrix>> gluing{{}};
  for (int f = 0; f < 12; ++f) {
    pairing[0].push_back(s.paired(0, f));
    gluing[0].push_back(s.gluing(0, f));
  }
  gluing[0][3](0, 0) += 0.25;
  EXPECT_FALSE(validate(HoneycombSchema(s.symbol(), pairing, gluing)).ok());
}

TEST(Schema, HashHexRoundTrip) {
  std::uint64_t h = schema_hash(*torus());
  EXPECT_EQ(parse_hash_hex(hash_hex(h)), h);
  EXPECT_EQ(hash_hex(h).size(), 16u);
}
