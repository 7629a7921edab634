#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "support.hpp"

using namespace honeycomb;
using namespace honeycomb::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Torus schema and GRTS on disk, produced through the CLI once.
struct TorusFiles {
  std::string schema = temp_path("torus.schema.json");
  std::string grts = temp_path("torus.grts.json");
  TorusFiles() {
    EXPECT_EQ(run_cli({"builtin", "--name", "torus", "--out", schema}), 0);
    EXPECT_EQ(run_cli({"learn", "--schema", schema, "--out", grts}), 0);
  }
};

const TorusFiles& files() {
  static TorusFiles f;
  return f;
}

}  // namespace

TEST(Cli, LearnIsDeterministic) {
  std::string again = temp_path("torus2.grts.json");
  ASSERT_EQ(run_cli({"learn", "--schema", files().schema, "--out", again}), 0);
  EXPECT_EQ(slurp(again), slurp(files().grts));
}

TEST(Cli, VerifyPasses) {
  std::string out;
  EXPECT_EQ(run_cli({"verify", "--grts", files().grts, "--schema", files().schema}, &out), 0);
  EXPECT_EQ(out.rfind("ok", 0), 0u) << out;
  EXPECT_EQ(run_cli({"--json", "verify", "--grts", files().grts, "--schema", files().schema, "--full-dist-check"}, &out), 0);
  auto j = nlohmann::json::parse(out);
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_EQ(j["cycles"].size(), 12u);
}

TEST(Cli, CoordinationSequence) {
  std::string out;
  ASSERT_EQ(run_cli({"coordseq", "--grts", files().grts, "--n", "19"}, &out), 0);
  EXPECT_EQ(out, "1, 6, 18, 38, 66, 102, 146, 198, 258, 326, 402, 486, 578, 678, 786, 902, 1026, 1158, 1298, 1446\n");
  ASSERT_EQ(run_cli({"coordseq", "--grts", files().grts, "--n", "0"}, &out), 0);
  EXPECT_EQ(out, "1\n");
}

TEST(Cli, Export) {
  std::string geo = temp_path("torus.geo.json");
  ASSERT_EQ(run_cli({"export", "--grts", files().grts, "--schema", files().schema, "--radius", "2", "--out", geo}), 0);
  auto j = nlohmann::json::parse(slurp(geo));
  EXPECT_EQ(j["points"].size(), 25u);
  ASSERT_EQ(run_cli({"export", "--grts", files().grts, "--schema", files().schema, "--radius", "0", "--out", geo}), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(geo))["points"].size(), 1u);
}

TEST(Cli, UsageErrors) {
  std::string err;
  EXPECT_EQ(run_cli({}, nullptr, &err), 2);
  EXPECT_EQ(run_cli({"coordseq", "--n", "3"}), 2);
  EXPECT_EQ(run_cli({"coordseq", "--grts", "/nonexistent/file", "--n", "3"}), 2);
  EXPECT_EQ(run_cli({"verify", "--grts", files().grts, "--schema", files().schema, "--bogus"}), 2);
  EXPECT_EQ(run_cli({"export", "--grts", files().grts, "--schema", files().schema, "--radius", "1", "--model", "klein", "--out",
                     temp_path("x.json")}),
            2);
}

TEST(Cli, ParseErrorsExitTwo) {
  std::string bad = temp_path("bad.grts.json");
  write_text(bad, "{ not json");
  EXPECT_EQ(run_cli({"coordseq", "--grts", bad, "--n", "3"}), 2);
  EXPECT_EQ(run_cli({"verify", "--grts", bad, "--schema", files().schema}), 2);
}

TEST(Cli, SchemaHashMismatchExitsTwo) {
  std::string sw = temp_path("sw.schema.json");
  ASSERT_EQ(run_cli({"builtin", "--name", "seifert-weber", "--out", sw}), 0);
  std::string err;
  EXPECT_EQ(run_cli({"verify", "--grts", files().grts, "--schema", sw}, nullptr, &err), 2);
  EXPECT_NE(err.find("SchemaMismatch"), std::string::npos) << err;
}

TEST(Cli, FlippedRuleExitsSix) {
  Rts rts = deserialize(slurp(files().grts));
  bool changed = false;
  for (auto& s : rts.states)
    for (Rule& r : s.rules)
      if (!changed && r.kind == RuleKind::side && r.path.size() >= 2) {
        r.path.back() = (r.path.back() + 1) % 6;
        changed = true;
      }
  ASSERT_TRUE(changed);
  std::string bad = temp_path("flipped.grts.json");
  write_text(bad, serialize(rts));
  std::string out;
  EXPECT_EQ(run_cli({"verify", "--grts", bad, "--schema", files().schema}, &out), 6);
  EXPECT_NE(out.find("witness"), std::string::npos) << out;
}

TEST(Cli, InvalidSchemaForLearnExitsTwo) {
  auto j = nlohmann::json::parse(schema_to_json(*torus()));
  std::string text = schema_to_json(*torus());
  // Point face 0 at face 0: the pairing is no longer an involution with matching gluings.
  std::string bad = temp_path("bad.schema.json");
  HoneycombSchema s = *torus();
  std::vector<std::vector<FaceRef>> pairing{{}};
  std::vector<std::vector<RealMatrix>> gluing{{}};
  for (int f = 0; f < 6; ++f) {
    pairing[0].push_back(s.paired(0, f));
    gluing[0].push_back(s.gluing(0, f));
  }
  std::swap(gluing[0][0], gluing[0][1]);
  write_text(bad, schema_to_json(HoneycombSchema(s.symbol(), pairing, gluing)));
  std::string err;
  EXPECT_EQ(run_cli({"learn", "--schema", bad, "--out", temp_path("never.json")}, nullptr, &err), 2);
  EXPECT_FALSE(err.empty());
}

TEST(Cli, IterationCapExitsFour) {
  EXPECT_EQ(run_cli({"learn", "--schema", files().schema, "--out", temp_path("cap.json"), "--max-iterations", "1", "--ball-radius",
                     "2"}),
            4);
}

TEST(Cli, FieldQuotient) {
  std::string dir = temp_path("fq336");
  std::string out;
  ASSERT_EQ(run_cli({"fieldquotient", "--symbol", "3,3,6", "--prime", "3", "--limit", "1", "--out", dir}, &out), 0);
  EXPECT_NE(out.find("10 cells"), std::string::npos) << out;
  int schemas = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().string().find(".schema.json") != std::string::npos) {
      ++schemas;
      EXPECT_TRUE(validate(schema_from_json(slurp(e.path().string()))).ok());
    }
  EXPECT_GE(schemas, 3);
  EXPECT_EQ(run_cli({"fieldquotient", "--symbol", "5,3,5", "--prime", "2", "--out", dir}), 3);
  EXPECT_EQ(run_cli({"fieldquotient", "--symbol", "3,3,3", "--prime", "3", "--out", dir}), 2);
}
