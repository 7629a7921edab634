#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "honeycomb/learner.hpp"
#include "honeycomb/quotient.hpp"
#include "json.hpp"

namespace honeycomb::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

SchemaPtr load_schema(const std::string& path) { return std::make_shared<HoneycombSchema>(schema_from_json(read_file(path))); }

class Usage : public Error {
 public:
  using Error::Error;
};

struct Options {
  bool json = false;
  int threads = 1;

  std::string symbol;
  unsigned prime = 0;
  bool squared = false;
  int limit = 8;
  std::string out;

  std::string schema;
  std::string config;
  std::string grts;
  int max_iterations = 0;
  int ball_radius = 0;
  int suffix_l = -1;
  bool no_reuse = false;
  std::size_t state_cap = 200000;
  bool full_dist = false;
  int full_dist_length = 8;
  std::string report;

  int n = 10;
  int root = -1;
  int radius = 2;
  std::string model = "poincare_ball";
  std::string name;
};

int cmd_fieldquotient(const Options& o, std::ostream& out, std::ostream& err) {
  SchlafliSymbol sym = parse_symbol(o.symbol);
  sym.validate();
  FieldSpec field{o.prime, o.squared ? 2 : 1};
  GoodTripleOptions gopt;
  gopt.limit = o.limit;
  std::vector<GoodTriple> triples;
  try {
    triples = find_good_triples(sym, field, gopt);
  } catch (const NoRoots& e) {
    err << e.what() << "\n";
    return 3;
  }
  if (triples.empty()) {
    err << "no good triple for " << sym.str() << " over a field of size " << field.size() << "\n";
    return 3;
  }
  std::string tag = std::to_string(sym.p) + std::to_string(sym.q) + std::to_string(sym.r) + "_F" + std::to_string(field.size());
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < triples.size(); ++i) {
    ManifoldDescription m = enumerate_cells(triples[i], 200000);
    std::vector<QuotientGroup> qs = find_quotients(m);
    ManifoldReport rep;
    rep.symbol = sym;
    rep.field = field;
    rep.cells = m.cells();
    rep.canonical_hash = m.canonical_hash;
    rep.formula = to_string(m.formula);
    for (const auto& q : qs)
      if (q.cells < m.cells()) rep.quotients.push_back(q.cells);
    std::string base = (fs::path(o.out) / (tag + "_t" + std::to_string(i))).string();
    write_file(base + ".report.json", report_to_json(rep));
    std::vector<std::string> written;
    for (const auto& q : qs) {
      HoneycombSchema s = schema_from_manifold(m, &q);
      std::string path = base + "_c" + std::to_string(q.cells) + ".schema.json";
      write_file(path, schema_to_json(s));
      written.push_back(path);
    }
    if (o.json) {
      auto j = nlohmann::ordered_json::parse(report_to_json(rep));
      j["schemas"] = written;
      all.push_back(j);
    } else {
      out << sym.str() << " over F" << field.size() << " triple " << i << ": " << rep.cells << " cells, quotients";
      if (rep.quotients.empty()) out << " none";
      for (std::size_t k = 0; k < rep.quotients.size(); ++k) out << (k ? ", " : " ") << rep.quotients[k];
      out << "\n";
      for (const auto& p : written) out << "  " << p << "\n";
    }
  }
  if (o.json) out << all.dump(2) << "\n";
  return 0;
}

int cmd_learn(const Options& o, std::ostream& out, std::ostream& err) {
  SchemaPtr schema = load_schema(o.schema);
  ValidationReport vr = validate(*schema);
  if (!vr.ok()) {
    err << vr.str();
    return 2;
  }
  LearnerConfig cfg = o.config.empty() ? LearnerConfig{} : learner_config_from_json(read_file(o.config));
  if (o.max_iterations > 0) cfg.max_iterations = o.max_iterations;
  if (o.ball_radius > 0) cfg.ball_radius = o.ball_radius;
  if (o.suffix_l >= 0) cfg.suffix_check_l = o.suffix_l;
  if (o.no_reuse) cfg.subtree_reuse = false;
  cfg.verify.build.state_cap = o.state_cap;
  cfg.log = [&err](const std::string& line) { err << line << "\n"; };
  auto t0 = std::chrono::steady_clock::now();
  LearnResult res = learn(schema, cfg);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file(o.out, serialize(res.rts));
  if (o.json) {
    nlohmann::ordered_json j;
    j["symbol"] = schema->symbol().str();
    j["states"] = res.rts.state_count();
    j["iterations"] = res.iterations;
    j["ball_radius"] = res.ball_radius;
    j["seconds"] = secs;
    j["out"] = o.out;
    out << j.dump(2) << "\n";
  } else {
    std::ostringstream t;
    t.setf(std::ios::fixed);
    t.precision(2);
    t << secs;
    out << schema->symbol().str() << ": " << res.rts.state_count() << " states after " << res.iterations << " iterations (radius "
        << res.ball_radius << ", " << t.str() << " s), written to " << o.out << "\n";
  }
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
  SchemaPtr schema = load_schema(o.schema);
  Rts rts = deserialize(read_file(o.grts));
  VerifyOptions vopt;
  vopt.full_dist_check = o.full_dist;
  vopt.full_dist_length = o.full_dist_length;
  vopt.build.state_cap = o.state_cap;
  VerificationReport rep;
  try {
    rep = verify(rts, schema, vopt);
  } catch (const ParentRuleViolation& e) {
    rep.ok = false;
    rep.problems.push_back(e.what());
  }
  if (!o.report.empty()) write_file(o.report, rep.to_json());
  if (o.json) {
    out << rep.to_json();
  } else if (rep.ok) {
    std::size_t total = 0;
    for (const auto& row : rep.transducer_sizes)
      for (auto s : row) total += s;
    out << "ok: " << rep.cycles.size() << " edge cycles, " << total << " transducer states\n";
  } else {
    for (const auto& p : rep.problems) out << "FAIL " << p << "\n";
    if (rep.counterexample) out << "witness " << rep.counterexample->str() << "\n";
  }
  return rep.ok ? 0 : 6;
}

int cmd_coordseq(const Options& o, std::ostream& out, std::ostream& err) {
  Rts rts = deserialize(read_file(o.grts));
  if (o.n < 0) throw Usage("--n must be non-negative");
  std::vector<std::vector<BigInt>> seqs;
  int first = o.root >= 0 ? o.root : 0;
  int last = o.root >= 0 ? o.root : static_cast<int>(rts.roots.size()) - 1;
  if (first >= static_cast<int>(rts.roots.size())) throw Usage("--root out of range");
  for (int r = first; r <= last; ++r) seqs.push_back(coordination_from_rts(rts, r, o.n));
  for (std::size_t i = 1; i < seqs.size(); ++i)
    if (seqs[i] != seqs[0]) {
      err << "root types 0 and " << i << " disagree: " << join_sequence(seqs[i]) << "\n";
      return 6;
    }
  if (o.json) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& x : seqs[0]) j.push_back(x.str());
    out << j.dump() << "\n";
  } else {
    out << join_sequence(seqs[0]) << "\n";
  }
  return 0;
}

int cmd_export(const Options& o, std::ostream& out, std::ostream&) {
  SchemaPtr schema = load_schema(o.schema);
  Rts rts = deserialize(read_file(o.grts));
  validate_structure(rts, *schema);
  if (o.radius < 0) throw Usage("--radius must be non-negative");
  std::string text = export_geometry(*schema, rts, o.radius, geometry_model_from_string(o.model), std::max(o.root, 0));
  write_file(o.out, text);
  auto j = nlohmann::json::parse(text);
  out << j["points"].size() << " points, " << j["edges"].size() << " edges written to " << o.out << "\n";
  return 0;
}

int cmd_builtin(const Options& o, std::ostream& out, std::ostream&) {
  HoneycombSchema s = o.name == "torus" ? builtin_torus_434() : builtin_seifert_weber_535();
  write_file(o.out, schema_to_json(s));
  out << s.symbol().str() << " schema written to " << o.out << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regular honeycombs: finite-field quotients, GRTS learning and verification"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "machine-readable standard output");
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);

  auto* fq = app.add_subcommand("fieldquotient", "search good triples and free quotients over a finite field");
  fq->add_option("--symbol", o.symbol, "Schlafli symbol p,q,r")->required();
  fq->add_option("--prime", o.prime, "field characteristic")->required()->check(CLI::PositiveNumber);
  fq->add_flag("--squared", o.squared, "use the field of size prime^2");
  fq->add_option("--limit", o.limit, "maximum number of triples")->check(CLI::PositiveNumber);
  fq->add_option("--out", o.out, "output directory")->required();

  auto* ln = app.add_subcommand("learn", "learn a verified GRTS from a schema");
  ln->add_option("--schema", o.schema, "schema file")->required()->check(CLI::ExistingFile);
  ln->add_option("--out", o.out, "GRTS output file")->required();
  ln->add_option("--config", o.config, "learner config file")->check(CLI::ExistingFile);
  ln->add_option("--max-iterations", o.max_iterations)->check(CLI::PositiveNumber);
  ln->add_option("--ball-radius", o.ball_radius)->check(CLI::PositiveNumber);
  ln->add_option("--suffix-check-l", o.suffix_l)->check(CLI::NonNegativeNumber);
  ln->add_flag("--no-subtree-reuse", o.no_reuse, "recompute face tags every iteration");
  ln->add_option("--state-cap", o.state_cap, "transducer state cap")->check(CLI::PositiveNumber);

  auto* vf = app.add_subcommand("verify", "verify a GRTS against its schema");
  vf->add_option("--grts", o.grts, "GRTS file")->required()->check(CLI::ExistingFile);
  vf->add_option("--schema", o.schema, "schema file")->required()->check(CLI::ExistingFile);
  vf->add_flag("--full-dist-check", o.full_dist, "check side paths on every word up to --full-dist-length");
  vf->add_option("--full-dist-length", o.full_dist_length)->check(CLI::NonNegativeNumber);
  vf->add_option("--state-cap", o.state_cap, "transducer state cap")->check(CLI::PositiveNumber);
  vf->add_option("--report", o.report, "write the JSON report here");

  auto* cs = app.add_subcommand("coordseq", "coordination sequence from a GRTS");
  cs->add_option("--grts", o.grts, "GRTS file")->required()->check(CLI::ExistingFile);
  cs->add_option("--n", o.n, "last index")->required();
  cs->add_option("--root", o.root, "root type (default: all, which must agree)");

  auto* ex = app.add_subcommand("export", "export cell centers and adjacency");
  ex->add_option("--grts", o.grts, "GRTS file")->required()->check(CLI::ExistingFile);
  ex->add_option("--schema", o.schema, "schema file")->required()->check(CLI::ExistingFile);
  ex->add_option("--radius", o.radius, "tree depth")->required();
  ex->add_option("--model", o.model, "poincare_ball or hyperboloid")->check(CLI::IsMember({"poincare_ball", "hyperboloid"}));
  ex->add_option("--root", o.root, "root type");
  ex->add_option("--out", o.out, "output file")->required();

  auto* bi = app.add_subcommand("builtin", "write a built-in schema");
  bi->add_option("--name", o.name, "torus or seifert-weber")->required()->check(CLI::IsMember({"torus", "seifert-weber"}));
  bi->add_option("--out", o.out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fq->parsed()) return cmd_fieldquotient(o, out, err);
    if (ln->parsed()) return cmd_learn(o, out, err);
    if (vf->parsed()) return cmd_verify(o, out, err);
    if (cs->parsed()) return cmd_coordseq(o, out, err);
    if (ex->parsed()) return cmd_export(o, out, err);
    if (bi->parsed()) return cmd_builtin(o, out, err);
  } catch (const PrecisionAmbiguity& e) {
    err << e.what() << "\n";
    return 5;
  } catch (const IterationCapExceeded& e) {
    err << e.what() << "\n";
    return 4;
  } catch (const CapExceeded& e) {
    err << e.what() << "\n";
    return 4;
  } catch (const StateCapExceeded& e) {
    err << e.what() << "\n";
    return 4;
  } catch (const BudgetExceeded& e) {
    err << e.what() << "\n";
    return 4;
  } catch (const SearchFailed& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const NoRoots& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "ParseError: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace honeycomb::cli
