#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "commands.hpp"

namespace honeycomb::testing {

SchemaPtr torus() {
  static SchemaPtr s = std::make_shared<HoneycombSchema>(builtin_torus_434());
  return s;
}

SchemaPtr seifert_weber() {
  static SchemaPtr s = std::make_shared<HoneycombSchema>(builtin_seifert_weber_535());
  return s;
}

SchemaPtr one_cell_quotient(const SchlafliSymbol& sym, unsigned prime, int degree) {
  static std::map<std::string, SchemaPtr> cache;
  std::string key = sym.digits() + "/" + std::to_string(prime) + "^" + std::to_string(degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  for (const GoodTriple& t : find_good_triples(sym, FieldSpec{prime, degree})) {
    ManifoldDescription m = enumerate_cells(t, 200000);
    for (const QuotientGroup& k : find_quotients(m))
      if (k.cells == 1) return cache[key] = std::make_shared<HoneycombSchema>(schema_from_manifold(m, &k));
  }
  throw SearchFailed("no one-cell quotient for " + key);
}

const Rts& learned(const SchemaPtr& schema) {
  static std::map<std::uint64_t, Rts> cache;
  std::uint64_t h = schema_hash(*schema);
  auto it = cache.find(h);
  if (it == cache.end()) it = cache.emplace(h, learn(schema).rts).first;
  return it->second;
}

long long cubic_shell(int k) {
  long long n = 0;
  for (int x = -k; x <= k; ++x)
    for (int y = -k; y <= k; ++y)
      for (int z = -k; z <= k; ++z) n += std::abs(x) + std::abs(y) + std::abs(z) == k;
  return n;
}

std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("honeycomb_tests_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

int run_cli(const std::vector<std::string>& args, std::string* out, std::string* err) {
  std::vector<const char*> argv{"honeycomb"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

}  // namespace honeycomb::testing
