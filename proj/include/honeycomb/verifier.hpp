#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "honeycomb/rts.hpp"

namespace honeycomb {

// Letters: faces are >= 0, the padding blank is -1, and a word starts with
// the marker of its root type.
constexpr int kBlank = -1;
constexpr int root_letter(int root_type) { return -2 - root_type; }

struct LetterPair {
  int a = kBlank;
  int b = kBlank;
  auto operator<=>(const LetterPair&) const = default;
};
using PairWord = std::vector<LetterPair>;

PairWord pad(const Word& w, const Word& u);
// Input and output projections of a padded pair word (blanks dropped).
Word input_word(const PairWord& pw);
Word output_word(const PairWord& pw);
std::string to_string(const PairWord& pw);

struct Dfa {
  int start = 0;
  std::vector<std::map<int, int>> delta;
  std::vector<char> accepting;
  std::vector<int> state_of;  // rts state per automaton state
  std::size_t size() const { return delta.size(); }
  bool accepts(const std::vector<int>& word) const;
};

// Automaton for the tree language of one root type: states are Rts states,
// transitions are Child rules, everything accepts.
Dfa tree_language_dfa(const Rts& rts, int root_type);

struct MNKey {
  int end_w = 0;
  int q_w = -1;
  int end_u = 0;
  int q_u = -1;
  int j = -1;  // id in the isometry table
  auto operator<=>(const MNKey&) const = default;
};

class Transducer {
 public:
  struct Edge {
    LetterPair letter;
    int to;
    auto operator<=>(const Edge&) const = default;
  };

  int start = 0;
  std::vector<std::vector<Edge>> edges;
  std::vector<char> accepting;
  std::vector<MNKey> keys;  // present for transducers built from an Rts

  int add_state(bool accept = false);
  void add_edge(int from, LetterPair letter, int to);
  std::optional<int> step(int s, LetterPair letter) const;  // first match
  std::size_t size() const { return edges.size(); }
  std::size_t edge_count() const;
  bool deterministic() const;
  bool accepts(const PairWord& pw) const;
};

Transducer identity_transducer(const Rts& rts, int type);

// Subset construction, trimming and Moore minimization.
Transducer determinize(const Transducer& t);
Transducer trim(const Transducer& t);
Transducer minimize(const Transducer& t);

// Pairs (w, v) with (w, u) in first and (u, v) in second; result minimized.
Transducer compose(const Transducer& first, const Transducer& second);

// nullopt if both accept the same pairs; otherwise the shortest,
// lexicographically first pair word accepted by exactly one of them.
std::optional<PairWord> equivalent(const Transducer& x, const Transducer& y);

struct FunctionalityWitness {
  Word w, u1, u2;
};
std::optional<FunctionalityWitness> check_functional(const Transducer& t);

struct BuildOptions {
  std::size_t state_cap = 200000;
  std::size_t budget = 10000;
};

struct TransducerBuild {
  Transducer transducer;
  std::size_t threaded = 0;
  std::optional<std::string> violation;  // kind: message
  std::optional<Word> witness;
};

// Builds A_{t,f} by threading (w, nu(w,f)) for uncovered w until the tree
// language of type t is covered.
TransducerBuild build_transducer(WordNavigator& nav, int t, int f, const BuildOptions& opt = {});

struct VerifyOptions {
  BuildOptions build;
  bool full_dist_check = false;
  int full_dist_length = 8;
  bool check_cycles = true;
};

struct CycleResult {
  int type = 0;
  int edge = 0;
  std::vector<int> faces;
  bool ok = true;
  std::optional<Word> witness;
};

struct VerificationReport {
  bool ok = true;
  std::vector<std::vector<std::size_t>> transducer_sizes;  // [t][f]
  std::vector<CycleResult> cycles;
  std::vector<std::string> problems;
  std::optional<Word> counterexample;

  std::string to_json() const;
};

VerificationReport verify(const Rts& rts, const SchemaPtr& schema, const VerifyOptions& opt = {});

// For every type t and cycle gamma of t, composes A along gamma and compares
// with I_t. `built` holds A_{t,f}.
std::vector<CycleResult> check_cycles(const Rts& rts, const HoneycombSchema& schema,
                                      const std::vector<std::vector<Transducer>>& built);

}  // namespace honeycomb
