#include "honeycomb/verifier.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "json.hpp"

namespace honeycomb {

namespace {

int root_of_letter(int letter) { return -2 - letter; }

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::uint64_t>(x + 3);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct MNKeyHash {
  std::size_t operator()(const MNKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.q_w + 1);
    h = h * 1000003u + static_cast<std::uint64_t>(k.q_u + 1);
    h = h * 1000003u + static_cast<std::uint64_t>(k.j + 1);
    h = h * 4u + static_cast<std::uint64_t>(k.end_w * 2 + k.end_u);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

PairWord backtrack(const std::vector<std::pair<int, LetterPair>>& parent, int node) {
  PairWord out;
  while (parent[node].first >= 0) {
    out.push_back(parent[node].second);
    node = parent[node].first;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<int> epsilon_closure(const Transducer& t, std::vector<int> set) {
  std::set<int> seen(set.begin(), set.end());
  for (std::size_t i = 0; i < set.size(); ++i)
    for (const auto& e : t.edges[set[i]])
      if (e.letter.a == kBlank && e.letter.b == kBlank && seen.insert(e.to).second) set.push_back(e.to);
  return {seen.begin(), seen.end()};
}

}  // namespace

PairWord pad(const Word& w, const Word& u) {
  if (w.root != u.root) throw Error("padded pair words need a common root");
  PairWord out{{root_letter(w.root), root_letter(u.root)}};
  std::size_t n = std::max(w.size(), u.size());
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({i < w.size() ? w.faces[i] : kBlank, i < u.size() ? u.faces[i] : kBlank});
  return out;
}

Word input_word(const PairWord& pw) {
  Word w;
  if (pw.empty()) return w;
  w.root = root_of_letter(pw[0].a);
  for (std::size_t i = 1; i < pw.size(); ++i)
    if (pw[i].a >= 0) w.faces.push_back(pw[i].a);
  return w;
}

Word output_word(const PairWord& pw) {
  Word w;
  if (pw.empty()) return w;
  w.root = root_of_letter(pw[0].b);
  for (std::size_t i = 1; i < pw.size(); ++i)
    if (pw[i].b >= 0) w.faces.push_back(pw[i].b);
  return w;
}

std::string to_string(const PairWord& pw) {
  auto letter = [](int x) {
    if (x == kBlank) return std::string("_");
    if (x < kBlank) return "r" + std::to_string(root_of_letter(x));
    return std::to_string(x);
  };
  std::ostringstream os;
  for (std::size_t i = 0; i < pw.size(); ++i) os << (i ? " " : "") << "(" << letter(pw[i].a) << "," << letter(pw[i].b) << ")";
  return os.str();
}

bool Dfa::accepts(const std::vector<int>& word) const {
  int s = start;
  for (int x : word) {
    auto it = delta[s].find(x);
    if (it == delta[s].end()) return false;
    s = it->second;
  }
  return accepting[s];
}

Dfa tree_language_dfa(const Rts& rts, int root_type) {
  Dfa d;
  std::map<int, int> index;
  std::deque<int> queue{rts.roots.at(root_type)};
  index[queue.front()] = 0;
  d.state_of.push_back(queue.front());
  d.delta.emplace_back();
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    const auto& rules = rts.states[q].rules;
    for (int f = 0; f < static_cast<int>(rules.size()); ++f) {
      if (rules[f].kind != RuleKind::child) continue;
      int c = rules[f].child;
      auto [it, fresh] = index.emplace(c, static_cast<int>(d.delta.size()));
      if (fresh) {
        d.state_of.push_back(c);
        d.delta.emplace_back();
        queue.push_back(c);
      }
      d.delta[index[q]][f] = it->second;
    }
  }
  d.accepting.assign(d.delta.size(), 1);
  return d;
}

int Transducer::add_state(bool accept) {
  edges.emplace_back();
  accepting.push_back(accept);
  return static_cast<int>(edges.size()) - 1;
}

void Transducer::add_edge(int from, LetterPair letter, int to) { edges.at(from).push_back({letter, to}); }

std::optional<int> Transducer::step(int s, LetterPair letter) const {
  for (const auto& e : edges.at(s))
    if (e.letter == letter) return e.to;
  return std::nullopt;
}

std::size_t Transducer::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

bool Transducer::deterministic() const {
  for (const auto& es : edges) {
    std::set<LetterPair> seen;
    for (const auto& e : es) {
      if (e.letter.a == kBlank && e.letter.b == kBlank) return false;
      if (!seen.insert(e.letter).second) return false;
    }
  }
  return true;
}

bool Transducer::accepts(const PairWord& pw) const {
  std::vector<int> cur = epsilon_closure(*this, {start});
  for (const LetterPair& l : pw) {
    std::vector<int> next;
    for (int s : cur)
      for (const auto& e : edges[s])
        if (e.letter == l) next.push_back(e.to);
    cur = epsilon_closure(*this, next);
    if (cur.empty()) return false;
  }
  for (int s : cur)
    if (accepting[s]) return true;
  return false;
}

Transducer identity_transducer(const Rts& rts, int type) {
  Transducer t;
  int init = t.add_state(false);
  for (int q = 0; q < rts.state_count(); ++q) t.add_state(rts.states[q].type == type);
  for (int r = 0; r < static_cast<int>(rts.roots.size()); ++r)
    t.add_edge(init, {root_letter(r), root_letter(r)}, 1 + rts.roots[r]);
  for (int q = 0; q < rts.state_count(); ++q) {
    const auto& rules = rts.states[q].rules;
    for (int f = 0; f < static_cast<int>(rules.size()); ++f)
      if (rules[f].kind == RuleKind::child) t.add_edge(1 + q, {f, f}, 1 + rules[f].child);
  }
  t.start = init;
  return trim(t);
}

Transducer determinize(const Transducer& t) {
  Transducer out;
  std::unordered_map<std::vector<int>, int, VecHash> index;
  std::vector<std::vector<int>> sets;
  auto get = [&](std::vector<int> set) {
    auto it = index.find(set);
    if (it != index.end()) return it->second;
    bool acc = false;
    for (int s : set) acc = acc || t.accepting[s];
    int id = out.add_state(acc);
    index.emplace(set, id);
    sets.push_back(std::move(set));
    return id;
  };
  out.start = get(epsilon_closure(t, {t.start}));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::map<LetterPair, std::vector<int>> moves;
    for (int s : sets[i])
      for (const auto& e : t.edges[s])
        if (!(e.letter.a == kBlank && e.letter.b == kBlank)) moves[e.letter].push_back(e.to);
    for (auto& [letter, targets] : moves) {
      int to = get(epsilon_closure(t, targets));
      out.add_edge(static_cast<int>(i), letter, to);
    }
  }
  return out;
}

Transducer trim(const Transducer& t) {
  std::size_t n = t.size();
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::deque<int> queue{t.start};
  fwd[t.start] = 1;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (const auto& e : t.edges[s])
      if (!fwd[e.to]) {
        fwd[e.to] = 1;
        queue.push_back(e.to);
      }
  }
  std::vector<std::vector<int>> rev(n);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& e : t.edges[s]) rev[e.to].push_back(static_cast<int>(s));
  for (std::size_t s = 0; s < n; ++s)
    if (t.accepting[s] && fwd[s]) {
      bwd[s] = 1;
      queue.push_back(static_cast<int>(s));
    }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int p : rev[s])
      if (!bwd[p]) {
        bwd[p] = 1;
        queue.push_back(p);
      }
  }
  Transducer out;
  std::vector<int> renum(n, -1);
  out.start = out.add_state(t.accepting[t.start] && bwd[t.start]);
  renum[t.start] = out.start;
  if (!t.keys.empty()) out.keys.push_back(t.keys[t.start]);
  for (std::size_t s = 0; s < n; ++s)
    if (fwd[s] && bwd[s] && renum[s] < 0) {
      renum[s] = out.add_state(t.accepting[s]);
      if (!t.keys.empty()) out.keys.push_back(t.keys[s]);
    }
  for (std::size_t s = 0; s < n; ++s) {
    if (renum[s] < 0 || !bwd[s]) continue;
    for (const auto& e : t.edges[s])
      if (renum[e.to] >= 0 && bwd[e.to]) out.add_edge(renum[s], e.letter, renum[e.to]);
  }
  return out;
}

Transducer minimize(const Transducer& in) {
  Transducer t = in.deterministic() ? in : determinize(in);
  std::size_t n = t.size();
  std::vector<int> block(n);
  for (std::size_t s = 0; s < n; ++s) block[s] = t.accepting[s] ? 1 : 0;
  std::size_t count = 0;
  for (;;) {
    std::map<std::pair<int, std::vector<std::pair<LetterPair, int>>>, int> sig;
    std::vector<int> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::pair<LetterPair, int>> row;
      for (const auto& e : t.edges[s]) row.push_back({e.letter, block[e.to]});
      std::sort(row.begin(), row.end());
      auto [it, fresh] = sig.emplace(std::make_pair(block[s], std::move(row)), static_cast<int>(sig.size()));
      next[s] = it->second;
    }
    block = std::move(next);
    if (sig.size() == count) break;
    count = sig.size();
  }
  // Renumber blocks in BFS order from the start state.
  Transducer out;
  std::vector<int> renum(count, -1);
  std::vector<int> rep(count, -1);
  for (std::size_t s = 0; s < n; ++s)
    if (rep[block[s]] < 0) rep[block[s]] = static_cast<int>(s);
  std::deque<int> queue{block[t.start]};
  renum[block[t.start]] = out.add_state(t.accepting[t.start]);
  out.start = 0;
  while (!queue.empty()) {
    int b = queue.front();
    queue.pop_front();
    std::vector<Transducer::Edge> es = t.edges[rep[b]];
    std::sort(es.begin(), es.end());
    for (const auto& e : es) {
      int tb = block[e.to];
      if (renum[tb] < 0) {
        renum[tb] = out.add_state(t.accepting[e.to]);
        queue.push_back(tb);
      }
      out.add_edge(renum[b], e.letter, renum[tb]);
    }
  }
  return out;
}

Transducer compose(const Transducer& first, const Transducer& second) {
  Transducer raw;
  std::map<std::tuple<int, int, int>, int> index;
  std::vector<std::tuple<int, int, int>> states;
  auto get = [&](int s1, int s2, int mode) {
    auto key = std::make_tuple(s1, s2, mode);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = raw.add_state(first.accepting[s1] && second.accepting[s2]);
    index.emplace(key, id);
    states.push_back(key);
    return id;
  };
  raw.start = get(first.start, second.start, 0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [s1, s2, mode] = states[i];
    int from = static_cast<int>(i);
    if (mode == 0) {
      for (const auto& e1 : first.edges[s1])
        for (const auto& e2 : second.edges[s2])
          if (e2.letter.a == e1.letter.b) raw.add_edge(from, {e1.letter.a, e2.letter.b}, get(e1.to, e2.to, 0));
    }
    if ((mode == 0 && first.accepting[s1]) || mode == 1)
      for (const auto& e2 : second.edges[s2])
        if (e2.letter.a == kBlank) raw.add_edge(from, {kBlank, e2.letter.b}, get(s1, e2.to, 1));
    if ((mode == 0 && second.accepting[s2]) || mode == 2)
      for (const auto& e1 : first.edges[s1])
        if (e1.letter.b == kBlank) raw.add_edge(from, {e1.letter.a, kBlank}, get(e1.to, s2, 2));
  }
  return minimize(trim(determinize(raw)));
}

std::optional<PairWord> equivalent(const Transducer& x0, const Transducer& y0) {
  Transducer x = x0.deterministic() ? x0 : determinize(x0);
  Transducer y = y0.deterministic() ? y0 : determinize(y0);
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> nodes;
  std::vector<std::pair<int, LetterPair>> parent;
  auto visit = [&](int a, int b, int from, LetterPair l) {
    if (index.emplace(std::make_pair(a, b), static_cast<int>(nodes.size())).second) {
      nodes.push_back({a, b});
      parent.push_back({from, l});
    }
  };
  visit(x.start, y.start, -1, {});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [a, b] = nodes[i];
    bool acc_a = a >= 0 && x.accepting[a];
    bool acc_b = b >= 0 && y.accepting[b];
    if (acc_a != acc_b) return backtrack(parent, static_cast<int>(i));
    std::map<LetterPair, std::pair<int, int>> moves;
    if (a >= 0)
      for (const auto& e : x.edges[a]) moves[e.letter] = {e.to, -1};
    if (b >= 0)
      for (const auto& e : y.edges[b]) {
        auto it = moves.find(e.letter);
        if (it == moves.end())
          moves[e.letter] = {-1, e.to};
        else
          it->second.second = e.to;
      }
    for (const auto& [l, t] : moves) visit(t.first, t.second, static_cast<int>(i), l);
  }
  return std::nullopt;
}

std::optional<FunctionalityWitness> check_functional(const Transducer& t) {
  struct Step {
    int from;
    int a, b1, b2;
  };
  std::map<std::tuple<int, int, int>, int> index;
  std::vector<std::tuple<int, int, int>> nodes;
  std::vector<Step> parent;
  auto visit = [&](int s1, int s2, int div, Step st) {
    if (index.emplace(std::make_tuple(s1, s2, div), static_cast<int>(nodes.size())).second) {
      nodes.push_back({s1, s2, div});
      parent.push_back(st);
    }
  };
  visit(t.start, t.start, 0, {-1, 0, 0, 0});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [s1, s2, div] = nodes[i];
    if (div && t.accepting[s1] && t.accepting[s2]) {
      FunctionalityWitness w;
      std::vector<Step> path;
      for (int n = static_cast<int>(i); parent[n].from >= 0; n = parent[n].from) path.push_back(parent[n]);
      std::reverse(path.begin(), path.end());
      for (std::size_t k = 0; k < path.size(); ++k) {
        if (k == 0) {
          w.w.root = root_of_letter(path[k].a);
          w.u1.root = root_of_letter(path[k].b1);
          w.u2.root = root_of_letter(path[k].b2);
          continue;
        }
        if (path[k].a >= 0) w.w.faces.push_back(path[k].a);
        if (path[k].b1 >= 0) w.u1.faces.push_back(path[k].b1);
        if (path[k].b2 >= 0) w.u2.faces.push_back(path[k].b2);
      }
      return w;
    }
    for (const auto& e1 : t.edges[s1])
      for (const auto& e2 : t.edges[s2])
        if (e1.letter.a == e2.letter.a)
          visit(e1.to, e2.to, div || e1.letter.b != e2.letter.b,
                {static_cast<int>(i), e1.letter.a, e1.letter.b, e2.letter.b});
  }
  return std::nullopt;
}

TransducerBuild build_transducer(WordNavigator& nav, int t, int f, const BuildOptions& opt) {
  const Rts& rts = nav.rts();
  const HoneycombSchema& schema = nav.schema();
  IsometryTable jt;
  const int id_identity = jt.id_of(real_identity());
  const int id_target = jt.id_of(schema.gluing(t, f));
  const int target_type = schema.paired(t, f).type;
  auto type_of = [&](int q) { return rts.states[q].type; };
  auto accept = [&](const MNKey& k) {
    return k.q_w >= 0 && type_of(k.q_w) == t && type_of(k.q_u) == target_type && k.j == id_target;
  };

  TransducerBuild out;
  Transducer& T = out.transducer;
  T.start = T.add_state(false);
  T.keys.push_back(MNKey{});
  std::unordered_map<MNKey, int, MNKeyHash> index;

  auto child_of = [&](int q, int letter) {
    const auto& rules = rts.states[q].rules;
    if (letter < 0 || letter >= static_cast<int>(rules.size()) || rules[letter].kind != RuleKind::child) return -1;
    return rules[letter].child;
  };
  auto next_key = [&](const MNKey& k, LetterPair l) -> std::optional<MNKey> {
    if (k.q_w < 0) {
      if (l.a != l.b || l.a > kBlank - 1) return std::nullopt;
      int r = root_of_letter(l.a);
      if (r < 0 || r >= static_cast<int>(rts.roots.size())) return std::nullopt;
      return MNKey{0, rts.roots[r], 0, rts.roots[r], id_identity};
    }
    MNKey n = k;
    RealMatrix J = jt.at(k.j);
    if (l.a == kBlank) {
      n.end_w = 1;
    } else {
      if (k.end_w) return std::nullopt;
      n.q_w = child_of(k.q_w, l.a);
      if (n.q_w < 0) return std::nullopt;
      J = schema.gluing_inverse(type_of(k.q_w), l.a) * J;
    }
    if (l.b == kBlank) {
      n.end_u = 1;
    } else {
      if (k.end_u) return std::nullopt;
      n.q_u = child_of(k.q_u, l.b);
      if (n.q_u < 0) return std::nullopt;
      J = J * schema.gluing(type_of(k.q_u), l.b);
    }
    n.j = jt.id_of(J);
    return n;
  };
  auto state_for = [&](const MNKey& k) {
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    if (T.size() >= opt.state_cap) throw StateCapExceeded("transducer exceeds " + std::to_string(opt.state_cap) + " states");
    int id = T.add_state(accept(k));
    T.keys.push_back(k);
    index.emplace(k, id);
    return id;
  };
  auto thread = [&](const Word& w, const Word& u) -> std::optional<bool> {
    int s = T.start;
    for (const LetterPair& l : pad(w, u)) {
      if (auto nx = T.step(s, l)) {
        s = *nx;
        continue;
      }
      auto k = next_key(T.keys[s], l);
      if (!k) return std::nullopt;
      int ns = state_for(*k);
      T.add_edge(s, l, ns);
      s = ns;
    }
    return T.accepting[s] != 0;
  };

  // Shortest, lexicographically first w of type t with no accepted output.
  auto uncovered = [&]() -> std::optional<Word> {
    struct Node {
      int q;
      std::vector<int> set;
      int parent;
      int letter;
    };
    std::vector<Node> nodes;
    std::set<std::pair<int, std::vector<int>>> seen;
    nodes.push_back({-1, {T.start}, -1, 0});
    auto covered = [&](const std::vector<int>& set) {
      std::vector<int> stack = set;
      std::set<int> vis(set.begin(), set.end());
      while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        if (T.accepting[s]) return true;
        for (const auto& e : T.edges[s])
          if (e.letter.a == kBlank && vis.insert(e.to).second) stack.push_back(e.to);
      }
      return false;
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::vector<int> letters;
      if (nodes[i].q < 0) {
        for (int r = 0; r < static_cast<int>(rts.roots.size()); ++r) letters.push_back(root_letter(r));
      } else {
        const auto& rules = rts.states[nodes[i].q].rules;
        for (int g = 0; g < static_cast<int>(rules.size()); ++g)
          if (rules[g].kind == RuleKind::child) letters.push_back(g);
      }
      for (int a : letters) {
        int q = nodes[i].q < 0 ? rts.roots[root_of_letter(a)] : rts.states[nodes[i].q].rules[a].child;
        std::set<int> next;
        for (int s : nodes[i].set)
          for (const auto& e : T.edges[s])
            if (e.letter.a == a) next.insert(e.to);
        std::vector<int> set(next.begin(), next.end());
        if (!seen.emplace(q, set).second) continue;
        nodes.push_back({q, set, static_cast<int>(i), a});
        if (type_of(q) == t && !covered(set)) {
          Word w;
          std::vector<int> rev;
          for (int n = static_cast<int>(nodes.size()) - 1; nodes[n].parent >= 0; n = nodes[n].parent) rev.push_back(nodes[n].letter);
          std::reverse(rev.begin(), rev.end());
          w.root = root_of_letter(rev[0]);
          w.faces.assign(rev.begin() + 1, rev.end());
          return w;
        }
      }
    }
    return std::nullopt;
  };

  while (auto w = uncovered()) {
    Word u;
    try {
      u = nav.neighbor(*w, f);
    } catch (const DistanceViolation& e) {
      out.violation = std::string("distance: ") + e.what();
      out.witness = e.witness;
      return out;
    } catch (const BudgetExceeded& e) {
      out.violation = std::string("budget: ") + e.what();
      out.witness = *w;
      return out;
    }
    auto ok = thread(*w, u);
    ++out.threaded;
    if (!ok || !*ok) {
      out.violation = "geometry: the rule-generated neighbor " + u.str() + " of " + w->str() + " across face " + std::to_string(f) +
                      " is not the adjacent cell";
      out.witness = *w;
      return out;
    }
  }
  if (auto fw = check_functional(T)) {
    out.violation = "functionality: " + fw->w.str() + " is paired with both " + fw->u1.str() + " and " + fw->u2.str();
    out.witness = fw->w;
  }
  return out;
}

std::vector<CycleResult> check_cycles(const Rts& rts, const HoneycombSchema& schema,
                                      const std::vector<std::vector<Transducer>>& built) {
  std::vector<CycleResult> out;
  for (int t = 0; t < schema.type_count(); ++t) {
    Transducer id = minimize(identity_transducer(rts, t));
    const auto& cycles = schema.edge_cycles(t);
    for (std::size_t e = 0; e < cycles.size(); ++e) {
      CycleResult res;
      res.type = t;
      res.edge = static_cast<int>(e);
      res.faces = cycles[e];
      int cur = t;
      Transducer acc;
      for (std::size_t i = 0; i < cycles[e].size(); ++i) {
        int g = cycles[e][i];
        const Transducer& a = built.at(cur).at(g);
        acc = i == 0 ? a : compose(acc, a);
        cur = schema.paired(cur, g).type;
      }
      if (auto wit = equivalent(acc, id)) {
        res.ok = false;
        res.witness = input_word(*wit);
      }
      out.push_back(std::move(res));
    }
  }
  return out;
}

VerificationReport verify(const Rts& rts, const SchemaPtr& schema, const VerifyOptions& opt) {
  validate_structure(rts, *schema);
  VerificationReport rep;
  WordNavigator nav(rts, schema, opt.build.budget);
  auto fail = [&](const std::string& msg, const std::optional<Word>& w) {
    rep.ok = false;
    rep.problems.push_back(msg);
    if (w && !rep.counterexample) rep.counterexample = *w;
  };

  if (opt.full_dist_check) {
    for (int r = 0; r < schema->type_count() && rep.ok; ++r) {
      std::deque<Word> queue{Word{r, {}}};
      while (!queue.empty() && rep.ok) {
        Word w = queue.front();
        queue.pop_front();
        int q = nav.state_of(w);
        const auto& rules = rts.states[q].rules;
        for (int f = 0; f < static_cast<int>(rules.size()); ++f) {
          try {
            nav.neighbor(w, f);
          } catch (const DistanceViolation& e) {
            fail(std::string("distance: ") + e.what(), e.witness);
            break;
          } catch (const BudgetExceeded& e) {
            fail(std::string("budget: ") + e.what(), w);
            break;
          }
          if (rules[f].kind == RuleKind::child && static_cast<int>(w.size()) < opt.full_dist_length) {
            Word c = w;
            c.faces.push_back(f);
            queue.push_back(std::move(c));
          }
        }
      }
    }
    if (!rep.ok) return rep;
  }

  std::vector<std::vector<Transducer>> built(schema->type_count());
  rep.transducer_sizes.resize(schema->type_count());
  for (int t = 0; t < schema->type_count(); ++t)
    for (int f = 0; f < schema->face_count(t); ++f) {
      TransducerBuild b = build_transducer(nav, t, f, opt.build);
      rep.transducer_sizes[t].push_back(b.transducer.size());
      if (b.violation) {
        fail("A(" + std::to_string(t) + "," + std::to_string(f) + ") " + *b.violation, b.witness);
        return rep;
      }
      built[t].push_back(trim(b.transducer));
    }
  if (opt.check_cycles) {
    rep.cycles = check_cycles(rts, *schema, built);
    for (const auto& c : rep.cycles)
      if (!c.ok) fail("cycle t=" + std::to_string(c.type) + " edge=" + std::to_string(c.edge) + " does not compose to the identity", c.witness);
  }
  return rep;
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["ok"] = ok;
  j["transducers"] = transducer_sizes;
  j["cycles"] = nlohmann::ordered_json::array();
  for (const auto& c : cycles) {
    nlohmann::ordered_json cj;
    cj["type"] = c.type;
    cj["edge"] = c.edge;
    cj["faces"] = c.faces;
    cj["ok"] = c.ok;
    if (c.witness) cj["witness"] = c.witness->str();
    j["cycles"].push_back(cj);
  }
  j["problems"] = problems;
  if (counterexample) j["counterexample"] = counterexample->str();
  return j.dump(2) + "\n";
}

}  // namespace honeycomb
