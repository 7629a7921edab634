#include "honeycomb/learner.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace honeycomb {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

class Interner {
 public:
  int operator()(std::vector<int> key) {
    auto [it, fresh] = ids_.emplace(std::move(key), static_cast<int>(ids_.size()));
    return it->second;
  }

 private:
  std::unordered_map<std::vector<int>, int, VecHash> ids_;
};

}  // namespace

LearnerConfig learner_config_from_json(const std::string& text) {
  LearnerConfig c;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("learner config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("learner config must be an object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "max_iterations")
        c.max_iterations = value.get<int>();
      else if (key == "ball_radius")
        c.ball_radius = value.get<int>();
      else if (key == "suffix_check_l")
        c.suffix_check_l = value.get<int>();
      else if (key == "subtree_reuse")
        c.subtree_reuse = value.get<bool>();
      else
        throw ParseError("unknown learner config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("learner config key '" + key + "': " + e.what());
    }
  }
  if (c.max_iterations < 1 || c.ball_radius < 1 || c.suffix_check_l < 0) throw ParseError("learner config values out of range");
  return c;
}

SampleGraph::SampleGraph(SchemaPtr schema, GraphConfig config) : schema_(std::move(schema)) {
  for (int t = 0; t < schema_->type_count(); ++t) {
    stores_.push_back(std::make_unique<CellStore>(schema_, config));
    stores_.back()->new_root(t);
  }
  tag_cache_.resize(stores_.size());
}

void SampleGraph::grow(int radius) {
  for (auto& s : stores_) s->ensure_ball(s->root(), radius + 1);
  radius_ = radius;
}

int SampleGraph::parent_face(int r, CellId c) {
  CellStore& s = store(r);
  if (c == s.root()) throw NoParent("the root cell has no parent");
  int d = s.dist(c);
  for (int f = 0; f < s.schema().face_count(s.type(c)); ++f) {
    CellId n = s.peek(c, f);
    if (n != kNoCell && s.dist(n) == d - 1) return f;
  }
  throw PathNotFound("cell " + std::to_string(c) + " has no known neighbor closer to the root");
}

CellId SampleGraph::parent(int r, CellId c) { return store(r).neighbor(c, parent_face(r, c)); }

Word SampleGraph::word_of(int r, CellId c) {
  CellStore& s = store(r);
  Word w{r, {}};
  while (c != s.root()) {
    int pf = parent_face(r, c);
    w.faces.push_back(s.schema().paired(s.type(c), pf).face);
    c = s.neighbor(c, pf);
  }
  std::reverse(w.faces.begin(), w.faces.end());
  return w;
}

CellId SampleGraph::cell_of(const Word& w) {
  CellStore& s = store(w.root);
  CellId c = s.root();
  for (int f : w.faces) c = s.resolve(c, f);
  return c;
}

std::vector<int> SampleGraph::side_path(int r, CellId c, CellId target, std::vector<int>& dist) {
  CellStore& s = store(r);
  int n = s.dist(c);
  int pf = parent_face(r, c);
  CellId start = s.neighbor(c, pf);
  std::unordered_map<CellId, std::pair<CellId, int>> prev{{start, {kNoCell, -1}}};
  std::deque<CellId> queue{start};
  while (!queue.empty() && !prev.count(target)) {
    CellId x = queue.front();
    queue.pop_front();
    for (int f = 0; f < s.schema().face_count(s.type(x)); ++f) {
      CellId y = s.neighbor(x, f);
      if (y == kNoCell || s.dist(y) >= n || prev.count(y)) continue;
      prev.emplace(y, std::make_pair(x, f));
      queue.push_back(y);
    }
  }
  if (!prev.count(target)) throw PathNotFound("no middle path below distance " + std::to_string(n));
  std::vector<std::pair<CellId, int>> middle;
  for (CellId y = target; y != start; y = prev[y].first) middle.push_back({y, prev[y].second});
  std::reverse(middle.begin(), middle.end());
  std::vector<int> path{pf};
  dist.assign(1, -1);
  for (const auto& [y, f] : middle) {
    path.push_back(f);
    dist.push_back(s.dist(y) - n);
  }
  return path;
}

FaceTag SampleGraph::classify(int r, CellId c, int f) {
  CellStore& s = store(r);
  int n = s.dist(c);
  CellId x = s.resolve(c, f);
  int back = s.schema().paired(s.type(c), f).face;
  int dx = s.dist(x);
  FaceTag tag;
  if (dx == n - 1 && f == parent_face(r, c)) return tag;
  if (dx == n + 1 && parent_face(r, x) == back) {
    tag.kind = RuleKind::child;
    return tag;
  }
  tag.kind = RuleKind::side;
  std::vector<int> finals;
  CellId anchor = x;
  if (dx == n + 1) {
    CellId pp = parent(r, x);
    anchor = parent(r, pp);
    finals = {s.schema().paired(s.type(pp), parent_face(r, pp)).face, s.schema().paired(s.type(x), parent_face(r, x)).face};
  } else if (dx == n) {
    anchor = parent(r, x);
    finals = {s.schema().paired(s.type(x), parent_face(r, x)).face};
  }
  tag.path = side_path(r, c, anchor, tag.dist);
  for (std::size_t i = 0; i < finals.size(); ++i) {
    tag.path.push_back(finals[i]);
    tag.dist.push_back(static_cast<int>(i) + 1 - static_cast<int>(finals.size()) + (dx - n));
  }
  return tag;
}

std::vector<FaceTag> SampleGraph::classify(int r, CellId c) {
  std::vector<FaceTag> out;
  for (int f = 0; f < store(r).schema().face_count(store(r).type(c)); ++f) out.push_back(classify(r, c, f));
  return out;
}

std::vector<int> SampleGraph::tag_ids(int r, CellId c, bool reuse) {
  auto& cache = tag_cache_.at(r);
  if (cache.size() <= static_cast<std::size_t>(c)) cache.resize(store(r).size());
  if (!reuse || cache[c].empty()) {
    std::vector<int> ids;
    for (FaceTag& t : classify(r, c)) {
      auto [it, fresh] = tag_index_.emplace(t, static_cast<int>(tags_.size()));
      if (fresh) tags_.push_back(std::move(t));
      ids.push_back(it->second);
    }
    cache[c] = std::move(ids);
  }
  return cache[c];
}

Candidate candidate_rts(SampleGraph& g, bool reuse) {
  const int radius = g.radius();
  const int nt = g.type_count();
  std::vector<std::vector<CellId>> ball(nt);
  std::vector<std::vector<int>> cls(nt);
  Interner level0;
  for (int r = 0; r < nt; ++r) {
    CellStore& s = g.store(r);
    cls[r].assign(s.size(), -1);
    for (CellId c = 0; c < static_cast<CellId>(s.size()); ++c)
      if (s.dist(c) <= radius) ball[r].push_back(c);
    for (CellId c : ball[r]) {
      std::vector<int> sig{s.type(c)};
      const auto ids = g.tag_ids(r, c, reuse);
      sig.insert(sig.end(), ids.begin(), ids.end());
      cls[r][c] = level0(std::move(sig));
    }
  }
  auto is_child = [&](int r, CellId c, int f) { return g.tag(g.tag_ids(r, c, true)[f]).kind == RuleKind::child; };

  for (int level = 0;; ++level) {
    const int lim = radius - level - 1;
    if (lim < 0) throw InsufficientSamples("signatures do not stabilize within radius " + std::to_string(radius));
    Interner refine;
    std::vector<std::vector<int>> next(nt);
    std::set<int> before, after;
    for (int r = 0; r < nt; ++r) {
      CellStore& s = g.store(r);
      next[r].assign(s.size(), -1);
      for (CellId c : ball[r]) {
        if (s.dist(c) > lim) continue;
        std::vector<int> sig{cls[r][c]};
        for (int f = 0; f < s.schema().face_count(s.type(c)); ++f) sig.push_back(is_child(r, c, f) ? cls[r][s.neighbor(c, f)] : -1);
        next[r][c] = refine(std::move(sig));
        before.insert(cls[r][c]);
        after.insert(next[r][c]);
      }
    }
    if (before.size() != after.size()) {
      cls = std::move(next);
      continue;
    }

    // cls is a stable partition on cells within lim; read rules off it.
    std::map<int, int> state_of;  // class -> state index
    for (int k : before) state_of.emplace(k, static_cast<int>(state_of.size()));
    struct Rep {
      int dist = kUnknownDist;
      int r = 0;
      Word word;
      CellId cell = kNoCell;
    };
    std::vector<Rep> reps(state_of.size());
    for (int r = 0; r < nt; ++r) {
      CellStore& s = g.store(r);
      for (CellId c : ball[r]) {
        if (s.dist(c) > lim) continue;
        for (int f = 0; f < s.schema().face_count(s.type(c)); ++f)
          if (is_child(r, c, f) && !state_of.count(cls[r][s.neighbor(c, f)]))
            throw InsufficientSamples("a child class at distance " + std::to_string(s.dist(c) + 1) + " has no sample within radius " +
                                      std::to_string(lim));
        Rep& rep = reps[state_of[cls[r][c]]];
        if (s.dist(c) > rep.dist || (s.dist(c) == rep.dist && r > rep.r)) continue;
        Word w = g.word_of(r, c);
        if (s.dist(c) < rep.dist || r < rep.r || w < rep.word) rep = Rep{s.dist(c), r, std::move(w), c};
      }
    }
    Candidate out;
    out.refinement_levels = level;
    Rts& rts = out.rts;
    rts.symbol = g.store(0).schema().symbol();
    rts.schema_hash = schema_hash(g.store(0).schema());
    for (const Rep& rep : reps) {
      CellStore& s = g.store(rep.r);
      RtsState st;
      st.type = s.type(rep.cell);
      const auto ids = g.tag_ids(rep.r, rep.cell, true);
      for (int f = 0; f < static_cast<int>(ids.size()); ++f) {
        const FaceTag& t = g.tag(ids[f]);
        if (t.kind == RuleKind::parent)
          st.rules.push_back(Rule::make_parent());
        else if (t.kind == RuleKind::child)
          st.rules.push_back(Rule::make_child(state_of.at(cls[rep.r][s.neighbor(rep.cell, f)])));
        else
          st.rules.push_back(Rule::make_side(t.path, t.dist));
      }
      rts.states.push_back(std::move(st));
      out.representatives.push_back({rep.r, rep.cell});
    }
    for (int r = 0; r < nt; ++r) rts.roots.push_back(state_of.at(cls[r][g.store(r).root()]));
    return out;
  }
}

std::optional<Word> preverify(const Rts& rts, SampleGraph& g, int l, std::string* why) {
  auto fail = [&](const Word& w, const std::string& msg) {
    if (why) *why = msg;
    return std::optional<Word>(w);
  };
  const SchemaPtr schema = g.store(0).schema_ptr();
  WordNavigator nav(rts, schema);

  // Closest word of every state, shortlex over the candidate tree.
  std::vector<std::optional<Word>> first(rts.state_count());
  std::deque<Word> queue;
  for (int r = 0; r < static_cast<int>(rts.roots.size()); ++r) queue.push_back(Word{r, {}});
  while (!queue.empty()) {
    Word w = queue.front();
    queue.pop_front();
    int q = nav.state_of(w);
    if (first[q]) continue;
    first[q] = w;
    for (int f = 0; f < static_cast<int>(rts.states[q].rules.size()); ++f)
      if (rts.states[q].rules[f].kind == RuleKind::child) {
        Word c = w;
        c.faces.push_back(f);
        queue.push_back(std::move(c));
      }
  }
  for (int q = 0; q < rts.state_count(); ++q) {
    if (!first[q]) return fail(Word{}, "state " + std::to_string(q) + " is unreachable");
    const Word& w = *first[q];
    CellStore& s = g.store(w.root);
    CellId c = g.cell_of(w);
    if (s.dist(c) != static_cast<int>(w.size())) return fail(w, "closest word of state " + std::to_string(q) + " is not geodesic");
    if (s.dist(c) > g.radius()) return fail(w, "closest word of state " + std::to_string(q) + " lies outside the sample ball");
    const auto& rules = rts.states[q].rules;
    const auto ids = g.tag_ids(w.root, c, true);
    for (int f = 0; f < static_cast<int>(rules.size()); ++f) {
      const FaceTag& t = g.tag(ids[f]);
      bool same = t.kind == rules[f].kind && (t.kind != RuleKind::side || (t.path == rules[f].path && t.dist == rules[f].dist));
      if (!same) return fail(w, "face " + std::to_string(f) + " of state " + std::to_string(q) + " is classified differently in the graph");
    }
  }

  // Neighbor queries on every context w_q s with |s| <= l.
  for (int q = 0; q < rts.state_count(); ++q) {
    std::vector<Word> layer{*first[q]};
    for (int depth = 0; depth <= l; ++depth) {
      std::vector<Word> deeper;
      for (const Word& w : layer) {
        int qw = nav.state_of(w);
        const auto& rules = rts.states[qw].rules;
        CellId c = g.cell_of(w);
        for (int f = 0; f < static_cast<int>(rules.size()); ++f) {
          Word u;
          try {
            u = nav.neighbor(w, f);
          } catch (const DistanceViolation& e) {
            return fail(w, e.what());
          } catch (const BudgetExceeded& e) {
            return fail(w, e.what());
          }
          if (g.cell_of(u) != g.store(w.root).resolve(c, f))
            return fail(w, "neighbor " + u.str() + " of " + w.str() + " across face " + std::to_string(f) + " is not adjacent");
          if (rules[f].kind == RuleKind::child && depth < l) deeper.push_back(u);
        }
      }
      layer = std::move(deeper);
    }
  }
  return std::nullopt;
}

LearnResult learn(const SchemaPtr& schema, const LearnerConfig& config) {
  LearnResult res;
  SampleGraph g(schema, config.graph);
  int radius = config.ball_radius;
  auto note = [&](const std::string& line) {
    res.log.push_back(line);
    if (config.log) config.log(line);
  };
  for (int it = 1; it <= config.max_iterations; ++it) {
    g.grow(radius);
    std::size_t samples = 0;
    for (int r = 0; r < g.type_count(); ++r) samples += g.store(r).size();
    std::ostringstream head;
    head << "iteration " << it << ": radius " << radius << ", " << samples << " cells";
    try {
      Candidate cand = candidate_rts(g, config.subtree_reuse);
      head << ", " << cand.rts.state_count() << " states";
      validate_structure(cand.rts, *schema);
      std::string why;
      if (auto w = preverify(cand.rts, g, config.suffix_check_l, &why)) {
        note(head.str() + ", preverify counterexample " + w->str() + " (" + why + ")");
        ++radius;
        continue;
      }
      VerificationReport rep = verify(cand.rts, schema, config.verify);
      if (!rep.ok) {
        note(head.str() + ", verifier counterexample " + (rep.counterexample ? rep.counterexample->str() : std::string("-")) + " (" +
             rep.problems.front() + ")");
        ++radius;
        continue;
      }
      note(head.str() + ", verified");
      res.rts = canonicalize(cand.rts);
      res.iterations = it;
      res.ball_radius = radius;
      res.samples = samples;
      return res;
    } catch (const InsufficientSamples& e) {
      note(head.str() + ", " + e.what());
    } catch (const PathNotFound& e) {
      note(head.str() + ", " + e.what());
    } catch (const StateCapExceeded& e) {
      note(head.str() + ", " + e.what());
    } catch (const ParseError& e) {
      note(head.str() + ", " + e.what());
    } catch (const ParentRuleViolation& e) {
      note(head.str() + ", " + e.what());
    }
    ++radius;
  }
  throw IterationCapExceeded("no verified GRTS after " + std::to_string(config.max_iterations) + " iterations");
}

}  // namespace honeycomb
