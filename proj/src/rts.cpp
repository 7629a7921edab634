#include "honeycomb/rts.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "json.hpp"

namespace honeycomb {

using nlohmann::json;
using nlohmann::ordered_json;

int Rts::parent_face(int q) const {
  const auto& rules = states.at(q).rules;
  for (std::size_t f = 0; f < rules.size(); ++f)
    if (rules[f].kind == RuleKind::parent) return static_cast<int>(f);
  return -1;
}

void validate_structure(const Rts& rts, const HoneycombSchema& schema) {
  if (rts.symbol != schema.symbol()) throw SchemaMismatch("GRTS symbol " + rts.symbol.str() + " vs schema " + schema.symbol().str());
  if (rts.schema_hash != schema_hash(schema))
    throw SchemaMismatch("schema hash " + hash_hex(rts.schema_hash) + " does not match " + hash_hex(schema_hash(schema)));
  int nq = rts.state_count();
  if (nq == 0) throw ParseError("GRTS has no states");
  if (static_cast<int>(rts.roots.size()) != schema.type_count()) throw ParseError("one root state per tile type is required");
  std::vector<char> is_root(nq, 0);
  for (int t = 0; t < schema.type_count(); ++t) {
    int q = rts.roots[t];
    if (q < 0 || q >= nq) throw ParseError("root state out of range");
    if (rts.states[q].type != t) throw ParseError("root state " + std::to_string(q) + " has the wrong type");
    is_root[q] = 1;
  }
  for (int q = 0; q < nq; ++q) {
    const RtsState& s = rts.states[q];
    if (s.type < 0 || s.type >= schema.type_count()) throw ParseError("state " + std::to_string(q) + " has an unknown type");
    if (static_cast<int>(s.rules.size()) != schema.face_count(s.type))
      throw ParseError("state " + std::to_string(q) + " has the wrong number of rules");
    int parents = 0;
    for (const Rule& r : s.rules) parents += r.kind == RuleKind::parent;
    if (is_root[q] ? parents != 0 : parents != 1)
      throw ParseError("state " + std::to_string(q) + " has " + std::to_string(parents) + " parent rules");
    int pf = rts.parent_face(q);
    for (int f = 0; f < static_cast<int>(s.rules.size()); ++f) {
      const Rule& r = s.rules[f];
      const FaceRef& back = schema.paired(s.type, f);
      if (r.kind == RuleKind::child) {
        if (r.child < 0 || r.child >= nq) throw ParseError("child target out of range in state " + std::to_string(q));
        const RtsState& c = rts.states[r.child];
        if (c.type != back.type) throw ParseError("child state type mismatch in state " + std::to_string(q));
        if (c.rules.at(back.face).kind != RuleKind::parent)
          throw ParentRuleViolation("child " + std::to_string(r.child) + " of state " + std::to_string(q) + " face " +
                                    std::to_string(f) + " has no parent rule on the paired face");
      } else if (r.kind == RuleKind::side) {
        if (r.path.empty() || r.path.size() != r.dist.size())
          throw ParseError("side rule of state " + std::to_string(q) + " face " + std::to_string(f) + " is malformed");
        if (r.path[0] != pf || r.dist[0] != -1)
          throw ParseError("side rule of state " + std::to_string(q) + " face " + std::to_string(f) + " must start with the parent move");
        for (std::size_t i = 1; i < r.dist.size(); ++i)
          if (std::abs(r.dist[i] - r.dist[i - 1]) > 1) throw ParseError("side distances jump in state " + std::to_string(q));
        for (int g : r.path)
          if (g < 0 || g >= schema.max_face_count()) throw ParseError("side path face out of range");
      }
    }
  }
  std::vector<char> seen(nq, 0);
  std::deque<int> queue;
  for (int q : rts.roots)
    if (!seen[q]) {
      seen[q] = 1;
      queue.push_back(q);
    }
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (const Rule& r : rts.states[q].rules)
      if (r.kind == RuleKind::child && !seen[r.child]) {
        seen[r.child] = 1;
        queue.push_back(r.child);
      }
  }
  for (int q = 0; q < nq; ++q)
    if (!seen[q]) throw ParseError("state " + std::to_string(q) + " is unreachable from the roots");
}

Rts canonicalize(const Rts& rts) {
  int nq = rts.state_count();
  std::vector<int> renum(nq, -1);
  std::vector<int> order;
  std::deque<int> queue;
  for (int q : rts.roots)
    if (q >= 0 && q < nq && renum[q] < 0) {
      renum[q] = static_cast<int>(order.size());
      order.push_back(q);
      queue.push_back(q);
    }
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (const Rule& r : rts.states[q].rules)
      if (r.kind == RuleKind::child && renum[r.child] < 0) {
        renum[r.child] = static_cast<int>(order.size());
        order.push_back(r.child);
        queue.push_back(r.child);
      }
  }
  Rts out;
  out.symbol = rts.symbol;
  out.schema_hash = rts.schema_hash;
  for (int q : order) {
    RtsState s = rts.states[q];
    for (Rule& r : s.rules)
      if (r.kind == RuleKind::child) r.child = renum[r.child];
    out.states.push_back(std::move(s));
  }
  for (int q : rts.roots) out.roots.push_back(renum.at(q));
  return out;
}

std::string serialize(const Rts& rts) {
  std::ostringstream os;
  os << "{\n  \"symbol\": " << json({rts.symbol.p, rts.symbol.q, rts.symbol.r}).dump() << ",\n";
  os << "  \"schema_hash\": \"" << hash_hex(rts.schema_hash) << "\",\n";
  os << "  \"roots\": " << json(rts.roots).dump() << ",\n";
  os << "  \"states\": [";
  for (int q = 0; q < rts.state_count(); ++q) {
    const RtsState& s = rts.states[q];
    ordered_json j;
    j["type"] = s.type;
    j["rules"] = ordered_json::array();
    for (const Rule& r : s.rules) {
      if (r.kind == RuleKind::parent) {
        j["rules"].push_back("parent");
      } else if (r.kind == RuleKind::child) {
        ordered_json c;
        c["child"] = r.child;
        j["rules"].push_back(c);
      } else {
        ordered_json c;
        c["side"] = r.path;
        c["dist"] = r.dist;
        j["rules"].push_back(c);
      }
    }
    os << (q ? ",\n    " : "\n    ") << j.dump();
  }
  os << "\n  ]\n}\n";
  return os.str();
}

namespace {

std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Rts deserialize(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(position_of(text, e.byte) + ": " + e.what());
  }
  Rts rts;
  try {
    auto sym = j.at("symbol");
    if (!sym.is_array() || sym.size() != 3) throw ParseError("symbol must be [p,q,r]");
    rts.symbol = {sym[0].get<int>(), sym[1].get<int>(), sym[2].get<int>()};
    rts.schema_hash = parse_hash_hex(j.at("schema_hash").get<std::string>());
    rts.roots = j.at("roots").get<std::vector<int>>();
    const auto& states = j.at("states");
    if (!states.is_array()) throw ParseError("states must be an array");
    int nq = static_cast<int>(states.size());
    for (std::size_t q = 0; q < states.size(); ++q) {
      const auto& sj = states[q];
      RtsState s;
      s.type = sj.at("type").get<int>();
      for (const auto& rj : sj.at("rules")) {
        if (rj.is_string()) {
          if (rj.get<std::string>() != "parent") throw ParseError("state " + std::to_string(q) + ": unknown rule " + rj.dump());
          s.rules.push_back(Rule::make_parent());
        } else if (rj.is_object() && rj.contains("child")) {
          int c = rj.at("child").get<int>();
          if (c < 0 || c >= nq) throw ParseError("state " + std::to_string(q) + ": child target " + std::to_string(c) + " out of range");
          s.rules.push_back(Rule::make_child(c));
        } else if (rj.is_object() && rj.contains("side")) {
          auto p = rj.at("side").get<std::vector<int>>();
          auto d = rj.at("dist").get<std::vector<int>>();
          if (p.size() != d.size() || p.empty()) throw ParseError("state " + std::to_string(q) + ": side path and dist differ in length");
          s.rules.push_back(Rule::make_side(std::move(p), std::move(d)));
        } else {
          throw ParseError("state " + std::to_string(q) + ": unknown rule " + rj.dump());
        }
      }
      rts.states.push_back(std::move(s));
    }
    for (int q : rts.roots)
      if (q < 0 || q >= nq) throw ParseError("root state " + std::to_string(q) + " out of range");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed GRTS: ") + e.what());
  }
  return rts;
}

std::string Word::str() const {
  std::ostringstream os;
  os << "r" << root << ":";
  for (std::size_t i = 0; i < faces.size(); ++i) os << (i ? "," : "") << faces[i];
  return os.str();
}

std::size_t WordHash::operator()(const Word& w) const {
  std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(w.root);
  for (int f : w.faces) {
    h ^= static_cast<std::uint64_t>(f + 1);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

WordNavigator::WordNavigator(const Rts& rts, SchemaPtr schema, std::size_t budget)
    : rts_(rts), schema_(std::move(schema)), budget_(budget) {}

int WordNavigator::state_of(const Word& w) const {
  if (w.root < 0 || w.root >= static_cast<int>(rts_.roots.size())) return -1;
  int q = rts_.roots[w.root];
  for (int f : w.faces) {
    const auto& rules = rts_.states[q].rules;
    if (f < 0 || f >= static_cast<int>(rules.size()) || rules[f].kind != RuleKind::child) return -1;
    q = rules[f].child;
  }
  return q;
}

int WordNavigator::type_of(const Word& w) const {
  int q = state_of(w);
  return q < 0 ? -1 : rts_.states[q].type;
}

Word WordNavigator::neighbor(const Word& w, int f) {
  std::size_t spent = 0;
  return step(w, f, spent);
}

Word WordNavigator::step(const Word& w, int f, std::size_t& spent) {
  if (++spent > budget_) throw BudgetExceeded("side recursion exceeds " + std::to_string(budget_) + " steps at " + w.str());
  int q = state_of(w);
  if (q < 0) throw Error("word " + w.str() + " is not in the tree language");
  const auto& rules = rts_.states[q].rules;
  if (f < 0 || f >= static_cast<int>(rules.size())) throw Error("face " + std::to_string(f) + " out of range at " + w.str());
  auto& slot = memo_[w];
  if (slot.size() != rules.size()) slot.assign(rules.size(), Word{-1, {}});
  if (slot[f].root >= 0) return slot[f];
  const Rule& r = rules[f];
  Word out;
  if (r.kind == RuleKind::parent) {
    out = w;
    out.faces.pop_back();
  } else if (r.kind == RuleKind::child) {
    out = w;
    out.faces.push_back(f);
  } else {
    Word cur = w;
    for (std::size_t i = 0; i < r.path.size(); ++i) {
      cur = step(cur, r.path[i], spent);
      int rel = static_cast<int>(cur.size()) - static_cast<int>(w.size());
      if (rel != r.dist[i])
        throw DistanceViolation("side path of face " + std::to_string(f) + " at " + w.str() + " reaches relative distance " +
                                    std::to_string(rel) + " at step " + std::to_string(i) + ", expected " + std::to_string(r.dist[i]),
                                w, static_cast<int>(i));
    }
    out = std::move(cur);
  }
  slot[f] = out;
  return out;
}

RtsGenerator::RtsGenerator(const Rts& rts, SchemaPtr schema, std::size_t budget)
    : rts_(rts), schema_(std::move(schema)), budget_(budget), roots_(rts.roots.size(), -1) {}

NodeId RtsGenerator::root(int type) {
  NodeId& r = roots_.at(type);
  if (r >= 0) return r;
  RtsNode n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.state = rts_.roots[type];
  n.type = type;
  n.word = Word{type, {}};
  n.isometry = real_identity();
  n.links.assign(schema_->face_count(type), -1);
  nodes_.push_back(std::move(n));
  r = nodes_.back().id;
  return r;
}

NodeId RtsGenerator::neighbor(NodeId n, int f) {
  std::size_t spent = 0;
  return resolve(n, f, spent);
}

NodeId RtsGenerator::follow(NodeId n, const std::vector<int>& path) {
  std::size_t spent = 0;
  for (int f : path) n = resolve(n, f, spent);
  return n;
}

NodeId RtsGenerator::resolve(NodeId n, int f, std::size_t& spent) {
  if (nodes_.at(n).links.at(f) >= 0) return nodes_[n].links[f];
  if (++spent > budget_) throw BudgetExceeded("side connection procedure exceeds " + std::to_string(budget_) + " steps");
  const int q = nodes_[n].state;
  const int type = nodes_[n].type;
  const Rule& r = rts_.states[q].rules.at(f);
  const FaceRef back = schema_->paired(type, f);
  if (r.kind == RuleKind::parent) throw ParentRuleViolation("parent link missing at " + nodes_[n].word.str());
  NodeId target;
  if (r.kind == RuleKind::child) {
    const RtsState& cs = rts_.states.at(r.child);
    if (cs.type != back.type || cs.rules.at(back.face).kind != RuleKind::parent)
      throw ParentRuleViolation("child of " + nodes_[n].word.str() + " across face " + std::to_string(f) +
                                " has no parent rule on the paired face");
    RtsNode c;
    c.id = static_cast<NodeId>(nodes_.size());
    c.state = r.child;
    c.type = back.type;
    c.parent = n;
    c.depth = nodes_[n].depth + 1;
    c.word = nodes_[n].word;
    c.word.faces.push_back(f);
    c.isometry = nodes_[n].isometry * schema_->gluing(type, f);
    c.links.assign(schema_->face_count(back.type), -1);
    c.links[back.face] = n;
    nodes_.push_back(std::move(c));
    target = nodes_.back().id;
  } else {
    target = n;
    for (int g : r.path) target = resolve(target, g, spent);
    if (nodes_[target].type != back.type)
      throw ParentRuleViolation("side path at " + nodes_[n].word.str() + " face " + std::to_string(f) + " reaches a cell of the wrong type");
    if (nodes_[target].links[back.face] < 0) nodes_[target].links[back.face] = n;
  }
  nodes_[n].links[f] = target;
  return target;
}

std::vector<NodeId> RtsGenerator::expand(int type, int radius) {
  std::vector<NodeId> out{root(type)};
  for (std::size_t head = 0; head < out.size(); ++head) {
    NodeId n = out[head];
    if (nodes_[n].depth >= radius) continue;
    const auto& rules = rts_.states[nodes_[n].state].rules;
    for (int f = 0; f < static_cast<int>(rules.size()); ++f)
      if (rules[f].kind == RuleKind::child) out.push_back(neighbor(n, f));
  }
  return out;
}

std::vector<BigInt> coordination_from_rts(const Rts& rts, int root_type, int k) {
  std::vector<BigInt> counts(rts.state_count(), 0);
  counts.at(rts.roots.at(root_type)) = 1;
  std::vector<BigInt> out;
  out.push_back(1);
  for (int step = 1; step <= k; ++step) {
    std::vector<BigInt> next(rts.state_count(), 0);
    for (int q = 0; q < rts.state_count(); ++q) {
      if (counts[q] == 0) continue;
      for (const Rule& r : rts.states[q].rules)
        if (r.kind == RuleKind::child) next[r.child] += counts[q];
    }
    counts = std::move(next);
    BigInt total = 0;
    for (const auto& c : counts) total += c;
    out.push_back(total);
  }
  return out;
}

GeometryModel geometry_model_from_string(const std::string& s) {
  if (s == "poincare_ball") return GeometryModel::poincare_ball;
  if (s == "hyperboloid") return GeometryModel::hyperboloid;
  throw ParseError("unknown geometry model '" + s + "'");
}

std::string export_geometry(const HoneycombSchema& schema, const Rts& rts, int radius, GeometryModel model, int root_type) {
  auto shared = std::make_shared<HoneycombSchema>(schema);
  RtsGenerator gen(rts, shared);
  auto nodes = gen.expand(root_type, radius);
  std::unordered_map<NodeId, int> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = static_cast<int>(i);
  ordered_json j;
  j["model"] = model == GeometryModel::poincare_ball ? "poincare_ball" : "hyperboloid";
  j["geometry"] = to_string(schema.geometry());
  j["points"] = ordered_json::array();
  j["edges"] = ordered_json::array();
  bool hyper = schema.geometry() == GeometryKind::hyperbolic;
  for (NodeId n : nodes) {
    Vec4 c = act(gen.node(n).isometry, Vec4{0, 0, 0, 1});
    std::vector<double> pt;
    if (model == GeometryModel::hyperboloid) {
      pt = {c[0], c[1], c[2], c[3]};
    } else if (hyper) {
      pt = {c[0] / (1 + c[3]), c[1] / (1 + c[3]), c[2] / (1 + c[3])};
    } else {
      double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
      pt = {c[0] / (1 + norm), c[1] / (1 + norm), c[2] / (1 + norm)};
    }
    for (double& x : pt)
      if (std::fabs(x) < 1e-15) x = 0.0;
    j["points"].push_back(pt);
  }
  for (NodeId n : nodes) {
    int faces = schema.face_count(gen.node(n).type);
    for (int f = 0; f < faces; ++f) {
      auto it = index.find(gen.neighbor(n, f));
      if (it != index.end() && index.at(n) < it->second) j["edges"].push_back({index.at(n), it->second});
    }
  }
  return j.dump() + "\n";
}

}  // namespace honeycomb
