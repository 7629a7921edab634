#include "honeycomb/graph.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "json.hpp"

namespace honeycomb {

std::size_t CellStore::BucketHash::operator()(const BucketKey& k) const {
  std::uint64_t h = static_cast<std::uint64_t>(k.type) * 0x9E3779B97F4A7C15ull;
  for (std::int64_t v : {k.x, k.y, k.z}) {
    h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

CellStore::CellStore(SchemaPtr schema, GraphConfig config) : schema_(std::move(schema)), config_(config) {
  if (!schema_) throw Error("CellStore needs a schema");
}

CellStore::BucketKey CellStore::bucket(int type, const RealMatrix& iso) const {
  // The cell center is the image of the origin, i.e. column 3.
  return {type, static_cast<std::int64_t>(std::floor(iso(0, 3) / config_.beta)),
          static_cast<std::int64_t>(std::floor(iso(1, 3) / config_.beta)),
          static_cast<std::int64_t>(std::floor(iso(2, 3) / config_.beta))};
}

CellId CellStore::lookup(int type, const RealMatrix& iso) const {
  BucketKey k = bucket(type, iso);
  double scale = 1.0 + max_abs(iso);
  CellId found = kNoCell;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz) {
        auto range = index_.equal_range(BucketKey{type, k.x + dx, k.y + dy, k.z + dz});
        for (auto it = range.first; it != range.second; ++it) {
          const Cell& c = cells_[it->second];
          double d = max_abs_diff(c.isometry, iso) / scale;
          if (d <= config_.kappa) {
            if (found != kNoCell && found != c.id) throw PrecisionAmbiguity("two stored cells match one isometry");
            found = c.id;
            continue;
          }
          if (d <= config_.beta)
            throw PrecisionAmbiguity("candidate cell " + std::to_string(c.id) + " matches within the safety band only (" +
                                     std::to_string(d) + ")");
        }
      }
  return found;
}

CellId CellStore::create(int type, const RealMatrix& iso, int dist) {
  if (cells_.size() >= config_.max_cells) throw CapExceeded("cell store exceeds " + std::to_string(config_.max_cells) + " cells");
  Cell c;
  c.id = static_cast<CellId>(cells_.size());
  c.type = type;
  c.isometry = iso;
  c.dist = dist;
  c.neighbors.assign(schema_->face_count(type), kNoCell);
  index_.emplace(bucket(type, iso), c.id);
  cells_.push_back(std::move(c));
  return cells_.back().id;
}

CellId CellStore::new_root(int type) {
  if (!cells_.empty()) throw Error("a cell store holds exactly one root");
  if (type < 0 || type >= schema_->type_count()) throw Error("root type out of range");
  return create(type, real_identity(), 0);
}

void CellStore::link(CellId a, int fa, CellId b, int fb) {
  CellId& ab = cells_[a].neighbors[fa];
  CellId& ba = cells_[b].neighbors[fb];
  if ((ab != kNoCell && ab != b) || (ba != kNoCell && ba != a))
    throw PrecisionAmbiguity("conflicting neighbor links between cells " + std::to_string(a) + " and " + std::to_string(b));
  ab = b;
  ba = a;
  if (cells_[a].dist + 1 < cells_[b].dist) {
    cells_[b].dist = cells_[a].dist + 1;
    relax(b);
  } else if (cells_[b].dist + 1 < cells_[a].dist) {
    cells_[a].dist = cells_[b].dist + 1;
    relax(a);
  }
}

void CellStore::relax(CellId start) {
  std::deque<CellId> queue{start};
  while (!queue.empty()) {
    CellId c = queue.front();
    queue.pop_front();
    int d = cells_[c].dist + 1;
    for (CellId n : cells_[c].neighbors)
      if (n != kNoCell && d < cells_[n].dist) {
        cells_[n].dist = d;
        queue.push_back(n);
      }
  }
}

CellId CellStore::resolve(CellId c, int f) {
  CellId existing = cells_.at(c).neighbors.at(f);
  if (existing != kNoCell) return existing;
  const FaceRef& r = schema_->paired(cells_[c].type, f);
  RealMatrix iso = cells_[c].isometry * schema_->gluing(cells_[c].type, f);
  CellId n = lookup(r.type, iso);
  if (n == kNoCell) {
    int d = cells_[c].dist + 1;
    if (d > config_.depth_cap + 1 && cells_[c].dist < kUnknownDist)
      throw CapExceeded("resolve chain deeper than " + std::to_string(config_.depth_cap));
    n = create(r.type, iso, d);
  }
  link(c, f, n, r.face);
  return n;
}

CellId CellStore::peek(CellId c, int f) {
  CellId existing = cells_.at(c).neighbors.at(f);
  if (existing != kNoCell) return existing;
  const FaceRef& r = schema_->paired(cells_[c].type, f);
  CellId n = lookup(r.type, cells_[c].isometry * schema_->gluing(cells_[c].type, f));
  if (n != kNoCell) link(c, f, n, r.face);
  return n;
}

void CellStore::ensure_ball(CellId c, int radius) {
  if (radius <= 0) return;
  std::unordered_map<CellId, int> seen{{c, 0}};
  std::deque<CellId> queue{c};
  while (!queue.empty()) {
    CellId x = queue.front();
    queue.pop_front();
    int d = seen[x];
    int nf = static_cast<int>(cells_[x].neighbors.size());
    for (int f = 0; f < nf; ++f) {
      CellId n = d < radius ? resolve(x, f) : peek(x, f);
      if (n != kNoCell && d < radius && seen.emplace(n, d + 1).second) queue.push_back(n);
    }
  }
}

std::unordered_map<CellId, int> CellStore::bfs_from(CellId c, int max_dist) const {
  std::unordered_map<CellId, int> seen{{c, 0}};
  std::deque<CellId> queue{c};
  while (!queue.empty()) {
    CellId x = queue.front();
    queue.pop_front();
    int d = seen[x];
    if (d >= max_dist) continue;
    for (CellId n : cells_[x].neighbors)
      if (n != kNoCell && seen.emplace(n, d + 1).second) queue.push_back(n);
  }
  return seen;
}

std::string CellStore::dump_json() const {
  nlohmann::json j;
  j["cells"] = nlohmann::json::array();
  j["edges"] = nlohmann::json::array();
  for (const Cell& c : cells_) {
    j["cells"].push_back({{"id", c.id}, {"type", c.type}, {"dist", c.dist}});
    for (std::size_t f = 0; f < c.neighbors.size(); ++f)
      if (c.neighbors[f] != kNoCell) j["edges"].push_back({c.id, static_cast<int>(f), c.neighbors[f]});
  }
  return j.dump() + "\n";
}

IsometryTable::Key IsometryTable::bucket(const RealMatrix& m) const {
  return {static_cast<std::int64_t>(std::floor(m(0, 3) / config_.beta)), static_cast<std::int64_t>(std::floor(m(1, 3) / config_.beta)),
          static_cast<std::int64_t>(std::floor(m(2, 3) / config_.beta))};
}

std::optional<int> IsometryTable::find(const RealMatrix& m) const {
  Key k = bucket(m);
  double scale = 1.0 + max_abs(m);
  std::optional<int> found;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz) {
        auto range = index_.equal_range(Key{k[0] + dx, k[1] + dy, k[2] + dz});
        for (auto it = range.first; it != range.second; ++it) {
          double d = max_abs_diff(items_[it->second], m) / scale;
          if (d <= config_.kappa) {
            if (found && *found != it->second) throw PrecisionAmbiguity("two stored isometries match one matrix");
            found = it->second;
          } else if (d <= config_.beta) {
            throw PrecisionAmbiguity("isometry matches a stored one within the safety band only (" + std::to_string(d) + ")");
          }
        }
      }
  return found;
}

int IsometryTable::id_of(const RealMatrix& m) {
  if (auto f = find(m)) return *f;
  int id = static_cast<int>(items_.size());
  items_.push_back(m);
  index_.emplace(bucket(m), id);
  return id;
}

std::vector<BigInt> coordination_by_bfs(const SchemaPtr& schema, int type, int k) {
  CellStore store(schema);
  CellId root = store.new_root(type);
  store.ensure_ball(root, k);
  auto dist = store.bfs_from(root, k);
  std::vector<BigInt> out(k + 1, 0);
  for (const auto& [id, d] : dist)
    if (d <= k) out[d] += 1;
  return out;
}

std::string join_sequence(const std::vector<BigInt>& seq, const std::string& sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? sep : "") << seq[i];
  return os.str();
}

}  // namespace honeycomb
