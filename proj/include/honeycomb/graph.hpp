#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "honeycomb/schema.hpp"

namespace honeycomb {

using BigInt = boost::multiprecision::cpp_int;
using CellId = std::int32_t;
constexpr CellId kNoCell = -1;
constexpr int kUnknownDist = std::numeric_limits<int>::max() / 2;

struct Cell {
  CellId id = kNoCell;
  int type = 0;
  RealMatrix isometry;
  int dist = kUnknownDist;  // upper bound on the distance to the root
  std::vector<CellId> neighbors;
};

struct GraphConfig {
  double kappa = 1e-6;  // entrywise match tolerance, relative to matrix scale
  double beta = 1e-3;   // bucket size for cell centers; near misses inside it are ambiguous
  int depth_cap = 30;
  std::size_t max_cells = 40'000'000;
};

// Universal-cover cells generated lazily from one root, deduplicated by
// isometry. Single owner; not thread-safe for writes.
class CellStore {
 public:
  explicit CellStore(SchemaPtr schema, GraphConfig config = {});

  CellId new_root(int type);
  CellId root() const { return cells_.empty() ? kNoCell : 0; }

  // Neighbor across face f, created if needed.
  CellId resolve(CellId c, int f);
  // Neighbor across face f only if it already exists (then linked).
  CellId peek(CellId c, int f);
  CellId neighbor(CellId c, int f) const { return cells_.at(c).neighbors.at(f); }

  // Resolves every face of every cell within distance < radius of c, and
  // links the faces of cells at distance exactly radius to existing cells.
  void ensure_ball(CellId c, int radius);

  const Cell& cell(CellId c) const { return cells_.at(c); }
  std::size_t size() const { return cells_.size(); }
  int dist(CellId c) const { return cells_.at(c).dist; }
  int type(CellId c) const { return cells_.at(c).type; }
  const HoneycombSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }
  const GraphConfig& config() const { return config_; }

  // Distances from c along known links, up to max_dist (others kUnknownDist).
  std::unordered_map<CellId, int> bfs_from(CellId c, int max_dist) const;

  // Finds an existing cell with this type and isometry.
  CellId lookup(int type, const RealMatrix& iso) const;

  std::string dump_json() const;

 private:
  struct BucketKey {
    int type;
    std::int64_t x, y, z;
    bool operator==(const BucketKey&) const = default;
  };
  struct BucketHash {
    std::size_t operator()(const BucketKey& k) const;
  };

  BucketKey bucket(int type, const RealMatrix& iso) const;
  CellId create(int type, const RealMatrix& iso, int dist);
  void link(CellId a, int fa, CellId b, int fb);
  void relax(CellId start);

  SchemaPtr schema_;
  GraphConfig config_;
  std::vector<Cell> cells_;
  std::unordered_multimap<BucketKey, CellId, BucketHash> index_;
};

// Canonical ids for real isometries with the cell store's matching rule:
// equal within kappa (relative), ambiguous within beta.
class IsometryTable {
 public:
  explicit IsometryTable(GraphConfig config = {}) : config_(config) {}

  int id_of(const RealMatrix& m);                 // inserts if new
  std::optional<int> find(const RealMatrix& m) const;
  const RealMatrix& at(int id) const { return items_.at(id); }
  std::size_t size() const { return items_.size(); }

 private:
  using Key = std::array<std::int64_t, 3>;
  Key bucket(const RealMatrix& m) const;

  GraphConfig config_;
  std::vector<RealMatrix> items_;
  std::unordered_multimap<Key, int, KeyHash> index_;
};

std::vector<BigInt> coordination_by_bfs(const SchemaPtr& schema, int type, int k);

std::string join_sequence(const std::vector<BigInt>& seq, const std::string& sep = ", ");

}  // namespace honeycomb
