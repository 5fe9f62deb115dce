#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "cohft/fusion.hpp"

namespace cohft {

// Rank of the coinvariant bundle at genus g with the given module multiset.
struct RankQuery {
  int genus = 0;
  std::vector<int> modules;
};

// Memo keyed by (genus, sorted module multiset). Write-once per key;
// concurrent readers and redundant recomputation are both fine.
class RankTable {
 public:
  using Key = std::pair<int, std::vector<int>>;

  static Key key_for(const RankQuery& query);

  bool lookup(const Key& key, Integer& out) const;
  void store(Key key, Integer value);

  std::map<Key, Integer> snapshot() const;
  void merge(const std::map<Key, Integer>& entries);

 private:
  mutable std::mutex mutex_;
  std::map<Key, Integer> memo_;
};

// Exact rank: genus zero by iterated fusion against the pairing, positive
// genus by the non-separating factorization sum over W x W'. Throws
// StabilityError for unstable queries.
Integer rank_exact(const FusionDatum& datum, const RankQuery& query, RankTable& table);
Integer rank_exact(const FusionDatum& datum, const RankQuery& query);

// Semisimple TQFT evaluation sum_i lambda_i^{2(g-1)+n} prod_j e^i(h_{M_j});
// the imaginary part cancels up to numerical noise.
double rank_semisimple(const FusionDatum& datum, const SemisimpleData& ss, const RankQuery& query);

struct RankCrosscheck {
  Integer exact;
  double semisimple = 0;
  double abs_error = 0;
  double tol = 1e-6;
  bool ok = false;
};

RankCrosscheck rank_crosscheck(const FusionDatum& datum, const SemisimpleData& ss,
                               const RankQuery& query, RankTable& table, double tol = 1e-6);

}  // namespace cohft
