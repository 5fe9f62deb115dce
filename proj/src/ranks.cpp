#include "cohft/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace cohft {

RankTable::Key RankTable::key_for(const RankQuery& query) {
  Key key{query.genus, query.modules};
  std::sort(key.second.begin(), key.second.end());
  return key;
}

bool RankTable::lookup(const Key& key, Integer& out) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = memo_.find(key);
  if (it == memo_.end()) return false;
  out = it->second;
  return true;
}

void RankTable::store(Key key, Integer value) {
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(std::move(key), std::move(value));
}

std::map<RankTable::Key, Integer> RankTable::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return memo_;
}

void RankTable::merge(const std::map<Key, Integer>& entries) {
  std::lock_guard<std::mutex> lock(mutex_);
  for (const auto& [key, value] : entries) memo_.emplace(key, value);
}

namespace {

void check_stable(const RankQuery& query) {
  const int n = static_cast<int>(query.modules.size());
  if (query.genus < 0 || 2 * query.genus - 2 + n <= 0)
    throw StabilityError("(g,n)=(" + std::to_string(query.genus) + "," + std::to_string(n) +
                         ") violates 2g-2+n>0");
}

Integer rank_exact_inner(const FusionDatum& datum, int genus, std::vector<int> modules,
                         RankTable& table) {
  RankTable::Key key{genus, modules};
  std::sort(key.second.begin(), key.second.end());
  Integer cached;
  if (table.lookup(key, cached)) return cached;

  Integer result;
  if (genus == 0) {
    // eta(h_{M1} * ... * h_{M_{n-1}}, h_{Mn}); n >= 3 for stable genus 0.
    FusionVector acc = FusionVector::basis(modules[0]);
    for (std::size_t i = 1; i + 1 < modules.size(); ++i)
      acc = fuse(datum, acc, FusionVector::basis(modules[i]));
    Rational value = pairing(datum, acc, FusionVector::basis(modules.back()));
    value.canonicalize();
    if (value.get_den() != 1 || value < 0)
      throw std::logic_error("genus-0 rank is not a nonnegative integer");
    result = value.get_num();
  } else {
    result = 0;
    for (int w = 0; w < datum.size(); ++w) {
      std::vector<int> extended = modules;
      extended.push_back(w);
      extended.push_back(datum.dual(w));
      result += rank_exact_inner(datum, genus - 1, std::move(extended), table);
    }
  }
  table.store(std::move(key), result);
  return result;
}

}  // namespace

Integer rank_exact(const FusionDatum& datum, const RankQuery& query, RankTable& table) {
  check_stable(query);
  for (int m : query.modules)
    if (m < 0 || m >= datum.size()) throw StructureError("module index out of range");
  return rank_exact_inner(datum, query.genus, query.modules, table);
}

Integer rank_exact(const FusionDatum& datum, const RankQuery& query) {
  RankTable table;
  return rank_exact(datum, query, table);
}

double rank_semisimple(const FusionDatum& datum, const SemisimpleData& ss, const RankQuery& query) {
  check_stable(query);
  const int n = static_cast<int>(query.modules.size());
  const int exponent = 2 * (query.genus - 1) + n;
  std::complex<double> total = 0;
  for (std::size_t i = 0; i < ss.values.size(); ++i) {
    std::complex<double> term = std::pow(ss.values[i], exponent);
    for (int m : query.modules) term *= ss.dual_apply(datum, static_cast<int>(i), FusionVector::basis(m));
    total += term;
  }
  return total.real();
}

RankCrosscheck rank_crosscheck(const FusionDatum& datum, const SemisimpleData& ss,
                               const RankQuery& query, RankTable& table, double tol) {
  RankCrosscheck report;
  report.tol = tol;
  report.exact = rank_exact(datum, query, table);
  report.semisimple = rank_semisimple(datum, ss, query);
  report.abs_error = std::abs(report.semisimple - report.exact.get_d());
  report.ok = report.abs_error <= tol;
  return report;
}

}  // namespace cohft
