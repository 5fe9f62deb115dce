#include "doctest.h"

#include <random>

#include "test_helpers.hpp"

using namespace cohft;
using namespace cohft::testing;

namespace {

// All module multisets of size n, as sorted index vectors.
void for_each_multiset(int m, int n, std::vector<int>& current,
                       const std::function<void(const std::vector<int>&)>& fn, int from = 0) {
  if (n == 0) {
    fn(current);
    return;
  }
  for (int i = from; i < m; ++i) {
    current.push_back(i);
    for_each_multiset(m, n - 1, current, fn, i);
    current.pop_back();
  }
}

}  // namespace

TEST_CASE("rank_1(V) equals the number of simple modules") {
  for (auto lattice : {gram({{2}}), gram({{4}}), gram({{6}}), gram_a2()}) {
    FusionDatum datum = fusion_datum_from_gram(lattice);
    CHECK(rank_exact(datum, RankQuery{1, {datum.unit()}}) == datum.size());
  }
}

TEST_CASE("three-point delta rule at genus zero") {
  FusionDatum datum = fusion_datum_from_gram(gram({{6}}));
  for (int a = 0; a < datum.size(); ++a)
    for (int b = 0; b < datum.size(); ++b) {
      Integer expected = (b == datum.dual(a)) ? 1 : 0;
      CHECK(rank_exact(datum, RankQuery{0, {a, b, datum.unit()}}) == expected);
    }
}

TEST_CASE("Z/2 rank table matches 2^g [q even]") {
  FusionDatum datum = fusion_datum_from_gram(gram({{2}}));
  RankTable table;
  for (int g = 0; g <= 3; ++g) {
    for (int p = 0; p <= 6; ++p) {
      for (int q = 0; p + q <= 6; ++q) {
        int n = p + q;
        if (2 * g - 2 + n <= 0) continue;
        std::vector<int> modules(p, 0);
        modules.insert(modules.end(), q, 1);
        Integer expected = (q % 2 == 0) ? Integer(1) << g : Integer(0);
        CHECK(rank_exact(datum, RankQuery{g, modules}, table) == expected);
      }
    }
  }
}

TEST_CASE("Z/m rank law") {
  struct Case {
    GramLattice lattice;
    int m;
  };
  std::vector<Case> cases{{gram({{2}}), 2}, {gram_a2(), 3}, {gram({{4}}), 4}, {gram_a(4), 5}};
  for (const auto& [lattice, m] : cases) {
    FusionDatum datum = fusion_datum_from_gram(lattice);
    DiscriminantData disc = discriminant_group(lattice);
    REQUIRE(datum.size() == m);
    RankTable table;
    for (int g = 0; g <= 2; ++g) {
      for (int n = 1; n <= 4; ++n) {
        if (2 * g - 2 + n <= 0) continue;
        std::vector<int> current;
        for_each_multiset(m, n, current, [&](const std::vector<int>& modules) {
          int total = 0;
          for (int idx : modules) total = disc.add(total, idx);
          Integer expected = (total == 0) ? rational_pow(Rational(m), g).get_num() : Integer(0);
          CHECK(rank_exact(datum, RankQuery{g, modules}, table) == expected);
        });
      }
    }
  }
}

TEST_CASE("holomorphic data always have rank one") {
  FusionDatum datum = holomorphic_datum(24);
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {0, 5}, {1, 1}, {1, 4}, {2, 0}, {3, 2}}) {
    std::vector<int> modules(n, 0);
    CHECK(rank_exact(datum, RankQuery{g, modules}) == 1);
  }
}

TEST_CASE("unstable queries are rejected") {
  FusionDatum datum(z2_fusion_data());
  CHECK_THROWS_AS(rank_exact(datum, RankQuery{0, {0, 0}}), StabilityError);
  CHECK_THROWS_AS(rank_exact(datum, RankQuery{1, {}}), StabilityError);
  CHECK_THROWS_AS(rank_exact(datum, RankQuery{-1, {0, 0, 0}}), StabilityError);
}

TEST_CASE("propagation of vacua at rank level") {
  for (auto lattice : {gram({{2}}), gram_a2(), gram({{2, 0}, {0, 4}})}) {
    FusionDatum datum = fusion_datum_from_gram(lattice);
    RankTable table;
    std::mt19937 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
      int g = static_cast<int>(rng() % 3);
      int n = 1 + static_cast<int>(rng() % 4);
      if (2 * g - 2 + n <= 0) continue;
      std::vector<int> modules;
      for (int i = 0; i < n; ++i) modules.push_back(static_cast<int>(rng() % datum.size()));
      std::vector<int> extended = modules;
      extended.push_back(datum.unit());
      CHECK(rank_exact(datum, RankQuery{g, modules}, table) ==
            rank_exact(datum, RankQuery{g, extended}, table));
    }
  }
}

TEST_CASE("genus-0 contragredient duality") {
  for (auto lattice : {gram({{4}}), gram_a2()}) {
    FusionDatum datum = fusion_datum_from_gram(lattice);
    RankTable table;
    std::vector<int> current;
    for (int n = 3; n <= 5; ++n) {
      for_each_multiset(datum.size(), n, current, [&](const std::vector<int>& modules) {
        std::vector<int> duals;
        for (int m : modules) duals.push_back(datum.dual(m));
        CHECK(rank_exact(datum, RankQuery{0, modules}, table) ==
              rank_exact(datum, RankQuery{0, duals}, table));
      });
    }
  }
}

TEST_CASE("factorization: separating splits agree with the non-separating reduction") {
  for (auto lattice : {gram({{2}}), gram_a2()}) {
    FusionDatum datum = fusion_datum_from_gram(lattice);
    RankTable table;
    std::mt19937 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
      int g = 1 + static_cast<int>(rng() % 2);
      int n = static_cast<int>(rng() % 4);
      if (2 * g - 2 + n <= 0) continue;
      std::vector<int> modules;
      for (int i = 0; i < n; ++i) modules.push_back(static_cast<int>(rng() % datum.size()));
      Integer whole = rank_exact(datum, RankQuery{g, modules}, table);

      for (int g1 = 0; g1 <= g; ++g1) {
        int g2 = g - g1;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          std::vector<int> left, right;
          for (int i = 0; i < n; ++i)
            ((mask >> i) & 1u ? left : right).push_back(modules[i]);
          if (2 * g1 - 2 + static_cast<int>(left.size()) + 1 <= 0) continue;
          if (2 * g2 - 2 + static_cast<int>(right.size()) + 1 <= 0) continue;
          Integer split = 0;
          for (int w = 0; w < datum.size(); ++w) {
            std::vector<int> lw = left;
            lw.push_back(w);
            std::vector<int> rw = right;
            rw.push_back(datum.dual(w));
            split += rank_exact(datum, RankQuery{g1, lw}, table) *
                     rank_exact(datum, RankQuery{g2, rw}, table);
          }
          CHECK(split == whole);
        }
      }
    }
  }
}

TEST_CASE("rank is independent of module order and association order") {
  FusionDatum datum = fusion_datum_from_gram(gram_a2());
  RankTable table;
  std::vector<int> modules{1, 2, 1, 2, 0};
  Integer reference = rank_exact(datum, RankQuery{0, modules}, table);
  std::mt19937 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> shuffled = modules;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(rank_exact(datum, RankQuery{0, shuffled}, table) == reference);
  }
  // direct association-order oracle: fold the fusion product in a random order
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> shuffled = modules;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<FusionVector> factors;
    for (std::size_t i = 0; i + 1 < shuffled.size(); ++i)
      factors.push_back(FusionVector::basis(shuffled[i]));
    while (factors.size() > 1) {
      std::size_t pick = rng() % (factors.size() - 1);
      FusionVector merged = fuse(datum, factors[pick], factors[pick + 1]);
      factors.erase(factors.begin() + static_cast<long>(pick), factors.begin() + static_cast<long>(pick) + 2);
      factors.insert(factors.begin() + static_cast<long>(pick), merged);
    }
    Rational value = pairing(datum, factors[0], FusionVector::basis(shuffled.back()));
    CHECK(Rational(reference) == value);
  }
}

TEST_CASE("semisimple oracle approximates the exact rank") {
  for (auto lattice : {gram({{2}}), gram_a2(), gram({{4}})}) {
    FusionDatum datum = fusion_datum_from_gram(lattice);
    SemisimpleData ss = semisimple_decomposition(datum);
    RankTable table;
    std::vector<int> current;
    for (int g = 0; g <= 2; ++g) {
      for (int n = 0; n <= 3; ++n) {
        if (2 * g - 2 + n <= 0) continue;
        for_each_multiset(datum.size(), n, current, [&](const std::vector<int>& modules) {
          auto report = rank_crosscheck(datum, ss, RankQuery{g, modules}, table);
          CHECK(report.ok);
          CHECK(report.abs_error <= 1e-6);
        });
      }
    }
  }
}

TEST_CASE("specific semisimple values from the TQFT formula") {
  FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
  SemisimpleData ss = semisimple_decomposition(z2);
  CHECK(rank_semisimple(z2, ss, RankQuery{1, {0}}) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rank_semisimple(z2, ss, RankQuery{0, {1, 1, 1}}) == doctest::Approx(0.0).epsilon(1e-9));

  FusionDatum holomorphic = holomorphic_datum(8);
  SemisimpleData hss = semisimple_decomposition(holomorphic);
  CHECK(rank_semisimple(holomorphic, hss, RankQuery{2, {}}) == doctest::Approx(1.0).epsilon(1e-9));

  FusionDatum z3 = fusion_datum_from_gram(gram_a2());
  SemisimpleData z3ss = semisimple_decomposition(z3);
  CHECK(rank_semisimple(z3, z3ss, RankQuery{2, {1, 1, 1}}) == doctest::Approx(9.0).epsilon(1e-9));
  CHECK(rank_exact(z3, RankQuery{2, {1, 1, 1}}) == 9);
}

TEST_CASE("memo table entries match fresh recomputation") {
  FusionDatum datum = fusion_datum_from_gram(gram_a2());
  RankTable table;
  rank_exact(datum, RankQuery{2, {1, 2, 0}}, table);
  for (const auto& [key, value] : table.snapshot()) {
    CHECK(rank_exact(datum, RankQuery{key.first, key.second}) == value);
  }
}
