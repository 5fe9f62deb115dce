#include "doctest.h"

#include "test_helpers.hpp"

using namespace cohft;
using namespace cohft::testing;

namespace {

// Independent series oracle: (x+y) * S(x,y) + (exp(a(x+y)) - 1) must vanish
// identically up to total degree D+1 in the polynomial ring Q[x,y].
void check_edge_series_definition(const Rational& a, int D) {
  const int top = D + 1;
  std::map<std::pair<int, int>, Rational> poly;
  EdgeSeries series(a, D);
  for (int i = 0; i <= D; ++i)
    for (int j = 0; i + j <= D; ++j) {
      const Rational& c = series.coeff(i, j);
      if (c == 0) continue;
      poly[{i + 1, j}] += c;  // x * S
      poly[{i, j + 1}] += c;  // y * S
    }
  for (int s = 1; s <= top; ++s) {
    Rational factor = rational_pow(a, s) / Rational(factorial(s));
    for (int i = 0; i <= s; ++i)
      poly[{i, s - i}] += factor * Rational(binomial(s, i));
  }
  for (const auto& [key, value] : poly) {
    if (key.first + key.second > top) continue;
    CAPTURE(key.first);
    CAPTURE(key.second);
    CHECK(value == 0);
  }
}

Generator smooth_gen(int g, int n, int lambda = 0, std::vector<int> psi = {}) {
  Generator gen;
  gen.graph = StableGraph::smooth(g, n);
  gen.lambda_exp = lambda;
  if (psi.empty()) psi.assign(n, 0);
  gen.psi_leg = std::move(psi);
  return gen;
}

TautClass permute_legs(const TautClass& cls, const std::vector<int>& sigma) {
  // sigma maps old leg position -> new leg position (0-based)
  TautClass out(cls.ambient_genus(), cls.ambient_legs(), cls.max_degree());
  for (const auto& [key, term] : cls.terms()) {
    Generator gen;
    gen.graph = term.gen.graph;
    gen.lambda_exp = term.gen.lambda_exp;
    gen.psi_half = term.gen.psi_half;
    gen.psi_leg.assign(term.gen.psi_leg.size(), 0);
    gen.graph.leg_vertex.assign(term.gen.graph.leg_vertex.size(), 0);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      gen.graph.leg_vertex[sigma[i]] = term.gen.graph.leg_vertex[i];
      gen.psi_leg[sigma[i]] = term.gen.psi_leg[i];
    }
    out.add_term(std::move(gen), term.coeff);
  }
  return out;
}

}  // namespace

TEST_CASE("edge series basics") {
  EdgeSeries zero = edge_series(Rational(0), 3);
  CHECK(zero.is_zero());
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j) CHECK(zero.coeff(i, j) == 0);

  EdgeSeries quarter = edge_series(Rational(1, 4), 3);
  CHECK(quarter.coeff(0, 0) == Rational(-1, 4));
  CHECK(quarter.coeff(1, 0) == Rational(-1, 32));  // -a^2/2
  CHECK(quarter.coeff(0, 1) == Rational(-1, 32));

  // symmetry under (i,j) <-> (j,i)
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j) CHECK(quarter.coeff(i, j) == quarter.coeff(j, i));
}

TEST_CASE("edge series satisfies its defining identity") {
  check_edge_series_definition(Rational(1, 4), 4);
  check_edge_series_definition(Rational(1, 3), 3);
  check_edge_series_definition(Rational(2, 5), 5);
}

TEST_CASE("holomorphic chern character is exp(c/2 lambda)") {
  for (const Rational& c : {Rational(8), Rational(24)}) {
    FusionDatum datum = holomorphic_datum(c);
    RankTable table;
    for (auto [g, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 0}, {0, 4}}) {
      const int D = max_truncation_degree(g, n) == 1 ? 1 : 3 * g - 3 + n;
      std::vector<int> modules(n, 0);
      TautClass ch = chern_character(datum, g, modules, D, table);
      TautClass expected(g, n, D);
      Rational coeff(1);
      expected.add_term(smooth_gen(g, n), coeff);
      for (int k = 1; k <= D; ++k) {
        coeff *= c / 2 / k;
        expected.add_term(smooth_gen(g, n, k), coeff);
      }
      CHECK(ch == expected);
      CHECK(degree_part(ch, 0) ==
            pushforward_term(StableGraph::smooth(g, n), std::vector<int>(n, 0), {}, Rational(1), D));
    }
  }
}

TEST_CASE("degree zero of the chern character is the rank") {
  FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
  RankTable table;
  TautClass ch = chern_character(z2, 1, {0, 1, 1}, 1, table);
  TautClass deg0 = degree_part(ch, 0);
  REQUIRE(deg0.terms().size() == 1);
  CHECK(deg0.terms().begin()->second.coeff == 2);  // rank_1(V,W,W) = 2
}

TEST_CASE("first chern closed form for the Z/2 datum at (1,1)") {
  FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
  RankTable table;
  TautClass c1 = first_chern_closed_form(z2, 1, {0}, table);

  // rank 2, c/2 = 1/2 -> lambda coefficient 1; b_irr = 1/4 on delta_irr = (1/2) generator.
  TautClass expected(1, 1, 1);
  expected.add_term(smooth_gen(1, 1, 1), Rational(1));
  Generator loop;
  loop.graph.vertex_genus = {0};
  loop.graph.leg_vertex = {0};
  loop.graph.edges.push_back({0, 0});
  loop.psi_leg = {0};
  loop.psi_half = {0, 0};
  expected.add_term(std::move(loop), Rational(-1, 8));
  CHECK(c1 == expected);
}

TEST_CASE("degree-1 agreement between the polynomial and the closed form") {
  std::vector<FusionDatum> data;
  data.push_back(fusion_datum_from_gram(gram({{2}})));
  data.push_back(fusion_datum_from_gram(gram_a2()));
  data.push_back(holomorphic_datum(8));
  for (const auto& datum : data) {
    RankTable table;
    for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {0, 4}, {1, 1}, {1, 2}, {2, 0}, {2, 1}}) {
      std::vector<int> modules;
      for (int i = 0; i < n; ++i) modules.push_back(i % datum.size());
      TautClass closed = first_chern_closed_form(datum, g, modules, table);
      TautClass from_poly = degree_part(chern_character(datum, g, modules, 1, table), 1);
      CAPTURE(g);
      CAPTURE(n);
      CHECK(closed == from_poly);
    }
  }
}

TEST_CASE("degree-1 agreement at higher truncation degrees") {
  FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
  RankTable table;
  TautClass at_d1 = degree_part(chern_character(z2, 1, {1, 1}, 1, table), 1);
  TautClass at_d2 = degree_part(chern_character(z2, 1, {1, 1}, 2, table), 1);
  TautClass closed = first_chern_closed_form(z2, 1, {1, 1}, table);
  CHECK(at_d1 == closed);
  CHECK(at_d2 == closed);
}

TEST_CASE("smooth restriction equals the closed smooth form") {
  std::vector<FusionDatum> data;
  data.push_back(fusion_datum_from_gram(gram({{2}})));
  data.push_back(fusion_datum_from_gram(gram_a2()));
  for (const auto& datum : data) {
    RankTable table;
    for (auto config : std::vector<std::tuple<int, int, int>>{{0, 4, 1}, {1, 1, 1}, {1, 2, 2}, {2, 0, 3}}) {
      auto [g, n, D] = config;
      std::vector<int> modules;
      for (int i = 0; i < n; ++i) modules.push_back(i % datum.size());
      TautClass ch = chern_character(datum, g, modules, D, table);
      TautClass smooth = chern_smooth(datum, g, modules, D, table);
      CAPTURE(g);
      CAPTURE(n);
      CHECK(restrict_to_smooth(ch) == smooth);
    }
  }
}

TEST_CASE("chern_smooth degree one for the Z/3 datum at (1,2)") {
  FusionDatum z3 = fusion_datum_from_gram(gram_a2());
  RankTable table;
  // rank_1(W1, W2) = 3; a = 1/3 on both legs; c/2 = 1.
  TautClass smooth = chern_smooth(z3, 1, {1, 2}, 1, table);
  TautClass expected(1, 2, 1);
  expected.add_term(smooth_gen(1, 2), Rational(3));
  expected.add_term(smooth_gen(1, 2, 1), Rational(3));
  expected.add_term(smooth_gen(1, 2, 0, {1, 0}), Rational(1));
  expected.add_term(smooth_gen(1, 2, 0, {0, 1}), Rational(1));
  CHECK(smooth == expected);
}

TEST_CASE("total chern class") {
  SUBCASE("rank one: 1 + c/2 lambda + sum a_i psi_i") {
    FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
    RankTable table;
    // rank_1(V, W, W) is 2, so use a rank-1 case: genus 0 with (W,W,V,V).
    TautClass total = total_chern_smooth(z2, 0, {1, 1, 0, 0}, table);
    TautClass expected(0, 4, 1);
    expected.add_term(smooth_gen(0, 4), Rational(1));
    expected.add_term(smooth_gen(0, 4, 1), Rational(1, 2));
    expected.add_term(smooth_gen(0, 4, 0, {1, 0, 0, 0}), Rational(1, 4));
    expected.add_term(smooth_gen(0, 4, 0, {0, 1, 0, 0}), Rational(1, 4));
    CHECK(total == expected);
  }

  SUBCASE("binomial coefficients appear for higher rank") {
    FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
    RankTable table;
    // rank_2() = 4, dim M_2 = 3: c = (1 + lambda/2)^4 truncated at 3.
    TautClass total = total_chern_smooth(z2, 2, {}, table);
    TautClass expected(2, 0, 3);
    expected.add_term(smooth_gen(2, 0), Rational(1));
    expected.add_term(smooth_gen(2, 0, 1), Rational(2));        // 4 * 1/2
    expected.add_term(smooth_gen(2, 0, 2), Rational(3, 2));     // 6 * 1/4
    expected.add_term(smooth_gen(2, 0, 3), Rational(1, 2));     // 4 * 1/8
    CHECK(total == expected);
  }
}

TEST_CASE("S_n equivariance of the (0,4) class") {
  FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
  RankTable table;
  std::vector<int> modules{0, 1, 1, 0};
  TautClass original = chern_character(z2, 0, modules, 1, table);

  // swap legs 1 and 4 (positions 0 and 3): module lists agree after the swap
  std::vector<int> sigma{3, 1, 2, 0};
  std::vector<int> permuted_modules(4);
  for (int i = 0; i < 4; ++i) permuted_modules[sigma[i]] = modules[i];
  TautClass recomputed = chern_character(z2, 0, permuted_modules, 1, table);
  CHECK(permute_legs(original, sigma) == recomputed);

  // a second permutation: rotate all legs
  sigma = {1, 2, 3, 0};
  for (int i = 0; i < 4; ++i) permuted_modules[sigma[i]] = modules[i];
  recomputed = chern_character(z2, 0, permuted_modules, 1, table);
  CHECK(permute_legs(original, sigma) == recomputed);
}

TEST_CASE("vanishing rank kills every degree") {
  FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
  RankTable table;
  // odd number of W legs: rank 0
  TautClass ch = chern_character(z2, 1, {1, 0, 0}, 2, table);
  CHECK(ch.is_zero());
  TautClass smooth = chern_smooth(z2, 1, {1, 0, 0}, 2, table);
  CHECK(smooth.is_zero());
}

TEST_CASE("Z/2 boundary coefficients at (0,4) with split module types") {
  FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
  RankTable table;
  // modules (V,V,W,W): b_{0:{1,3}} = b_{0:{1,4}} = 1/4, b_{0:{1,2}} = 0.
  TautClass c1 = first_chern_closed_form(z2, 0, {0, 0, 1, 1}, table);

  TautClass expected(0, 4, 1);
  expected.add_term(smooth_gen(0, 4, 1), Rational(1, 2));
  expected.add_term(smooth_gen(0, 4, 0, {0, 0, 1, 0}), Rational(1, 4));
  expected.add_term(smooth_gen(0, 4, 0, {0, 0, 0, 1}), Rational(1, 4));
  for (unsigned mask : {0b0100u, 0b1000u}) {  // legs {1,3} and {1,4} (0-based bits 0,2 / 0,3)
    StableGraph sep;
    sep.vertex_genus = {0, 0};
    sep.leg_vertex.assign(4, 1);
    sep.leg_vertex[0] = 0;
    for (int leg = 1; leg < 4; ++leg)
      if ((mask >> leg) & 1u) sep.leg_vertex[leg] = 0;
    sep.edges.push_back({0, 1});
    Generator gen;
    gen.graph = sep;
    gen.psi_leg.assign(4, 0);
    gen.psi_half = {0, 0};
    expected.add_term(std::move(gen), Rational(-1, 4));
  }
  CHECK(c1 == expected);

  TautClass from_poly = degree_part(chern_character(z2, 0, {0, 0, 1, 1}, 1, table), 1);
  CHECK(from_poly == c1);
}

TEST_CASE("input validation") {
  FusionDatum z2 = fusion_datum_from_gram(gram({{2}}));
  RankTable table;
  CHECK_THROWS_AS(chern_character(z2, 0, {0, 0}, 1, table), StabilityError);
  CHECK_THROWS_AS(chern_character(z2, 1, {0}, -1, table), StructureError);
  CHECK_THROWS_AS(chern_character(z2, 1, {0}, 2, table), StructureError);  // dim M_{1,1} = 1
  CHECK_THROWS_AS(chern_character(z2, 0, {0, 0, 0}, 2, table), StructureError);
  // ... but degree 1 is allowed on the zero-dimensional space
  CHECK_NOTHROW(chern_character(z2, 0, {0, 0, 0}, 1, table));
}
