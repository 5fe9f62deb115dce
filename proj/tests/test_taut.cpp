#include "doctest.h"

#include "test_helpers.hpp"

using namespace cohft;
using namespace cohft::testing;

namespace {

Generator smooth_gen(int g, int n, int lambda = 0, std::vector<int> psi = {}) {
  Generator gen;
  gen.graph = StableGraph::smooth(g, n);
  gen.lambda_exp = lambda;
  if (psi.empty()) psi.assign(n, 0);
  gen.psi_leg = std::move(psi);
  return gen;
}

StableGraph irr_graph(int g, int n) {
  StableGraph graph;
  graph.vertex_genus = {g - 1};
  graph.leg_vertex.assign(n, 0);
  graph.edges.push_back({0, 0});
  return graph;
}

}  // namespace

TEST_CASE("add identities") {
  TautClass x(1, 1, 2);
  x.add_term(smooth_gen(1, 1, 1), Rational(2));
  x.add_term(smooth_gen(1, 1, 0, {1}), Rational(1, 3));

  TautClass zero(1, 1, 2);
  CHECK(add(x, zero) == x);
  CHECK(add(x, scale(x, Rational(-1))) == zero);

  // like-term merge
  TautClass two(1, 1, 2);
  two.add_term(smooth_gen(1, 1, 1), Rational(2));
  TautClass three(1, 1, 2);
  three.add_term(smooth_gen(1, 1, 1), Rational(3));
  TautClass five(1, 1, 2);
  five.add_term(smooth_gen(1, 1, 1), Rational(5));
  CHECK(add(two, three) == five);

  TautClass wrong_space(1, 2, 2);
  CHECK_THROWS_AS(add(x, wrong_space), StructureError);
}

TEST_CASE("pushforward_term") {
  // smooth graph, psi_1 monomial
  TautClass cls = pushforward_term(StableGraph::smooth(1, 1), {1}, {}, Rational(5), 3);
  REQUIRE(cls.terms().size() == 1);
  CHECK(cls.terms().begin()->second.coeff == 5);
  CHECK(cls.terms().begin()->second.gen.degree() == 1);

  // one-edge graph: the edge itself contributes degree 1
  TautClass boundary = pushforward_term(irr_graph(1, 1), {0}, {0, 0}, Rational(-1, 4), 1);
  REQUIRE(boundary.terms().size() == 1);
  CHECK(boundary.terms().begin()->second.gen.degree() == 1);

  // zero coefficient produces the empty class
  CHECK(pushforward_term(StableGraph::smooth(1, 1), {0}, {}, Rational(0), 1).is_zero());

  // degree overflow is an explicit error, never silent truncation
  CHECK_THROWS_AS(pushforward_term(StableGraph::smooth(1, 1), {2}, {}, Rational(1), 1),
                  StructureError);
}

TEST_CASE("scale_by_lambda_exponential") {
  TautClass base(1, 1, 1);
  base.add_term(smooth_gen(1, 1), Rational(3));

  SUBCASE("c = 0 is the identity") { CHECK(scale_by_lambda_exponential(base, Rational(0)) == base); }

  SUBCASE("degree-0 class at D=1 gains one lambda term") {
    TautClass scaled = scale_by_lambda_exponential(base, Rational(1, 2));
    TautClass expected(1, 1, 1);
    expected.add_term(smooth_gen(1, 1), Rational(3));
    expected.add_term(smooth_gen(1, 1, 1), Rational(3, 2));
    CHECK(scaled == expected);
  }

  SUBCASE("D = 0 truncates everything") {
    TautClass tiny(1, 1, 0);
    tiny.add_term(smooth_gen(1, 1), Rational(3));
    CHECK(scale_by_lambda_exponential(tiny, Rational(99)) == tiny);
  }

  SUBCASE("series coefficients are (c/2)^k / k!") {
    TautClass deep(2, 0, 3);
    deep.add_term(smooth_gen(2, 0), Rational(1));
    TautClass scaled = scale_by_lambda_exponential(deep, Rational(4));
    TautClass expected(2, 0, 3);
    expected.add_term(smooth_gen(2, 0), Rational(1));
    expected.add_term(smooth_gen(2, 0, 1), Rational(4));
    expected.add_term(smooth_gen(2, 0, 2), Rational(8));
    expected.add_term(smooth_gen(2, 0, 3), Rational(32, 3));
    CHECK(scaled == expected);
  }
}

TEST_CASE("degree filters") {
  TautClass x(1, 1, 1);
  x.add_term(smooth_gen(1, 1), Rational(2));
  x.add_term(smooth_gen(1, 1, 1), Rational(1));
  Generator loop;
  loop.graph = irr_graph(1, 1);
  loop.psi_leg = {0};
  loop.psi_half = {0, 0};
  x.add_term(loop, Rational(-1, 8));

  TautClass deg0 = degree_part(x, 0);
  REQUIRE(deg0.terms().size() == 1);
  CHECK(deg0.terms().begin()->second.coeff == 2);

  CHECK(truncate(x, 0) == deg0);

  TautClass smooth_part = restrict_to_smooth(x);
  CHECK(smooth_part.terms().size() == 2);

  // partition property: sum of degree parts recovers the class
  TautClass rebuilt(1, 1, 1);
  for (int d = 0; d <= x.max_degree(); ++d) rebuilt = add(rebuilt, degree_part(x, d));
  CHECK(rebuilt == x);
}

TEST_CASE("half-edge decorations are canonicalized over automorphisms") {
  // psi on one side of a loop equals psi on the other side
  Generator a;
  a.graph = irr_graph(2, 0);
  a.psi_half = {1, 0};
  Generator b;
  b.graph = irr_graph(2, 0);
  b.psi_half = {0, 1};
  CHECK(generator_key(canonicalize_generator(a)) == generator_key(canonicalize_generator(b)));

  // psi on the genus-1 side of a separating edge differs from the genus-2 side
  StableGraph sep;
  sep.vertex_genus = {1, 2};
  sep.edges.push_back({0, 1});
  Generator c;
  c.graph = sep;
  c.psi_half = {1, 0};
  Generator d;
  d.graph = sep;
  d.psi_half = {0, 1};
  CHECK(generator_key(canonicalize_generator(c)) != generator_key(canonicalize_generator(d)));
}

TEST_CASE("class construction is order independent") {
  std::vector<std::pair<Generator, Rational>> terms;
  terms.emplace_back(smooth_gen(1, 2, 1, {0, 0}), Rational(1, 2));
  terms.emplace_back(smooth_gen(1, 2, 0, {1, 0}), Rational(-3));
  terms.emplace_back(smooth_gen(1, 2, 0, {0, 1}), Rational(7, 5));
  Generator loop;
  loop.graph = irr_graph(1, 2);
  loop.psi_leg = {0, 0};
  loop.psi_half = {0, 0};
  terms.emplace_back(loop, Rational(2, 3));

  TautClass forward(1, 2, 2);
  for (const auto& [gen, coeff] : terms) forward.add_term(gen, coeff);
  TautClass backward(1, 2, 2);
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) backward.add_term(it->first, it->second);
  CHECK(forward == backward);
}
