#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cohft/graphs.hpp"
#include "cohft/rational.hpp"

namespace cohft {

// Decorated-stratum generator: a boundary pushforward of a monomial in the
// Hodge class and psi classes. The graph is kept in canonical presentation
// and the half-edge exponents are minimized over its automorphisms, so equal
// generators have identical keys.
struct Generator {
  StableGraph graph;
  int lambda_exp = 0;
  std::vector<int> psi_leg;   // exponent per leg label (index = label - 1)
  std::vector<int> psi_half;  // exponent per half-edge of graph

  int degree() const;
  bool operator==(const Generator& other) const = default;
};

using GeneratorKey = std::vector<std::int32_t>;

GeneratorKey generator_key(const Generator& gen);

// Canonicalizes the underlying graph and transports the decorations,
// minimizing over automorphisms.
Generator canonicalize_generator(const Generator& gen);

// Same, for a generator whose graph is already canonical and whose
// automorphism list is at hand (the hot path of the class assembly).
Generator canonicalize_decorations(Generator gen, const std::vector<HalfEdgePerm>& automorphisms);

// Formal rational linear combination of decorated-stratum generators on a
// fixed (g, n), truncated above max_degree. Free module: no tautological
// relations are imposed.
class TautClass {
 public:
  TautClass(int g, int n, int max_degree);

  int ambient_genus() const { return g_; }
  int ambient_legs() const { return n_; }
  int max_degree() const { return max_degree_; }

  struct Term {
    Generator gen;
    Rational coeff;
  };
  const std::map<GeneratorKey, Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Merges a canonicalized generator; drops the term when the coefficient
  // cancels. Throws StructureError when the generator degree exceeds the
  // truncation bound or lives on the wrong (g, n).
  void add_term(Generator gen, Rational coeff);
  void add_term_prechecked(Generator gen, Rational coeff);  // gen already canonical

  bool operator==(const TautClass& other) const;

 private:
  int g_, n_, max_degree_;
  std::map<GeneratorKey, Term> terms_;
};

// Coefficientwise sum; truncation bound is the max of the inputs' bounds.
TautClass add(const TautClass& x, const TautClass& y);
TautClass scale(const TautClass& x, const Rational& c);

// Single-term pushforward (xi_Gamma)_* of a psi monomial; the caller folds
// 1/|Aut| into the coefficient.
TautClass pushforward_term(const StableGraph& graph, const std::vector<int>& psi_leg,
                           const std::vector<int>& psi_half, const Rational& coeff, int max_degree);

// Multiplication by exp(c_over_2 * lambda) truncated at the class bound.
TautClass scale_by_lambda_exponential(const TautClass& x, const Rational& c_over_2);

TautClass truncate(const TautClass& x, int new_bound);
TautClass degree_part(const TautClass& x, int degree);

// Drops every generator supported on a boundary stratum (>= 1 edge).
TautClass restrict_to_smooth(const TautClass& x);

}  // namespace cohft
