#pragma once

#include "cohft/ranks.hpp"
#include "cohft/taut.hpp"

namespace cohft {

// Expansion of (1 - exp(a(psi_h + psi_h'))) / (psi_h + psi_h') up to total
// degree max_degree: the coefficient of psi_h^i psi_h'^j is
// -a^{i+j+1} * binom(i+j, i) / (i+j+1)!.
class EdgeSeries {
 public:
  EdgeSeries(const Rational& a, int max_degree);

  const Rational& conformal_dimension() const { return a_; }
  int max_degree() const { return max_degree_; }
  const Rational& coeff(int i, int j) const;
  bool is_zero() const { return a_ == 0; }

 private:
  Rational a_;
  int max_degree_;
  std::vector<Rational> coeffs_;  // indexed by (i, j), i + j <= max_degree
};

EdgeSeries edge_series(const Rational& a, int max_degree);

// Truncation degree accepted by the class assembly: the dimension of the
// moduli space, except that degree 1 is always allowed so the first Chern
// class is expressible on zero-dimensional spaces.
int max_truncation_degree(int g, int n);

// The stable-graph polynomial for ch(V_g(M^1..M^n)) truncated at degree D:
//   exp(c/2 lambda) * sum over (graph, module assignment) of
//   1/|Aut| (xi)_* ( prod_i exp(a_i psi_i) * prod_v rank * prod_e edge series ).
// The (graph, assignment) loop is an OpenMP map with a commutative exact
// class-sum reduction; the serial variant is the reference used in tests.
TautClass chern_character(const FusionDatum& datum, int g, const std::vector<int>& modules, int D,
                          RankTable& table);
TautClass chern_character_serial(const FusionDatum& datum, int g, const std::vector<int>& modules,
                                 int D, RankTable& table);

// Closed form of the first Chern class:
//   rank (c/2 lambda + sum a_i psi_i) - b_irr delta_irr - sum b_{i:I} delta_{i:I},
// with the boundary divisors realized as single-generator classes carrying
// the 1/|Aut| normalization, (i, I) taken modulo (i, I) ~ (g-i, I^c) and
// unstable sides skipped.
TautClass first_chern_closed_form(const FusionDatum& datum, int g, const std::vector<int>& modules,
                                  RankTable& table);

// Restriction to the locus of smooth curves: rank * exp(c/2 lambda + sum a_i psi_i).
TautClass chern_smooth(const FusionDatum& datum, int g, const std::vector<int>& modules, int D,
                       RankTable& table);

// Total Chern class on the smooth locus: (1 + c/2 lambda + sum a_i psi_i)^rank,
// truncated at the dimension of the moduli space.
TautClass total_chern_smooth(const FusionDatum& datum, int g, const std::vector<int>& modules,
                             RankTable& table);

}  // namespace cohft
