#pragma once

#include <string>
#include <vector>

#include "cohft/fusion.hpp"
#include "cohft/rational.hpp"

namespace cohft {

// Gram matrix of a positive-definite even integer lattice in a fixed basis.
struct GramLattice {
  std::vector<std::vector<Integer>> gram;

  int rank() const { return static_cast<int>(gram.size()); }
  const Integer& at(int i, int j) const { return gram[i][j]; }
};

struct GramViolation {
  std::string what;   // "not-square", "not-symmetric", "odd-diagonal", "not-positive-definite"
  std::vector<int> where;
  std::string detail;
  std::string format() const;
};

// Symmetry, even diagonal, positive definiteness (leading principal minors,
// computed exactly).
std::vector<GramViolation> validate_gram(const GramLattice& lattice);

// Exact determinant (Bareiss-free reference via fraction-free elimination).
Integer gram_determinant(const GramLattice& lattice);

// Discriminant group L'/L of the lattice, with canonical coset
// representatives in [0,1)^d.
struct DiscriminantData {
  std::vector<Integer> elementary_divisors;          // the divisors > 1, ascending divisibility
  std::vector<std::vector<Integer>> element_tuples;  // group elements as coordinate tuples
  std::vector<std::vector<Rational>> coset_reps;     // representative in L' per element
  std::vector<std::string> labels;                   // tuple coordinates joined by '_'

  int order() const { return static_cast<int>(element_tuples.size()); }
  int negate(int index) const;
  int add(int a, int b) const;
};

// Computed via the integer Smith normal form of the Gram matrix.
// Throws AxiomError when the lattice is invalid.
DiscriminantData discriminant_group(const GramLattice& lattice);

// Smith normal form U*A*V = D for a square integer matrix; diag(D) has
// nonnegative entries with ascending divisibility, U and V unimodular.
struct SmithNormalForm {
  std::vector<Integer> diag;
  std::vector<std::vector<Integer>> u;
  std::vector<std::vector<Integer>> u_inverse;
};
SmithNormalForm smith_normal_form(const std::vector<std::vector<Integer>>& matrix);

// min over alpha in L of (rep+alpha, rep+alpha)/2, exact. Enumerates a
// finite region proven to contain the minimizer via the rational LDL^T
// factorization, pruning by partial sums. The OpenMP kernel splits the
// outermost coordinate range and reduces with a commutative min; the serial
// variant is the reference used in tests.
Rational conformal_dimension(const GramLattice& lattice, const std::vector<Rational>& coset_rep);
Rational conformal_dimension_serial(const GramLattice& lattice, const std::vector<Rational>& coset_rep);

// Fusion datum of the lattice vertex algebra: modules indexed by the
// discriminant group, unit 0, dual = negation, N(i,j,k) = [i+j+k = 0],
// conformal dimensions from the minima above, central charge = rank.
FusionDatum fusion_datum_from_gram(const GramLattice& lattice);

}  // namespace cohft
