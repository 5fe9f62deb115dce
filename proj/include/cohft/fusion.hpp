#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cohft/errors.hpp"
#include "cohft/rational.hpp"

namespace cohft {

// One failed axiom, with a witness tuple of module indices.
struct AxiomViolation {
  std::string axiom;        // "dual-involution", "delta-rule", "associativity", ...
  std::vector<int> where;   // witness indices
  std::string detail;

  std::string format() const;
};

// Unvalidated carrier for the fusion data of a CohFT-type vertex algebra:
// simple-module labels, contragredient involution, the symmetric tensor of
// three-point genus-zero ranks, conformal dimensions, central charge.
//
// Tensor keys are stored sorted ascending; set_fusion canonicalizes.
struct FusionData {
  std::vector<std::string> labels;
  int unit = 0;
  std::vector<int> dual;
  std::map<std::array<int, 3>, Integer> fusion;
  std::vector<Rational> conf_dim;
  Rational central_charge = 0;

  void set_fusion(int i, int j, int k, Integer value);
  Integer fusion_at(int i, int j, int k) const;
};

// Checks structural well-formedness (throws StructureError) and returns the
// list of violated Frobenius-algebra axioms; empty iff the datum is valid.
std::vector<AxiomViolation> validate(const FusionData& data);

// Element of the fusion ring over Q, finitely supported on module indices.
struct FusionVector {
  std::map<int, Rational> coeff;

  static FusionVector basis(int index);
  FusionVector& operator+=(const FusionVector& other);
  FusionVector& operator*=(const Rational& scalar);
  bool operator==(const FusionVector& other) const;
  bool is_zero() const { return coeff.empty(); }
  void trim();  // drop stored zeros
};

// Validated fusion datum. Construction runs the full axiom suite and throws
// AxiomError when any axiom fails, so downstream code can assume a
// commutative, associative Frobenius algebra with unit.
class FusionDatum {
 public:
  explicit FusionDatum(FusionData data);

  int size() const { return static_cast<int>(data_.labels.size()); }
  int unit() const { return data_.unit; }
  int dual(int i) const { return data_.dual[i]; }
  const std::string& label(int i) const { return data_.labels[i]; }
  const Rational& conf_dim(int i) const { return data_.conf_dim[i]; }
  const Rational& central_charge() const { return data_.central_charge; }
  Integer fusion(int i, int j, int k) const { return data_.fusion_at(i, j, k); }
  const FusionData& raw() const { return data_; }

  // Resolves a module label to its index; accepts "V" for the unit module.
  int index_of(const std::string& label) const;

  // Structure constants of h_i * h_j: list of (module index, coefficient).
  const std::vector<std::pair<int, Integer>>& product(int i, int j) const {
    return product_[static_cast<std::size_t>(i) * labels_count_ + j];
  }

 private:
  FusionData data_;
  std::size_t labels_count_ = 0;
  std::vector<std::vector<std::pair<int, Integer>>> product_;
};

FusionVector fuse(const FusionDatum& datum, const FusionVector& x, const FusionVector& y);
Rational pairing(const FusionDatum& datum, const FusionVector& x, const FusionVector& y);

// Semisimple basis e_i of the complexified fusion algebra:
// eta(e_i, e_j) = delta_ij and e_i * e_j = delta_ij lambda_i e_i,
// computed in machine precision.
struct SemisimpleData {
  std::vector<Eigen::VectorXcd> basis;
  std::vector<std::complex<double>> values;
  double tolerance = 1e-9;

  // eta(e_i, x) for a rational fusion vector x; this is the dual-basis
  // functional e^i applied to x.
  std::complex<double> dual_apply(const FusionDatum& datum, int i, const FusionVector& x) const;
};

// Simultaneous eigendecomposition of the commuting fusion matrices,
// normalized so eta(e_i, e_i) = 1 and canonicalized: each value has
// (Re, Im) lexicographically >= its negation, the basis is sorted by value
// then by components. Throws SemisimpleError when residuals exceed tol.
SemisimpleData semisimple_decomposition(const FusionDatum& datum, double tol = 1e-9);

}  // namespace cohft
