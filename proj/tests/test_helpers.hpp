#pragma once

#include <string>
#include <vector>

#include "cohft/chern.hpp"
#include "cohft/lattice.hpp"

namespace cohft::testing {

inline GramLattice gram(std::vector<std::vector<long>> rows) {
  GramLattice lattice;
  for (auto& row : rows) {
    std::vector<Integer> r;
    for (long v : row) r.emplace_back(v);
    lattice.gram.push_back(std::move(r));
  }
  return lattice;
}

inline GramLattice gram_a2() { return gram({{2, -1}, {-1, 2}}); }

// Root lattice A_{m-1}: discriminant group Z/m.
inline GramLattice gram_a(int rank) {
  std::vector<std::vector<long>> rows(rank, std::vector<long>(rank, 0));
  for (int i = 0; i < rank; ++i) {
    rows[i][i] = 2;
    if (i + 1 < rank) {
      rows[i][i + 1] = -1;
      rows[i + 1][i] = -1;
    }
  }
  return gram(rows);
}

// E8 Cartan matrix (Bourbaki numbering); determinant 1.
inline GramLattice gram_e8() {
  std::vector<std::vector<long>> rows(8, std::vector<long>(8, 0));
  for (int i = 0; i < 8; ++i) rows[i][i] = 2;
  auto link = [&](int a, int b) {
    rows[a][b] = -1;
    rows[b][a] = -1;
  };
  link(0, 2);
  link(2, 3);
  link(3, 4);
  link(4, 5);
  link(5, 6);
  link(6, 7);
  link(1, 3);
  return gram(rows);
}

// Fusion datum with a single module (holomorphic case).
inline FusionDatum holomorphic_datum(const Rational& central_charge) {
  FusionData data;
  data.labels = {"V"};
  data.unit = 0;
  data.dual = {0};
  data.set_fusion(0, 0, 0, 1);
  data.conf_dim = {Rational(0)};
  data.central_charge = central_charge;
  return FusionDatum(std::move(data));
}

inline FusionData z2_fusion_data() {
  FusionData data;
  data.labels = {"0", "1"};
  data.unit = 0;
  data.dual = {0, 1};
  data.set_fusion(0, 0, 0, 1);
  data.set_fusion(0, 1, 1, 1);
  data.conf_dim = {Rational(0), Rational(1, 4)};
  data.central_charge = 1;
  return data;
}

inline std::vector<int> modules_of(const FusionDatum& datum, const std::vector<std::string>& labels) {
  std::vector<int> out;
  for (const auto& l : labels) out.push_back(datum.index_of(l));
  return out;
}

}  // namespace cohft::testing
