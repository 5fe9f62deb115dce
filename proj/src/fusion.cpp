#include "cohft/fusion.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace cohft {

namespace {

std::array<int, 3> sorted_triple(int i, int j, int k) {
  std::array<int, 3> t{i, j, k};
  std::sort(t.begin(), t.end());
  return t;
}

std::string join_indices(const std::vector<int>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

using ProductTable = std::vector<std::vector<std::pair<int, Integer>>>;

// Structure constants: coefficient of h_w in h_i * h_j is N(i,j,dual(w)).
ProductTable build_product_table(const FusionData& d) {
  const int m = static_cast<int>(d.labels.size());
  ProductTable table(static_cast<std::size_t>(m) * m);
  for (const auto& [key, value] : d.fusion) {
    if (value == 0) continue;
    std::array<std::array<int, 3>, 6> perms;
    int cnt = 0;
    std::array<int, 3> p = key;
    std::sort(p.begin(), p.end());
    do {
      perms[cnt++] = p;
    } while (std::next_permutation(p.begin(), p.end()));
    for (int t = 0; t < cnt; ++t) {
      const auto& [i, j, k] = perms[t];
      table[static_cast<std::size_t>(i) * m + j].emplace_back(d.dual[k], value);
    }
  }
  for (auto& slot : table) std::sort(slot.begin(), slot.end());
  return table;
}

// h_x * h_y accumulated into a dense m-vector.
void accumulate_product(const ProductTable& table, int m, const std::vector<Integer>& x, int j,
                        std::vector<Integer>& out) {
  for (int i = 0; i < m; ++i) {
    if (x[i] == 0) continue;
    for (const auto& [w, c] : table[static_cast<std::size_t>(i) * m + j]) out[w] += x[i] * c;
  }
}

}  // namespace

std::string AxiomViolation::format() const {
  std::string s = axiom + " at " + join_indices(where);
  if (!detail.empty()) s += ": " + detail;
  return s;
}

void FusionData::set_fusion(int i, int j, int k, Integer value) {
  auto key = sorted_triple(i, j, k);
  if (value == 0)
    fusion.erase(key);
  else
    fusion[key] = std::move(value);
}

Integer FusionData::fusion_at(int i, int j, int k) const {
  auto it = fusion.find(sorted_triple(i, j, k));
  return it == fusion.end() ? Integer(0) : it->second;
}

std::vector<AxiomViolation> validate(const FusionData& d) {
  const int m = static_cast<int>(d.labels.size());
  if (m < 1) throw StructureError("fusion datum needs at least one module");
  for (int i = 0; i < m; ++i) {
    if (d.labels[i].empty()) throw StructureError("empty module label");
    for (int j = i + 1; j < m; ++j)
      if (d.labels[i] == d.labels[j]) throw StructureError("duplicate module label '" + d.labels[i] + "'");
  }
  if (d.unit < 0 || d.unit >= m) throw StructureError("unit index out of range");
  if (static_cast<int>(d.dual.size()) != m) throw StructureError("dual involution has wrong size");
  for (int i = 0; i < m; ++i)
    if (d.dual[i] < 0 || d.dual[i] >= m) throw StructureError("dual index out of range");
  if (static_cast<int>(d.conf_dim.size()) != m) throw StructureError("conformal dimension table has wrong size");
  for (const auto& [key, value] : d.fusion) {
    for (int idx : key)
      if (idx < 0 || idx >= m) throw StructureError("fusion tensor index out of range");
    if (value < 0) throw StructureError("fusion tensor entry must be a nonnegative integer");
  }

  std::vector<AxiomViolation> report;

  for (int i = 0; i < m; ++i)
    if (d.dual[d.dual[i]] != i) report.push_back({"dual-involution", {i}, "dual(dual(i)) != i"});
  if (d.dual[d.unit] != d.unit) report.push_back({"dual-unit", {d.unit}, "dual(unit) != unit"});

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Integer expected = (j == d.dual[i]) ? 1 : 0;
      Integer got = d.fusion_at(i, j, d.unit);
      if (got != expected)
        report.push_back({"delta-rule",
                          {i, j, d.unit},
                          "N=" + got.get_str() + ", expected " + expected.get_str()});
    }
  }

  if (d.conf_dim[d.unit] != 0) report.push_back({"conf-dim-unit", {d.unit}, "a(unit) != 0"});
  for (int i = 0; i < m; ++i) {
    if (d.conf_dim[i] != d.conf_dim[d.dual[i]])
      report.push_back({"conf-dim-dual", {i}, "a(i) != a(dual(i))"});
    if (d.conf_dim[i] < 0) report.push_back({"conf-dim-negative", {i}, "a(i) < 0"});
  }

  // Associativity, via triple products in both association orders.
  const ProductTable table = build_product_table(d);
  std::vector<Integer> left(m), right(m), tmp(m);
  bool assoc_reported = false;
  for (int i = 0; i < m && !assoc_reported; ++i) {
    for (int j = 0; j < m && !assoc_reported; ++j) {
      for (int k = 0; k < m && !assoc_reported; ++k) {
        std::fill(left.begin(), left.end(), Integer(0));
        std::fill(right.begin(), right.end(), Integer(0));
        // (h_i h_j) h_k
        for (const auto& [w, c] : table[static_cast<std::size_t>(i) * m + j]) {
          std::fill(tmp.begin(), tmp.end(), Integer(0));
          tmp[w] = c;
          accumulate_product(table, m, tmp, k, left);
        }
        // h_i (h_j h_k)
        for (const auto& [w, c] : table[static_cast<std::size_t>(j) * m + k]) {
          for (const auto& [ww, cc] : table[static_cast<std::size_t>(i) * m + w]) right[ww] += c * cc;
        }
        for (int l = 0; l < m; ++l) {
          if (left[l] != right[l]) {
            report.push_back({"associativity",
                              {i, j, k, l},
                              "coefficient " + left[l].get_str() + " vs " + right[l].get_str()});
            assoc_reported = true;
            break;
          }
        }
      }
    }
  }

  // Fusion matrices pairwise commute: columns of L_i L_j vs L_j L_i.
  std::vector<Integer> lij(m), lji(m);
  bool comm_reported = false;
  for (int i = 0; i < m && !comm_reported; ++i) {
    for (int j = i + 1; j < m && !comm_reported; ++j) {
      for (int k = 0; k < m && !comm_reported; ++k) {
        std::fill(lij.begin(), lij.end(), Integer(0));
        std::fill(lji.begin(), lji.end(), Integer(0));
        for (const auto& [w, c] : table[static_cast<std::size_t>(j) * m + k])
          for (const auto& [ww, cc] : table[static_cast<std::size_t>(i) * m + w]) lij[ww] += c * cc;
        for (const auto& [w, c] : table[static_cast<std::size_t>(i) * m + k])
          for (const auto& [ww, cc] : table[static_cast<std::size_t>(j) * m + w]) lji[ww] += c * cc;
        for (int l = 0; l < m; ++l) {
          if (lij[l] != lji[l]) {
            report.push_back({"commuting-matrices", {i, j}, "L_i L_j != L_j L_i at column " + std::to_string(k)});
            comm_reported = true;
            break;
          }
        }
      }
    }
  }

  return report;
}

FusionVector FusionVector::basis(int index) {
  FusionVector v;
  v.coeff[index] = 1;
  return v;
}

FusionVector& FusionVector::operator+=(const FusionVector& other) {
  for (const auto& [i, c] : other.coeff) coeff[i] += c;
  trim();
  return *this;
}

FusionVector& FusionVector::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    coeff.clear();
    return *this;
  }
  for (auto& [i, c] : coeff) c *= scalar;
  return *this;
}

bool FusionVector::operator==(const FusionVector& other) const { return coeff == other.coeff; }

void FusionVector::trim() {
  for (auto it = coeff.begin(); it != coeff.end();) {
    if (it->second == 0)
      it = coeff.erase(it);
    else
      ++it;
  }
}

FusionDatum::FusionDatum(FusionData data) : data_(std::move(data)) {
  auto report = validate(data_);
  if (!report.empty()) {
    std::vector<std::string> msgs;
    msgs.reserve(report.size());
    for (const auto& v : report) msgs.push_back(v.format());
    throw AxiomError("fusion datum violates " + std::to_string(report.size()) + " axiom(s)", msgs);
  }
  labels_count_ = data_.labels.size();
  product_ = build_product_table(data_);
}

int FusionDatum::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (data_.labels[i] == label) return i;
  if (label == "V") return data_.unit;
  throw LabelError("unknown module label '" + label + "'");
}

FusionVector fuse(const FusionDatum& datum, const FusionVector& x, const FusionVector& y) {
  FusionVector out;
  for (const auto& [i, xc] : x.coeff) {
    for (const auto& [j, yc] : y.coeff) {
      Rational f = xc * yc;
      for (const auto& [w, c] : datum.product(i, j)) out.coeff[w] += f * Rational(c);
    }
  }
  out.trim();
  return out;
}

Rational pairing(const FusionDatum& datum, const FusionVector& x, const FusionVector& y) {
  Rational total = 0;
  for (const auto& [i, xc] : x.coeff) {
    auto it = y.coeff.find(datum.dual(i));
    if (it != y.coeff.end()) total += xc * it->second;
  }
  return total;
}

std::complex<double> SemisimpleData::dual_apply(const FusionDatum& datum, int i,
                                                const FusionVector& x) const {
  std::complex<double> total = 0;
  const Eigen::VectorXcd& e = basis[i];
  for (const auto& [w, c] : x.coeff) total += e[datum.dual(w)] * c.get_d();
  return total;
}

namespace {

// e_x * e_y in the complexified fusion algebra.
Eigen::VectorXcd complex_product(const FusionDatum& datum, const Eigen::VectorXcd& x,
                                 const Eigen::VectorXcd& y) {
  const int m = datum.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m);
  for (int i = 0; i < m; ++i) {
    if (x[i] == std::complex<double>(0)) continue;
    for (int j = 0; j < m; ++j) {
      std::complex<double> f = x[i] * y[j];
      if (f == std::complex<double>(0)) continue;
      for (const auto& [w, c] : datum.product(i, j)) out[w] += f * c.get_d();
    }
  }
  return out;
}

std::complex<double> complex_pairing(const FusionDatum& datum, const Eigen::VectorXcd& x,
                                     const Eigen::VectorXcd& y) {
  std::complex<double> total = 0;
  for (int i = 0; i < datum.size(); ++i) total += x[i] * y[datum.dual(i)];
  return total;
}

bool complex_less(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

SemisimpleData semisimple_decomposition(const FusionDatum& datum, double tol) {
  const int m = datum.size();
  double worst = 0.0;

  for (int attempt = 0; attempt < 12; ++attempt) {
    std::mt19937_64 rng(0x5eed1234ULL + static_cast<unsigned long long>(attempt));
    std::uniform_real_distribution<double> dist(1.0, 2.0);
    std::vector<double> weights(m);
    for (double& w : weights) w = dist(rng);

    // A = sum_k r_k L_k; a generic element of the regular representation.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j)
        for (const auto& [w, c] : datum.product(k, j)) a(w, j) += weights[k] * c.get_d();

    Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) continue;
    Eigen::VectorXcd eigvals = solver.eigenvalues();
    Eigen::MatrixXcd eigvecs = solver.eigenvectors();

    // Eigenvalues of A must be simple for its eigenvectors to be the common
    // eigenvectors of all fusion matrices.
    double scale = 1.0 + eigvals.cwiseAbs().maxCoeff();
    bool degenerate = false;
    for (int i = 0; i < m && !degenerate; ++i)
      for (int j = i + 1; j < m; ++j)
        if (std::abs(eigvals[i] - eigvals[j]) < 1e-8 * scale) {
          degenerate = true;
          break;
        }
    if (degenerate) continue;

    SemisimpleData result;
    result.tolerance = tol;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      Eigen::VectorXcd v = eigvecs.col(i);
      std::complex<double> s = complex_pairing(datum, v, v);
      if (std::abs(s) < 1e-12) {
        ok = false;
        break;
      }
      Eigen::VectorXcd e = v / std::sqrt(s);
      Eigen::VectorXcd sq = complex_product(datum, e, e);
      int w0 = 0;
      for (int w = 1; w < m; ++w)
        if (std::abs(e[w]) > std::abs(e[w0])) w0 = w;
      std::complex<double> lambda = sq[w0] / e[w0];
      if (complex_less(lambda, -lambda)) {
        e = -e;
        lambda = -lambda;
      }
      result.basis.push_back(std::move(e));
      result.values.push_back(lambda);
    }
    if (!ok) continue;

    double residual = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        std::complex<double> p = complex_pairing(datum, result.basis[i], result.basis[j]);
        residual = std::max(residual, std::abs(p - std::complex<double>(i == j ? 1.0 : 0.0)));
        Eigen::VectorXcd prod = complex_product(datum, result.basis[i], result.basis[j]);
        if (i == j) prod -= result.values[i] * result.basis[i];
        residual = std::max(residual, prod.cwiseAbs().maxCoeff());
      }
    }
    worst = std::max(worst, residual);
    if (residual > tol) continue;

    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      if (result.values[x] != result.values[y]) return complex_less(result.values[x], result.values[y]);
      for (int w = 0; w < m; ++w) {
        if (result.basis[x][w] != result.basis[y][w])
          return complex_less(result.basis[x][w], result.basis[y][w]);
      }
      return false;
    });
    SemisimpleData sorted;
    sorted.tolerance = tol;
    for (int i : order) {
      sorted.basis.push_back(result.basis[i]);
      sorted.values.push_back(result.values[i]);
    }
    return sorted;
  }

  throw SemisimpleError(
      "semisimple decomposition did not converge below tolerance (non-semisimple or degenerate input)",
      worst);
}

}  // namespace cohft
