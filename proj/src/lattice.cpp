#include "cohft/lattice.hpp"

#include <omp.h>

#include <algorithm>
#include <sstream>

namespace cohft {

namespace {

Rational floor_fraction(const Rational& q) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return q - Rational(fl);
}

}  // namespace

std::string GramViolation::format() const {
  std::ostringstream os;
  os << what;
  if (!where.empty()) {
    os << " at (";
    for (std::size_t i = 0; i < where.size(); ++i) os << (i ? "," : "") << where[i];
    os << ")";
  }
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

std::vector<GramViolation> validate_gram(const GramLattice& lattice) {
  std::vector<GramViolation> report;
  const int d = lattice.rank();
  if (d < 1) {
    report.push_back({"not-square", {}, ""});
    return report;
  }
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(lattice.gram[i].size()) != d) {
      report.push_back({"not-square", {i}, ""});
      return report;
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (lattice.at(i, j) != lattice.at(j, i)) report.push_back({"not-symmetric", {i, j}, ""});
  for (int i = 0; i < d; ++i)
    if (lattice.at(i, i) % 2 != 0) report.push_back({"odd-diagonal", {i}, ""});
  if (report.empty()) {
    for (int k = 1; k <= d; ++k) {
      GramLattice leading;
      leading.gram.assign(k, std::vector<Integer>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) leading.gram[i][j] = lattice.at(i, j);
      if (gram_determinant(leading) <= 0) {
        report.push_back({"not-positive-definite", {k}, "leading principal minor <= 0"});
        break;
      }
    }
  }
  return report;
}

Integer gram_determinant(const GramLattice& lattice) {
  // Fraction-free (Bareiss) elimination.
  const int d = lattice.rank();
  std::vector<std::vector<Integer>> m = lattice.gram;
  Integer prev = 1;
  int sign = 1;
  for (int i = 0; i < d; ++i) {
    if (m[i][i] == 0) {
      int pivot = -1;
      for (int r = i + 1; r < d; ++r)
        if (m[r][i] != 0) {
          pivot = r;
          break;
        }
      if (pivot < 0) return 0;
      std::swap(m[i], m[pivot]);
      sign = -sign;
    }
    for (int r = i + 1; r < d; ++r) {
      for (int c = i + 1; c < d; ++c) {
        Integer num = m[r][c] * m[i][i] - m[r][i] * m[i][c];
        mpz_divexact(m[r][c].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      m[r][i] = 0;
    }
    prev = m[i][i];
  }
  return sign > 0 ? m[d - 1][d - 1] : Integer(-m[d - 1][d - 1]);
}

SmithNormalForm smith_normal_form(const std::vector<std::vector<Integer>>& matrix) {
  const int d = static_cast<int>(matrix.size());
  std::vector<std::vector<Integer>> a = matrix;
  std::vector<std::vector<Integer>> u(d, std::vector<Integer>(d, 0));
  std::vector<std::vector<Integer>> uinv(d, std::vector<Integer>(d, 0));
  for (int i = 0; i < d; ++i) u[i][i] = uinv[i][i] = 1;

  auto row_swap = [&](int i, int j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
    for (int r = 0; r < d; ++r) std::swap(uinv[r][i], uinv[r][j]);
  };
  auto row_negate = [&](int i) {
    for (int c = 0; c < d; ++c) {
      a[i][c] = -a[i][c];
      u[i][c] = -u[i][c];
    }
    for (int r = 0; r < d; ++r) uinv[r][i] = -uinv[r][i];
  };
  // row r -= q * row t; inverse transform: column t of U^-1 += q * column r.
  auto row_submul = [&](int r, int t, const Integer& q) {
    for (int c = 0; c < d; ++c) {
      a[r][c] -= q * a[t][c];
      u[r][c] -= q * u[t][c];
    }
    for (int rr = 0; rr < d; ++rr) uinv[rr][t] += q * uinv[rr][r];
  };
  auto col_swap = [&](int i, int j) {
    for (int r = 0; r < d; ++r) std::swap(a[r][i], a[r][j]);
  };
  auto col_submul = [&](int c, int t, const Integer& q) {
    for (int r = 0; r < d; ++r) a[r][c] -= q * a[r][t];
  };

  for (int t = 0; t < d; ++t) {
    while (true) {
      int pr = -1, pc = -1;
      for (int r = t; r < d; ++r)
        for (int c = t; c < d; ++c) {
          if (a[r][c] == 0) continue;
          if (pr < 0 || abs(a[r][c]) < abs(a[pr][pc])) {
            pr = r;
            pc = c;
          }
        }
      if (pr < 0) break;  // block is zero
      if (pr != t) row_swap(pr, t);
      if (pc != t) col_swap(pc, t);
      if (a[t][t] < 0) row_negate(t);

      bool reduced = true;
      for (int r = t + 1; r < d; ++r) {
        if (a[r][t] == 0) continue;
        Integer q = a[r][t] / a[t][t];
        if (q != 0) row_submul(r, t, q);
        if (a[r][t] != 0) reduced = false;
      }
      for (int c = t + 1; c < d; ++c) {
        if (a[t][c] == 0) continue;
        Integer q = a[t][c] / a[t][t];
        if (q != 0) col_submul(c, t, q);
        if (a[t][c] != 0) reduced = false;
      }
      if (!reduced) continue;

      // Enforce divisibility of the remaining block by the pivot.
      bool divisible = true;
      for (int r = t + 1; r < d && divisible; ++r)
        for (int c = t + 1; c < d; ++c)
          if (a[r][c] % a[t][t] != 0) {
            row_submul(t, r, Integer(-1));  // add row r to row t
            divisible = false;
            break;
          }
      if (divisible) break;
    }
  }

  SmithNormalForm result;
  result.diag.resize(d);
  for (int i = 0; i < d; ++i) result.diag[i] = a[i][i];
  result.u = std::move(u);
  result.u_inverse = std::move(uinv);
  return result;
}

int DiscriminantData::negate(int index) const {
  const auto& t = element_tuples[index];
  std::vector<Integer> neg(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    neg[i] = t[i] == 0 ? Integer(0) : Integer(elementary_divisors[i] - t[i]);
  int idx = 0;
  for (std::size_t i = 0; i < neg.size(); ++i)
    idx = idx * static_cast<int>(elementary_divisors[i].get_si()) + static_cast<int>(neg[i].get_si());
  return idx;
}

int DiscriminantData::add(int a, int b) const {
  const auto& ta = element_tuples[a];
  const auto& tb = element_tuples[b];
  int idx = 0;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    Integer s = (ta[i] + tb[i]) % elementary_divisors[i];
    idx = idx * static_cast<int>(elementary_divisors[i].get_si()) + static_cast<int>(s.get_si());
  }
  return idx;
}

DiscriminantData discriminant_group(const GramLattice& lattice) {
  auto gram_report = validate_gram(lattice);
  if (!gram_report.empty()) {
    std::vector<std::string> msgs;
    for (const auto& v : gram_report) msgs.push_back(v.format());
    throw AxiomError("invalid Gram matrix", msgs);
  }
  const int d = lattice.rank();
  SmithNormalForm snf = smith_normal_form(lattice.gram);

  DiscriminantData data;
  std::vector<int> positions;  // indices of divisors > 1 in the SNF diagonal
  for (int i = 0; i < d; ++i) {
    if (snf.diag[i] > 1) {
      positions.push_back(i);
      data.elementary_divisors.push_back(snf.diag[i]);
    }
  }

  // Exact inverse of the Gram matrix (columns span the dual lattice).
  std::vector<std::vector<Rational>> ginv(d, std::vector<Rational>(d, 0));
  {
    std::vector<std::vector<Rational>> work(d, std::vector<Rational>(2 * d, 0));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) work[i][j] = Rational(lattice.at(i, j));
      work[i][d + i] = 1;
    }
    for (int col = 0; col < d; ++col) {
      int pivot = col;
      while (work[pivot][col] == 0) ++pivot;
      std::swap(work[pivot], work[col]);
      Rational p = work[col][col];
      for (int c = 0; c < 2 * d; ++c) work[col][c] /= p;
      for (int r = 0; r < d; ++r) {
        if (r == col || work[r][col] == 0) continue;
        Rational f = work[r][col];
        for (int c = 0; c < 2 * d; ++c) work[r][c] -= f * work[col][c];
      }
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) ginv[i][j] = work[i][d + j];
  }

  const int r = static_cast<int>(positions.size());
  long total = 1;
  for (const auto& div : data.elementary_divisors) total *= div.get_si();

  std::vector<Integer> tuple(r, 0);
  for (long index = 0; index < total; ++index) {
    data.element_tuples.push_back(tuple);
    std::string label;
    if (r == 0) {
      label = "0";
    } else {
      for (int i = 0; i < r; ++i) {
        if (i) label += '_';
        label += tuple[i].get_str();
      }
    }
    data.labels.push_back(label);

    // Representative: lambda = G^-1 U^-1 t~ with coordinates reduced to [0,1).
    std::vector<Integer> lifted(d, 0);
    for (int i = 0; i < r; ++i) lifted[positions[i]] = tuple[i];
    std::vector<Integer> x(d, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) x[i] += snf.u_inverse[i][j] * lifted[j];
    std::vector<Rational> rep(d, 0);
    for (int i = 0; i < d; ++i) {
      Rational v = 0;
      for (int j = 0; j < d; ++j) v += ginv[i][j] * Rational(x[j]);
      rep[i] = floor_fraction(v);
    }
    data.coset_reps.push_back(std::move(rep));

    for (int i = r - 1; i >= 0; --i) {
      tuple[i] += 1;
      if (tuple[i] < data.elementary_divisors[i]) break;
      tuple[i] = 0;
    }
  }
  return data;
}

namespace {

// Rational LDL^T data: gram = L * diag(D) * L^T with unit lower L.
struct LdlFactorization {
  int dim;
  std::vector<std::vector<Rational>> l;
  std::vector<Rational> d;
};

LdlFactorization ldl_factorize(const GramLattice& lattice) {
  const int n = lattice.rank();
  LdlFactorization f;
  f.dim = n;
  f.l.assign(n, std::vector<Rational>(n, 0));
  f.d.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    Rational di = Rational(lattice.at(i, i));
    for (int k = 0; k < i; ++k) di -= f.l[i][k] * f.l[i][k] * f.d[k];
    f.d[i] = di;
    f.l[i][i] = 1;
    for (int j = i + 1; j < n; ++j) {
      Rational v = Rational(lattice.at(j, i));
      for (int k = 0; k < i; ++k) v -= f.l[j][k] * f.l[i][k] * f.d[k];
      f.l[j][i] = v / di;
    }
  }
  return f;
}

// Q(lambda + alpha) = sum_i D_i y_i^2 with y_i = x_i + sum_{j>i} L_{ji} x_j,
// so levels are searched from i = dim-1 down to 0 and the partial sum of the
// processed levels prunes the branch.
struct CvpSearch {
  const LdlFactorization& f;
  const std::vector<Rational>& lambda;
  std::vector<Rational> x;  // chosen x_j = lambda_j + alpha_j for j > level
  Rational best;

  CvpSearch(const LdlFactorization& fac, const std::vector<Rational>& lam, Rational initial)
      : f(fac), lambda(lam), x(fac.dim, 0), best(std::move(initial)) {}

  Rational offset(int level) const {
    Rational c = 0;
    for (int j = level + 1; j < f.dim; ++j) c += f.l[j][level] * x[j];
    return c;
  }

  void descend(int level, const Rational& partial) {
    if (level < 0) {
      if (partial < best) best = partial;
      return;
    }
    const Rational c = offset(level);
    const Rational vertex = -lambda[level] - c;  // alpha minimizing this level's term
    const Integer center = round_nearest(vertex);
    for (int dir = 0; dir < 2; ++dir) {
      Integer alpha = dir == 0 ? center : center - 1;
      while (true) {
        Rational y = lambda[level] + Rational(alpha) + c;
        Rational term = f.d[level] * y * y;
        // Terms grow monotonically away from the vertex, and best is always
        // an achieved value, so branches at or above it cannot improve it.
        if (partial + term >= best) break;
        x[level] = lambda[level] + Rational(alpha);
        descend(level - 1, partial + term);
        if (dir == 0)
          alpha += 1;
        else
          alpha -= 1;
      }
    }
  }
};

// Value at the Babai nearest-plane point; a finite upper bound for pruning.
Rational babai_bound(const LdlFactorization& f, const std::vector<Rational>& lambda) {
  std::vector<Rational> x(f.dim, 0);
  Rational total = 0;
  for (int level = f.dim - 1; level >= 0; --level) {
    Rational c = 0;
    for (int j = level + 1; j < f.dim; ++j) c += f.l[j][level] * x[j];
    Rational vertex = -lambda[level] - c;
    Integer alpha = round_nearest(vertex);
    Rational y = lambda[level] + Rational(alpha) + c;
    x[level] = lambda[level] + Rational(alpha);
    total += f.d[level] * y * y;
  }
  return total;
}

std::vector<Rational> prepare_coset(const GramLattice& lattice, const std::vector<Rational>& rep) {
  const int d = lattice.rank();
  if (static_cast<int>(rep.size()) != d)
    throw StructureError("coset representative has wrong dimension");
  for (int i = 0; i < d; ++i) {
    Rational pair = 0;
    for (int j = 0; j < d; ++j) pair += Rational(lattice.at(i, j)) * rep[j];
    if (pair.get_den() != 1)
      throw StructureError("coset representative does not lie in the dual lattice");
  }
  std::vector<Rational> reduced(d);
  for (int i = 0; i < d; ++i) reduced[i] = floor_fraction(rep[i]);
  return reduced;
}

}  // namespace

Rational conformal_dimension_serial(const GramLattice& lattice, const std::vector<Rational>& coset_rep) {
  auto lambda = prepare_coset(lattice, coset_rep);
  LdlFactorization f = ldl_factorize(lattice);
  CvpSearch search(f, lambda, babai_bound(f, lambda));
  search.descend(f.dim - 1, 0);
  return search.best / 2;
}

Rational conformal_dimension(const GramLattice& lattice, const std::vector<Rational>& coset_rep) {
  auto lambda = prepare_coset(lattice, coset_rep);
  LdlFactorization f = ldl_factorize(lattice);
  const int top = f.dim - 1;
  const Rational bound = babai_bound(f, lambda);

  // Outermost coordinate candidates under the static root bound.
  std::vector<Integer> candidates;
  {
    const Rational vertex = -lambda[top];
    const Integer center = round_nearest(vertex);
    for (int dir = 0; dir < 2; ++dir) {
      Integer alpha = dir == 0 ? center : center - 1;
      while (true) {
        Rational y = lambda[top] + Rational(alpha);
        Rational term = f.d[top] * y * y;
        if (term > bound) break;
        candidates.push_back(alpha);
        if (dir == 0)
          alpha += 1;
        else
          alpha -= 1;
      }
    }
  }

  Rational global_best = bound;
  const int count = static_cast<int>(candidates.size());
#pragma omp parallel
  {
    Rational local_best = bound;
#pragma omp for schedule(dynamic) nowait
    for (int idx = 0; idx < count; ++idx) {
      CvpSearch search(f, lambda, local_best);
      Rational x_top = lambda[top] + Rational(candidates[idx]);
      search.x[top] = x_top;
      Rational term = f.d[top] * x_top * x_top;  // no outer levels: y = x at the root
      if (term < search.best) search.descend(top - 1, term);
      if (search.best < local_best) local_best = search.best;
    }
#pragma omp critical
    {
      if (local_best < global_best) global_best = local_best;
    }
  }
  return global_best / 2;
}

FusionDatum fusion_datum_from_gram(const GramLattice& lattice) {
  DiscriminantData disc = discriminant_group(lattice);
  const int m = disc.order();

  FusionData data;
  data.labels = disc.labels;
  data.unit = 0;
  data.dual.resize(m);
  for (int i = 0; i < m; ++i) data.dual[i] = disc.negate(i);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) data.set_fusion(i, j, disc.negate(disc.add(i, j)), 1);
  data.conf_dim.resize(m);
  for (int i = 0; i < m; ++i) data.conf_dim[i] = conformal_dimension(lattice, disc.coset_reps[i]);
  data.central_charge = Rational(lattice.rank());
  return FusionDatum(std::move(data));
}

}  // namespace cohft
