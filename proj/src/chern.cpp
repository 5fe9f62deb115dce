#include "cohft/chern.hpp"

#include <omp.h>

#include <algorithm>

namespace cohft {

EdgeSeries::EdgeSeries(const Rational& a, int max_degree) : a_(a), max_degree_(max_degree) {
  if (max_degree < 0) throw StructureError("negative edge series degree");
  coeffs_.assign(static_cast<std::size_t>(max_degree + 1) * (max_degree + 1), Rational(0));
  for (int s = 0; s <= max_degree; ++s) {
    // -(a^{s+1} / (s+1)!) * (psi_h + psi_h')^s, split binomially.
    Rational total = -rational_pow(a, static_cast<unsigned long>(s) + 1) /
                     Rational(factorial(static_cast<unsigned long>(s) + 1));
    for (int i = 0; i <= s; ++i) {
      int j = s - i;
      coeffs_[static_cast<std::size_t>(i) * (max_degree + 1) + j] =
          total * Rational(binomial(static_cast<unsigned long>(s), static_cast<unsigned long>(i)));
    }
  }
}

const Rational& EdgeSeries::coeff(int i, int j) const {
  static const Rational zero(0);
  if (i < 0 || j < 0 || i + j > max_degree_) return zero;
  return coeffs_[static_cast<std::size_t>(i) * (max_degree_ + 1) + j];
}

EdgeSeries edge_series(const Rational& a, int max_degree) { return EdgeSeries(a, max_degree); }

int max_truncation_degree(int g, int n) { return std::max(1, 3 * g - 3 + n); }

namespace {

void check_assembly_inputs(const FusionDatum& datum, int g, const std::vector<int>& modules, int D) {
  const int n = static_cast<int>(modules.size());
  if (g < 0 || 2 * g - 2 + n <= 0)
    throw StabilityError("(g,n)=(" + std::to_string(g) + "," + std::to_string(n) +
                         ") violates 2g-2+n>0");
  for (int m : modules)
    if (m < 0 || m >= datum.size()) throw StructureError("module index out of range");
  if (D < 0) throw StructureError("negative truncation degree");
  if (D > max_truncation_degree(g, n))
    throw StructureError("truncation degree " + std::to_string(D) + " exceeds bound " +
                         std::to_string(max_truncation_degree(g, n)));
}

struct AssemblyContext {
  const FusionDatum& datum;
  int g;
  int n;
  int D;
  const std::vector<int>& modules;
  RankTable& table;
  std::vector<EdgeSeries> series_per_module;       // by half-edge module index
  std::vector<std::vector<Rational>> leg_factors;  // leg i -> a_i^t / t!
};

AssemblyContext make_context(const FusionDatum& datum, int g, const std::vector<int>& modules,
                             int D, RankTable& table) {
  AssemblyContext ctx{datum, g, static_cast<int>(modules.size()), D, modules, table, {}, {}};
  ctx.series_per_module.reserve(datum.size());
  for (int w = 0; w < datum.size(); ++w) ctx.series_per_module.emplace_back(datum.conf_dim(w), D);
  ctx.leg_factors.resize(modules.size());
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const Rational& a = datum.conf_dim(modules[i]);
    std::vector<Rational> powers{Rational(1)};
    for (int t = 1; t <= D; ++t) powers.push_back(powers.back() * a / t);
    ctx.leg_factors[i] = std::move(powers);
  }
  return ctx;
}

struct ExpansionTerm {
  std::vector<int> psi_leg;
  std::vector<int> psi_half;
  int degree = 0;
  Rational coeff;
};

// Contribution of one stable graph: the assignment sum with ranks, leg
// exponentials and edge series, divided by |Aut|. No lambda prefactor here.
void graph_contribution(const AssemblyContext& ctx, const EnumeratedGraph& enumerated,
                        TautClass& into) {
  const StableGraph& graph = enumerated.graph;
  const int ne = graph.num_edges();
  if (ne > ctx.D) return;
  const int budget = ctx.D - ne;
  const int k = graph.num_vertices();

  const auto automorphisms = halfedge_automorphisms(graph);
  const Rational aut_inverse(1, static_cast<long>(enumerated.aut));

  // Leg modules per vertex are fixed across assignments.
  std::vector<std::vector<int>> base_modules(k);
  for (int i = 0; i < ctx.n; ++i) base_modules[graph.leg_vertex[i]].push_back(ctx.modules[i]);
  std::vector<std::vector<int>> halves_at(k);
  for (int h = 0; h < graph.num_half_edges(); ++h) halves_at[graph.half_edge_vertex(h)].push_back(h);

  for_each_module_assignment(graph, ctx.datum, [&](const std::vector<int>& mu) {
    // Edges whose module has conformal dimension zero kill the whole term.
    for (int e = 0; e < ne; ++e)
      if (ctx.series_per_module[mu[2 * e]].is_zero()) return;

    Integer rank_product(1);
    for (int v = 0; v < k && rank_product != 0; ++v) {
      std::vector<int> vertex_modules = base_modules[v];
      for (int h : halves_at[v]) vertex_modules.push_back(mu[h]);
      rank_product *= rank_exact(ctx.datum, RankQuery{graph.vertex_genus[v], std::move(vertex_modules)},
                                 ctx.table);
    }
    if (rank_product == 0) return;

    std::vector<ExpansionTerm> terms(1);
    terms[0].psi_leg.assign(ctx.n, 0);
    terms[0].psi_half.assign(graph.num_half_edges(), 0);
    terms[0].coeff = Rational(rank_product) * aut_inverse;

    for (int i = 0; i < ctx.n; ++i) {
      if (ctx.datum.conf_dim(ctx.modules[i]) == 0) continue;
      std::vector<ExpansionTerm> next;
      for (const auto& term : terms) {
        for (int t = 0; term.degree + t <= budget; ++t) {
          ExpansionTerm extended = term;
          if (t > 0) {
            extended.psi_leg[i] += t;
            extended.degree += t;
            extended.coeff *= ctx.leg_factors[i][t];
          }
          next.push_back(std::move(extended));
        }
      }
      terms = std::move(next);
    }

    for (int e = 0; e < ne; ++e) {
      const EdgeSeries& series = ctx.series_per_module[mu[2 * e]];
      std::vector<ExpansionTerm> next;
      for (const auto& term : terms) {
        for (int i = 0; term.degree + i <= budget; ++i) {
          for (int j = 0; term.degree + i + j <= budget; ++j) {
            const Rational& c = series.coeff(i, j);
            if (c == 0) continue;
            ExpansionTerm extended = term;
            extended.psi_half[2 * e] += i;
            extended.psi_half[2 * e + 1] += j;
            extended.degree += i + j;
            extended.coeff *= c;
            next.push_back(std::move(extended));
          }
        }
      }
      terms = std::move(next);
    }

    for (auto& term : terms) {
      Generator gen;
      gen.graph = graph;
      gen.psi_leg = std::move(term.psi_leg);
      gen.psi_half = std::move(term.psi_half);
      into.add_term_prechecked(canonicalize_decorations(std::move(gen), automorphisms),
                               std::move(term.coeff));
    }
  });
}

void merge_into(TautClass& into, const TautClass& from) {
  for (const auto& [key, term] : from.terms()) into.add_term_prechecked(term.gen, term.coeff);
}

}  // namespace

TautClass chern_character_serial(const FusionDatum& datum, int g, const std::vector<int>& modules,
                                 int D, RankTable& table) {
  check_assembly_inputs(datum, g, modules, D);
  AssemblyContext ctx = make_context(datum, g, modules, D, table);
  auto graphs = enumerate_stable_graphs(g, static_cast<int>(modules.size()), D);
  TautClass total(g, static_cast<int>(modules.size()), D);
  for (const auto& enumerated : graphs) graph_contribution(ctx, enumerated, total);
  return scale_by_lambda_exponential(total, datum.central_charge() / 2);
}

TautClass chern_character(const FusionDatum& datum, int g, const std::vector<int>& modules, int D,
                          RankTable& table) {
  check_assembly_inputs(datum, g, modules, D);
  AssemblyContext ctx = make_context(datum, g, modules, D, table);
  auto graphs = enumerate_stable_graphs(g, static_cast<int>(modules.size()), D);
  const int count = static_cast<int>(graphs.size());
  TautClass total(g, static_cast<int>(modules.size()), D);
#pragma omp parallel
  {
    TautClass local(g, static_cast<int>(modules.size()), D);
#pragma omp for schedule(dynamic, 1) nowait
    for (int idx = 0; idx < count; ++idx) graph_contribution(ctx, graphs[idx], local);
#pragma omp critical
    merge_into(total, local);
  }
  return scale_by_lambda_exponential(total, datum.central_charge() / 2);
}

TautClass first_chern_closed_form(const FusionDatum& datum, int g, const std::vector<int>& modules,
                                  RankTable& table) {
  const int n = static_cast<int>(modules.size());
  check_assembly_inputs(datum, g, modules, 1);

  TautClass c1(g, n, 1);
  const Integer rank = rank_exact(datum, RankQuery{g, modules}, table);
  const StableGraph smooth = StableGraph::smooth(g, n);

  {
    Generator lambda_gen;
    lambda_gen.graph = smooth;
    lambda_gen.lambda_exp = 1;
    lambda_gen.psi_leg.assign(n, 0);
    c1.add_term(std::move(lambda_gen), Rational(rank) * datum.central_charge() / 2);
  }
  for (int i = 0; i < n; ++i) {
    Generator psi_gen;
    psi_gen.graph = smooth;
    psi_gen.psi_leg.assign(n, 0);
    psi_gen.psi_leg[i] = 1;
    c1.add_term(std::move(psi_gen), Rational(rank) * datum.conf_dim(modules[i]));
  }

  if (g >= 1) {
    Rational b_irr = 0;
    for (int w = 0; w < datum.size(); ++w) {
      if (datum.conf_dim(w) == 0) continue;
      std::vector<int> extended = modules;
      extended.push_back(w);
      extended.push_back(datum.dual(w));
      b_irr += datum.conf_dim(w) * Rational(rank_exact(datum, RankQuery{g - 1, extended}, table));
    }
    StableGraph irr;
    irr.vertex_genus = {g - 1};
    irr.leg_vertex.assign(n, 0);
    irr.edges.push_back({0, 0});
    Generator gen;
    gen.graph = irr;
    gen.psi_leg.assign(n, 0);
    gen.psi_half.assign(2, 0);
    c1.add_term(std::move(gen), -b_irr / Rational(static_cast<long>(aut_order(irr))));
  }

  // Separating divisors, one representative per class modulo
  // (i, I) ~ (g-i, I^c): smaller i first, ties broken by leg 1 (or the empty
  // set when n = 0).
  for (int i = 0; 2 * i <= g; ++i) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (2 * i == g) {
        if (n >= 1 && !(mask & 1u)) continue;
        if (n == 0 && mask != 0) continue;
      }
      std::vector<int> in_part, out_part;
      for (int leg = 0; leg < n; ++leg)
        ((mask >> leg) & 1u ? in_part : out_part).push_back(leg);
      const int size_in = static_cast<int>(in_part.size());
      const int size_out = n - size_in;
      if (2 * i - 2 + size_in + 1 <= 0) continue;            // unstable side
      if (2 * (g - i) - 2 + size_out + 1 <= 0) continue;     // unstable side

      Rational b = 0;
      for (int w = 0; w < datum.size(); ++w) {
        if (datum.conf_dim(w) == 0) continue;
        std::vector<int> left;
        for (int leg : in_part) left.push_back(modules[leg]);
        left.push_back(w);
        std::vector<int> right;
        for (int leg : out_part) right.push_back(modules[leg]);
        right.push_back(datum.dual(w));
        b += datum.conf_dim(w) * Rational(rank_exact(datum, RankQuery{i, left}, table)) *
             Rational(rank_exact(datum, RankQuery{g - i, right}, table));
      }

      StableGraph sep;
      sep.vertex_genus = {i, g - i};
      sep.leg_vertex.assign(n, 1);
      for (int leg : in_part) sep.leg_vertex[leg] = 0;
      sep.edges.push_back({0, 1});
      Generator gen;
      gen.graph = sep;
      gen.psi_leg.assign(n, 0);
      gen.psi_half.assign(2, 0);
      c1.add_term(std::move(gen), -b / Rational(static_cast<long>(aut_order(sep))));
    }
  }
  return c1;
}

TautClass chern_smooth(const FusionDatum& datum, int g, const std::vector<int>& modules, int D,
                       RankTable& table) {
  const int n = static_cast<int>(modules.size());
  check_assembly_inputs(datum, g, modules, D);
  const Integer rank = rank_exact(datum, RankQuery{g, modules}, table);
  TautClass out(g, n, D);
  if (rank == 0) return out;
  const StableGraph smooth = StableGraph::smooth(g, n);
  const Rational c_half = datum.central_charge() / 2;

  // exp(c/2 lambda + sum a_i psi_i): exponent tuples (k, e_1..e_n).
  std::vector<int> exponents(n, 0);
  std::function<void(int, int, Rational)> recurse = [&](int slot, int used, Rational factor) {
    if (slot == n) {
      for (int k = 0; used + k <= D; ++k) {
        Rational coeff = Rational(rank) * factor;
        if (k > 0) coeff *= rational_pow(c_half, k) / Rational(factorial(k));
        if (coeff == 0) continue;
        Generator gen;
        gen.graph = smooth;
        gen.lambda_exp = k;
        gen.psi_leg = exponents;
        out.add_term(std::move(gen), coeff);
      }
      return;
    }
    const Rational& a = datum.conf_dim(modules[slot]);
    recurse(slot + 1, used, factor);
    if (a != 0) {
      Rational power = factor;
      for (int t = 1; used + t <= D; ++t) {
        power *= a / t;
        exponents[slot] = t;
        recurse(slot + 1, used + t, power);
      }
      exponents[slot] = 0;
    }
  };
  recurse(0, 0, Rational(1));
  return out;
}

TautClass total_chern_smooth(const FusionDatum& datum, int g, const std::vector<int>& modules,
                             RankTable& table) {
  const int n = static_cast<int>(modules.size());
  const int D = std::max(0, 3 * g - 3 + n);
  if (g < 0 || 2 * g - 2 + n <= 0)
    throw StabilityError("(g,n)=(" + std::to_string(g) + "," + std::to_string(n) +
                         ") violates 2g-2+n>0");
  const Integer rank = rank_exact(datum, RankQuery{g, modules}, table);
  TautClass out(g, n, D);
  const StableGraph smooth = StableGraph::smooth(g, n);
  const Rational c_half = datum.central_charge() / 2;

  // (1 + x)^rank with x = c/2 lambda + sum a_i psi_i:
  // term (k, e_*) carries binom(rank, j) * j!/(k! prod e_i!) * (c/2)^k prod a_i^{e_i}.
  std::vector<int> exponents(n, 0);
  std::function<void(int, int, Rational)> recurse = [&](int slot, int used, Rational factor) {
    if (slot == n) {
      for (int k = 0; used + k <= D; ++k) {
        const int j = used + k;
        Rational coeff = factor * Rational(binomial_big(rank, j)) * Rational(factorial(j));
        if (k > 0) coeff *= rational_pow(c_half, k) / Rational(factorial(k));
        if (coeff == 0) continue;
        Generator gen;
        gen.graph = smooth;
        gen.lambda_exp = k;
        gen.psi_leg = exponents;
        out.add_term(std::move(gen), coeff);
      }
      return;
    }
    const Rational& a = datum.conf_dim(modules[slot]);
    recurse(slot + 1, used, factor);
    if (a != 0) {
      Rational power = factor;
      for (int t = 1; used + t <= D; ++t) {
        power *= a / t;
        exponents[slot] = t;
        recurse(slot + 1, used + t, power);
      }
      exponents[slot] = 0;
    }
  };
  recurse(0, 0, Rational(1));
  return out;
}

}  // namespace cohft
