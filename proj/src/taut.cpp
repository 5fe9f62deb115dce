#include "cohft/taut.hpp"

#include <algorithm>
#include <numeric>

namespace cohft {

int Generator::degree() const {
  int total = lambda_exp + graph.num_edges();
  total += std::accumulate(psi_leg.begin(), psi_leg.end(), 0);
  total += std::accumulate(psi_half.begin(), psi_half.end(), 0);
  return total;
}

GeneratorKey generator_key(const Generator& gen) {
  GeneratorKey key = canonical_encoding(gen.graph);
  key.push_back(gen.lambda_exp);
  key.insert(key.end(), gen.psi_leg.begin(), gen.psi_leg.end());
  key.insert(key.end(), gen.psi_half.begin(), gen.psi_half.end());
  return key;
}

Generator canonicalize_decorations(Generator gen, const std::vector<HalfEdgePerm>& automorphisms) {
  if (gen.psi_half.empty() || automorphisms.size() <= 1) return gen;
  std::vector<int> best = gen.psi_half;
  std::vector<int> candidate(gen.psi_half.size());
  for (const auto& perm : automorphisms) {
    for (std::size_t h = 0; h < perm.size(); ++h) candidate[perm[h]] = gen.psi_half[h];
    if (candidate < best) best = candidate;
  }
  gen.psi_half = std::move(best);
  return gen;
}

Generator canonicalize_generator(const Generator& gen) {
  CanonicalizedGraph canon = canonicalize(gen.graph);
  Generator out;
  out.graph = canon.graph;
  out.lambda_exp = gen.lambda_exp;
  out.psi_leg = gen.psi_leg;
  out.psi_half.assign(gen.psi_half.size(), 0);
  for (std::size_t h = 0; h < gen.psi_half.size(); ++h)
    out.psi_half[canon.half_edge_map[h]] = gen.psi_half[h];
  auto automorphisms = halfedge_automorphisms(out.graph);
  return canonicalize_decorations(std::move(out), automorphisms);
}

TautClass::TautClass(int g, int n, int max_degree) : g_(g), n_(n), max_degree_(max_degree) {
  if (max_degree < 0) throw StructureError("negative truncation degree");
}

void TautClass::add_term(Generator gen, Rational coeff) {
  add_term_prechecked(canonicalize_generator(gen), std::move(coeff));
}

void TautClass::add_term_prechecked(Generator gen, Rational coeff) {
  if (coeff == 0) return;
  if (gen.graph.genus() != g_ || gen.graph.num_legs() != n_)
    throw StructureError("generator lives on the wrong moduli space");
  if (static_cast<int>(gen.psi_leg.size()) != n_ ||
      static_cast<int>(gen.psi_half.size()) != gen.graph.num_half_edges())
    throw StructureError("generator decorations have wrong shape");
  if (gen.degree() > max_degree_)
    throw StructureError("generator degree " + std::to_string(gen.degree()) +
                         " exceeds truncation bound " + std::to_string(max_degree_));
  GeneratorKey key = generator_key(gen);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), Term{std::move(gen), std::move(coeff)});
  } else {
    it->second.coeff += coeff;
    if (it->second.coeff == 0) terms_.erase(it);
  }
}

bool TautClass::operator==(const TautClass& other) const {
  if (g_ != other.g_ || n_ != other.n_) return false;
  if (terms_.size() != other.terms_.size()) return false;
  auto it = terms_.begin();
  auto jt = other.terms_.begin();
  for (; it != terms_.end(); ++it, ++jt) {
    if (it->first != jt->first || it->second.coeff != jt->second.coeff) return false;
  }
  return true;
}

TautClass add(const TautClass& x, const TautClass& y) {
  if (x.ambient_genus() != y.ambient_genus() || x.ambient_legs() != y.ambient_legs())
    throw StructureError("cannot add classes on different moduli spaces");
  TautClass out(x.ambient_genus(), x.ambient_legs(), std::max(x.max_degree(), y.max_degree()));
  for (const auto& [key, term] : x.terms()) out.add_term_prechecked(term.gen, term.coeff);
  for (const auto& [key, term] : y.terms()) out.add_term_prechecked(term.gen, term.coeff);
  return out;
}

TautClass scale(const TautClass& x, const Rational& c) {
  TautClass out(x.ambient_genus(), x.ambient_legs(), x.max_degree());
  if (c == 0) return out;
  for (const auto& [key, term] : x.terms()) out.add_term_prechecked(term.gen, term.coeff * c);
  return out;
}

TautClass pushforward_term(const StableGraph& graph, const std::vector<int>& psi_leg,
                           const std::vector<int>& psi_half, const Rational& coeff, int max_degree) {
  Generator gen;
  gen.graph = graph;
  gen.psi_leg = psi_leg;
  gen.psi_half = psi_half;
  TautClass out(graph.genus(), graph.num_legs(), max_degree);
  if (coeff != 0) out.add_term(std::move(gen), coeff);
  return out;
}

TautClass scale_by_lambda_exponential(const TautClass& x, const Rational& c_over_2) {
  TautClass out(x.ambient_genus(), x.ambient_legs(), x.max_degree());
  for (const auto& [key, term] : x.terms()) {
    out.add_term_prechecked(term.gen, term.coeff);
    Rational power = 1;
    for (int k = 1; k + term.gen.degree() <= x.max_degree(); ++k) {
      power *= c_over_2 / k;
      if (power == 0) break;
      Generator lifted = term.gen;
      lifted.lambda_exp += k;
      out.add_term_prechecked(std::move(lifted), term.coeff * power);
    }
  }
  return out;
}

TautClass truncate(const TautClass& x, int new_bound) {
  TautClass out(x.ambient_genus(), x.ambient_legs(), new_bound);
  for (const auto& [key, term] : x.terms())
    if (term.gen.degree() <= new_bound) out.add_term_prechecked(term.gen, term.coeff);
  return out;
}

TautClass degree_part(const TautClass& x, int degree) {
  TautClass out(x.ambient_genus(), x.ambient_legs(), x.max_degree());
  for (const auto& [key, term] : x.terms())
    if (term.gen.degree() == degree) out.add_term_prechecked(term.gen, term.coeff);
  return out;
}

TautClass restrict_to_smooth(const TautClass& x) {
  TautClass out(x.ambient_genus(), x.ambient_legs(), x.max_degree());
  for (const auto& [key, term] : x.terms())
    if (term.gen.graph.num_edges() == 0) out.add_term_prechecked(term.gen, term.coeff);
  return out;
}

}  // namespace cohft
