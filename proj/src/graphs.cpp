#include "cohft/graphs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace cohft {

int StableGraph::genus() const { return std::accumulate(vertex_genus.begin(), vertex_genus.end(), 0) + first_betti(); }

int StableGraph::vertex_valence(int v) const {
  int count = 0;
  for (int lv : leg_vertex)
    if (lv == v) ++count;
  for (const auto& e : edges) {
    if (e[0] == v) ++count;
    if (e[1] == v) ++count;
  }
  return count;
}

bool StableGraph::is_connected() const {
  const int k = num_vertices();
  if (k == 0) return false;
  std::vector<char> seen(k, 0);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop();
    for (const auto& e : edges) {
      int other = -1;
      if (e[0] == v)
        other = e[1];
      else if (e[1] == v)
        other = e[0];
      if (other >= 0 && !seen[other]) {
        seen[other] = 1;
        ++reached;
        queue.push(other);
      }
    }
  }
  return reached == k;
}

std::optional<std::string> StableGraph::check_valid() const {
  if (num_vertices() == 0) return "graph has no vertices";
  for (int g : vertex_genus)
    if (g < 0) return "negative genus label";
  for (int lv : leg_vertex)
    if (lv < 0 || lv >= num_vertices()) return "leg attached to missing vertex";
  for (const auto& e : edges)
    for (int v : e)
      if (v < 0 || v >= num_vertices()) return "edge attached to missing vertex";
  if (!is_connected()) return "graph is not connected";
  for (int v = 0; v < num_vertices(); ++v)
    if (2 * vertex_genus[v] - 2 + vertex_valence(v) <= 0)
      return "unstable vertex " + std::to_string(v);
  return std::nullopt;
}

StableGraph StableGraph::smooth(int g, int n) {
  StableGraph graph;
  graph.vertex_genus = {g};
  graph.leg_vertex.assign(n, 0);
  return graph;
}

namespace {

// Iterated refinement of vertex classes by isomorphism-invariant signatures.
// Returns the partition as lists of vertex ids, in an order that only
// depends on the isomorphism class.
std::vector<std::vector<int>> vertex_class_partition(const StableGraph& g) {
  const int k = g.num_vertices();
  std::vector<std::vector<int>> sig(k);
  for (int v = 0; v < k; ++v) {
    int halves = 0, loops = 0;
    for (const auto& e : g.edges) {
      if (e[0] == v) ++halves;
      if (e[1] == v) ++halves;
      if (e[0] == v && e[1] == v) ++loops;
    }
    std::vector<int> legs;
    for (int i = 0; i < g.num_legs(); ++i)
      if (g.leg_vertex[i] == v) legs.push_back(i + 1);
    sig[v] = {g.vertex_genus[v], halves, loops};
    sig[v].insert(sig[v].end(), legs.begin(), legs.end());
  }

  std::vector<int> color(k, 0);
  auto recolor = [&]() {
    std::vector<std::vector<int>> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int v = 0; v < k; ++v)
      color[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
    return static_cast<int>(sorted.size());
  };
  int classes = recolor();

  for (int round = 0; round < k && classes < k; ++round) {
    for (int v = 0; v < k; ++v) {
      std::vector<int> neighbors;
      for (const auto& e : g.edges) {
        if (e[0] == e[1]) continue;
        if (e[0] == v) neighbors.push_back(color[e[1]]);
        if (e[1] == v) neighbors.push_back(color[e[0]]);
      }
      std::sort(neighbors.begin(), neighbors.end());
      std::vector<int> next = {color[v]};
      next.insert(next.end(), neighbors.begin(), neighbors.end());
      sig[v] = std::move(next);
    }
    int refined = recolor();
    if (refined == classes) break;
    classes = refined;
  }

  std::vector<std::vector<int>> partition(classes);
  for (int v = 0; v < k; ++v) partition[color[v]].push_back(v);
  return partition;
}

std::vector<std::int32_t> encode_under(const StableGraph& g, const std::vector<int>& perm) {
  const int k = g.num_vertices();
  std::vector<std::int32_t> enc;
  enc.reserve(3 + k + g.num_legs() + 2 * g.num_edges());
  enc.push_back(k);
  enc.push_back(g.num_legs());
  enc.push_back(g.num_edges());
  std::vector<int> inverse(k);
  for (int v = 0; v < k; ++v) inverse[perm[v]] = v;
  for (int p = 0; p < k; ++p) enc.push_back(g.vertex_genus[inverse[p]]);
  for (int lv : g.leg_vertex) enc.push_back(perm[lv]);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(g.num_edges());
  for (const auto& e : g.edges) {
    int a = perm[e[0]], b = perm[e[1]];
    pairs.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [a, b] : pairs) {
    enc.push_back(a);
    enc.push_back(b);
  }
  return enc;
}

// Permutations compatible with the class partition: class blocks occupy
// consecutive id ranges in partition order.
void for_each_class_perm(const std::vector<std::vector<int>>& partition, int k,
                         const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<std::vector<int>> orderings = partition;  // mutable per-class orders
  std::vector<int> perm(k);
  std::function<void(std::size_t)> rec = [&](std::size_t ci) {
    if (ci == orderings.size()) {
      int next_id = 0;
      for (const auto& cls : orderings)
        for (int v : cls) perm[v] = next_id++;
      fn(perm);
      return;
    }
    auto& cls = orderings[ci];
    std::sort(cls.begin(), cls.end());
    do {
      rec(ci + 1);
    } while (std::next_permutation(cls.begin(), cls.end()));
  };
  rec(0);
}

struct CanonicalSearch {
  std::vector<std::int32_t> encoding;
  std::vector<int> perm;
};

CanonicalSearch canonical_search(const StableGraph& g) {
  auto partition = vertex_class_partition(g);
  CanonicalSearch best;
  for_each_class_perm(partition, g.num_vertices(), [&](const std::vector<int>& perm) {
    auto enc = encode_under(g, perm);
    if (best.encoding.empty() || enc < best.encoding) {
      best.encoding = std::move(enc);
      best.perm = perm;
    }
  });
  return best;
}

}  // namespace

std::vector<std::int32_t> canonical_encoding(const StableGraph& graph) {
  return canonical_search(graph).encoding;
}

std::string canonical_key(const StableGraph& graph) {
  auto enc = canonical_encoding(graph);
  std::string key;
  key.reserve(enc.size() * 4);
  for (std::int32_t v : enc) {
    std::uint32_t u = static_cast<std::uint32_t>(v);
    key.push_back(static_cast<char>((u >> 24) & 0xff));
    key.push_back(static_cast<char>((u >> 16) & 0xff));
    key.push_back(static_cast<char>((u >> 8) & 0xff));
    key.push_back(static_cast<char>(u & 0xff));
  }
  return key;
}

CanonicalizedGraph canonicalize(const StableGraph& graph) {
  CanonicalSearch search = canonical_search(graph);
  const auto& perm = search.perm;
  const int k = graph.num_vertices();

  CanonicalizedGraph out;
  out.vertex_map = perm;
  out.graph.vertex_genus.resize(k);
  for (int v = 0; v < k; ++v) out.graph.vertex_genus[perm[v]] = graph.vertex_genus[v];
  out.graph.leg_vertex.resize(graph.num_legs());
  for (int i = 0; i < graph.num_legs(); ++i) out.graph.leg_vertex[i] = perm[graph.leg_vertex[i]];

  // Stable sort of relabeled edges; parallel edges keep their input order,
  // which is irrelevant up to the automorphisms minimized over later.
  std::vector<std::pair<std::pair<int, int>, int>> relabeled;
  relabeled.reserve(graph.num_edges());
  for (int e = 0; e < graph.num_edges(); ++e) {
    int a = perm[graph.edges[e][0]], b = perm[graph.edges[e][1]];
    relabeled.push_back({{std::min(a, b), std::max(a, b)}, e});
  }
  std::stable_sort(relabeled.begin(), relabeled.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  out.half_edge_map.assign(graph.num_half_edges(), -1);
  out.graph.edges.resize(graph.num_edges());
  for (int pos = 0; pos < static_cast<int>(relabeled.size()); ++pos) {
    const auto& [pair, e] = relabeled[pos];
    out.graph.edges[pos] = {pair.first, pair.second};
    int a = perm[graph.edges[e][0]];
    if (a == pair.first && pair.first != pair.second) {
      out.half_edge_map[2 * e] = 2 * pos;
      out.half_edge_map[2 * e + 1] = 2 * pos + 1;
    } else if (pair.first != pair.second) {
      out.half_edge_map[2 * e] = 2 * pos + 1;
      out.half_edge_map[2 * e + 1] = 2 * pos;
    } else {
      out.half_edge_map[2 * e] = 2 * pos;
      out.half_edge_map[2 * e + 1] = 2 * pos + 1;
    }
  }
  return out;
}

std::vector<HalfEdgePerm> halfedge_automorphisms(const StableGraph& graph) {
  const int k = graph.num_vertices();
  const int ne = graph.num_edges();
  auto partition = vertex_class_partition(graph);

  // Structure-preserving vertex permutations (legs fixed pointwise).
  std::vector<std::vector<int>> vertex_autos;
  {
    std::multiset<std::pair<int, int>> original_pairs;
    for (const auto& e : graph.edges)
      original_pairs.insert({std::min(e[0], e[1]), std::max(e[0], e[1])});
    // Candidates permute within classes only (automorphisms preserve the
    // invariant partition); convert block assignments to vertex maps via the
    // identity block assignment.
    std::vector<int> base_id(k);
    {
      int next = 0;
      for (const auto& cls : partition) {
        std::vector<int> sorted = cls;
        std::sort(sorted.begin(), sorted.end());
        for (int v : sorted) base_id[v] = next++;
      }
    }
    std::vector<int> inverse_base(k);
    for (int v = 0; v < k; ++v) inverse_base[base_id[v]] = v;
    for_each_class_perm(partition, k, [&](const std::vector<int>& perm) {
      // sigma(v) = inverse_base[perm[v]] is a vertex->vertex bijection
      // preserving classes.
      std::vector<int> sigma(k);
      for (int v = 0; v < k; ++v) sigma[v] = inverse_base[perm[v]];
      for (int v = 0; v < k; ++v)
        if (graph.vertex_genus[sigma[v]] != graph.vertex_genus[v]) return;
      for (int lv : graph.leg_vertex)
        if (sigma[lv] != lv) return;
      std::multiset<std::pair<int, int>> mapped;
      for (const auto& e : graph.edges)
        mapped.insert({std::min(sigma[e[0]], sigma[e[1]]), std::max(sigma[e[0]], sigma[e[1]])});
      if (mapped != original_pairs) return;
      vertex_autos.push_back(std::move(sigma));
    });
  }

  // Edge groups by normalized endpoint pair.
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (int e = 0; e < ne; ++e)
    groups[{std::min(graph.edges[e][0], graph.edges[e][1]),
            std::max(graph.edges[e][0], graph.edges[e][1])}]
        .push_back(e);

  std::vector<HalfEdgePerm> result;
  for (const auto& sigma : vertex_autos) {
    // Per-group bijections onto the image group, then loop orientations.
    std::vector<std::pair<const std::vector<int>*, const std::vector<int>*>> group_maps;
    bool feasible = true;
    for (const auto& [pair, edges_in] : groups) {
      std::pair<int, int> image{std::min(sigma[pair.first], sigma[pair.second]),
                                std::max(sigma[pair.first], sigma[pair.second])};
      auto it = groups.find(image);
      if (it == groups.end() || it->second.size() != edges_in.size()) {
        feasible = false;
        break;
      }
      group_maps.push_back({&edges_in, &it->second});
    }
    if (!feasible) continue;

    HalfEdgePerm perm(2 * ne, -1);
    std::function<void(std::size_t)> assign = [&](std::size_t gi) {
      if (gi == group_maps.size()) {
        result.push_back(perm);
        return;
      }
      const auto& src = *group_maps[gi].first;
      std::vector<int> dst = *group_maps[gi].second;
      std::sort(dst.begin(), dst.end());
      do {
        // Map edge src[t] -> dst[t]; enumerate loop orientations.
        std::function<void(std::size_t)> orient = [&](std::size_t t) {
          if (t == src.size()) {
            assign(gi + 1);
            return;
          }
          int e = src[t], f = dst[t];
          bool loop = graph.edges[e][0] == graph.edges[e][1];
          if (loop) {
            perm[2 * e] = 2 * f;
            perm[2 * e + 1] = 2 * f + 1;
            orient(t + 1);
            perm[2 * e] = 2 * f + 1;
            perm[2 * e + 1] = 2 * f;
            orient(t + 1);
          } else {
            int image_of_side0 = sigma[graph.edges[e][0]];
            if (graph.edges[f][0] == image_of_side0) {
              perm[2 * e] = 2 * f;
              perm[2 * e + 1] = 2 * f + 1;
            } else {
              perm[2 * e] = 2 * f + 1;
              perm[2 * e + 1] = 2 * f;
            }
            orient(t + 1);
          }
        };
        orient(0);
      } while (std::next_permutation(dst.begin(), dst.end()));
    };
    assign(0);
  }
  return result;
}

std::uint64_t aut_order(const StableGraph& graph) {
  return static_cast<std::uint64_t>(halfedge_automorphisms(graph).size());
}

namespace {

void for_each_composition(int total, int parts, std::vector<int>& current,
                          const std::function<void(const std::vector<int>&)>& fn) {
  if (parts == 1) {
    current.push_back(total);
    fn(current);
    current.pop_back();
    return;
  }
  for (int first = 0; first <= total; ++first) {
    current.push_back(first);
    for_each_composition(total - first, parts - 1, current, fn);
    current.pop_back();
  }
}

// All multigraphs (multiplicity per vertex pair, loops included) realizing
// the degree vector; pairs in lex order, vertex i finished after its last
// pair so its remaining degree prunes exactly.
void multigraphs_with_degrees(int k, const std::vector<int>& degrees,
                              std::vector<std::vector<int>>& out) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) pairs.emplace_back(i, j);
  std::vector<int> remaining = degrees;
  std::vector<int> mult(pairs.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (p == pairs.size()) {
      for (int r : remaining)
        if (r != 0) return;
      out.push_back(mult);
      return;
    }
    auto [i, j] = pairs[p];
    bool last_for_i = (j == k - 1);
    int limit = (i == j) ? remaining[i] / 2 : std::min(remaining[i], remaining[j]);
    for (int c = 0; c <= limit; ++c) {
      remaining[i] -= (i == j) ? 2 * c : c;
      if (i != j) remaining[j] -= c;
      mult[p] = c;
      if (!last_for_i || remaining[i] == 0) rec(p + 1);
      remaining[i] += (i == j) ? 2 * c : c;
      if (i != j) remaining[j] += c;
      mult[p] = 0;
    }
  };
  rec(0);
}

}  // namespace

std::vector<EnumeratedGraph> enumerate_stable_graphs(int g, int n, int max_edges) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0)
    throw StabilityError("(g,n)=(" + std::to_string(g) + "," + std::to_string(n) +
                         ") violates 2g-2+n>0");
  const int budget = 2 * g - 2 + n;

  std::map<std::string, StableGraph> found;
  for (int k = 1; k <= budget; ++k) {
    int edge_cap = k - 1 + g;
    if (max_edges >= 0) edge_cap = std::min(edge_cap, max_edges);
    for (int ne = k - 1; ne <= edge_cap; ++ne) {
      const int h1 = ne - k + 1;
      const int genus_sum = g - h1;
      if (genus_sum < 0) continue;

      // Multigraph lists are shared across genus and leg assignments.
      std::map<std::vector<int>, std::vector<std::vector<int>>> multigraph_memo;

      std::vector<int> scratch;
      for_each_composition(genus_sum, k, scratch, [&](const std::vector<int>& genus_vec) {
        std::vector<int> legs_at(k, 0);
        std::vector<int> leg_vec(n, 0);
        while (true) {
          std::fill(legs_at.begin(), legs_at.end(), 0);
          for (int lv : leg_vec) ++legs_at[lv];

          std::vector<int> lower(k);
          int lower_sum = 0;
          for (int v = 0; v < k; ++v) {
            lower[v] = std::max(k > 1 ? 1 : 0, 3 - 2 * genus_vec[v] - legs_at[v]);
            lower[v] = std::max(lower[v], 0);
            lower_sum += lower[v];
          }
          if (lower_sum <= 2 * ne) {
            std::vector<int> scratch2;
            for_each_composition(2 * ne - lower_sum, k, scratch2, [&](const std::vector<int>& extra) {
              std::vector<int> degrees(k);
              for (int v = 0; v < k; ++v) degrees[v] = lower[v] + extra[v];
              auto memo_it = multigraph_memo.find(degrees);
              if (memo_it == multigraph_memo.end()) {
                std::vector<std::vector<int>> lists;
                multigraphs_with_degrees(k, degrees, lists);
                memo_it = multigraph_memo.emplace(degrees, std::move(lists)).first;
              }
              for (const auto& mult : memo_it->second) {
                StableGraph graph;
                graph.vertex_genus = genus_vec;
                graph.leg_vertex = leg_vec;
                int p = 0;
                for (int i = 0; i < k; ++i)
                  for (int j = i; j < k; ++j, ++p)
                    for (int c = 0; c < mult[p]; ++c) graph.edges.push_back({i, j});
                if (!graph.is_connected()) continue;
                std::string key = canonical_key(graph);
                if (!found.contains(key)) found.emplace(std::move(key), canonicalize(graph).graph);
              }
            });
          }

          // Odometer over leg assignments.
          int pos = n - 1;
          while (pos >= 0) {
            if (++leg_vec[pos] < k) break;
            leg_vec[pos] = 0;
            --pos;
          }
          if (pos < 0) break;
        }
      });
    }
  }

  std::vector<EnumeratedGraph> result;
  result.reserve(found.size());
  for (auto& [key, graph] : found) {
    EnumeratedGraph eg;
    eg.aut = aut_order(graph);
    eg.graph = std::move(graph);
    result.push_back(std::move(eg));
  }
  return result;
}

void for_each_module_assignment(const StableGraph& graph, const FusionDatum& datum,
                                const std::function<void(const std::vector<int>&)>& fn) {
  const int ne = graph.num_edges();
  const int m = datum.size();
  std::vector<int> choice(ne, 0);
  std::vector<int> mu(2 * ne, 0);
  while (true) {
    for (int e = 0; e < ne; ++e) {
      mu[2 * e] = choice[e];
      mu[2 * e + 1] = datum.dual(choice[e]);
    }
    fn(mu);
    int pos = ne - 1;
    while (pos >= 0) {
      if (++choice[pos] < m) break;
      choice[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

std::vector<std::vector<int>> module_assignments(const StableGraph& graph, const FusionDatum& datum) {
  std::vector<std::vector<int>> all;
  for_each_module_assignment(graph, datum, [&](const std::vector<int>& mu) { all.push_back(mu); });
  return all;
}

}  // namespace cohft
