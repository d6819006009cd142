#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "smallness/rational.hpp"
#include "smallness/subset.hpp"

namespace smallness {

// Simple graph on [n] with nonnegative rational edge weights.
class WeightedGraph {
 public:
  struct Edge {
    int u, v;  // u < v after normalization
    Rat w;
  };

  WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 1 || n > kMaxGroundSet) throw std::invalid_argument("vertex count out of range");
    adj_.assign(n, 0);
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    for (auto& e : edges_) {
      if (e.u == e.v) throw std::invalid_argument("loop edge");
      if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
      if (e.u > e.v) std::swap(e.u, e.v);
      if (seen[e.u][e.v]) throw std::invalid_argument("duplicate edge");
      seen[e.u][e.v] = true;
      if (e.w < 0) throw std::invalid_argument("negative edge weight");
      adj_[e.u] |= Mask{1} << e.v;
      adj_[e.v] |= Mask{1} << e.u;
    }
  }

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  Mask adjacency(int v) const { return adj_[v]; }
  int degree(int v) const { return popcount(adj_[v]); }
  long edge_count() const { return static_cast<long>(edges_.size()); }

  Rat total_weight() const {
    Rat w = 0;
    for (auto& e : edges_) w += e.w;
    return w;
  }

  // lambda(G[u]): weight of edges with both endpoints in u.
  Rat induced_weight(Mask u) const {
    check_mask(u);
    Rat w = 0;
    for (auto& e : edges_)
      if (test_bit(u, e.u) && test_bit(u, e.v)) w += e.w;
    return w;
  }

  // Unweighted |G[u]| via adjacency masks.
  long induced_edge_count(Mask u) const {
    check_mask(u);
    long twice = 0;
    Mask m = u;
    while (m) {
      int v = std::countr_zero(m);
      m &= m - 1;
      twice += popcount(adj_[v] & u);
    }
    return twice / 2;
  }

  // lambda(D(u)) = sum_e w_e |e cap u| / 2 = half the weight of stars at u.
  Rat boundary_weight(Mask u) const {
    check_mask(u);
    Rat w = 0;
    for (auto& e : edges_) {
      int c = (test_bit(u, e.u) ? 1 : 0) + (test_bit(u, e.v) ? 1 : 0);
      if (c) w += e.w * c;
    }
    return w / 2;
  }

  // Twice |D(u)| for the unweighted graph: sum of full-graph degrees over u.
  long boundary_degree_sum(Mask u) const {
    check_mask(u);
    long s = 0;
    Mask m = u;
    while (m) {
      int v = std::countr_zero(m);
      m &= m - 1;
      s += degree(v);
    }
    return s;
  }

 private:
  void check_mask(Mask u) const {
    if ((u & ~full_mask(n_)) != 0) throw std::invalid_argument("subset outside vertex set");
  }
  int n_;
  std::vector<Edge> edges_;
  std::vector<Mask> adj_;
};

// Result of rounding weights down to powers of two. Class i holds the edges
// whose scaled weight rounds to theta_i = 2^-i (i >= 1); zero-weight edges are
// dropped. scale maps original to scaled weights: w_scaled = w * scale.
struct DyadicDecomposition {
  Rat scale;
  std::map<long, std::vector<int>> classes;  // class index i -> edge indices

  static Rat theta(long i) { return pow2(-i); }
};

// Scales so the max weight is 1 (inside the required (1/2, 1]), then maps each
// positive weight to the largest 2^-i, i >= 1, not exceeding it. Guarantees
// theta_i <= w_scaled <= 2 theta_i on the support (strict right inequality
// except at w_scaled = 1, where theta_1 = 1/2 is the best i >= 1 allows).
inline DyadicDecomposition round_down_dyadic(const WeightedGraph& g) {
  Rat wmax = 0;
  for (auto& e : g.edges()) wmax = std::max(wmax, e.w);
  if (wmax == 0) throw std::invalid_argument("all edge weights are zero");
  DyadicDecomposition out;
  out.scale = 1 / wmax;
  for (int idx = 0; idx < static_cast<int>(g.edges().size()); ++idx) {
    const Rat& w = g.edges()[idx].w;
    if (w == 0) continue;
    Rat ws = w * out.scale;
    long i = 1;
    while (pow2(-i) > ws) ++i;
    out.classes[i].push_back(idx);
  }
  return out;
}

inline Rat rounded_weight(const WeightedGraph& g, const DyadicDecomposition& d, Mask u) {
  Rat w = 0;
  for (auto& [i, idxs] : d.classes) {
    long cnt = 0;
    for (int idx : idxs) {
      const auto& e = g.edges()[idx];
      if (test_bit(u, e.u) && test_bit(u, e.v)) ++cnt;
    }
    if (cnt) w += Rat(cnt) * DyadicDecomposition::theta(i);
  }
  return w;
}

// The class-i subgraph as an unweighted graph on the same vertex set.
inline WeightedGraph class_subgraph(const WeightedGraph& g, const std::vector<int>& edge_idxs) {
  std::vector<WeightedGraph::Edge> edges;
  edges.reserve(edge_idxs.size());
  for (int idx : edge_idxs) edges.push_back({g.edges()[idx].u, g.edges()[idx].v, 1});
  return WeightedGraph(g.n(), std::move(edges));
}

}  // namespace smallness
