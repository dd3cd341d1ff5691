/*
 * Copyright 2026 The qsg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "qsg/arena.hpp"
#include "qsg/errors.hpp"
#include "qsg/rational.hpp"

namespace qsg {

/// Adjacency view over (a subset of) an arena's edges. Edge ids refer back
/// to the arena so weights stay in one place.
struct Digraph {
    std::vector<std::vector<std::pair<Vertex, EdgeId>>> adj;

    std::size_t size() const { return adj.size(); }

    static Digraph of(const Arena& a) {
      Digraph g;
      g.adj.resize(a.size());
      for (EdgeId e = 0; e < static_cast<EdgeId>(a.edge_count()); ++e)
        g.adj[a.edge(e).src].emplace_back(a.edge(e).dst, e);
      return g;
    }

    /// Keeps edges whose endpoints are both in `scope` and that pass `keep`.
    static Digraph of(const Arena& a, const std::vector<char>& scope,
                      const std::function<bool(EdgeId)>& keep = {}) {
      Digraph g;
      g.adj.resize(a.size());
      for (EdgeId e = 0; e < static_cast<EdgeId>(a.edge_count()); ++e) {
        const Edge& ed = a.edge(e);
        if (scope[ed.src] && scope[ed.dst] && (!keep || keep(e)))
          g.adj[ed.src].emplace_back(ed.dst, e);
      }
      return g;
    }

    /// One-player graph left after `player` commits to a positional choice.
    static Digraph under_choice(const Arena& a, Player player, const std::vector<Vertex>& choice) {
      Digraph g;
      g.adj.resize(a.size());
      for (EdgeId e = 0; e < static_cast<EdgeId>(a.edge_count()); ++e) {
        const Edge& ed = a.edge(e);
        if (a.owner(ed.src) != player || choice[ed.src] == ed.dst)
          g.adj[ed.src].emplace_back(ed.dst, e);
      }
      return g;
    }
};

inline std::vector<char> vertex_mask(std::size_t n, const std::vector<Vertex>& vs) {
  std::vector<char> m(n, 0);
  for (Vertex v : vs)
    m[v] = 1;
  return m;
}

inline std::vector<char> reachable_from(const Digraph& g, const std::vector<Vertex>& roots) {
  std::vector<char> seen(g.size(), 0);
  std::vector<Vertex> stack;
  for (Vertex r : roots)
    if (!seen[r]) {
      seen[r] = 1;
      stack.push_back(r);
    }
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (auto [v, e] : g.adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  return seen;
}

/// Shortest path (fewest edges) from `from` to `to` inside `allowed`,
/// endpoints included. Empty if unreachable.
inline std::vector<Vertex> bfs_path(const Digraph& g, Vertex from, Vertex to, const std::vector<char>& allowed) {
  if (!allowed[from] || !allowed[to])
    return {};
  std::vector<Vertex> parent(g.size(), -2);
  std::vector<Vertex> queue{from};
  parent[from] = -1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Vertex u = queue[i];
    if (u == to)
      break;
    for (auto [v, e] : g.adj[u])
      if (allowed[v] && parent[v] == -2) {
        parent[v] = u;
        queue.push_back(v);
      }
  }
  if (parent[to] == -2)
    return {};
  std::vector<Vertex> path;
  for (Vertex x = to; x != -1; x = parent[x])
    path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Strongly connected components

struct SccDecomposition {
    std::vector<std::vector<Vertex>> components;  // each sorted; ordered by least member
    std::vector<int> componentOf;
    std::set<std::pair<int, int>> condensation;
    std::vector<char> hasSelfLoop;

    /// Component containing at least one cycle.
    bool nontrivial(int c) const { return components[c].size() > 1 || hasSelfLoop[c]; }
};

inline SccDecomposition scc_decompose(const Digraph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> onStack(n, 0);
  std::vector<Vertex> stack;
  std::vector<std::vector<Vertex>> raw;
  int counter = 0;
  struct Frame { Vertex v; std::size_t next; };
  std::vector<Frame> call;
  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != -1)
      continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    onStack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < g.adj[f.v].size()) {
        Vertex w = g.adj[f.v][f.next++].first;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          onStack[w] = 1;
          call.push_back({w, 0});
        } else if (onStack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      Vertex v = f.v;
      call.pop_back();
      if (!call.empty())
        low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<Vertex> members;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          onStack[w] = 0;
          members.push_back(w);
        } while (w != v);
        std::sort(members.begin(), members.end());
        raw.push_back(std::move(members));
      }
    }
  }
  std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
  SccDecomposition d;
  d.components = std::move(raw);
  d.componentOf.assign(n, -1);
  d.hasSelfLoop.assign(d.components.size(), 0);
  for (int c = 0; c < static_cast<int>(d.components.size()); ++c)
    for (Vertex v : d.components[c])
      d.componentOf[v] = c;
  for (Vertex u = 0; u < n; ++u)
    for (auto [v, e] : g.adj[u]) {
      if (u == v)
        d.hasSelfLoop[d.componentOf[u]] = 1;
      if (d.componentOf[u] != d.componentOf[v])
        d.condensation.emplace(d.componentOf[u], d.componentOf[v]);
    }
  return d;
}

inline SccDecomposition scc_decompose(const Arena& a) { return scc_decompose(Digraph::of(a)); }

// ---------------------------------------------------------------------------
// Simple cycles

/// Closed sequence of distinct vertices; the edge back to the front is implied.
using Cycle = std::vector<Vertex>;

struct CycleList {
    std::vector<Cycle> cycles;
    std::vector<std::pair<Rational, Rational>> meanPoints;
};

inline Rational path_weight(const Arena& a, const std::vector<Vertex>& seq, int dim, bool closed) {
  Rational s;
  std::size_t k = closed ? seq.size() : seq.size() - 1;
  for (std::size_t i = 0; i < k; ++i) {
    auto e = a.edge_between(seq[i], seq[(i + 1) % seq.size()]);
    if (!e)
      throw ModelError("sequence step is not an edge");
    s += a.edge(*e).weight(dim);
  }
  return s;
}

inline std::pair<Rational, Rational> cycle_mean(const Arena& a, const Cycle& c) {
  Rational len(static_cast<long>(c.size()));
  return {path_weight(a, c, 0, true) / len, path_weight(a, c, 1, true) / len};
}

inline Cycle canonical_rotation(Cycle c) {
  std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
  return c;
}

/// Johnson's algorithm. Each elementary cycle is reported once, starting at
/// its least vertex; start vertices are visited in increasing order.
/// `visit` may return false to stop early. Throws BudgetExceeded past `cap`.
inline void for_each_simple_cycle(const Digraph& g, const std::function<bool(const Cycle&)>& visit,
                                  std::uint64_t cap = Budget::defaults().cycles) {
  const int n = static_cast<int>(g.size());
  std::uint64_t found = 0;
  std::vector<char> blocked(n, 0);
  std::vector<std::set<Vertex>> blockMap(n);
  for (Vertex s = 0; s < n; ++s) {
    // SCC of s in the subgraph induced by vertices >= s.
    Digraph sub;
    sub.adj.resize(n);
    for (Vertex u = s; u < n; ++u)
      for (auto [v, e] : g.adj[u])
        if (v >= s)
          sub.adj[u].emplace_back(v, e);
    auto scc = scc_decompose(sub);
    int cs = scc.componentOf[s];
    if (!scc.nontrivial(cs))
      continue;
    std::vector<char> inComp(n, 0);
    for (Vertex v : scc.components[cs]) {
      inComp[v] = 1;
      blocked[v] = 0;
      blockMap[v].clear();
    }
    auto unblock = [&](Vertex u) {
      std::vector<Vertex> work{u};
      while (!work.empty()) {
        Vertex x = work.back();
        work.pop_back();
        if (!blocked[x])
          continue;
        blocked[x] = 0;
        for (Vertex w : blockMap[x])
          work.push_back(w);
        blockMap[x].clear();
      }
    };
    struct Frame { Vertex v; std::size_t next; bool closed; };
    std::vector<Frame> call{{s, 0, false}};
    std::vector<Vertex> path{s};
    blocked[s] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& out = sub.adj[f.v];
      if (f.next < out.size()) {
        Vertex w = out[f.next++].first;
        if (!inComp[w])
          continue;
        if (w == s) {
          if (++found > cap)
            throw BudgetExceeded("simple cycles", cap);
          if (!visit(path))
            return;
          f.closed = true;
        } else if (!blocked[w]) {
          blocked[w] = 1;
          path.push_back(w);
          call.push_back({w, 0, false});
        }
        continue;
      }
      Vertex v = f.v;
      bool closed = f.closed;
      if (closed) {
        unblock(v);
      } else {
        for (auto [w, e] : out)
          if (inComp[w])
            blockMap[w].insert(v);
      }
      call.pop_back();
      path.pop_back();
      if (!call.empty() && closed)
        call.back().closed = true;
    }
  }
}

inline CycleList enumerate_simple_cycles(const Arena& a, const std::vector<Vertex>& scope,
                                         std::uint64_t cap = Budget::defaults().cycles) {
  CycleList out;
  for_each_simple_cycle(
      Digraph::of(a, vertex_mask(a.size(), scope)),
      [&](const Cycle& c) {
        out.cycles.push_back(c);
        out.meanPoints.push_back(cycle_mean(a, c));
        return true;
      },
      cap);
  return out;
}

// ---------------------------------------------------------------------------
// Mean cycles

struct MeanCycle {
    Rational value;
    Cycle cycle;
};

namespace detail {

/// Karp's maximum cycle mean on one strongly connected component.
inline MeanCycle karp_component(const Digraph& g, const std::vector<Vertex>& comp,
                                const std::function<Rational(EdgeId)>& w, const std::vector<int>& componentOf,
                                int cid) {
  const int k = static_cast<int>(comp.size());
  std::vector<int> local(g.size(), -1);
  for (int i = 0; i < k; ++i)
    local[comp[i]] = i;
  struct LEdge { int u, v; Rational w; };
  std::vector<LEdge> edges;
  for (Vertex u : comp)
    for (auto [v, e] : g.adj[u])
      if (componentOf[v] == cid)
        edges.push_back({local[u], local[v], w(e)});

  std::vector<std::vector<std::optional<Rational>>> D(k + 1, std::vector<std::optional<Rational>>(k));
  D[0][0] = Rational(0);
  for (int j = 1; j <= k; ++j)
    for (auto& e : edges)
      if (D[j - 1][e.u]) {
        Rational cand = *D[j - 1][e.u] + e.w;
        if (!D[j][e.v] || *D[j][e.v] < cand)
          D[j][e.v] = cand;
      }
  std::optional<Rational> best;
  for (int v = 0; v < k; ++v) {
    if (!D[k][v])
      continue;
    std::optional<Rational> worst;
    for (int j = 0; j < k; ++j)
      if (D[j][v]) {
        Rational r = (*D[k][v] - *D[j][v]) / Rational(static_cast<long>(k - j));
        if (!worst || r < *worst)
          worst = r;
      }
    if (worst && (!best || *best < *worst))
      best = worst;
  }
  Rational mu = *best;
  return {mu, {}};
}

}  // namespace detail

/// Edges of the component `comp` that are tight for w - mu under
/// longest-path potentials. When mu is the maximum cycle mean of the
/// component, its cycles are exactly the cycles of mean mu.
inline Digraph tight_subgraph(const Digraph& g, const std::vector<Vertex>& comp,
                              const std::function<Rational(EdgeId)>& w, const Rational& mu) {
  auto inComp = vertex_mask(g.size(), comp);
  struct E { Vertex u, v; EdgeId id; Rational w; };
  std::vector<E> edges;
  for (Vertex u : comp)
    for (auto [v, e] : g.adj[u])
      if (inComp[v])
        edges.push_back({u, v, e, w(e) - mu});
  std::vector<Rational> pot(g.size());
  for (std::size_t it = 0; it < comp.size(); ++it) {
    bool changed = false;
    for (auto& e : edges)
      if (pot[e.v] < pot[e.u] + e.w) {
        pot[e.v] = pot[e.u] + e.w;
        changed = true;
      }
    if (!changed)
      break;
  }
  Digraph t;
  t.adj.resize(g.size());
  for (auto& e : edges)
    if (pot[e.u] + e.w == pot[e.v])
      t.adj[e.u].emplace_back(e.v, e.id);
  return t;
}

/// Some cycle of g (restricted to its nontrivial SCCs), least vertex first.
inline std::optional<Cycle> any_cycle(const Digraph& g) {
  auto scc = scc_decompose(g);
  for (int c = 0; c < static_cast<int>(scc.components.size()); ++c) {
    if (!scc.nontrivial(c))
      continue;
    std::vector<int> pos(g.size(), -1);
    std::vector<Vertex> walk;
    Vertex x = scc.components[c].front();
    while (pos[x] == -1) {
      pos[x] = static_cast<int>(walk.size());
      walk.push_back(x);
      for (auto [y, unused] : g.adj[x])
        if (scc.componentOf[y] == c) {
          x = y;
          break;
        }
    }
    return canonical_rotation(Cycle(walk.begin() + pos[x], walk.end()));
  }
  return std::nullopt;
}

namespace detail {

inline MeanCycle karp_with_cycle(const Digraph& g, const std::vector<Vertex>& comp,
                                 const std::function<Rational(EdgeId)>& w, const std::vector<int>& componentOf,
                                 int cid) {
  MeanCycle m = karp_component(g, comp, w, componentOf, cid);
  auto c = any_cycle(tight_subgraph(g, comp, w, m.value));
  if (!c)
    throw std::logic_error("karp: no tight cycle");
  m.cycle = std::move(*c);
  return m;
}

}  // namespace detail

/// Maximum cycle mean of `w` over all cycles of g; nullopt if g is acyclic.
/// Ties between components go to the one with the least vertex.
inline std::optional<MeanCycle> max_mean_cycle(const Digraph& g, const std::function<Rational(EdgeId)>& w) {
  auto scc = scc_decompose(g);
  std::optional<MeanCycle> best;
  for (int c = 0; c < static_cast<int>(scc.components.size()); ++c) {
    if (!scc.nontrivial(c))
      continue;
    auto mc = detail::karp_with_cycle(g, scc.components[c], w, scc.componentOf, c);
    if (!best || best->value < mc.value)
      best = std::move(mc);
  }
  return best;
}

inline std::optional<MeanCycle> min_mean_cycle(const Digraph& g, const std::function<Rational(EdgeId)>& w) {
  auto r = max_mean_cycle(g, [&](EdgeId e) { return -w(e); });
  if (r)
    r->value = -r->value;
  return r;
}

/// Arena-level form: maximum mean in dimension `dim` over cycles inside
/// `scope`, returned with a lasso (empty prefix) realising it.
inline std::pair<Rational, Lasso> max_mean_cycle(const Arena& a, int dim, const std::vector<Vertex>& scope) {
  auto g = Digraph::of(a, vertex_mask(a.size(), scope));
  auto r = max_mean_cycle(g, [&](EdgeId e) { return a.edge(e).weight(dim); });
  if (!r)
    throw ModelError("scope contains no cycle");
  return {r->value, Lasso{{}, r->cycle}};
}

// ---------------------------------------------------------------------------
// Payoffs of lassos

enum class PayoffKind { MeanPayoff, DiscountedSum };

/// Discounted sum of the finite path seq[0] -> ... -> seq.back().
inline Rational ds_of_path(const Arena& a, const std::vector<Vertex>& seq, int dim, const Rational& lambda) {
  Rational s, f(1);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    s += f * a.edge(*a.edge_between(seq[i], seq[i + 1])).weight(dim);
    f *= lambda;
  }
  return s;
}

inline std::pair<Rational, Rational> mp_of_lasso(const Arena& a, const Lasso& l) {
  l.validate(a);
  return cycle_mean(a, l.cycle);
}

inline std::pair<Rational, Rational> ds_of_lasso(const Arena& a, const Lasso& l, const Rational& lambda) {
  l.validate(a);
  if (lambda <= Rational(0) || lambda >= Rational(1))
    throw ModelError("discount factor must lie in (0,1)");
  std::vector<Vertex> head = l.prefix;
  head.push_back(l.cycle.front());
  std::vector<Vertex> loop = l.cycle;
  loop.push_back(l.cycle.front());
  Rational lp = pow(lambda, l.prefix.size());
  Rational lc = pow(lambda, l.cycle.size());
  std::pair<Rational, Rational> out;
  for (int d = 0; d < 2; ++d) {
    Rational v = ds_of_path(a, head, d, lambda) + lp * ds_of_path(a, loop, d, lambda) / (Rational(1) - lc);
    (d == 0 ? out.first : out.second) = v;
  }
  return out;
}

inline std::pair<Rational, Rational> payoff_of_lasso(const Arena& a, const Lasso& l, PayoffKind kind,
                                                     const Rational& lambda = Rational(1, 2)) {
  return kind == PayoffKind::MeanPayoff ? mp_of_lasso(a, l) : ds_of_lasso(a, l, lambda);
}

}  // namespace qsg
