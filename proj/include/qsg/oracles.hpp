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

// Slow reference implementations for cross-checking the solvers. Nothing in
// here calls into graph.hpp, geometry.hpp, zerosum.hpp or the engines; only
// the arena data structures and exact rationals are shared.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qsg/arena.hpp"
#include "qsg/errors.hpp"

namespace qsg {

struct OracleBudget {
    int memoryBound = 2;
    int horizonBound = 64;          // longest cycle/lasso considered
    Rational gridPitch{1, 1024};
    std::uint64_t maxStrategies = 1000000;
};

struct Bracket {
    Rational lower;
    Rational upper;
    int memoryUsed = 0;
    std::uint64_t strategiesTried = 0;
    bool contains(const Rational& x) const { return lower <= x && x <= upper; }
};

namespace oracle_detail {

/// Small explicit graph: per node, successor list with weight pairs.
struct Graph {
    struct Arc { int to; Rational w0, w1; };
    std::vector<std::vector<Arc>> out;
    int start = 0;
};

/// Every simple cycle reachable from g.start, as a callback over its arcs'
/// summed weights and length. Plain DFS rooted at the least node.
inline void simple_cycles(const Graph& g, int maxLen,
                          const std::function<void(const Rational&, const Rational&, int)>& visit) {
  const int n = static_cast<int>(g.out.size());
  std::vector<char> reach(n, 0);
  std::vector<int> stack{g.start};
  reach[g.start] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (auto& arc : g.out[u])
      if (!reach[arc.to]) {
        reach[arc.to] = 1;
        stack.push_back(arc.to);
      }
  }
  std::vector<char> on(n, 0);
  std::function<void(int, int, Rational, Rational, int)> dfs = [&](int root, int u, Rational s0, Rational s1,
                                                                   int len) {
    if (len >= maxLen)
      return;
    for (auto& arc : g.out[u]) {
      if (arc.to == root) {
        visit(s0 + arc.w0, s1 + arc.w1, len + 1);
      } else if (arc.to > root && !on[arc.to] && reach[arc.to]) {
        on[arc.to] = 1;
        dfs(root, arc.to, s0 + arc.w0, s1 + arc.w1, len + 1);
        on[arc.to] = 0;
      }
    }
  };
  for (int r = 0; r < n; ++r)
    if (reach[r]) {
      on[r] = 1;
      dfs(r, r, 0, 0, 0);
      on[r] = 0;
    }
}

/// The arena with player 0 fixed to `s`, restricted to what is reachable.
inline Graph fix_leader(const Arena& a, const MealyStrategy& s, Vertex v) {
  Graph g;
  std::map<std::pair<Vertex, int>, int> id;
  std::vector<std::pair<Vertex, int>> todo;
  auto node = [&](Vertex u, int m) {
    auto [it, fresh] = id.emplace(std::make_pair(u, m), static_cast<int>(todo.size()));
    if (fresh) {
      todo.push_back({u, m});
      g.out.emplace_back();
    }
    return it->second;
  };
  g.start = node(v, s.update[s.initMemory][v]);
  for (std::size_t i = 0; i < todo.size(); ++i) {
    auto [u, m] = todo[i];
    for (EdgeId e : a.out(u)) {
      const Edge& ed = a.edge(e);
      if (a.owner(u) == Player::Zero && s.output[m][u] != ed.dst)
        continue;
      int to = node(ed.dst, s.update[m][ed.dst]);
      g.out[i].push_back({to, ed.w0, ed.w1});
    }
  }
  return g;
}

/// All Mealy strategies of player 0 with exactly `mem` states, initial
/// memory 0. Returns false if the visitor asked to stop.
inline std::uint64_t count_strategies(const Arena& a, int mem) {
  std::uint64_t total = 1;
  auto mul = [&](std::uint64_t k) {
    if (total > std::numeric_limits<std::uint64_t>::max() / std::max<std::uint64_t>(k, 1))
      total = std::numeric_limits<std::uint64_t>::max();
    else
      total *= k;
  };
  for (int m = 0; m < mem; ++m)
    for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u) {
      mul(static_cast<std::uint64_t>(mem));
      if (a.owner(u) == Player::Zero)
        mul(a.out(u).size());
    }
  return total;
}

inline void for_each_strategy(const Arena& a, int mem, const std::function<void(const MealyStrategy&)>& visit) {
  const int n = static_cast<int>(a.size());
  MealyStrategy s;
  s.player = Player::Zero;
  s.update.assign(mem, std::vector<int>(n, 0));
  s.output.assign(mem, std::vector<Vertex>(n, -1));
  // Odometer over (update digits, output digits).
  std::vector<int> digit, radix;
  for (int m = 0; m < mem; ++m)
    for (Vertex u = 0; u < n; ++u) {
      digit.push_back(0);
      radix.push_back(mem);
      if (a.owner(u) == Player::Zero) {
        digit.push_back(0);
        radix.push_back(static_cast<int>(a.out(u).size()));
      }
    }
  for (;;) {
    std::size_t k = 0;
    for (int m = 0; m < mem; ++m)
      for (Vertex u = 0; u < n; ++u) {
        s.update[m][u] = digit[k++];
        if (a.owner(u) == Player::Zero)
          s.output[m][u] = a.edge(a.out(u)[digit[k++]]).dst;
      }
    visit(s);
    std::size_t i = 0;
    while (i < digit.size() && ++digit[i] == radix[i])
      digit[i++] = 0;
    if (i == digit.size())
      return;
  }
}

/// inf of MP0 over player 1's optimal MP1 responses against a fixed leader:
/// optimal MP1 is the best reachable simple-cycle mean, and the worst MP0
/// among optimal plays is the worst MP0 mean over the optimal cycles.
inline std::pair<Rational, Rational> adversarial_mp(const Graph& g, int maxLen) {
  std::optional<Rational> best1, worst0;
  simple_cycles(g, maxLen, [&](const Rational& s0, const Rational& s1, int len) {
    Rational m0 = s0 / Rational(len), m1 = s1 / Rational(len);
    if (!best1 || m1 > *best1) {
      best1 = m1;
      worst0 = m0;
    } else if (m1 == *best1 && m0 < *worst0) {
      worst0 = m0;
    }
  });
  return {*worst0, *best1};
}

}  // namespace oracle_detail

/// Bracket on the adversarial Stackelberg value for mean payoff. Lower end:
/// best enumerated finite-memory leader. Upper end: a play from v with means
/// (x, y) can only be a witness for c < x when no player-1 memoryless
/// strategy tau from v keeps every cycle at MP0 <= c and MP1 >= y; checking
/// only v and only memoryless threats can only raise the bound.
inline Bracket brute_asv_mp(const Arena& a, Vertex v, const OracleBudget& budget = {}) {
  using namespace oracle_detail;
  Bracket br;
  std::uint64_t need = 0;
  for (int m = 1; m <= budget.memoryBound; ++m)
    need += count_strategies(a, m);
  if (need > budget.maxStrategies)
    throw BudgetExceeded("oracle strategies", budget.maxStrategies, std::to_string(need));
  std::optional<Rational> lower;
  for (int m = 1; m <= budget.memoryBound; ++m)
    for_each_strategy(a, m, [&](const MealyStrategy& s) {
      ++br.strategiesTried;
      auto [x, y] = adversarial_mp(fix_leader(a, s, v), budget.horizonBound);
      if (!lower || x > *lower)
        lower = x;
    });
  br.lower = *lower;
  br.memoryUsed = budget.memoryBound;

  // Threat quadrants from memoryless player-1 strategies.
  struct Quad { Rational c0, d0; };  // c >= c0 and d <= d0
  std::vector<Quad> threats;
  {
    const int n = static_cast<int>(a.size());
    std::vector<int> pick(n, 0);
    for (;;) {
      Graph g;
      g.out.resize(n);
      g.start = v;
      for (Vertex u = 0; u < n; ++u)
        for (std::size_t i = 0; i < a.out(u).size(); ++i)
          if (a.owner(u) == Player::Zero || static_cast<int>(i) == pick[u]) {
            const Edge& ed = a.edge(a.out(u)[i]);
            g.out[u].push_back({ed.dst, ed.w0, ed.w1});
          }
      std::optional<Rational> hi0, lo1;
      simple_cycles(g, n, [&](const Rational& s0, const Rational& s1, int len) {
        Rational m0 = s0 / Rational(len), m1 = s1 / Rational(len);
        if (!hi0 || m0 > *hi0)
          hi0 = m0;
        if (!lo1 || m1 < *lo1)
          lo1 = m1;
      });
      threats.push_back({*hi0, *lo1});
      Vertex u = 0;
      while (u < n && (a.owner(u) == Player::Zero || ++pick[u] == static_cast<int>(a.out(u).size()))) {
        pick[u] = 0;
        ++u;
      }
      if (u == n)
        break;
    }
  }
  // Mean points of all simple cycles reachable from v (whole arena).
  std::vector<std::pair<Rational, Rational>> pts;
  {
    Graph g;
    g.out.resize(a.size());
    g.start = v;
    for (const Edge& e : a.edges())
      g.out[e.src].push_back({e.dst, e.w0, e.w1});
    simple_cycles(g, static_cast<int>(a.size()), [&](const Rational& s0, const Rational& s1, int len) {
      pts.push_back({s0 / Rational(len), s1 / Rational(len)});
    });
  }
  // For y in (t_j, t_{j+1}] the admissible c are those below x and below
  // every threat with d0 >= y. Sup of x over the hull with y >= t is reached
  // on a segment between two mean points.
  std::vector<Rational> levels;
  for (auto& q : threats)
    levels.push_back(q.d0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  auto sup_x_above = [&](const Rational& t, bool strict) -> std::optional<Rational> {
    std::optional<Rational> best;
    auto take = [&](const Rational& x) {
      if (!best || x > *best)
        best = x;
    };
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i; j < pts.size(); ++j) {
        auto p = pts[i], q = pts[j];
        if (p.second < q.second)
          std::swap(p, q);
        // p.y >= q.y; the part of segment pq with y >= t (closure)
        if (p.second < t || (strict && p.second == t && q.second == t))
          continue;
        if (strict && p.second == t)
          continue;
        if (q.second >= t) {
          take(max(p.first, q.first));
        } else {
          Rational s = (t - q.second) / (p.second - q.second);
          take(max(p.first, q.first + s * (p.first - q.first)));
        }
      }
    return best;
  };
  std::optional<Rational> upper;
  auto consider = [&](const Rational& y0, bool strict) {
    // y ranges over (y0, next level] (strict) or y >= y0
    auto x = sup_x_above(y0, strict);
    if (!x)
      return;
    Rational c = *x;
    for (auto& q : threats)
      if (strict ? q.d0 > y0 : q.d0 >= y0)
        c = min(c, q.c0);
    if (!upper || c > *upper)
      upper = c;
  };
  Rational floorY = pts.front().second;
  for (auto& p : pts)
    floorY = min(floorY, p.second);
  consider(floorY, false);
  for (auto& t : levels)
    consider(t, true);
  br.upper = upper ? *upper : br.lower;
  br.upper = max(br.upper, br.lower);
  return br;
}

// ---------------------------------------------------------------------------
// Discounted sum

enum class OracleMode { Cooperative, Adversarial };

namespace oracle_detail {

/// DS of every lasso play from g.start obtained by walking g until a node
/// repeats; at each node every successor is tried.
inline void lasso_plays(const Graph& g, const Rational& lambda, int maxLen,
                        const std::function<void(const Rational&, const Rational&)>& visit) {
  std::vector<int> pos(g.out.size(), -1);
  std::vector<std::pair<Rational, Rational>> pre{{0, 0}};  // discounted prefix sums
  std::vector<Rational> disc{1};
  std::function<void(int, int)> walk = [&](int u, int depth) {
    if (depth > maxLen)
      return;
    pos[u] = depth;
    for (auto& arc : g.out[u]) {
      Rational f = disc[depth];
      std::pair<Rational, Rational> next{pre[depth].first + f * arc.w0, pre[depth].second + f * arc.w1};
      if (pos[arc.to] >= 0) {
        int k = pos[arc.to];
        // cycle from k to depth+1 repeats forever
        Rational ratio = (f * lambda) / disc[k];
        Rational c0 = next.first - pre[k].first, c1 = next.second - pre[k].second;
        visit(pre[k].first + c0 / (Rational(1) - ratio), pre[k].second + c1 / (Rational(1) - ratio));
      } else {
        pre.push_back(next);
        disc.push_back(f * lambda);
        walk(arc.to, depth + 1);
        pre.pop_back();
        disc.pop_back();
      }
    }
    pos[u] = -1;
  };
  walk(g.start, 0);
}

/// Exact Stackelberg value of a fixed leader: some optimal play of the
/// follower is positional on the leader-fixed graph, hence a lasso.
inline std::pair<Rational, Rational> stackelberg_ds(const Graph& g, const Rational& lambda, OracleMode mode,
                                                    int maxLen) {
  std::optional<Rational> best1, ext0;
  lasso_plays(g, lambda, maxLen, [&](const Rational& d0, const Rational& d1) {
    if (!best1 || d1 > *best1) {
      best1 = d1;
      ext0 = d0;
    } else if (d1 == *best1 && (mode == OracleMode::Cooperative ? d0 > *ext0 : d0 < *ext0)) {
      ext0 = d0;
    }
  });
  return {*ext0, *best1};
}

}  // namespace oracle_detail

/// Exact value of one leader strategy by play enumeration.
inline Rational brute_ds_strategy_value(const Arena& a, const Rational& lambda, const MealyStrategy& s, Vertex v,
                                        OracleMode mode, int maxLen = 64) {
  auto g = oracle_detail::fix_leader(a, s, v);
  return oracle_detail::stackelberg_ds(g, lambda, mode, std::max<int>(maxLen, static_cast<int>(g.out.size()))).first;
}

/// Bracket on the discounted Stackelberg value: lower end from enumerated
/// finite-memory leaders, upper end from the best DS0 of any play truncated
/// at horizonBound steps plus the tail bound.
inline Bracket brute_ds_value(const Arena& a, const Rational& lambda, Vertex v, OracleMode mode,
                              const OracleBudget& budget = {}) {
  using namespace oracle_detail;
  Bracket br;
  std::uint64_t need = 0;
  for (int m = 1; m <= budget.memoryBound; ++m)
    need += count_strategies(a, m);
  if (need > budget.maxStrategies)
    throw BudgetExceeded("oracle strategies", budget.maxStrategies, std::to_string(need));
  std::optional<Rational> lower;
  for (int m = 1; m <= budget.memoryBound; ++m)
    for_each_strategy(a, m, [&](const MealyStrategy& s) {
      ++br.strategiesTried;
      auto g = fix_leader(a, s, v);
      auto x = stackelberg_ds(g, lambda, mode, static_cast<int>(g.out.size()) + 1).first;
      if (!lower || x > *lower)
        lower = x;
    });
  br.lower = *lower;
  br.memoryUsed = budget.memoryBound;
  // K-step cooperative optimum by backward induction.
  const int K = budget.horizonBound;
  std::vector<Rational> x(a.size());
  Rational W = 0;
  for (const Edge& e : a.edges())
    W = max(W, max(abs(e.w0), abs(e.w1)));
  for (int k = 0; k < K; ++k) {
    std::vector<Rational> y(a.size());
    for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u) {
      std::optional<Rational> b;
      for (EdgeId e : a.out(u)) {
        Rational q = a.edge(e).w0 + lambda * x[a.edge(e).dst];
        if (!b || q > *b)
          b = q;
      }
      y[u] = *b;
    }
    x = std::move(y);
  }
  br.upper = x[v] + pow(lambda, K) * W / (Rational(1) - lambda);
  return br;
}

// ---------------------------------------------------------------------------
// Probe for the game without best responses

/// The leader in the three-vertex game without best responses that, after player 1 has
/// looped k times at vertex 1, cycles through one 2-loop and k visits of the
/// heavier side. Returns MP1 of the responses "loop k times" and "loop k+1
/// times", from simulating the counter strategy until its state repeats.
inline std::pair<Rational, Rational> fig1_no_br_probe(long k) {
  if (k < 0)
    throw ModelError("k must be non-negative");
  auto mp1 = [](long loops) {
    // State: (vertex, phase); phase counts steps into the leader's pattern.
    // Weights on dimension 1: 1->1: 0, 1->2: 0, 2->2: 1, 2->3: 2, 3->3: 2, 3->2: 1.
    auto w1 = [](int from, int to) -> long {
      if (from == 1)
        return 0;
      if (to == 2)
        return 1;
      return 2;
    };
    std::vector<std::pair<int, long>> trace;
    std::map<std::pair<int, long>, std::size_t> seen;
    int at = 1;
    long phase = 0, waited = 0;
    std::vector<long> weights;
    for (;;) {
      std::pair<int, long> state{at, at == 1 ? -1 - waited : phase};
      if (auto it = seen.find(state); it != seen.end()) {
        long sum = 0;
        for (std::size_t i = it->second; i < weights.size(); ++i)
          sum += weights[i];
        return Rational(sum, static_cast<long>(weights.size() - it->second));
      }
      seen.emplace(state, weights.size());
      int next;
      if (at == 1) {
        next = waited < loops ? 1 : 2;
        ++waited;
      } else {
        // Pattern of length loops+1 started on arrival at 2: with loops = 0
        // stay on the 2-loop; otherwise go 2 -> 3, stay at 3 for loops-1
        // steps, then come back to 2.
        if (loops == 0)
          next = 2;
        else if (phase == 0)
          next = 3;
        else if (phase < loops)
          next = 3;
        else
          next = 2;
        phase = (phase + 1) % (loops + 1);
      }
      weights.push_back(w1(at, next));
      at = next;
    }
  };
  return {mp1(k), mp1(k + 1)};
}

/// Bisection on a monotone predicate p(c) = "value > c" over [lo, hi] down to
/// the given pitch. Returns the final interval.
inline std::pair<Rational, Rational> bisect_value(const std::function<bool(const Rational&)>& above, Rational lo,
                                                  Rational hi, const Rational& pitch) {
  while (hi - lo > pitch) {
    Rational mid = (lo + hi) / Rational(2);
    if (above(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

}  // namespace qsg
