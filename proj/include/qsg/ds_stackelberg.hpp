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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsg/arena.hpp"
#include "qsg/errors.hpp"
#include "qsg/zerosum.hpp"

namespace qsg {

enum class Semantics { Cooperative, Adversarial };

inline const char* to_string(Semantics s) { return s == Semantics::Cooperative ? "csv" : "asv"; }

namespace detail {

/// Copy of `a` where player p only keeps the edges to choice[v].
inline Arena restrict_choice(const Arena& a, Player p, const std::vector<Vertex>& choice) {
  ArenaBuilder b;
  for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v)
    b.add_vertex(a.name(v), a.owner(v));
  for (const Edge& e : a.edges())
    if (a.owner(e.src) != p || choice.at(e.src) == e.dst)
      b.add_edge(e.src, e.dst, e.w0, e.w1);
  return b.build();
}

/// Same graph, every vertex owned by `owner`.
inline Arena single_player(const Arena& a, Player owner, const std::vector<char>* keep = nullptr) {
  ArenaBuilder b;
  for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v)
    b.add_vertex(a.name(v), owner);
  for (EdgeId i = 0; i < static_cast<EdgeId>(a.edge_count()); ++i)
    if (!keep || (*keep)[i]) {
      const Edge& e = a.edge(i);
      b.add_edge(e.src, e.dst, e.w0, e.w1);
    }
  return b.build();
}

/// Player 0 is already fixed in `g` (one edge at each of its vertices).
/// Returns per vertex (optimal DS1 of player 1, best/worst DS0 among the
/// DS1-optimal plays) plus player 1's optimal successors.
struct BrTable {
    std::vector<Rational> ds1;
    std::vector<Rational> ds0;
    std::vector<Vertex> succ1;  // DS1-optimal, extreme DS0
};

inline BrTable br_table(const Arena& g, const Rational& lambda, Semantics sem) {
  auto one = single_player(g, Player::One);
  auto v1 = solve_ds_game(one, lambda, 1, Player::One).values;
  std::vector<char> keep(g.edge_count(), 0);
  for (EdgeId i = 0; i < static_cast<EdgeId>(g.edge_count()); ++i) {
    const Edge& e = g.edge(i);
    keep[i] = v1[e.src] == e.w1 + lambda * v1[e.dst];
  }
  auto pruned = single_player(g, Player::One, &keep);
  auto s0 = solve_ds_game(pruned, lambda, 0, sem == Semantics::Cooperative ? Player::One : Player::Zero);
  return {std::move(v1), std::move(s0.values), std::move(s0.succ)};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Best responses and strategy evaluation

struct DsBestResponse {
    Rational value;
    MealyStrategy response;  // player 1, sharing the leader's memory
};

/// Player 1's optimal DS1 against a finite-memory leader, with a response
/// that is memoryless on the product (so it reuses the leader's memory).
inline DsBestResponse ds_best_response(const Arena& a, const Rational& lambda, const MealyStrategy& s, Vertex v) {
  auto p = product_from(a, s, Player::Zero, v);
  auto t = detail::br_table(p.arena, lambda, Semantics::Cooperative);
  DsBestResponse r;
  r.value = t.ds1[p.start];
  MealyStrategy& m = r.response;
  m.player = Player::One;
  m.initMemory = s.initMemory;
  m.update = s.update;
  m.output.assign(s.memory_size(), std::vector<Vertex>(a.size(), -1));
  for (int mem = 0; mem < s.memory_size(); ++mem)
    for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
      if (a.owner(u) == Player::One) {
        auto it = p.index.find({u, mem});
        m.output[mem][u] = it == p.index.end() ? a.edge(a.out(u).front()).dst : p.origin[t.succ1[it->second]].first;
      }
  m.validate(a);
  return r;
}

/// Leader's DS0 when the follower best-responds, ties broken in favour of
/// (csv) or against (asv) the leader.
inline Rational evaluate_stackelberg(const Arena& a, const Rational& lambda, const MealyStrategy& s, Vertex v,
                                     Semantics sem) {
  auto p = product_from(a, s, Player::Zero, v);
  return detail::br_table(p.arena, lambda, sem).ds0[p.start];
}

inline Rational evaluate_csv(const Arena& a, const Rational& lambda, const MealyStrategy& s, Vertex v) {
  return evaluate_stackelberg(a, lambda, s, v, Semantics::Cooperative);
}

inline Rational evaluate_asv(const Arena& a, const Rational& lambda, const MealyStrategy& s, Vertex v) {
  return evaluate_stackelberg(a, lambda, s, v, Semantics::Adversarial);
}

// ---------------------------------------------------------------------------
// Horizon

struct HorizonParams {
    Rational epsilon;
    int N = 0;
    BigInt memoryBound;  // depth-N history tree plus the two tails
};

/// Smallest N with lambda^N W / (1 - lambda) < epsilon / 2. The memory bound
/// counts histories of length <= N with `branching` successors each.
inline HorizonParams compute_horizon(const Rational& W, const Rational& lambda, const Rational& epsilon,
                                     int branching = 2) {
  if (!(epsilon > Rational(0)))
    throw ModelError("epsilon must be positive");
  if (lambda <= Rational(0) || lambda >= Rational(1))
    throw ModelError("discount factor must lie in (0,1)");
  HorizonParams h;
  h.epsilon = epsilon;
  Rational tail = abs(W) / (Rational(1) - lambda), half = epsilon / Rational(2);
  while (!(tail < half)) {
    tail *= lambda;
    ++h.N;
  }
  BigInt b = std::max(branching, 1), pw = 1, sum = 0;
  for (int k = 0; k <= h.N; ++k, pw *= b)
    sum += pw;
  h.memoryBound = sum + 2;
  return h;
}

// ---------------------------------------------------------------------------
// Gap problem

struct GapVerdict {
    bool yes = false;
    Semantics semantics = Semantics::Cooperative;
    HorizonParams horizon;
    std::optional<MealyStrategy> witnessStrategy;
    Rational value;              // leader value of the best candidate
    Rational bestResponseValue;  // follower's DS1 against it
    std::uint64_t summaries = 0; // DP states explored
};

namespace detail {

/// One achievable outcome of a depth-k strategy tree rooted at a vertex:
/// the follower's optimal DS1 and the leader's resulting DS0.
struct Summary {
    Rational d1;
    Rational d0;
    int tail = -1;  // leaves: 0 cooperative tail, 1 punishing tail
    std::vector<std::pair<Vertex, int>> next;  // chosen (successor, summary index)
};

}  // namespace detail

/// Gap decider over strategies that follow a finite tree for N steps and
/// then commit to one of two memoryless tails: maximise or minimise the
/// follower's DS1. The outcome sets only depend on (vertex, depth left),
/// so the search is a dynamic program over those pairs.
inline GapVerdict gap_decide(const Arena& a, const Rational& lambda, Vertex v, const Rational& c,
                             const Rational& epsilon, Semantics sem, const Budget& budget = Budget::defaults()) {
  using detail::Summary;
  const int n = static_cast<int>(a.size());
  std::size_t branching = 1;
  for (Vertex u = 0; u < n; ++u)
    branching = std::max(branching, a.out(u).size());
  GapVerdict out;
  out.semantics = sem;
  out.horizon = compute_horizon(a.max_abs_weight(), lambda, epsilon, static_cast<int>(branching));
  const int N = out.horizon.N;

  // Tails.
  auto coop = solve_ds_game(detail::single_player(a, Player::Zero), lambda, 1, Player::Zero).succ;
  auto punish = solve_ds_game(a, lambda, 1, Player::One).succ;
  std::vector<std::vector<Vertex>> tails{coop, punish};
  std::vector<detail::BrTable> tailTab;
  for (auto& t : tails)
    tailTab.push_back(detail::br_table(detail::restrict_choice(a, Player::Zero, t), lambda, sem));

  std::vector<std::vector<std::vector<Summary>>> S(N + 1, std::vector<std::vector<Summary>>(n));
  std::uint64_t total = 0;
  auto charge = [&](std::size_t k) {
    total += k;
    if (total > budget.gapSummaries)
      throw BudgetExceeded("gap summaries", budget.gapSummaries,
                           "more than " + std::to_string(total) + " at horizon N=" + std::to_string(N));
  };
  auto push_unique = [](std::vector<Summary>& vec, Summary s) {
    for (auto& x : vec)
      if (x.d1 == s.d1 && x.d0 == s.d0)
        return;
    vec.push_back(std::move(s));
  };
  for (Vertex u = 0; u < n; ++u) {
    for (int t = 0; t < 2; ++t)
      push_unique(S[0][u], Summary{tailTab[t].ds1[u], tailTab[t].ds0[u], t, {}});
    charge(S[0][u].size());
  }
  const bool coopTies = sem == Semantics::Cooperative;
  for (int k = 1; k <= N; ++k)
    for (Vertex u = 0; u < n; ++u) {
      auto& here = S[k][u];
      // Shifted outcomes per successor.
      std::vector<std::vector<std::pair<Rational, Rational>>> shifted;
      std::vector<Vertex> succ;
      for (EdgeId e : a.out(u)) {
        const Edge& ed = a.edge(e);
        succ.push_back(ed.dst);
        auto& row = shifted.emplace_back();
        for (auto& s : S[k - 1][ed.dst])
          row.push_back({ed.w1 + lambda * s.d1, ed.w0 + lambda * s.d0});
      }
      if (a.owner(u) == Player::Zero) {
        for (std::size_t i = 0; i < succ.size(); ++i)
          for (std::size_t j = 0; j < shifted[i].size(); ++j)
            push_unique(here, Summary{shifted[i][j].first, shifted[i][j].second, -1,
                                      {{succ[i], static_cast<int>(j)}}});
      } else {
        // (D, X) is achievable iff some successor offers it and every other
        // successor can be given an outcome the follower does not prefer.
        auto dominated = [&](const std::pair<Rational, Rational>& o, const Rational& D, const Rational& X) {
          return o.first < D || (o.first == D && (coopTies ? o.second <= X : o.second >= X));
        };
        for (std::size_t i = 0; i < succ.size(); ++i)
          for (std::size_t j = 0; j < shifted[i].size(); ++j) {
            const auto& [D, X] = shifted[i][j];
            Summary s{D, X, -1, {}};
            bool ok = true;
            for (std::size_t i2 = 0; i2 < succ.size() && ok; ++i2) {
              if (i2 == i) {
                s.next.push_back({succ[i], static_cast<int>(j)});
                continue;
              }
              ok = false;
              for (std::size_t j2 = 0; j2 < shifted[i2].size(); ++j2)
                if (dominated(shifted[i2][j2], D, X)) {
                  s.next.push_back({succ[i2], static_cast<int>(j2)});
                  ok = true;
                  break;
                }
            }
            if (ok)
              push_unique(here, std::move(s));
          }
      }
      charge(here.size());
    }
  out.summaries = total;

  const auto& roots = S[N][v];
  int best = 0;
  for (int i = 1; i < static_cast<int>(roots.size()); ++i)
    if (roots[i].d0 > roots[best].d0)
      best = i;
  out.value = roots[best].d0;
  out.bestResponseValue = roots[best].d1;
  out.yes = out.value > c;

  // Materialise the chosen tree as a Mealy machine. Memory states:
  // 0 = before the start, 1/2 = tails, then one per (vertex, depth, summary).
  MealyStrategy m;
  m.player = Player::Zero;
  std::map<std::tuple<Vertex, int, int>, int> id;
  std::vector<std::tuple<Vertex, int, int>> states;
  auto newRow = [&] {
    m.update.emplace_back(n, 1);
    m.output.emplace_back(n, -1);
  };
  for (int i = 0; i < 3; ++i)
    newRow();
  for (Vertex u = 0; u < n; ++u)
    if (a.owner(u) == Player::Zero) {
      m.output[1][u] = tails[0][u];
      m.output[2][u] = tails[1][u];
      m.output[0][u] = tails[0][u];
    }
  for (Vertex u = 0; u < n; ++u) {
    m.update[1][u] = 1;
    m.update[2][u] = 2;
  }
  auto intern = [&](Vertex u, int k, int idx) {
    auto key = std::make_tuple(u, k, idx);
    auto it = id.find(key);
    if (it != id.end())
      return it->second;
    int mid = static_cast<int>(m.update.size());
    newRow();
    id.emplace(key, mid);
    states.push_back(key);
    return mid;
  };
  m.update[0][v] = intern(v, N, best);
  for (std::size_t qi = 0; qi < states.size(); ++qi) {
    auto [u, k, idx] = states[qi];
    int mid = id.at(states[qi]);
    const Summary& s = S[k][u][idx];
    if (k == 0) {
      int tailMem = 1 + s.tail;
      for (Vertex x = 0; x < n; ++x)
        m.update[mid][x] = tailMem;
      if (a.owner(u) == Player::Zero)
        m.output[mid][u] = tails[s.tail][u];
      continue;
    }
    for (auto [x, j] : s.next)
      m.update[mid][x] = intern(x, k - 1, j);
    if (a.owner(u) == Player::Zero)
      m.output[mid][u] = s.next.front().first;
  }
  // Unused (state, vertex) slots still need a legal move.
  for (auto& row : m.output)
    for (Vertex u = 0; u < n; ++u)
      if (a.owner(u) == Player::Zero && row[u] < 0)
        row[u] = tails[0][u];
  m.validate(a);
  out.witnessStrategy = std::move(m);
  return out;
}

}  // namespace qsg
