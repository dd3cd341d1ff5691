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

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qsg/arena.hpp"
#include "qsg/errors.hpp"
#include "qsg/geometry.hpp"
#include "qsg/graph.hpp"
#include "qsg/rational.hpp"

namespace qsg {

struct ZeroSumResult {
    Rational value;                       // from the queried vertex
    std::vector<Rational> values;         // from every vertex
    MealyStrategy optimalStrategyMax;     // memoryless
    MealyStrategy optimalStrategyMin;     // memoryless
};

// ---------------------------------------------------------------------------
// Positional profiles

/// Exact discounted values of the play induced by a successor function
/// (every vertex has exactly one move): x_v = w(v, s(v)) + lambda x_s(v).
inline std::vector<Rational> evaluate_profile_ds(const Arena& a, const std::vector<Vertex>& succ, int dim,
                                                 const Rational& lambda) {
  const int n = static_cast<int>(a.size());
  std::vector<std::optional<Rational>> x(n);
  std::vector<int> state(n, 0);  // 0 new, 1 on current walk, 2 done
  auto w = [&](Vertex u) { return a.edge(*a.edge_between(u, succ[u])).weight(dim); };
  for (Vertex s = 0; s < n; ++s) {
    if (state[s])
      continue;
    std::vector<Vertex> walk;
    Vertex u = s;
    while (state[u] == 0) {
      state[u] = 1;
      walk.push_back(u);
      u = succ[u];
    }
    std::size_t tailEnd = walk.size();
    if (state[u] == 1) {
      // New cycle starting at u.
      std::size_t k = std::find(walk.begin(), walk.end(), u) - walk.begin();
      Rational sum, f(1);
      for (std::size_t i = k; i < walk.size(); ++i) {
        sum += f * w(walk[i]);
        f *= lambda;
      }
      x[walk[k]] = sum / (Rational(1) - f);
      for (std::size_t i = walk.size() - 1; i > k; --i)
        x[walk[i]] = w(walk[i]) + lambda * *x[succ[walk[i]]];
      tailEnd = k;
    }
    for (std::size_t i = tailEnd; i-- > 0;)
      x[walk[i]] = w(walk[i]) + lambda * *x[succ[walk[i]]];
    for (Vertex t : walk)
      state[t] = 2;
  }
  std::vector<Rational> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = *x[i];
  return out;
}

inline std::vector<Vertex> first_successors(const Arena& a) {
  std::vector<Vertex> s(a.size());
  for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v)
    s[v] = a.edge(a.out(v).front()).dst;
  return s;
}

namespace detail {

/// One switch round for the vertices of `who`. Returns true if any switch
/// happened. Only strict improvements are taken; ties keep the lowest edge.
inline bool improve(const Arena& a, std::vector<Vertex>& succ, const std::vector<Rational>& x, Player who,
                    bool maximise, int dim, const Rational& lambda) {
  bool changed = false;
  for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u) {
    if (a.owner(u) != who)
      continue;
    std::optional<Rational> best;
    Vertex arg = -1;
    for (EdgeId e : a.out(u)) {
      const Edge& ed = a.edge(e);
      Rational q = ed.weight(dim) + lambda * x[ed.dst];
      if (!best || (maximise ? q > *best : q < *best)) {
        best = q;
        arg = ed.dst;
      }
    }
    if (maximise ? *best > x[u] : *best < x[u]) {
      succ[u] = arg;
      changed = true;
    }
  }
  return changed;
}

}  // namespace detail

struct DsSolution {
    std::vector<Rational> values;
    std::vector<Vertex> succ;  // optimal positional moves for both players
};

/// Zero-sum discounted game: `maximizer` maximises DS in dimension dim, the
/// opponent minimises. Strategy iteration for the maximiser with an exact
/// inner strategy iteration for the minimiser's best response.
inline DsSolution solve_ds_game(const Arena& a, const Rational& lambda, int dim, Player maximizer) {
  if (lambda <= Rational(0) || lambda >= Rational(1))
    throw ModelError("discount factor must lie in (0,1)");
  std::vector<Vertex> succ = first_successors(a);
  Player minimizer = opponent(maximizer);
  for (;;) {
    std::vector<Rational> x;
    do {
      x = evaluate_profile_ds(a, succ, dim, lambda);
    } while (detail::improve(a, succ, x, minimizer, false, dim, lambda));
    if (!detail::improve(a, succ, x, maximizer, true, dim, lambda))
      return {std::move(x), std::move(succ)};
  }
}

inline ZeroSumResult ds_game_value(const Arena& a, const Rational& lambda, int dim, Player maximizer, Vertex v) {
  auto sol = solve_ds_game(a, lambda, dim, maximizer);
  ZeroSumResult r;
  r.value = sol.values.at(v);
  r.values = sol.values;
  r.optimalStrategyMax = MealyStrategy::memoryless(a, maximizer, sol.succ);
  r.optimalStrategyMin = MealyStrategy::memoryless(a, opponent(maximizer), sol.succ);
  return r;
}

/// Per vertex: the best (max or min) cycle mean reachable in g, or nullopt if
/// no cycle is reachable.
inline std::vector<std::optional<Rational>> reachable_extreme_mean(const Digraph& g,
                                                                   const std::function<Rational(EdgeId)>& w,
                                                                   bool maximise) {
  auto scc = scc_decompose(g);
  const int k = static_cast<int>(scc.components.size());
  std::vector<std::optional<Rational>> own(k), best(k);
  for (int c = 0; c < k; ++c)
    if (scc.nontrivial(c)) {
      Digraph sub;
      sub.adj.resize(g.size());
      for (Vertex u : scc.components[c])
        for (auto [t, e] : g.adj[u])
          if (scc.componentOf[t] == c)
            sub.adj[u].emplace_back(t, e);
      auto m = maximise ? max_mean_cycle(sub, w) : min_mean_cycle(sub, w);
      own[c] = m->value;
    }
  // Components are ordered by least member, not topologically: iterate to
  // a fixed point over the (acyclic) condensation.
  std::vector<std::vector<int>> succs(k);
  for (auto [x, y] : scc.condensation)
    succs[x].push_back(y);
  std::vector<int> order, state(k, 0);
  for (int c = 0; c < k; ++c) {
    if (state[c])
      continue;
    std::vector<std::pair<int, std::size_t>> st{{c, 0}};
    state[c] = 1;
    while (!st.empty()) {
      auto& [x, i] = st.back();
      if (i < succs[x].size()) {
        int y = succs[x][i++];
        if (!state[y]) {
          state[y] = 1;
          st.push_back({y, 0});
        }
        continue;
      }
      order.push_back(x);
      st.pop_back();
    }
  }
  for (int c : order) {
    best[c] = own[c];
    for (int y : succs[c])
      if (best[y] && (!best[c] || (maximise ? *best[y] > *best[c] : *best[y] < *best[c])))
        best[c] = best[y];
  }
  std::vector<std::optional<Rational>> out(g.size());
  for (Vertex v = 0; v < static_cast<Vertex>(g.size()); ++v)
    out[v] = best[scc.componentOf[v]];
  return out;
}

/// Zero-sum mean-payoff game value. The discounted game at a discount factor
/// close enough to 1 has positional optimal strategies that are also optimal
/// for the mean-payoff game; both are checked on their one-player graphs and
/// the factor is pushed towards 1 if the check fails.
inline ZeroSumResult mp_game_value(const Arena& a, int dim, Player maximizer, Vertex v) {
  BigInt den = 1;
  for (const Edge& e : a.edges())
    den = lcm(den, e.weight(dim).den());
  BigInt wInt = 1;
  for (const Edge& e : a.edges()) {
    BigInt s = abs((e.weight(dim) * Rational(den, 1)).num());
    if (s > wInt)
      wInt = s;
  }
  BigInt n = static_cast<long>(a.size());
  Rational gap(BigInt(1), 4 * n * n * n * wInt);
  auto w = [&](EdgeId e) { return a.edge(e).weight(dim); };
  Player minimizer = opponent(maximizer);
  for (int attempt = 0; attempt < 8; ++attempt, gap /= Rational(4)) {
    auto sol = solve_ds_game(a, Rational(1) - gap, dim, maximizer);
    auto low = reachable_extreme_mean(Digraph::under_choice(a, maximizer, sol.succ), w, false);
    auto high = reachable_extreme_mean(Digraph::under_choice(a, minimizer, sol.succ), w, true);
    bool ok = true;
    for (Vertex u = 0; u < static_cast<Vertex>(a.size()) && ok; ++u)
      ok = *low[u] == *high[u];
    if (!ok)
      continue;
    ZeroSumResult r;
    for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
      r.values.push_back(*low[u]);
    r.value = r.values.at(v);
    r.optimalStrategyMax = MealyStrategy::memoryless(a, maximizer, sol.succ);
    r.optimalStrategyMin = MealyStrategy::memoryless(a, minimizer, sol.succ);
    return r;
  }
  throw std::logic_error("mean-payoff strategy iteration did not stabilise");
}

// ---------------------------------------------------------------------------
// Conjunction game: can player 1 force MP0 <= c and MP1 >= d?

/// Closed interval of alpha in [0, 1] with alpha p + (1 - alpha) q in
/// {x <= c, y >= d}; nullopt if empty.
inline std::optional<std::pair<Rational, Rational>> mixing_interval(const Point2& p, const Point2& q,
                                                                    const Rational& c, const Rational& d) {
  Rational lo(0), hi(1);
  auto apply = [&](const Rational& coef, const Rational& rhs) {  // coef * alpha <= rhs
    if (coef.is_zero())
      return rhs.sign() >= 0;
    Rational t = rhs / coef;
    if (coef.sign() > 0)
      hi = min(hi, t);
    else
      lo = max(lo, t);
    return true;
  };
  if (!apply(p.x - q.x, c - q.x) || !apply(-(p.y - q.y), -(d - q.y)))
    return std::nullopt;
  if (lo > hi)
    return std::nullopt;
  return std::make_pair(lo, hi);
}

/// A reachable nontrivial SCC of a one-player graph and the extreme points
/// of its cycle means, each with a simple cycle realising it.
struct SccHull {
    std::vector<Vertex> scc;
    std::vector<Point2> points;
    std::vector<Cycle> cycles;
};

struct PlayerOneEvidence {
    std::vector<Vertex> choice;  // the player-0 memoryless strategy
    std::vector<Vertex> scc;
    Cycle first;
    Cycle second;
    Rational alpha;              // weight of `first`
};

struct Separator {
    std::vector<Vertex> scc;
    Rational mu0;
    Rational mu1;
};

struct BadnessCertificate {
    bool bad = false;
    std::vector<PlayerOneEvidence> evidence;  // bad: one entry per player-0 strategy
    std::vector<Vertex> refutation;           // not bad: player-0 successor per vertex (-1 elsewhere)
    std::vector<Separator> separators;        // not bad: one per reachable nontrivial SCC
};

namespace detail {

inline std::vector<SccHull> scc_hulls(const Arena& a, const Digraph& g, Vertex v, std::uint64_t cycleCap) {
  auto reach = reachable_from(g, {v});
  auto scc = scc_decompose(g);
  std::vector<SccHull> out;
  for (int c = 0; c < static_cast<int>(scc.components.size()); ++c) {
    if (!scc.nontrivial(c) || !reach[scc.components[c].front()])
      continue;
    SccHull h;
    h.scc = scc.components[c];
    std::vector<Point2> pts;
    std::vector<Cycle> cyc;
    auto mask = vertex_mask(a.size(), h.scc);
    Digraph sub;
    sub.adj.resize(g.size());
    for (Vertex u : h.scc)
      for (auto [t, e] : g.adj[u])
        if (mask[t])
          sub.adj[u].emplace_back(t, e);
    for_each_simple_cycle(
        sub,
        [&](const Cycle& cy) {
          auto m = cycle_mean(a, cy);
          Point2 p{m.first, m.second};
          if (std::find(pts.begin(), pts.end(), p) == pts.end()) {
            pts.push_back(p);
            cyc.push_back(cy);
          }
          return true;
        },
        cycleCap);
    auto hv = hull_vertices(pts);
    for (auto& p : hv) {
      h.points.push_back(p);
      h.cycles.push_back(cyc[std::find(pts.begin(), pts.end(), p) - pts.begin()]);
    }
    out.push_back(std::move(h));
  }
  return out;
}

/// Candidate directions mu >= 0 for separating a point set from the
/// quadrant {x <= c, y >= d}.
inline std::optional<std::pair<Rational, Rational>> separating_mu(const std::vector<Point2>& pts, const Rational& c,
                                                                   const Rational& d) {
  std::vector<std::pair<Rational, Rational>> cands{{1, 0}, {0, 1}};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Rational m0 = pts[j].y - pts[i].y, m1 = pts[j].x - pts[i].x;
      if (m0.sign() < 0 || (m0.is_zero() && m1.sign() < 0)) {
        m0 = -m0;
        m1 = -m1;
      }
      if (m0.sign() >= 0 && m1.sign() >= 0 && !(m0.is_zero() && m1.is_zero()))
        cands.emplace_back(m0, m1);
    }
  for (auto& [m0, m1] : cands) {
    Rational bound = -m0 * c + m1 * d;
    bool ok = std::all_of(pts.begin(), pts.end(), [&](const Point2& p) { return -m0 * p.x + m1 * p.y < bound; });
    if (ok)
      return std::make_pair(m0, m1);
  }
  return std::nullopt;
}

}  // namespace detail

struct StrategyView {
    std::vector<Vertex> choice;  // player-0 successor per vertex, -1 for player-1 vertices
    std::vector<SccHull> sccs;
};

/// Enumerates the memoryless strategies of player 0 (restricted to the
/// player-0 vertices reachable from v) together with the cycle-mean hulls of
/// the SCCs each of them leaves reachable. Queries are then cheap.
class ConjunctionOracle {
  public:
    ConjunctionOracle(const Arena& a, Vertex v, const Budget& budget = Budget::defaults()) : arena_(&a), v_(v) {
      auto reach = reachable_from(Digraph::of(a), {v});
      std::vector<Vertex> mine;
      BigInt count = 1;
      for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
        if (a.owner(u) == Player::Zero && reach[u]) {
          mine.push_back(u);
          count *= static_cast<long>(a.out(u).size());
        }
      if (count > BigInt(std::to_string(budget.strategies)))
        throw BudgetExceeded("player-0 memoryless strategies", budget.strategies, count.get_str());
      std::vector<std::size_t> idx(mine.size(), 0);
      for (;;) {
        std::vector<Vertex> choice(a.size(), -1);
        for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
          if (a.owner(u) == Player::Zero)
            choice[u] = a.edge(a.out(u).front()).dst;
        for (std::size_t i = 0; i < mine.size(); ++i)
          choice[mine[i]] = a.edge(a.out(mine[i])[idx[i]]).dst;
        auto g = Digraph::under_choice(a, Player::Zero, choice);
        views_.push_back({choice, detail::scc_hulls(a, g, v, budget.cycles)});
        std::size_t k = 0;
        while (k < mine.size() && ++idx[k] == a.out(mine[k]).size())
          idx[k++] = 0;
        if (k == mine.size())
          break;
      }
    }

    const std::vector<StrategyView>& views() const { return views_; }
    Vertex vertex() const { return v_; }

    bool bad(const Rational& c, const Rational& d) const {
      for (auto& view : views_)
        if (!wins_against(view, c, d))
          return false;
      return true;
    }

    BadnessCertificate certify(const Rational& c, const Rational& d) const {
      BadnessCertificate cert;
      for (auto& view : views_) {
        auto ev = wins_against(view, c, d);
        if (!ev) {
          cert.bad = false;
          cert.evidence.clear();
          cert.refutation = view.choice;
          for (auto& h : view.sccs) {
            auto mu = detail::separating_mu(h.points, c, d).value();
            cert.separators.push_back({h.scc, mu.first, mu.second});
          }
          return cert;
        }
        cert.evidence.push_back(*ev);
      }
      cert.bad = true;
      return cert;
    }

    /// The player-0 strategy refuting (c, d), if any.
    const StrategyView* refuting_view(const Rational& c, const Rational& d) const {
      for (auto& view : views_)
        if (!wins_against(view, c, d))
          return &view;
      return nullptr;
    }

    /// d-threshold profile: (c, d) is bad iff d <= profile(c).
    PiecewiseLinear profile() const {
      std::optional<PiecewiseLinear> acc;
      for (auto& view : views_) {
        PiecewiseLinear best = PiecewiseLinear::minus_infinity();
        for (auto& h : view.sccs)
          best = PiecewiseLinear::max(best, PiecewiseLinear::best_y_left_of(h.points));
        acc = acc ? PiecewiseLinear::min(*acc, best) : best;
      }
      return *acc;
    }

  private:
    std::optional<PlayerOneEvidence> wins_against(const StrategyView& view, const Rational& c,
                                                  const Rational& d) const {
      for (auto& h : view.sccs)
        for (std::size_t i = 0; i < h.points.size(); ++i)
          for (std::size_t j = i; j < h.points.size(); ++j)
            if (auto iv = mixing_interval(h.points[i], h.points[j], c, d))
              return PlayerOneEvidence{view.choice, h.scc, h.cycles[i], h.cycles[j], iv->first};
      return std::nullopt;
    }

    const Arena* arena_;
    Vertex v_;
    std::vector<StrategyView> views_;
};

inline BadnessCertificate conj_player1_wins(const Arena& a, Vertex v, const Rational& c, const Rational& d,
                                            const Budget& budget = Budget::defaults()) {
  return ConjunctionOracle(a, v, budget).certify(c, d);
}

/// Checks a certificate without trusting the oracle. For "not bad" it checks
/// every reachable nontrivial SCC of the one-player graph against its
/// separator with a max-mean-cycle computation; for "bad" it checks each
/// piece of evidence and that every player-0 strategy is covered.
inline bool verify_badness_certificate(const Arena& a, Vertex v, const Rational& c, const Rational& d,
                                       const BadnessCertificate& cert, std::uint64_t* cost = nullptr) {
  const std::uint64_t graphCost = a.size() + a.edge_count() + 1;
  auto charge = [&](std::uint64_t units) {
    if (cost)
      *cost += units;
  };
  if (!cert.bad) {
    charge(3 * graphCost);
    if (cert.refutation.size() != a.size())
      return false;
    for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
      if (a.owner(u) == Player::Zero &&
          (cert.refutation[u] < 0 || cert.refutation[u] >= static_cast<Vertex>(a.size()) ||
           !a.edge_between(u, cert.refutation[u])))
        return false;
    auto g = Digraph::under_choice(a, Player::Zero, cert.refutation);
    auto reach = reachable_from(g, {v});
    auto scc = scc_decompose(g);
    for (int k = 0; k < static_cast<int>(scc.components.size()); ++k) {
      if (!scc.nontrivial(k) || !reach[scc.components[k].front()])
        continue;
      auto it = std::find_if(cert.separators.begin(), cert.separators.end(),
                             [&](const Separator& s) { return s.scc == scc.components[k]; });
      if (it == cert.separators.end() || it->mu0.sign() < 0 || it->mu1.sign() < 0)
        return false;
      Digraph sub;
      sub.adj.resize(a.size());
      for (Vertex u : scc.components[k])
        for (auto [t, e] : g.adj[u])
          if (scc.componentOf[t] == k)
            sub.adj[u].emplace_back(t, e);
      std::uint64_t m = 0;
      for (Vertex u : scc.components[k])
        m += sub.adj[u].size();
      charge(2 * (scc.components[k].size() + 1) * (m + 1));
      auto best = max_mean_cycle(sub, [&](EdgeId e) { return -it->mu0 * a.edge(e).w0 + it->mu1 * a.edge(e).w1; });
      if (!(best->value < -it->mu0 * c + it->mu1 * d))
        return false;
    }
    return true;
  }
  auto reach = reachable_from(Digraph::of(a), {v});
  std::set<std::vector<Vertex>> covered;
  for (auto& ev : cert.evidence) {
    if (ev.alpha.sign() < 0 || ev.alpha > Rational(1) || ev.choice.size() != a.size())
      return false;
    charge(2 * graphCost + ev.first.size() + ev.second.size());
    auto g = Digraph::under_choice(a, Player::Zero, ev.choice);
    auto r = reachable_from(g, {v});
    auto inScc = vertex_mask(a.size(), ev.scc);
    for (const Cycle* cy : {&ev.first, &ev.second}) {
      if (cy->empty())
        return false;
      for (std::size_t i = 0; i < cy->size(); ++i) {
        Vertex x = (*cy)[i], y = (*cy)[(i + 1) % cy->size()];
        if (!inScc[x] || !r[x] || !a.edge_between(x, y) || (a.owner(x) == Player::Zero && ev.choice[x] != y))
          return false;
      }
    }
    auto p = cycle_mean(a, ev.first), q = cycle_mean(a, ev.second);
    Rational x = ev.alpha * p.first + (Rational(1) - ev.alpha) * q.first;
    Rational y = ev.alpha * p.second + (Rational(1) - ev.alpha) * q.second;
    if (!(x <= c && y >= d))
      return false;
    std::vector<Vertex> key;
    for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
      if (a.owner(u) == Player::Zero && reach[u])
        key.push_back(ev.choice[u]);
    covered.insert(key);
  }
  BigInt count = 1;
  for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
    if (a.owner(u) == Player::Zero && reach[u])
      count *= static_cast<long>(a.out(u).size());
  return BigInt(static_cast<long>(covered.size())) == count;
}

}  // namespace qsg
