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
#include <set>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsg/arena.hpp"
#include "qsg/geometry.hpp"
#include "qsg/graph.hpp"
#include "qsg/zerosum.hpp"

namespace qsg {

// ---------------------------------------------------------------------------
// Regions

struct PayoffRegion {
    std::vector<Vertex> scc;
    Region2D region;
    std::vector<Point2> meanPoints;
};

/// F_min of the convex hull of the cycle means of `scc`: the liminf
/// mean-payoff pairs of plays that stay in the component.
inline PayoffRegion phi_region(const Arena& a, const std::vector<Vertex>& scc,
                               std::uint64_t cycleCap = Budget::defaults().cycles) {
  auto cl = enumerate_simple_cycles(a, scc, cycleCap);
  if (cl.cycles.empty())
    throw ModelError("scope contains no cycle");
  PayoffRegion r;
  r.scc = scc;
  for (auto& [x, y] : cl.meanPoints)
    r.meanPoints.push_back({x, y});
  r.region = f_min_region(r.meanPoints);
  return r;
}

struct ThresholdRegion {
    Vertex vertex;
    Region2D region;           // {(c, d) : d <= profile(c)}
    PiecewiseLinear profile;
};

/// Per-vertex conjunction oracles and their d-threshold profiles, built on
/// first use.
class LambdaCache {
  public:
    explicit LambdaCache(const Arena& a, Budget budget = Budget::defaults()) : arena_(&a), budget_(budget) {}

    const ConjunctionOracle& oracle(Vertex u) {
      auto it = oracles_.find(u);
      if (it == oracles_.end())
        it = oracles_.emplace(u, std::make_unique<ConjunctionOracle>(*arena_, u, budget_)).first;
      return *it->second;
    }
    const PiecewiseLinear& profile(Vertex u) {
      auto it = profiles_.find(u);
      if (it == profiles_.end())
        it = profiles_.emplace(u, oracle(u).profile()).first;
      return it->second;
    }
    /// (c, d) in Lambda(u).
    bool bad(Vertex u, const Rational& c, const Rational& d) {
      auto t = profile(u).eval(c);
      return t && d <= *t;
    }
    /// Largest d for which u is (c, d)-bad; nullopt means never bad.
    std::optional<Rational> threshold(Vertex u, const Rational& c) { return profile(u).eval(c); }

    const Arena& arena() const { return *arena_; }
    const Budget& budget() const { return budget_; }

  private:
    const Arena* arena_;
    Budget budget_;
    std::map<Vertex, std::unique_ptr<ConjunctionOracle>> oracles_;
    std::map<Vertex, PiecewiseLinear> profiles_;
};

/// Lambda(v): the thresholds (c, d) for which player 1 can force
/// MP0 <= c and MP1 >= d from v.
inline ThresholdRegion lambda_region(const Arena& a, Vertex v, const Budget& budget = Budget::defaults()) {
  ConjunctionOracle o(a, v, budget);
  auto prof = o.profile();
  return {v, prof.hypograph(), prof};
}

// ---------------------------------------------------------------------------
// Witnesses

struct WitnessCheck {
    bool ok = false;
    Rational cPrime;
    Rational d;
    std::optional<Vertex> badVertex;
};

/// A lasso from v is a witness for ASV(v) > c iff MP0 = c' > c and none of
/// its vertices is (c, MP1)-bad.
inline WitnessCheck check_witness(const Arena& a, Vertex v, const Lasso& l, const Rational& c,
                                  LambdaCache* cache = nullptr) {
  l.validate(a);
  if (l.start() != v)
    throw ModelError("lasso does not start at the given vertex");
  std::optional<LambdaCache> local;
  if (!cache)
    cache = &local.emplace(a);
  auto [x, y] = mp_of_lasso(a, l);
  WitnessCheck r{false, x, y, std::nullopt};
  if (!(x > c))
    return r;
  std::vector<char> seen(a.size(), 0);
  for (const auto* part : {&l.prefix, &l.cycle})
    for (Vertex u : *part) {
      if (seen[u])
        continue;
      seen[u] = 1;
      if (cache->bad(u, c, y)) {
        r.badVertex = u;
        return r;
      }
    }
  r.ok = true;
  return r;
}

/// Small witness: an access path into an SCC, two simple cycles mixed with
/// weights alpha and beta, connectors between them, and for every vertex
/// used a player-0 refutation showing it is not (c, d)-bad.
struct WitnessCertificate {
    Vertex vertex = 0;
    Rational c;
    std::vector<Vertex> sccPath;  // v ... start of l1
    Cycle l1;
    Cycle l2;
    std::vector<Vertex> pi2;      // start of l1 ... start of l2
    std::vector<Vertex> pi3;      // start of l2 ... start of l1
    Rational alpha;
    Rational beta;
    Rational cPrime;
    Rational d;
    std::map<Vertex, BadnessCertificate> refutations;

    std::vector<Vertex> used_vertices() const {
      std::set<Vertex> s;
      for (const auto* seq : {&sccPath, &l1, &l2, &pi2, &pi3})
        s.insert(seq->begin(), seq->end());
      return {s.begin(), s.end()};
    }
    std::size_t size() const {
      std::size_t n = sccPath.size() + l1.size() + l2.size() + pi2.size() + pi3.size();
      for (auto& [u, r] : refutations)
        n += r.refutation.size() + r.separators.size();
      return n;
    }
};

namespace detail {

inline std::vector<Vertex> drop_last(const std::vector<Vertex>& p) {
  return {p.begin(), p.end() - (p.empty() ? 0 : 1)};
}

/// Repetition counts giving time shares alpha : beta to the two cycles.
inline std::pair<BigInt, BigInt> repetitions(const WitnessCertificate& w, const BigInt& k) {
  if (w.beta.is_zero())
    return {k, 0};
  if (w.alpha.is_zero())
    return {0, k};
  BigInt p = w.alpha.num(), q = w.alpha.den();
  return {p * static_cast<long>(w.l2.size()) * k, (q - p) * static_cast<long>(w.l1.size()) * k};
}

inline bool single_cycle(const WitnessCertificate& w) { return w.beta.is_zero() || w.alpha.is_zero(); }

inline void append_block(std::vector<Vertex>& out, const WitnessCertificate& w, const BigInt& k) {
  auto [r1, r2] = repetitions(w, k);
  if (single_cycle(w)) {
    const Cycle& l = w.beta.is_zero() ? w.l1 : w.l2;
    out.insert(out.end(), l.begin(), l.end());
    return;
  }
  for (BigInt i = 0; i < r1; ++i)
    out.insert(out.end(), w.l1.begin(), w.l1.end());
  auto p2 = drop_last(w.pi2);
  out.insert(out.end(), p2.begin(), p2.end());
  for (BigInt i = 0; i < r2; ++i)
    out.insert(out.end(), w.l2.begin(), w.l2.end());
  auto p3 = drop_last(w.pi3);
  out.insert(out.end(), p3.begin(), p3.end());
}

/// MP0 and MP1 of one block with scale k, without materialising it.
inline std::pair<Rational, Rational> block_mean(const Arena& a, const WitnessCertificate& w, const BigInt& k) {
  if (single_cycle(w))
    return cycle_mean(a, w.beta.is_zero() ? w.l1 : w.l2);
  auto [r1, r2] = repetitions(w, k);
  Rational R1(r1, 1), R2(r2, 1);
  auto len = [](const std::vector<Vertex>& p) { return Rational(static_cast<long>(p.size() - 1)); };
  Rational L = R1 * Rational(static_cast<long>(w.l1.size())) + R2 * Rational(static_cast<long>(w.l2.size())) +
               len(w.pi2) + len(w.pi3);
  std::pair<Rational, Rational> m;
  for (int d = 0; d < 2; ++d) {
    Rational s = R1 * path_weight(a, w.l1, d, true) + R2 * path_weight(a, w.l2, d, true);
    if (w.pi2.size() > 1)
      s += path_weight(a, w.pi2, d, false);
    if (w.pi3.size() > 1)
      s += path_weight(a, w.pi3, d, false);
    (d == 0 ? m.first : m.second) = s / L;
  }
  return m;
}

}  // namespace detail

/// The lasso sccPath . (block_k)^omega for the given block scale.
inline Lasso witness_lasso(const WitnessCertificate& w, const BigInt& k) {
  Lasso l;
  l.prefix = detail::drop_last(w.sccPath);
  detail::append_block(l.cycle, w, k);
  return l;
}

/// Doubles the block scale until the lasso passes check_witness. The mixing
/// point lies strictly inside the admissible segment, so this terminates.
inline std::optional<Lasso> accepted_witness_lasso(const Arena& a, const WitnessCertificate& w,
                                                   LambdaCache* cache = nullptr, std::size_t maxLen = 1u << 20) {
  std::optional<LambdaCache> local;
  if (!cache)
    cache = &local.emplace(a);
  for (BigInt k = 1;; k *= 2) {
    Lasso l = witness_lasso(w, k);
    if (l.size() > maxLen)
      return std::nullopt;
    if (check_witness(a, w.vertex, l, w.c, cache).ok)
      return l;
    if (detail::single_cycle(w))
      return std::nullopt;
  }
}

struct ThresholdResult {
    bool yes = false;
    std::optional<WitnessCertificate> certificate;
};

namespace detail {

/// Open/closed interval of [0, 1] for the mixing weight alpha of l1.
struct AlphaInterval {
    Rational lo = 0, hi = 1;
    bool loOpen = false, hiOpen = false;
    bool empty = false;

    /// Intersects with {alpha : slope * alpha + off > 0}.
    void restrict_positive(const Rational& slope, const Rational& off) {
      if (empty)
        return;
      if (slope.is_zero()) {
        empty = !(off.sign() > 0);
        return;
      }
      Rational t = -off / slope;
      if (slope.sign() > 0) {
        if (t > lo || (t == lo && !loOpen)) {
          lo = t;
          loOpen = true;
        }
      } else if (t < hi || (t == hi && !hiOpen)) {
        hi = t;
        hiOpen = true;
      }
      empty = lo > hi || (lo == hi && (loOpen || hiOpen));
    }
};

}  // namespace detail

/// Decides ASV(v) > c by searching the two-cycle witnesses SCC by SCC.
inline ThresholdResult asv_threshold(const Arena& a, Vertex v, const Rational& c, LambdaCache* cache = nullptr) {
  std::optional<LambdaCache> local;
  if (!cache)
    cache = &local.emplace(a);
  const Budget& budget = cache->budget();
  auto g = Digraph::of(a);
  auto reach = reachable_from(g, {v});
  auto scc = scc_decompose(g);
  std::vector<std::optional<Rational>> delta(a.size());
  for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
    if (reach[u])
      delta[u] = cache->threshold(u, c);
  auto below = [&](Vertex u, const Rational& d, bool strictOnly) {
    // delta_u < d (non-strict variant: delta_u <= d)
    return !delta[u] || (strictOnly ? *delta[u] < d : *delta[u] <= d);
  };

  for (int k = 0; k < static_cast<int>(scc.components.size()); ++k) {
    if (!scc.nontrivial(k) || !reach[scc.components[k].front()])
      continue;
    auto cl = enumerate_simple_cycles(a, scc.components[k], budget.cycles);
    const std::size_t nc = cl.cycles.size();
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = 0; j < nc; ++j) {
        const auto& m1 = cl.meanPoints[i];
        const auto& m2 = cl.meanPoints[j];
        bool same = i == j;
        // x(alpha) = m2.x + alpha (m1.x - m2.x); likewise d(alpha).
        detail::AlphaInterval A;
        if (same)
          A.lo = 1;
        A.restrict_positive(m1.first - m2.first, m2.first - c);
        if (A.empty)
          continue;
        Rational dslope = m1.second - m2.second;
        Rational dSup = m2.second + (dslope.sign() >= 0 ? A.hi : A.lo) * dslope;
        bool supAttained = dslope.is_zero() || (dslope.sign() > 0 ? !A.hiOpen : !A.loOpen);
        auto good = [&](Vertex u) { return supAttained ? below(u, dSup, true) : below(u, dSup, false); };
        std::vector<char> goodMask(a.size(), 0);
        for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
          goodMask[u] = reach[u] && good(u);
        const Cycle& l1 = cl.cycles[i];
        const Cycle& l2 = cl.cycles[j];
        auto allGood = [&](const Cycle& cy) {
          return std::all_of(cy.begin(), cy.end(), [&](Vertex u) { return goodMask[u]; });
        };
        if (!allGood(l1) || !allGood(l2))
          continue;
        auto p1 = bfs_path(g, v, l1.front(), goodMask);
        if (p1.empty())
          continue;
        std::vector<Vertex> p2{l1.front()}, p3{l1.front()};
        if (!same) {
          p2 = bfs_path(g, l1.front(), l2.front(), goodMask);
          p3 = bfs_path(g, l2.front(), l1.front(), goodMask);
          if (p2.empty() || p3.empty())
            continue;
        }
        std::optional<Rational> deltaStar;
        for (const auto* seq : std::initializer_list<const std::vector<Vertex>*>{&p1, &p2, &p3, &l1, &l2})
          for (Vertex u : *seq)
            if (delta[u] && (!deltaStar || *deltaStar < *delta[u]))
              deltaStar = delta[u];
        detail::AlphaInterval F = A;
        if (deltaStar)
          F.restrict_positive(dslope, m2.second - *deltaStar);
        if (F.empty)
          continue;
        WitnessCertificate w;
        w.vertex = v;
        w.c = c;
        w.sccPath = p1;
        w.l1 = l1;
        w.l2 = same ? l1 : l2;
        w.pi2 = p2;
        w.pi3 = p3;
        w.alpha = same ? Rational(1) : midpoint(F.lo, F.hi);
        w.beta = Rational(1) - w.alpha;
        w.cPrime = w.alpha * m1.first + w.beta * m2.first;
        w.d = w.alpha * m1.second + w.beta * m2.second;
        for (Vertex u : w.used_vertices())
          w.refutations.emplace(u, cache->oracle(u).certify(c, w.d));
        return {true, std::move(w)};
      }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Certificate verification

struct VerifyReport {
    bool ok = false;
    std::string reason;
    std::uint64_t cost = 0;  // elementary steps spent by the checker
};

/// Independent polynomial-time check of a witness certificate: structure of
/// paths and cycles, exact mixing arithmetic, and every player-0 refutation
/// re-verified from scratch.
inline VerifyReport verify_certificate(const Arena& a, const WitnessCertificate& w) {
  VerifyReport r;
  auto fail = [&](std::string why) {
    r.ok = false;
    r.reason = std::move(why);
    return r;
  };
  auto isPath = [&](const std::vector<Vertex>& p) {
    r.cost += p.size() + 1;
    if (p.empty())
      return false;
    for (Vertex u : p)
      if (u < 0 || u >= static_cast<Vertex>(a.size()))
        return false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      if (!a.edge_between(p[i], p[i + 1]))
        return false;
    return true;
  };
  auto isCycle = [&](const Cycle& cy) { return isPath(cy) && a.edge_between(cy.back(), cy.front()).has_value(); };
  if (!isPath(w.sccPath) || w.sccPath.front() != w.vertex || w.sccPath.back() != w.l1.at(0))
    return fail("access path does not lead from the vertex to the first cycle");
  if (!isCycle(w.l1) || !isCycle(w.l2))
    return fail("cycles are not closed walks of the arena");
  if (!isPath(w.pi2) || w.pi2.front() != w.l1.front() || w.pi2.back() != w.l2.front())
    return fail("connector from the first to the second cycle is broken");
  if (!isPath(w.pi3) || w.pi3.front() != w.l2.front() || w.pi3.back() != w.l1.front())
    return fail("connector from the second to the first cycle is broken");
  if (w.alpha.sign() < 0 || w.beta.sign() < 0 || w.alpha + w.beta != Rational(1))
    return fail("mixing weights are not a convex combination");
  auto m1 = cycle_mean(a, w.l1), m2 = cycle_mean(a, w.l2);
  if (w.alpha * m1.first + w.beta * m2.first != w.cPrime || w.alpha * m1.second + w.beta * m2.second != w.d)
    return fail("mixed payoff does not match (c', d)");
  if (!(w.cPrime > w.c))
    return fail("c' does not exceed c");
  for (Vertex u : w.used_vertices()) {
    auto it = w.refutations.find(u);
    if (it == w.refutations.end())
      return fail("missing refutation for vertex " + a.name(u));
    if (it->second.bad || !verify_badness_certificate(a, u, w.c, w.d, it->second, &r.cost))
      return fail("refutation for vertex " + a.name(u) + " does not verify");
  }
  r.ok = true;
  return r;
}

// ---------------------------------------------------------------------------
// Exact value

struct AsvValue {
    Rational value;
    bool attained = false;        // some play reaches the value itself
    std::vector<Vertex> bestScc;  // extended-arena states of the optimal component
};

/// sup{c : some play from v is a witness for c}, maximised over the SCCs of
/// the extended arena: per SCC S, sup c subject to x > c, (x, y) in Phi_S and
/// (c, y) outside the union of Lambda(u) for the vertices u visited in S.
inline AsvValue asv_value(const Arena& a, Vertex v, LambdaCache* cache = nullptr) {
  std::optional<LambdaCache> local;
  if (!cache)
    cache = &local.emplace(a);
  const Budget& budget = cache->budget();
  auto ext = build_extended(a, v, budget.extStates);
  auto scc = scc_decompose(ext.arena);
  std::optional<AsvValue> best;
  for (int k = 0; k < static_cast<int>(scc.components.size()); ++k) {
    if (!scc.nontrivial(k))
      continue;
    const auto& comp = scc.components[k];
    auto phi = phi_region(ext.arena, comp, budget.cycles);
    PiecewiseLinear dext = PiecewiseLinear::minus_infinity();
    for (Vertex u : ext.visited[comp.front()])
      dext = PiecewiseLinear::max(dext, cache->profile(u));
    auto outside = dext.strict_epigraph();
    // Variables (c, x, y).
    for (auto& cell : outside.cells) {
      std::vector<LinearConstraint> cons;
      cons.push_back({{-1, 1, 0}, Rel::GT, 0});
      for (auto& h : phi.region.cells[0].constraints)
        cons.push_back({{0, h.a1, h.a2}, h.strict ? Rel::GT : Rel::GE, h.b});
      for (auto& h : cell.constraints)
        cons.push_back({{h.a1, 0, h.a2}, h.strict ? Rel::GT : Rel::GE, h.b});
      auto s = lp_sup({1, 0, 0}, cons);
      if (!s.is_finite())
        continue;
      if (!best || best->value < s.value)
        best = AsvValue{s.value, false, comp};
    }
  }
  if (!best)
    throw std::logic_error("no component of the extended arena admits a witness");
  // Attained: some component has a play with MP0 >= value whose vertices
  // stay clear of every threshold strictly below the value.
  best->attained = false;
  for (int k = 0; k < static_cast<int>(scc.components.size()) && !best->attained; ++k) {
    if (!scc.nontrivial(k))
      continue;
    const auto& comp = scc.components[k];
    std::optional<Rational> dLeft;
    for (Vertex u : ext.visited[comp.front()])
      if (auto t = cache->profile(u).eval_left(best->value); t && (!dLeft || *dLeft < *t))
        dLeft = t;
    auto phi = phi_region(ext.arena, comp, budget.cycles);
    std::vector<LinearConstraint> cons{{{1, 0}, Rel::GE, best->value}};
    for (auto& h : phi.region.cells[0].constraints)
      cons.push_back(h.as_lp());
    if (dLeft)
      cons.push_back({{0, 1}, Rel::GT, *dLeft});
    best->attained = lp_feasible(cons, 2);
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Leader strategy

/// Counter-based leader strategy built from a certificate: follow the play
/// sccPath . block_{k0} . block_{2 k0} . ... and, as soon as player 1 leaves
/// it at some vertex u, switch for good to u's memoryless refutation.
class LeaderStrategy {
  public:
    LeaderStrategy(const Arena& a, WitnessCertificate w) : arena_(&a), w_(std::move(w)) {
      // Smallest power of two making a single block's MP0 exceed c; block
      // means are monotone in the scale, so every later block does too.
      k0_ = 1;
      if (!detail::single_cycle(w_))
        while (!(detail::block_mean(a, w_, k0_).first > w_.c))
          k0_ *= 2;
      reset();
    }

    void reset() {
      plan_.clear();
      blockEnds_.clear();
      auto pre = detail::drop_last(w_.sccPath);
      plan_.insert(plan_.end(), pre.begin(), pre.end());
      prefixLen_ = plan_.size();
      nextBlock_ = 1;
      pos_ = 0;
      punish_.reset();
      current_ = w_.vertex;
      history_ = {current_};
    }

    Vertex current() const { return current_; }
    bool punishing() const { return punish_.has_value(); }
    const std::vector<Vertex>& history() const { return history_; }
    const BigInt& base_scale() const { return k0_; }

    /// Positions (in edges from the start) where the blocks generated so far
    /// end.
    const std::vector<std::size_t>& block_ends() const { return blockEnds_; }

    /// Number of leading blocks after which the running MP0 average of the
    /// cooperative play stays above c for good. Each block opens with l1,
    /// whose mean may be below c, so one block is not always enough: the
    /// dip inside block j is at most linear in j while the accumulated
    /// excess over c grows quadratically. At least 1.
    std::size_t burn_in_blocks() const {
      const Arena& a = *arena_;
      auto excess = [&](const std::vector<Vertex>& p, bool closed, Rational* absSum) {
        Rational s;
        std::size_t m = p.size() < 2 && !closed ? 0 : (closed ? p.size() : p.size() - 1);
        for (std::size_t i = 0; i < m; ++i) {
          Rational x = a.edge(*a.edge_between(p[i], p[(i + 1) % p.size()])).w0 - w_.c;
          s += x;
          if (absSum)
            *absSum += abs(x);
        }
        return s;
      };
      Rational slack, E = excess(w_.sccPath, false, nullptr);
      auto lower = [](const Rational& x) { return x.sign() < 0 ? x : Rational(0); };
      // blockExcess(j) and a lower bound on the partial sums inside block j
      std::function<Rational(long)> block, dip;
      if (detail::single_cycle(w_)) {
        const Cycle& l = w_.beta.is_zero() ? w_.l1 : w_.l2;
        Rational ex = excess(l, true, &slack);
        block = [ex](long) { return ex; };
        dip = [slack](long) { return -slack; };
      } else {
        Rational e1 = excess(w_.l1, true, &slack), e2 = excess(w_.l2, true, &slack);
        Rational conn = excess(w_.pi2, false, &slack) + excess(w_.pi3, false, &slack);
        auto reps = [this](long j) {
          auto [r1, r2] = detail::repetitions(w_, k0_ * j);
          return std::pair<Rational, Rational>{Rational(r1, 1), Rational(r2, 1)};
        };
        block = [=](long j) {
          auto [r1, r2] = reps(j);
          return r1 * e1 + r2 * e2 + conn;
        };
        dip = [=](long j) {
          auto [r1, r2] = reps(j);
          return lower(r1 * e1) + lower(r2 * e2) - slack;
        };
      }
      // g(j) = excess before block j + dip bound inside it; its increments
      // grow with j, so the first j >= 2 with g(j) > 0 and g(j+1) > g(j)
      // settles it.
      E += block(1);
      for (long j = 2;; ++j) {
        Rational g = E + dip(j), gNext = E + block(j) + dip(j + 1);
        if (g.sign() > 0 && gNext > g)
          return static_cast<std::size_t>(j - 1);
        E += block(j);
      }
    }

    /// Position (in edges) where the burn-in ends.
    std::size_t burn_in() {
      std::size_t b = burn_in_blocks();
      while (blockEnds_.size() < b)
        planned(plan_.size());
      return blockEnds_[b - 1];
    }

    /// Move of player 0 at the current vertex.
    Vertex choose() {
      if (punish_)
        return (*punish_)[current_];
      return planned(pos_ + 1);
    }

    /// The successor player 1 would take if cooperating.
    Vertex planned_next() { return punish_ ? -1 : planned(pos_ + 1); }

    /// Advances one edge; player 1's choice is asked from `p1` at its
    /// vertices.
    Vertex step(const std::function<Vertex(Vertex)>& p1) {
      Vertex next;
      if (arena_->owner(current_) == Player::Zero) {
        next = choose();
      } else {
        next = p1(current_);
        if (!arena_->edge_between(current_, next))
          throw ModelError("player 1 move is not an edge");
        if (!punish_ && next != planned(pos_ + 1)) {
          auto it = w_.refutations.find(current_);
          punish_ = it->second.refutation;
        }
      }
      if (!punish_)
        ++pos_;
      current_ = next;
      history_.push_back(next);
      return next;
    }

    /// Plays `steps` edges with player 1 following the plan.
    void run_cooperative(std::size_t steps) {
      for (std::size_t i = 0; i < steps; ++i)
        step([&](Vertex) { return planned(pos_ + 1); });
    }

    std::string summary() const {
      std::ostringstream os;
      auto seq = [&](const std::vector<Vertex>& p) {
        std::string s;
        for (Vertex u : p)
          s += (s.empty() ? "" : " ") + arena_->name(u);
        return s;
      };
      os << "reach: " << seq(w_.sccPath) << "\n";
      if (detail::single_cycle(w_)) {
        os << "repeat cycle [" << seq(w_.beta.is_zero() ? w_.l1 : w_.l2) << "] forever\n";
      } else {
        auto [r1, r2] = detail::repetitions(w_, k0_);
        os << "block i (i = 1, 2, ...): cycle [" << seq(w_.l1) << "] x " << r1.get_str() << "*i, path ["
           << seq(w_.pi2) << "], cycle [" << seq(w_.l2) << "] x " << r2.get_str() << "*i, path [" << seq(w_.pi3)
           << "]\n";
        os << "time shares " << w_.alpha << " : " << w_.beta << ", limit payoff (" << w_.cPrime << ", " << w_.d
           << ")\n";
      }
      os << "running MP0 average stays above " << w_.c << " after " << burn_in_blocks() << " block(s)\n";
      os << "on deviation by player 1 at u: switch to the memoryless refutation of u\n";
      return os.str();
    }

  private:
    Vertex planned(std::size_t i) {
      while (plan_.size() <= i) {
        detail::append_block(plan_, w_, k0_ * static_cast<long>(nextBlock_++));
        blockEnds_.push_back(plan_.size());
      }
      return plan_[i];
    }

    const Arena* arena_;
    WitnessCertificate w_;
    BigInt k0_;
    std::vector<Vertex> plan_;
    std::vector<std::size_t> blockEnds_;
    std::size_t prefixLen_ = 0;
    std::size_t nextBlock_ = 1;
    std::size_t pos_ = 0;
    std::optional<std::vector<Vertex>> punish_;
    Vertex current_ = 0;
    std::vector<Vertex> history_;
};

inline LeaderStrategy synthesize_leader_strategy(const Arena& a, const WitnessCertificate& w) {
  return LeaderStrategy(a, w);
}

// ---------------------------------------------------------------------------
// Best responses to finite-memory leaders

struct MpBestResponse {
    Rational value;       // player 1's optimal MP1
    Lasso response;       // an optimal play, projected to the arena
    Rational mp0Low;      // MP0 range over optimal responses
    Rational mp0High;
    bool tie() const { return mp0Low != mp0High; }
};

/// Player 1's best mean-payoff response to a finite-memory player-0
/// strategy: a max-mean cycle of the product reachable from v.
inline MpBestResponse best_response_mp(const Arena& a, const MealyStrategy& s, Vertex v) {
  auto p = product_from(a, s, Player::Zero, v);
  const Arena& pa = p.arena;
  auto g = Digraph::of(pa);
  auto scc = scc_decompose(g);
  auto w1 = [&](EdgeId e) { return pa.edge(e).w1; };
  auto w0 = [&](EdgeId e) { return pa.edge(e).w0; };
  std::optional<Rational> best;
  std::vector<int> comps;
  std::vector<MeanCycle> karp;
  for (int k = 0; k < static_cast<int>(scc.components.size()); ++k) {
    if (!scc.nontrivial(k))
      continue;
    auto sub = Digraph::of(pa, vertex_mask(pa.size(), scc.components[k]));
    auto m = max_mean_cycle(sub, w1);
    if (!best || *best < m->value) {
      best = m->value;
      comps.clear();
      karp.clear();
    }
    if (*best == m->value) {
      comps.push_back(k);
      karp.push_back(*m);
    }
  }
  MpBestResponse r;
  r.value = *best;
  bool first = true;
  for (int k : comps) {
    auto tight = tight_subgraph(g, scc.components[k], w1, r.value);
    auto hi = max_mean_cycle(tight, w0), lo = min_mean_cycle(tight, w0);
    if (first || hi->value > r.mp0High)
      r.mp0High = hi->value;
    if (first || lo->value < r.mp0Low)
      r.mp0Low = lo->value;
    first = false;
  }
  const Cycle& cyc = karp.front().cycle;
  auto path = bfs_path(g, p.start, cyc.front(), std::vector<char>(pa.size(), 1));
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    r.response.prefix.push_back(p.origin[path[i]].first);
  for (Vertex x : cyc)
    r.response.cycle.push_back(p.origin[x].first);
  return r;
}

}  // namespace qsg
