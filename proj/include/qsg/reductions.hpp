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

#include <numeric>
#include <string>
#include <vector>

#include "qsg/arena.hpp"
#include "qsg/errors.hpp"

namespace qsg {

// ---------------------------------------------------------------------------
// Target discounted sum

/// Is there w in {a, b}^omega with sum_i w_i lambda^i = t ?
struct TdsInstance {
    Rational a;
    Rational b;
    Rational t;
    Rational lambda;

    void validate() const {
      if (lambda <= Rational(0) || lambda >= Rational(1))
        throw ModelError("discount factor must lie in (0,1)");
    }
};

struct TdsGame {
    Arena arena;
    Vertex v = 0;  // player 1 start
    TdsInstance instance;
};

/// Player 1 at v either stops at z, with payoff (lambda t - 1, -lambda t), or
/// lets player 0 spell a sequence over {a, b} from s, each letter paying
/// (x, -x). The instance is positive iff the cooperative value of v is at
/// least lambda t.
inline TdsGame build_tds_reduction(const TdsInstance& in) {
  in.validate();
  ArenaBuilder b;
  b.add_vertex("v", Player::One);
  b.add_vertex("z", Player::Zero);
  b.add_vertex("s", Player::Zero);
  b.add_vertex("a", Player::Zero);
  b.add_vertex("b", Player::Zero);
  Rational lt = in.lambda * in.t;
  b.add_edge("v", "z", lt - Rational(1), -lt);
  b.add_edge("v", "s", 0, 0);
  b.add_edge("z", "z", 0, 0);
  for (const char* from : {"s", "a", "b"}) {
    b.add_edge(from, "a", in.a, -in.a);
    b.add_edge(from, "b", in.b, -in.b);
  }
  b.set_init("v");
  return {b.build(), 0, in};
}

/// Player-0 strategy spelling the periodic word prefix . cycle^omega from s
/// (memory = position in the word).
inline MealyStrategy tds_word_strategy(const TdsGame& g, const std::string& prefix, const std::string& cycle) {
  if (cycle.empty())
    throw ModelError("word cycle must be non-empty");
  for (char ch : prefix + cycle)
    if (ch != 'a' && ch != 'b')
      throw ModelError("word letters must be 'a' or 'b'");
  const Arena& a = g.arena;
  std::string word = prefix + cycle;
  const int L = static_cast<int>(word.size()), P = static_cast<int>(prefix.size());
  // memory i: next letter to spell is word[i]; memory L: before s.
  MealyStrategy m;
  m.player = Player::Zero;
  m.initMemory = L;
  m.update.assign(L + 1, std::vector<int>(a.size(), L));
  m.output.assign(L + 1, std::vector<Vertex>(a.size(), -1));
  Vertex s = a.at("s"), va = a.at("a"), vb = a.at("b"), z = a.at("z");
  for (int i = 0; i <= L; ++i) {
    int next = i == L ? 0 : (i + 1 == L ? P : i + 1);
    m.update[i][s] = 0;
    m.update[i][va] = next;
    m.update[i][vb] = next;
    char ch = word[i == L ? 0 : i];
    for (Vertex u : {s, va, vb})
      m.output[i][u] = ch == 'a' ? va : vb;
    m.output[i][z] = z;
  }
  m.validate(a);
  return m;
}

// ---------------------------------------------------------------------------
// Partition

struct PartitionInstance {
    std::vector<long> weights;
    long T = 0;

    explicit PartitionInstance(std::vector<long> w) : weights(std::move(w)) {
      if (weights.empty())
        throw ModelError("partition instance needs at least one item");
      for (long x : weights)
        if (x <= 0)
          throw ModelError("partition weights must be positive");
      long sum = std::accumulate(weights.begin(), weights.end(), 0L);
      if (sum % 2 != 0)
        throw ModelError("partition weights must have an even sum");
      T = sum / 2;
    }
    int n() const { return static_cast<int>(weights.size()); }

    /// Subset enumeration; instances here are tiny.
    bool solvable() const {
      const int k = n();
      if (k > 24)
        throw BudgetExceeded("partition subsets", 1u << 24);
      for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
        long s = 0;
        for (int i = 0; i < k; ++i)
          if (mask >> i & 1)
            s += weights[i];
        if (s == T)
          return true;
      }
      return false;
    }
};

/// The two strict inequalities that separate positive from negative
/// instances: T l^(n+1) > T - 1/2 + eps and (T-1) l^(n+1) < T - 1/2 - eps.
inline bool partition_params_ok(long T, int n, const Rational& lambda, const Rational& eps) {
  Rational p = pow(lambda, n + 1), half(1, 2), Tq(T);
  return lambda > Rational(0) && lambda < Rational(1) && eps > Rational(0) && Tq * p > Tq - half + eps &&
         (Tq - Rational(1)) * p < Tq - half - eps;
}

struct PartitionGame {
    Arena arena;
    Vertex v0 = 0;
    Rational lambda;
    Rational epsilon;
    Rational c;
    PartitionInstance instance;
};

/// Player 1 at v0 either takes (0, T - 2/3) into v1 or hands over to the item
/// chain, where player 0 gives item i to herself (w_i, 0) or to player 1
/// (0, w_i). Chain states are duplicated by incoming side so that both
/// choices are distinct edges.
inline PartitionGame build_partition_reduction(const PartitionInstance& in) {
  const int n = in.n();
  const Rational half(1, 2);
  Rational lambda;
  for (long k = 2;; ++k) {
    lambda = Rational(k, k + 1);
    if (Rational(in.T) * pow(lambda, n + 1) > Rational(in.T) - half)
      break;
  }
  Rational p = pow(lambda, n + 1), Tq(in.T);
  Rational s1 = Tq * p - (Tq - half), s2 = (Tq - half) - (Tq - Rational(1)) * p;
  Rational eps = min(s1, s2) / Rational(2);

  ArenaBuilder b;
  b.add_vertex("v0", Player::One);
  b.add_vertex("v1", Player::Zero);
  b.add_vertex("1", Player::Zero);
  auto side = [](int i, char s) { return std::to_string(i) + s; };
  for (int i = 2; i <= n; ++i) {
    b.add_vertex(side(i, 'l'), Player::Zero);
    b.add_vertex(side(i, 'r'), Player::Zero);
  }
  b.add_vertex("v2l", Player::Zero);
  b.add_vertex("v2r", Player::Zero);
  b.add_edge("v0", "v1", 0, Tq - Rational(2, 3));
  b.add_edge("v0", "1", 0, 0);
  b.add_edge("v1", "v1", 0, 0);
  b.add_edge("v2l", "v2l", 0, 0);
  b.add_edge("v2r", "v2r", 0, 0);
  for (int i = 1; i <= n; ++i) {
    Rational w(in.weights[i - 1]);
    std::vector<std::string> from = i == 1 ? std::vector<std::string>{"1"}
                                           : std::vector<std::string>{side(i, 'l'), side(i, 'r')};
    std::string L = i == n ? "v2l" : side(i + 1, 'l'), R = i == n ? "v2r" : side(i + 1, 'r');
    for (auto& f : from) {
      b.add_edge(f, L, w, 0);
      b.add_edge(f, R, 0, w);
    }
  }
  b.set_init("v0");
  return {b.build(), 0, lambda, eps, Tq - half, in};
}

}  // namespace qsg
