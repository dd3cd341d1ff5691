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
#include <random>
#include <string>

#include "qsg/arena.hpp"

namespace qsg::fx {

inline Arena no_best_response() {
  return parse_arena(R"(
player1: 1
player0: 2 3
init: 1
edge: 1 1 0 0
edge: 1 2 0 0
edge: 2 2 0 1
edge: 2 3 0 2
edge: 3 3 0 2
edge: 3 2 0 1
)");
}

inline Arena shared_loop() {
  return parse_arena(R"(
player1: v0
player0: v1 v2
init: v0
edge: v0 v1 1 1
edge: v1 v0 1 1
edge: v1 v1 0 2
edge: v0 v2 0 1
edge: v2 v2 0 1
)");
}

inline Arena self_loop(Rational w0, Rational w1, Player owner = Player::Zero) {
  ArenaBuilder b;
  b.add_vertex("v", owner);
  b.add_edge("v", "v", w0, w1);
  b.set_init("v");
  return b.build();
}

/// Random arena with every vertex having 1..maxOut successors and integer
/// weights in [-maxW, maxW].
inline Arena random_arena(std::mt19937_64& rng, int n, int maxOut, int maxW) {
  ArenaBuilder b;
  std::uniform_int_distribution<int> coin(0, 1), wd(-maxW, maxW), outd(1, maxOut), vd(0, n - 1);
  for (int i = 0; i < n; ++i)
    b.add_vertex("v" + std::to_string(i), coin(rng) ? Player::One : Player::Zero);
  for (int i = 0; i < n; ++i) {
    int k = std::min(outd(rng), n);
    std::vector<int> targets;
    while (static_cast<int>(targets.size()) < k) {
      int t = vd(rng);
      if (std::find(targets.begin(), targets.end(), t) == targets.end())
        targets.push_back(t);
    }
    for (int t : targets)
      b.add_edge(i, t, Rational(wd(rng)), Rational(wd(rng)));
  }
  b.set_init(0);
  return b.build();
}

/// Random memoryless strategy for `p`.
inline MealyStrategy random_memoryless(std::mt19937_64& rng, const Arena& a, Player p) {
  std::vector<Vertex> choice(a.size(), -1);
  for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v) {
    const auto& out = a.out(v);
    choice[v] = a.edge(out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)]).dst;
  }
  return MealyStrategy::memoryless(a, p, choice);
}

/// Random Mealy strategy with `mem` states.
inline MealyStrategy random_mealy(std::mt19937_64& rng, const Arena& a, Player p, int mem) {
  MealyStrategy s;
  s.player = p;
  s.update.assign(mem, std::vector<int>(a.size()));
  s.output.assign(mem, std::vector<Vertex>(a.size(), -1));
  std::uniform_int_distribution<int> md(0, mem - 1);
  for (int m = 0; m < mem; ++m)
    for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v) {
      s.update[m][v] = md(rng);
      if (a.owner(v) == p) {
        const auto& out = a.out(v);
        s.output[m][v] = a.edge(out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)]).dst;
      }
    }
  return s;
}

}  // namespace qsg::fx
