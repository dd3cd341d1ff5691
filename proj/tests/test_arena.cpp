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

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "qsg/arena.hpp"
#include "qsg/graph.hpp"

using namespace qsg;

TEST(Arena, ParsesTwoPlayerGame) {
  Arena a = fx::shared_loop();
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.edge_count(), 5u);
  EXPECT_EQ(a.max_abs_weight(), Rational(2));
  EXPECT_EQ(a.owner(a.at("v0")), Player::One);
  EXPECT_EQ(a.owner(a.at("v1")), Player::Zero);
  ASSERT_TRUE(a.init());
  EXPECT_EQ(a.name(*a.init()), "v0");
  auto e = a.edge_between(a.at("v1"), a.at("v1"));
  ASSERT_TRUE(e);
  EXPECT_EQ(a.edge(*e).w1, Rational(2));
}

TEST(Arena, SingleLoop) {
  Arena a = parse_arena("player0: v\nedge: v v 2 3\n");
  EXPECT_EQ(a.max_abs_weight(), Rational(3));
  EXPECT_FALSE(a.init());
}

TEST(Arena, RationalWeightsAndComments) {
  Arena a = parse_arena("# header\nplayer0: a   # trailing\nplayer1: b\nedge: a b -1/2 4/6\nedge: b a 0 0\n");
  EXPECT_EQ(a.edge(0).w0, Rational(-1, 2));
  EXPECT_EQ(a.edge(0).w1, Rational(2, 3));
  EXPECT_EQ(a.max_abs_weight(), Rational(2, 3));
}

namespace {

int error_line(const std::string& text) {
  try {
    parse_arena(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Arena, ReportsErrorsWithLines) {
  EXPECT_EQ(error_line("player0: a b\nedge: a a 0 0\n"), 1);  // dead end b
  EXPECT_EQ(error_line("player0: a\nedge: a c 0 0\n"), 2);
  EXPECT_EQ(error_line("player0: a\nedge: a a 0 0\nedge: a a 1 1\n"), 3);
  EXPECT_EQ(error_line("player0: a\nfoo: a\n"), 2);
  EXPECT_EQ(error_line("player0: a\nedge: a a 0.5 0\n"), 2);
  EXPECT_EQ(error_line("player0: a\nplayer1: a\n"), 2);
  EXPECT_EQ(error_line("player0: a\nedge: a a 0\n"), 2);
  EXPECT_EQ(error_line("player0: a\ninit: z\nedge: a a 0 0\n"), 2);
  EXPECT_EQ(error_line("player0: a\nedge a a 0 0\n"), 2);
}

TEST(Arena, SerializationRoundTrips) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    Arena a = fx::random_arena(rng, 1 + i % 8, 3, 5);
    std::string text = serialize_arena(a);
    Arena b = parse_arena(text);
    EXPECT_EQ(a, b);
    EXPECT_EQ(text, serialize_arena(b));
  }
  Arena f = fx::no_best_response();
  EXPECT_EQ(parse_arena(serialize_arena(f)), f);
}

TEST(Arena, SerializationIsCanonical) {
  Arena a = parse_arena("player0: x\nplayer1: y\nedge: y x 2/4 0\nedge: x y 1 1\nedge: x x 0 0\n");
  EXPECT_EQ(serialize_arena(a), "player0: x\nplayer1: y\nedge: x x 0 0\nedge: x y 1 1\nedge: y x 1/2 0\n");
}

TEST(Lasso, Validation) {
  Arena a = fx::shared_loop();
  Lasso ok{{a.at("v0")}, {a.at("v2")}};
  EXPECT_NO_THROW(ok.validate(a));
  EXPECT_EQ(ok.size(), 2u);
  Lasso bad{{a.at("v2")}, {a.at("v0")}};
  EXPECT_THROW(bad.validate(a), ModelError);
  Lasso empty{{a.at("v0")}, {}};
  EXPECT_THROW(empty.validate(a), ModelError);
}

TEST(Product, MemorylessStrategyKeepsVertexCount) {
  Arena a = fx::no_best_response();
  auto s = MealyStrategy::memoryless(a, Player::Zero, {a.at("1"), a.at("3"), a.at("3")});
  auto p = product_with_strategy(a, s, Player::Zero);
  EXPECT_EQ(p.arena.size(), a.size());
  Vertex one = p.index.at({a.at("1"), 0});
  EXPECT_EQ(p.arena.out(one).size(), 2u);
  Vertex two = p.index.at({a.at("2"), 0});
  ASSERT_EQ(p.arena.out(two).size(), 1u);
  EXPECT_EQ(p.arena.name(p.arena.edge(p.arena.out(two)[0]).dst), "3");
  Vertex three = p.index.at({a.at("3"), 0});
  ASSERT_EQ(p.arena.out(three).size(), 1u);
  EXPECT_EQ(p.arena.edge(p.arena.out(three)[0]).dst, three);
}

TEST(Product, FirstEdgeStrategy) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    Arena a = fx::random_arena(rng, 6, 3, 3);
    auto s = MealyStrategy::first_edge(a, Player::Zero);
    EXPECT_EQ(product_with_strategy(a, s, Player::Zero).arena.size(), a.size());
  }
}

TEST(Product, SelfLoopIsIdentity) {
  Arena a = fx::self_loop(2, 3);
  auto s = MealyStrategy::first_edge(a, Player::Zero);
  auto p = product_with_strategy(a, s, Player::Zero);
  EXPECT_EQ(p.arena, a);
}

TEST(Product, MemoryIsTracked) {
  // Alternate between the two successors of a using one bit of memory.
  Arena a = parse_arena("player0: a b c\nedge: a b 0 0\nedge: a c 0 0\nedge: b a 0 0\nedge: c a 0 0\n");
  MealyStrategy s;
  s.player = Player::Zero;
  s.update = {{1, 0, 0}, {0, 1, 1}};
  s.output = {{1, 0, 0}, {2, 0, 0}};
  auto p = product_from(a, s, Player::Zero, 0);
  // From (a,1): go to c, memory stays 1; back to a with memory 0; then b.
  EXPECT_EQ(p.arena.size(), 4u);
  for (Vertex v = 0; v < static_cast<Vertex>(p.arena.size()); ++v)
    EXPECT_EQ(p.arena.out(v).size(), 1u);
}

TEST(Extended, ReachableStatesOfTwoPlayerGame) {
  Arena a = fx::shared_loop();
  auto ext = build_extended(a, a.at("v0"));
  EXPECT_EQ(ext.arena.size(), 5u);
  std::set<std::string> names;
  for (Vertex v = 0; v < static_cast<Vertex>(ext.arena.size()); ++v)
    names.insert(ext.arena.name(v));
  EXPECT_EQ(names, (std::set<std::string>{"v0{v0}", "v1{v0,v1}", "v2{v0,v2}", "v0{v0,v1}", "v2{v0,v1,v2}"}));
  auto scc = scc_decompose(ext.arena);
  int nontrivial = 0;
  for (int c = 0; c < static_cast<int>(scc.components.size()); ++c)
    if (scc.nontrivial(c)) {
      ++nontrivial;
      if (scc.components[c].size() == 2) {
        std::set<std::string> m;
        for (Vertex v : scc.components[c])
          m.insert(ext.arena.name(v));
        EXPECT_EQ(m, (std::set<std::string>{"v0{v0,v1}", "v1{v0,v1}"}));
      }
    }
  EXPECT_EQ(nontrivial, 3);
}

TEST(Extended, SmallCases) {
  EXPECT_EQ(build_extended(fx::self_loop(1, 1), 0).arena.size(), 1u);
  Arena k2 = parse_arena("player0: a b\nedge: a a 0 0\nedge: a b 0 0\nedge: b a 0 0\nedge: b b 0 0\n");
  EXPECT_EQ(build_extended(k2, 0).arena.size(), 3u);
}

TEST(Extended, CapIsEnforced) {
  std::mt19937_64 rng(11);
  Arena a = fx::random_arena(rng, 8, 3, 2);
  EXPECT_THROW(build_extended(a, 0, 2), BudgetExceeded);
}

TEST(Extended, SetsGrowAlongEdgesAndPayoffsLift) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    Arena a = fx::random_arena(rng, 2 + i % 7, 3, 4);
    auto ext = build_extended(a, 0);
    for (const Edge& e : ext.arena.edges()) {
      const auto& from = ext.visited[e.src];
      const auto& to = ext.visited[e.dst];
      EXPECT_TRUE(std::includes(to.begin(), to.end(), from.begin(), from.end()));
      EXPECT_TRUE(std::binary_search(to.begin(), to.end(), ext.base[e.dst]));
      auto be = a.edge_between(ext.base[e.src], ext.base[e.dst]);
      ASSERT_TRUE(be);
      EXPECT_EQ(a.edge(*be).w0, e.w0);
      EXPECT_EQ(a.edge(*be).w1, e.w1);
    }
    // Lift a random walk-generated lasso and compare payoffs.
    std::vector<Vertex> walk{0};
    std::uniform_int_distribution<int> pick(0, 2);
    for (int k = 0; k < 20; ++k) {
      auto succ = a.successors(walk.back());
      walk.push_back(succ[pick(rng) % succ.size()]);
    }
    // Close a cycle at the first repetition after the set has stabilised.
    std::vector<Vertex> ewalk{ext.start};
    for (std::size_t k = 1; k < walk.size(); ++k)
      for (EdgeId e : ext.arena.out(ewalk.back()))
        if (ext.base[ext.arena.edge(e).dst] == walk[k]) {
          ewalk.push_back(ext.arena.edge(e).dst);
          break;
        }
    ASSERT_EQ(ewalk.size(), walk.size());
    for (std::size_t j = ewalk.size() - 1; j-- > 0;)
      if (ewalk[j] == ewalk.back()) {
        Lasso le{{ewalk.begin(), ewalk.begin() + static_cast<long>(j)},
                 {ewalk.begin() + static_cast<long>(j), ewalk.end() - 1}};
        Lasso lb{{walk.begin(), walk.begin() + static_cast<long>(j)},
                 {walk.begin() + static_cast<long>(j), walk.end() - 1}};
        EXPECT_EQ(mp_of_lasso(ext.arena, le), mp_of_lasso(a, lb));
        EXPECT_EQ(ds_of_lasso(ext.arena, le, Rational(2, 3)), ds_of_lasso(a, lb, Rational(2, 3)));
        break;
      }
  }
}

TEST(Arena, SampleGamesMatchFixtures) {
  const char* dir = std::getenv("QSG_GAMES");
  if (!dir)
    GTEST_SKIP() << "QSG_GAMES not set";
  auto read = [&](const std::string& name) {
    std::ifstream in(std::string(dir) + "/" + name);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_arena(os.str());
  };
  EXPECT_EQ(serialize_arena(read("shared_loop.game")), serialize_arena(fx::shared_loop()));
  EXPECT_EQ(serialize_arena(read("no_best_response.game")), serialize_arena(fx::no_best_response()));
  EXPECT_EQ(read("tds.game").size(), 5u);
  EXPECT_GT(read("partition.game").size(), 5u);
}
