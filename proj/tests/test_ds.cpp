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

#include <random>

#include "fixtures.hpp"
#include "qsg/ds_stackelberg.hpp"
#include "qsg/reductions.hpp"

using namespace qsg;

namespace {

TdsGame tds_sample() { return build_tds_reduction({0, 1, Rational(3, 2), Rational(2, 3)}); }

MealyStrategy always(const Arena& a, const std::map<std::string, std::string>& moves) {
  std::vector<Vertex> ch(a.size(), -1);
  for (Vertex u = 0; u < static_cast<Vertex>(a.size()); ++u)
    if (a.owner(u) == Player::Zero)
      ch[u] = a.edge(a.out(u).front()).dst;
  for (auto& [f, t] : moves)
    ch[a.at(f)] = a.at(t);
  return MealyStrategy::memoryless(a, Player::Zero, ch);
}

Arena tie_arena() {
  return parse_arena(R"(
player1: u
player0: x y
edge: u x 0 1
edge: u y 1 1
edge: x x 0 0
edge: y y 0 0
)");
}

}  // namespace

TEST(DsBestResponse, Examples) {
  auto g = tds_sample();
  const Arena& a = g.arena;
  auto r = ds_best_response(a, g.instance.lambda, always(a, {{"s", "b"}, {"a", "b"}, {"b", "b"}}), g.v);
  EXPECT_EQ(r.value, Rational(-1));
  EXPECT_EQ(r.response.choose(r.response.start_memory(g.v), g.v), a.at("z"));

  auto s = fx::self_loop(2, 3, Player::One);
  for (Rational lam : {Rational(1, 2), Rational(9, 10)}) {
    auto br = ds_best_response(s, lam, MealyStrategy::first_edge(s, Player::Zero), 0);
    EXPECT_EQ(br.value, Rational(3) / (Rational(1) - lam));
  }

  auto pg = build_partition_reduction(PartitionInstance({1, 1, 2}));
  std::map<std::string, std::string> mine{{"1", "2l"}, {"2l", "3l"}, {"2r", "3l"}, {"3l", "v2l"}, {"3r", "v2l"}};
  auto pr = ds_best_response(pg.arena, pg.lambda, always(pg.arena, mine), pg.v0);
  EXPECT_EQ(pr.value, Rational(pg.instance.T) - Rational(2, 3));
  EXPECT_EQ(pr.response.choose(pr.response.start_memory(pg.v0), pg.v0), pg.arena.at("v1"));
}

TEST(DsEvaluate, Examples) {
  auto g = tds_sample();
  const Arena& a = g.arena;
  auto alt = tds_word_strategy(g, "", "ba");
  EXPECT_EQ(evaluate_csv(a, g.instance.lambda, alt, g.v), Rational(0));
  EXPECT_EQ(evaluate_asv(a, g.instance.lambda, alt, g.v), Rational(0));

  auto s = fx::self_loop(2, 3);
  auto st = MealyStrategy::first_edge(s, Player::Zero);
  EXPECT_EQ(evaluate_csv(s, Rational(1, 2), st, 0), Rational(4));
  EXPECT_EQ(evaluate_asv(s, Rational(1, 2), st, 0), Rational(4));

  auto t = tie_arena();
  auto ts = MealyStrategy::first_edge(t, Player::Zero);
  EXPECT_EQ(evaluate_csv(t, Rational(1, 2), ts, t.at("u")), Rational(1));
  EXPECT_EQ(evaluate_asv(t, Rational(1, 2), ts, t.at("u")), Rational(0));
}

TEST(DsEvaluate, RandomProperties) {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 60; ++it) {
    Arena a = fx::random_arena(rng, 5, 3, 3);
    auto s = fx::random_mealy(rng, a, Player::Zero, 2);
    Rational lam(std::uniform_int_distribution<int>(1, 9)(rng), 10);
    EXPECT_LE(evaluate_asv(a, lam, s, 0), evaluate_csv(a, lam, s, 0));

    auto br = ds_best_response(a, lam, s, 0);
    // The response realises the value.
    auto p = product_from(a, s, Player::Zero, 0);
    std::vector<Vertex> succ(p.arena.size());
    for (Vertex x = 0; x < static_cast<Vertex>(p.arena.size()); ++x) {
      auto [u, m] = p.origin[x];
      Vertex next = a.owner(u) == Player::Zero ? s.choose(m, u) : br.response.choose(m, u);
      succ[x] = p.index.at({next, s.update[m][next]});
    }
    EXPECT_EQ(evaluate_profile_ds(p.arena, succ, 1, lam)[p.start], br.value);
    // No random positional response on the product beats it.
    for (int k = 0; k < 20; ++k) {
      std::vector<Vertex> alt(p.arena.size());
      for (Vertex x = 0; x < static_cast<Vertex>(p.arena.size()); ++x) {
        const auto& out = p.arena.out(x);
        alt[x] = p.arena.edge(out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)]).dst;
      }
      EXPECT_LE(evaluate_profile_ds(p.arena, alt, 1, lam)[p.start], br.value);
    }
  }
}

TEST(Horizon, Examples) {
  EXPECT_EQ(compute_horizon(2, Rational(1, 2), 1).N, 4);
  EXPECT_EQ(compute_horizon(1, Rational(1, 2), 2).N, 2);
  // smallest N with 9^N * 600 < 10^N
  int expect = 0;
  for (BigInt p9 = 1, p10 = 1; !(p9 * 600 < p10); p9 *= 9, p10 *= 10)
    ++expect;
  auto h = compute_horizon(3, Rational(9, 10), Rational(1, 10));
  EXPECT_EQ(h.N, expect);
  EXPECT_EQ(h.N, 61);
  EXPECT_EQ(compute_horizon(2, Rational(1, 2), 1, 2).memoryBound, BigInt(31 + 2));
  EXPECT_THROW(compute_horizon(1, Rational(1, 2), 0), ModelError);
}

TEST(Gap, Examples) {
  auto g = tds_sample();
  const Rational lam = g.instance.lambda;
  auto yes = gap_decide(g.arena, lam, g.v, Rational(4, 5), Rational(1, 10), Semantics::Cooperative);
  EXPECT_TRUE(yes.yes);
  ASSERT_TRUE(yes.witnessStrategy);
  EXPECT_EQ(evaluate_csv(g.arena, lam, *yes.witnessStrategy, g.v), yes.value);
  EXPECT_GT(yes.value, Rational(4, 5));

  auto no = gap_decide(g.arena, lam, g.v, Rational(3, 2), Rational(1, 10), Semantics::Cooperative);
  EXPECT_FALSE(no.yes);
  EXPECT_LE(evaluate_csv(g.arena, lam, *no.witnessStrategy, g.v), Rational(3, 2));

  auto s = fx::self_loop(2, 3);
  auto v = gap_decide(s, Rational(1, 2), 0, Rational(3), Rational(1, 2), Semantics::Adversarial);
  EXPECT_TRUE(v.yes);
  EXPECT_EQ(v.value, Rational(4));
}

TEST(Gap, WitnessReevaluates) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 25; ++it) {
    Arena a = fx::random_arena(rng, 4, 2, 2);
    Rational lam(1, 2);
    for (auto sem : {Semantics::Cooperative, Semantics::Adversarial}) {
      auto r = gap_decide(a, lam, 0, Rational(0), Rational(1), sem);
      ASSERT_TRUE(r.witnessStrategy);
      EXPECT_EQ(evaluate_stackelberg(a, lam, *r.witnessStrategy, 0, sem), r.value);
    }
  }
}

TEST(Gap, BudgetIsReported) {
  auto g = tds_sample();
  Budget b;
  b.gapSummaries = 50;
  try {
    gap_decide(g.arena, g.instance.lambda, g.v, Rational(4, 5), Rational(1, 10), Semantics::Cooperative, b);
    FAIL() << "expected a budget error";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.resource(), "gap summaries");
    EXPECT_FALSE(e.required().empty());
  }
}
