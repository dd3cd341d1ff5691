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

#include "qsg/ds_stackelberg.hpp"
#include "qsg/reductions.hpp"

using namespace qsg;

TEST(Tds, Layout) {
  auto g = build_tds_reduction({0, 1, Rational(3, 2), Rational(2, 3)});
  const Arena& a = g.arena;
  EXPECT_EQ(a.size(), 5u);
  EXPECT_EQ(a.owner(g.v), Player::One);
  auto e = a.edge(*a.edge_between(a.at("v"), a.at("z")));
  EXPECT_EQ(e.w0, Rational(0));
  EXPECT_EQ(e.w1, Rational(-1));
  EXPECT_THROW(build_tds_reduction({0, 1, 1, Rational(1)}), ModelError);
}

TEST(Tds, TrivialAndUnsolvable) {
  // a = b = 0, t = 0: the zero word hits the target
  auto g = build_tds_reduction({0, 0, 0, Rational(1, 2)});
  auto w = tds_word_strategy(g, "", "a");
  EXPECT_GE(evaluate_csv(g.arena, Rational(1, 2), w, g.v), Rational(0));

  // a = b = 0, t = 1: s pays player 1 nothing, which beats -lambda t, so
  // player 1 enters s and the leader gets 0 < lambda t
  auto h = build_tds_reduction({0, 0, 1, Rational(1, 2)});
  for (const char* cyc : {"a", "b", "ab"}) {
    auto s = tds_word_strategy(h, "", cyc);
    EXPECT_EQ(evaluate_csv(h.arena, Rational(1, 2), s, h.v), Rational(0));
  }
  auto gap = gap_decide(h.arena, Rational(1, 2), h.v, Rational(1, 2), Rational(1, 4), Semantics::Cooperative);
  EXPECT_FALSE(gap.yes);
}

TEST(Tds, PeriodicTargetsReachCooperativeBound) {
  // lambda = 1/2, a = 0, b = 1: t = sum of b-positions 2^-i for periodic words.
  const Rational lam(1, 2);
  struct Case { std::string pre, cyc; };
  for (auto [pre, cyc] : std::vector<Case>{{"", "b"}, {"b", "a"}, {"ab", "a"}, {"", "ab"}, {"ba", "ab"}}) {
    std::string word = pre + cyc;
    // closed form of the periodic sum
    Rational sp, sc, f(1);
    for (char ch : pre) {
      if (ch == 'b')
        sp += f;
      f *= lam;
    }
    Rational g0 = f;
    for (char ch : cyc) {
      if (ch == 'b')
        sc += f;
      f *= lam;
    }
    Rational t = sp + sc / (Rational(1) - f / g0);
    auto g = build_tds_reduction({0, 1, t, lam});
    auto s = tds_word_strategy(g, pre, cyc);
    EXPECT_EQ(evaluate_csv(g.arena, lam, s, g.v), lam * t) << word;
  }
}

TEST(Partition, Validation) {
  EXPECT_THROW(PartitionInstance({1, 1, 1}), ModelError);
  EXPECT_THROW(PartitionInstance({0, 2}), ModelError);
  EXPECT_TRUE(PartitionInstance({1, 1, 2}).solvable());
  EXPECT_FALSE(PartitionInstance({1, 3}).solvable());
}

TEST(Partition, ParameterInequalities) {
  EXPECT_TRUE(partition_params_ok(1, 2, Rational(9, 10), Rational(1, 5)));
  EXPECT_FALSE(partition_params_ok(1, 2, Rational(1, 2), Rational(1, 5)));
  for (auto w : std::vector<std::vector<long>>{{1, 1}, {1, 3}, {1, 1, 2}, {2, 3, 3}, {1, 1, 1, 1}, {1, 2, 2, 3}}) {
    auto g = build_partition_reduction(PartitionInstance(w));
    EXPECT_TRUE(partition_params_ok(g.instance.T, g.instance.n(), g.lambda, g.epsilon));
    EXPECT_EQ(g.c, Rational(g.instance.T) - Rational(1, 2));
    // lambda is the first k/(k+1) that works
    Rational prev(g.lambda.num() - 1, g.lambda.den() - 1);
    if (prev > Rational(1, 2)) {
      EXPECT_FALSE(Rational(g.instance.T) * pow(prev, g.instance.n() + 1) > g.c);
    }
  }
}

TEST(Partition, Layout) {
  auto g = build_partition_reduction(PartitionInstance({1, 1, 2}));
  const Arena& a = g.arena;
  EXPECT_EQ(a.owner(g.v0), Player::One);
  EXPECT_EQ(a.edge(*a.edge_between(a.at("v0"), a.at("v1"))).w1, Rational(2) - Rational(2, 3));
  EXPECT_EQ(a.edge(*a.edge_between(a.at("2l"), a.at("3l"))).w0, Rational(1));
  EXPECT_EQ(a.edge(*a.edge_between(a.at("2l"), a.at("3r"))).w1, Rational(1));
  EXPECT_EQ(a.edge(*a.edge_between(a.at("3r"), a.at("v2r"))).w1, Rational(2));
}

TEST(Partition, EndToEndSmall) {
  for (auto w : std::vector<std::vector<long>>{{1, 1}, {1, 3}, {1, 1, 2}, {2, 3, 3}}) {
    PartitionInstance in(w);
    auto g = build_partition_reduction(in);
    for (auto sem : {Semantics::Cooperative, Semantics::Adversarial}) {
      auto r = gap_decide(g.arena, g.lambda, g.v0, g.c, g.epsilon, sem);
      EXPECT_EQ(r.yes, in.solvable()) << w.size() << " " << to_string(sem);
    }
  }
}
