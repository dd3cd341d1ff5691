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
#include "qsg/asv_mp.hpp"

using namespace qsg;

namespace {

Region2D quadrant(Rational c0, Rational d0) {
  // c >= c0 and d <= d0
  return Region2D{{ConvexCell{{HalfPlane{1, 0, c0}, HalfPlane{0, -1, -d0}}}}};
}

Lasso cycle_only(std::vector<Vertex> c) { return Lasso{{}, std::move(c)}; }

}  // namespace

TEST(Phi, Examples) {
  Arena f2 = fx::shared_loop();
  Vertex v0 = f2.at("v0"), v1 = f2.at("v1"), v2 = f2.at("v2");
  auto big = phi_region(f2, {v0, v1});
  for (auto [x, y, in] : std::vector<std::tuple<Rational, Rational, bool>>{
           {0, 1, true}, {1, 1, true}, {0, 2, true}, {Rational(1, 2), Rational(3, 2), true},
           {Rational(1, 2), Rational(8, 5), false}, {Rational(-1), 1, false}, {0, Rational(1, 2), false}})
    EXPECT_EQ(big.region.contains({x, y}), in) << x << "," << y;

  auto pt = phi_region(f2, {v2});
  EXPECT_TRUE(pt.region.contains({0, 1}));
  EXPECT_FALSE(pt.region.contains({0, Rational(11, 10)}));

  auto s = fx::self_loop(2, 3);
  auto r = phi_region(s, {0});
  EXPECT_TRUE(r.region.contains({2, 3}));
  EXPECT_FALSE(r.region.contains({2, Rational(31, 10)}));
  EXPECT_FALSE(r.region.contains({Rational(21, 10), 3}));
}

TEST(Lambda, Examples) {
  Arena f2 = fx::shared_loop();
  EXPECT_TRUE(same_set(lambda_region(f2, f2.at("v0")).region, quadrant(0, 1)));
  EXPECT_TRUE(same_set(lambda_region(f2, f2.at("v1")).region, quadrant(0, 1)));
  EXPECT_TRUE(same_set(lambda_region(fx::self_loop(2, 3), 0).region, quadrant(2, 3)));
}

TEST(Lambda, AgreesWithConjunctionOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> g(-12, 12);
  for (int it = 0; it < 15; ++it) {
    Arena a = fx::random_arena(rng, 4, 2, 2);
    for (Vertex v = 0; v < 4; ++v) {
      auto lr = lambda_region(a, v);
      for (int k = 0; k < 30; ++k) {
        Rational c(g(rng), 4), d(g(rng), 4);
        EXPECT_EQ(lr.region.contains({c, d}), conj_player1_wins(a, v, c, d).bad);
        // upward closed in c, downward closed in d
        if (lr.region.contains({c, d})) {
          EXPECT_TRUE(lr.region.contains({c + Rational(1, 3), d}));
          EXPECT_TRUE(lr.region.contains({c, d - Rational(1, 3)}));
        }
      }
    }
  }
}

TEST(Witness, Examples) {
  Arena f2 = fx::shared_loop();
  Vertex v0 = f2.at("v0"), v1 = f2.at("v1");
  auto mixed = cycle_only({v0, v1, v0, v1, v0, v1, v1, v1});
  auto r = check_witness(f2, v0, mixed, Rational(1, 2));
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.cPrime, Rational(3, 4));
  EXPECT_EQ(r.d, Rational(5, 4));

  auto plain = check_witness(f2, v0, cycle_only({v0, v1}), Rational(1, 2));
  EXPECT_FALSE(plain.ok);
  EXPECT_EQ(plain.d, Rational(1));
  EXPECT_TRUE(plain.badVertex.has_value());

  auto s = fx::self_loop(2, 3);
  auto t = check_witness(s, 0, cycle_only({0}), Rational(1));
  EXPECT_TRUE(t.ok);
  EXPECT_EQ(t.cPrime, Rational(2));
  EXPECT_EQ(t.d, Rational(3));

  EXPECT_THROW(check_witness(f2, v1, mixed, Rational(0)), ModelError);
}

TEST(Threshold, Examples) {
  Arena f2 = fx::shared_loop();
  Vertex v0 = f2.at("v0"), v1 = f2.at("v1");
  auto r = asv_threshold(f2, v0, Rational(1, 2));
  ASSERT_TRUE(r.yes);
  const auto& w = *r.certificate;
  EXPECT_EQ(w.l1, (Cycle{v0, v1}));
  EXPECT_EQ(w.l2, (Cycle{v1}));
  EXPECT_EQ(w.alpha, Rational(3, 4));
  EXPECT_EQ(w.beta, Rational(1, 4));
  EXPECT_EQ(w.cPrime, Rational(3, 4));
  EXPECT_EQ(w.d, Rational(5, 4));
  EXPECT_TRUE(verify_certificate(f2, w).ok);
  auto l = accepted_witness_lasso(f2, w);
  ASSERT_TRUE(l.has_value());
  EXPECT_TRUE(check_witness(f2, v0, *l, Rational(1, 2)).ok);

  EXPECT_FALSE(asv_threshold(f2, v0, Rational(1)).yes);
  EXPECT_FALSE(asv_threshold(fx::self_loop(2, 3), 0, Rational(5)).yes);
  EXPECT_TRUE(asv_threshold(fx::self_loop(2, 3), 0, Rational(1)).yes);
}

TEST(Threshold, ApproachableNotAchievable) {
  Arena f2 = fx::shared_loop();
  for (int e : {2, 4, 8, 16})
    EXPECT_TRUE(asv_threshold(f2, f2.at("v0"), Rational(1) - Rational(1, e)).yes) << e;
  EXPECT_FALSE(asv_threshold(f2, f2.at("v0"), Rational(1)).yes);
}

TEST(Value, Examples) {
  Arena f2 = fx::shared_loop();
  auto v = asv_value(f2, f2.at("v0"));
  EXPECT_EQ(v.value, Rational(1));
  EXPECT_FALSE(v.attained);
  auto s = asv_value(fx::self_loop(2, 3), 0);
  EXPECT_EQ(s.value, Rational(2));
  EXPECT_TRUE(s.attained);
}

TEST(Value, ConsistentWithThreshold) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> g(-9, 9);
  for (int it = 0; it < 25; ++it) {
    Arena a = fx::random_arena(rng, 4, 2, 2);
    LambdaCache cache(a);
    auto val = asv_value(a, 0, &cache);
    EXPECT_FALSE(asv_threshold(a, 0, val.value, &cache).yes);
    EXPECT_TRUE(asv_threshold(a, 0, val.value - Rational(1, 64), &cache).yes);
    for (int k = 0; k < 4; ++k) {
      Rational c(g(rng), 4);
      EXPECT_EQ(asv_threshold(a, 0, c, &cache).yes, val.value > c) << c;
    }
  }
}

TEST(Witness, CertificatesVerify) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> g(-8, 8);
  int yes = 0;
  for (int it = 0; it < 30; ++it) {
    Arena a = fx::random_arena(rng, 5, 3, 2);
    LambdaCache cache(a);
    Rational c(g(rng), 4);
    auto r = asv_threshold(a, 0, c, &cache);
    if (!r.yes)
      continue;
    ++yes;
    EXPECT_TRUE(verify_certificate(a, *r.certificate).ok);
    auto l = accepted_witness_lasso(a, *r.certificate, &cache);
    ASSERT_TRUE(l.has_value());
    EXPECT_TRUE(check_witness(a, 0, *l, c, &cache).ok);
  }
  EXPECT_GT(yes, 5);
}

TEST(Verifier, RejectsTampering) {
  Arena f2 = fx::shared_loop();
  auto w = *asv_threshold(f2, f2.at("v0"), Rational(1, 2)).certificate;
  auto bad = w;
  bad.alpha = Rational(1, 2);
  bad.beta = Rational(1, 2);
  EXPECT_FALSE(verify_certificate(f2, bad).ok);
  bad = w;
  bad.c = Rational(4, 5);
  EXPECT_FALSE(verify_certificate(f2, bad).ok);
  bad = w;
  bad.l2 = {f2.at("v2")};
  EXPECT_FALSE(verify_certificate(f2, bad).ok);
  bad = w;
  bad.refutations.erase(f2.at("v1"));
  EXPECT_FALSE(verify_certificate(f2, bad).ok);
}

TEST(Leader, SharedLoopSimulation) {
  Arena f2 = fx::shared_loop();
  auto w = *asv_threshold(f2, f2.at("v0"), Rational(1, 2)).certificate;
  auto s = synthesize_leader_strategy(f2, w);
  s.run_cooperative(10000);
  const auto& h = s.history();
  std::size_t burn = s.burn_in();
  ASSERT_FALSE(s.block_ends().empty());
  Rational sum = 0;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    sum += f2.edge(*f2.edge_between(h[i], h[i + 1])).w0;
    if (i + 1 >= burn) {
      EXPECT_GT(sum / Rational(static_cast<long>(i + 1)), Rational(1, 2));
    }
  }
  EXPECT_FALSE(s.summary().empty());
}

TEST(Leader, PunishesDeviation) {
  Arena f2 = fx::shared_loop();
  Vertex v0 = f2.at("v0"), v2 = f2.at("v2");
  auto w = *asv_threshold(f2, v0, Rational(1, 2)).certificate;
  auto s = synthesize_leader_strategy(f2, w);
  s.step([&](Vertex) { return v2; });
  EXPECT_TRUE(s.punishing());
  for (int i = 0; i < 5; ++i)
    s.step([&](Vertex) { return v2; });
  EXPECT_EQ(s.current(), v2);
}

TEST(Leader, Degenerate) {
  auto a = fx::self_loop(2, 3);
  auto w = *asv_threshold(a, 0, Rational(1)).certificate;
  EXPECT_TRUE(w.beta.is_zero());
  auto s = synthesize_leader_strategy(a, w);
  s.run_cooperative(10);
  for (Vertex u : s.history())
    EXPECT_EQ(u, 0);
}

TEST(BestResponse, Examples) {
  Arena f1 = fx::no_best_response();
  auto mk = [&](const std::string& at2, const std::string& at3) {
    std::vector<Vertex> ch(f1.size(), -1);
    ch[f1.at("2")] = f1.at(at2);
    ch[f1.at("3")] = f1.at(at3);
    return MealyStrategy::memoryless(f1, Player::Zero, ch);
  };
  auto dd = best_response_mp(f1, mk("2", "3"), f1.at("1"));
  EXPECT_EQ(dd.value, Rational(1));
  auto cc = best_response_mp(f1, mk("3", "2"), f1.at("1"));
  EXPECT_EQ(cc.value, Rational(3, 2));
  auto to3 = best_response_mp(f1, mk("3", "3"), f1.at("1"));
  EXPECT_EQ(to3.value, Rational(2));
  EXPECT_EQ(mp_of_lasso(f1, to3.response).second, Rational(2));

  Arena f2 = fx::shared_loop();
  std::vector<Vertex> ch(f2.size(), -1);
  ch[f2.at("v1")] = f2.at("v0");
  ch[f2.at("v2")] = f2.at("v2");
  auto r = best_response_mp(f2, MealyStrategy::memoryless(f2, Player::Zero, ch), f2.at("v0"));
  EXPECT_EQ(r.value, Rational(1));
  EXPECT_TRUE(r.tie());
  EXPECT_EQ(r.mp0Low, Rational(0));
  EXPECT_EQ(r.mp0High, Rational(1));
}

TEST(BestResponse, MatchesKarpOnProduct) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 40; ++it) {
    Arena a = fx::random_arena(rng, 5, 3, 3);
    auto s = fx::random_mealy(rng, a, Player::Zero, 2);
    auto r = best_response_mp(a, s, 0);
    EXPECT_EQ(mp_of_lasso(a, r.response).second, r.value);
    EXPECT_EQ(r.response.start(), 0);
    auto p = product_from(a, s, Player::Zero, 0);
    auto g = Digraph::of(p.arena);
    auto best = reachable_extreme_mean(g, [&](EdgeId e) { return p.arena.edge(e).w1; }, true);
    EXPECT_EQ(*best[p.start], r.value);
  }
}
