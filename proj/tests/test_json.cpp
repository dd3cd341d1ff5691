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
#include "qsg/json_io.hpp"
#include "qsg/qsg.hpp"

using namespace qsg;
using io::json;

TEST(Json, Rationals) {
  EXPECT_EQ(io::rat(Rational(-3, 6)), json("-1/2"));
  EXPECT_EQ(io::rat_of(json("7/4")), Rational(7, 4));
  EXPECT_EQ(io::rat_of(json(3)), Rational(3));
}

TEST(Json, CertificateRoundTrip) {
  Arena f2 = fx::shared_loop();
  auto w = *asv_threshold(f2, f2.at("v0"), Rational(1, 2)).certificate;
  auto text = io::to_json(f2, w).dump();
  auto back = io::certificate_of(f2, json::parse(text));
  EXPECT_TRUE(verify_certificate(f2, back).ok);
  EXPECT_EQ(back.alpha, w.alpha);
  EXPECT_EQ(back.l1, w.l1);
  EXPECT_EQ(io::to_json(f2, back).dump(), text);

  // a tampered document is caught by the verifier, not the parser
  auto doc = json::parse(text);
  doc["alpha"] = "1/2";
  doc["beta"] = "1/2";
  EXPECT_FALSE(verify_certificate(f2, io::certificate_of(f2, doc)).ok);
}

TEST(Json, StrategyRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    Arena a = fx::random_arena(rng, 4, 3, 2);
    auto s = fx::random_mealy(rng, a, Player::Zero, 3);
    auto back = io::strategy_of(a, json::parse(io::to_json(a, s).dump()));
    EXPECT_EQ(evaluate_csv(a, Rational(1, 2), back, 0), evaluate_csv(a, Rational(1, 2), s, 0));
    EXPECT_EQ(evaluate_asv(a, Rational(2, 3), back, 0), evaluate_asv(a, Rational(2, 3), s, 0));
  }
}

TEST(Json, ChoicesAndLassos) {
  Arena f1 = fx::no_best_response();
  auto s = io::strategy_of_choices(f1, Player::Zero, "2=3, 3=3");
  EXPECT_EQ(best_response_mp(f1, s, f1.at("1")).value, Rational(2));
  EXPECT_THROW(io::strategy_of_choices(f1, Player::Zero, "1=2"), ModelError);
  EXPECT_THROW(io::strategy_of_choices(f1, Player::Zero, "2=1"), ModelError);
  Lasso l{{f1.at("1")}, {f1.at("2")}};
  auto back = io::lasso_of(f1, io::to_json(f1, l));
  EXPECT_EQ(back.prefix, l.prefix);
  EXPECT_EQ(back.cycle, l.cycle);
}

TEST(Json, Regions) {
  Arena f2 = fx::shared_loop();
  auto t = lambda_region(f2, f2.at("v0"));
  auto back = io::region_of(json::parse(io::to_json(t.region).dump()));
  for (int i = -8; i <= 8; ++i)
    for (int j = -8; j <= 8; ++j) {
      Point2 p{Rational(i, 4), Rational(j, 4)};
      EXPECT_EQ(back.contains(p), t.region.contains(p));
    }
}
