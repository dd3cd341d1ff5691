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

// JSON forms of the library's results. Rationals are strings "p/q" so that
// nothing passes through floating point; vertices are referred to by name.

#include <string>
#include <vector>

#include <json.hpp>

#include "qsg/asv_mp.hpp"
#include "qsg/ds_stackelberg.hpp"
#include "qsg/geometry.hpp"

namespace qsg::io {

using json = nlohmann::ordered_json;

inline json rat(const Rational& r) { return r.str(); }

inline Rational rat_of(const json& j) {
  if (j.is_number_integer())
    return Rational(j.get<long>());
  if (!j.is_string())
    throw ModelError("expected a rational written as a string");
  return Rational::parse(j.get<std::string>());
}

inline json names(const Arena& a, const std::vector<Vertex>& vs) {
  json out = json::array();
  for (Vertex v : vs)
    out.push_back(a.name(v));
  return out;
}

inline std::vector<Vertex> vertices_of(const Arena& a, const json& j) {
  std::vector<Vertex> out;
  for (auto& x : j)
    out.push_back(a.at(x.get<std::string>()));
  return out;
}

// --- regions -------------------------------------------------------------

inline json to_json(const Region2D& r) {
  json cells = json::array();
  for (auto& c : r.cells) {
    json cons = json::array();
    for (auto& h : c.constraints)
      cons.push_back({{"a1", rat(h.a1)}, {"a2", rat(h.a2)}, {"b", rat(h.b)}, {"strict", h.strict}});
    cells.push_back(std::move(cons));
  }
  return cells;
}

inline Region2D region_of(const json& j) {
  Region2D r;
  for (auto& cell : j) {
    ConvexCell c;
    for (auto& h : cell)
      c.constraints.push_back({rat_of(h.at("a1")), rat_of(h.at("a2")), rat_of(h.at("b")), h.at("strict").get<bool>()});
    r.cells.push_back(std::move(c));
  }
  return r;
}

inline json to_json(const PiecewiseLinear& f) {
  json ps = json::array();
  for (auto& p : f.pieces())
    ps.push_back({{"from", rat(p.x0)}, {"value", rat(p.y0)}, {"slope", rat(p.slope)}});
  return ps;
}

// --- plays and strategies --------------------------------------------------

inline json to_json(const Arena& a, const Lasso& l) {
  return {{"prefix", names(a, l.prefix)}, {"cycle", names(a, l.cycle)}};
}

inline Lasso lasso_of(const Arena& a, const json& j) {
  return {vertices_of(a, j.at("prefix")), vertices_of(a, j.at("cycle"))};
}

/// {"player": 0, "init": m, "memory": [{"update": {v: m'}, "move": {v: succ}}]}
inline json to_json(const Arena& a, const MealyStrategy& s) {
  json mem = json::array();
  for (int m = 0; m < s.memory_size(); ++m) {
    json up = json::object(), mv = json::object();
    for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v) {
      up[a.name(v)] = s.update[m][v];
      if (a.owner(v) == s.player)
        mv[a.name(v)] = a.name(s.output[m][v]);
    }
    mem.push_back({{"update", up}, {"move", mv}});
  }
  return {{"player", index_of(s.player)}, {"init", s.initMemory}, {"memory", mem}};
}

inline MealyStrategy strategy_of(const Arena& a, const json& j) {
  MealyStrategy s;
  s.player = j.value("player", 0) == 0 ? Player::Zero : Player::One;
  s.initMemory = j.value("init", 0);
  const auto& mem = j.at("memory");
  const int M = static_cast<int>(mem.size());
  s.update.assign(M, std::vector<int>(a.size(), 0));
  s.output.assign(M, std::vector<Vertex>(a.size(), -1));
  for (int m = 0; m < M; ++m) {
    if (mem[m].contains("update"))
      for (auto& [k, v] : mem[m]["update"].items())
        s.update[m][a.at(k)] = v.get<int>();
    for (auto& [k, v] : mem[m].at("move").items())
      s.output[m][a.at(k)] = a.at(v.get<std::string>());
  }
  s.validate(a);
  return s;
}

/// Memoryless strategy from "u=v,x=y" pairs; unlisted vertices of the player
/// take their first edge.
inline MealyStrategy strategy_of_choices(const Arena& a, Player p, const std::string& spec) {
  std::vector<Vertex> ch(a.size(), -1);
  for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v)
    if (a.owner(v) == p)
      ch[v] = a.edge(a.out(v).front()).dst;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string::npos)
      end = spec.size();
    std::string item = spec.substr(pos, end - pos);
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ModelError("choice '" + item + "' is not of the form u=v");
    auto trim = [](std::string t) {
      t.erase(0, t.find_first_not_of(" \t"));
      t.erase(t.find_last_not_of(" \t") + 1);
      return t;
    };
    Vertex u = a.at(trim(item.substr(0, eq))), v = a.at(trim(item.substr(eq + 1)));
    if (a.owner(u) != p)
      throw ModelError("vertex '" + a.name(u) + "' does not belong to the strategy's player");
    ch[u] = v;
    pos = end + 1;
  }
  return MealyStrategy::memoryless(a, p, ch);
}

// --- witness certificates ---------------------------------------------------

inline json to_json(const Arena& a, const BadnessCertificate& b) {
  json out;
  out["bad"] = b.bad;
  if (!b.bad) {
    json choice = json::object();
    for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v)
      if (a.owner(v) == Player::Zero && b.refutation[v] >= 0)
        choice[a.name(v)] = a.name(b.refutation[v]);
    out["strategy"] = choice;
    json seps = json::array();
    for (auto& s : b.separators)
      seps.push_back({{"scc", names(a, s.scc)}, {"mu0", rat(s.mu0)}, {"mu1", rat(s.mu1)}});
    out["separators"] = seps;
  }
  return out;
}

inline BadnessCertificate badness_of(const Arena& a, const json& j) {
  BadnessCertificate b;
  b.bad = j.value("bad", false);
  if (b.bad)
    throw ModelError("only refutations (bad = false) can be loaded");
  b.refutation.assign(a.size(), -1);
  for (auto& [k, v] : j.at("strategy").items())
    b.refutation[a.at(k)] = a.at(v.get<std::string>());
  for (auto& s : j.at("separators")) {
    auto scc = vertices_of(a, s.at("scc"));
    std::sort(scc.begin(), scc.end());
    b.separators.push_back({scc, rat_of(s.at("mu0")), rat_of(s.at("mu1"))});
  }
  return b;
}

inline json to_json(const Arena& a, const WitnessCertificate& w) {
  json refs = json::object();
  for (auto& [u, r] : w.refutations)
    refs[a.name(u)] = to_json(a, r);
  return {{"vertex", a.name(w.vertex)}, {"c", rat(w.c)},          {"sccPath", names(a, w.sccPath)},
          {"l1", names(a, w.l1)},       {"l2", names(a, w.l2)},    {"pi2", names(a, w.pi2)},
          {"pi3", names(a, w.pi3)},     {"alpha", rat(w.alpha)},   {"beta", rat(w.beta)},
          {"cPrime", rat(w.cPrime)},    {"d", rat(w.d)},           {"refutations", refs}};
}

inline WitnessCertificate certificate_of(const Arena& a, const json& j) {
  WitnessCertificate w;
  w.vertex = a.at(j.at("vertex").get<std::string>());
  w.c = rat_of(j.at("c"));
  w.sccPath = vertices_of(a, j.at("sccPath"));
  w.l1 = vertices_of(a, j.at("l1"));
  w.l2 = vertices_of(a, j.at("l2"));
  w.pi2 = vertices_of(a, j.at("pi2"));
  w.pi3 = vertices_of(a, j.at("pi3"));
  w.alpha = rat_of(j.at("alpha"));
  w.beta = rat_of(j.at("beta"));
  w.cPrime = rat_of(j.at("cPrime"));
  w.d = rat_of(j.at("d"));
  for (auto& [k, v] : j.at("refutations").items())
    w.refutations.emplace(a.at(k), badness_of(a, v));
  return w;
}

// --- verdicts ---------------------------------------------------------------

inline json to_json(const Arena& a, const GapVerdict& g) {
  json out = {{"answer", g.yes ? "yes" : "no"},
              {"mode", to_string(g.semantics)},
              {"horizon", g.horizon.N},
              {"memoryBound", g.horizon.memoryBound.get_str()},
              {"value", rat(g.value)},
              {"bestResponseValue", rat(g.bestResponseValue)},
              {"summaries", g.summaries}};
  if (g.witnessStrategy)
    out["strategy"] = to_json(a, *g.witnessStrategy);
  return out;
}

}  // namespace qsg::io
