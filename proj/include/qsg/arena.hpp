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
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsg/errors.hpp"
#include "qsg/rational.hpp"

namespace qsg {

using Vertex = int;
using EdgeId = int;

enum class Player : int { Zero = 0, One = 1 };

inline Player opponent(Player p) { return p == Player::Zero ? Player::One : Player::Zero; }
inline int index_of(Player p) { return static_cast<int>(p); }

struct Edge {
    Vertex src;
    Vertex dst;
    Rational w0;
    Rational w1;

    const Rational& weight(int dim) const { return dim == 0 ? w0 : w1; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite bi-weighted two-player game graph. Immutable once built; vertices
/// are dense indices in declaration order, edges are sorted by (src, dst).
class Arena {
  public:
    Arena() = default;

    std::size_t size() const { return names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::string& name(Vertex v) const { return names_.at(v); }
    Player owner(Vertex v) const { return owners_.at(v); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<EdgeId>& out(Vertex v) const { return out_.at(v); }
    std::optional<Vertex> init() const { return init_; }
    const Rational& max_abs_weight() const { return maxAbs_; }

    std::optional<Vertex> find(std::string_view name) const {
      auto it = byName_.find(std::string(name));
      if (it == byName_.end())
        return std::nullopt;
      return it->second;
    }
    Vertex at(std::string_view name) const {
      auto v = find(name);
      if (!v)
        throw ModelError("unknown vertex '" + std::string(name) + "'");
      return *v;
    }
    std::optional<EdgeId> edge_between(Vertex u, Vertex v) const {
      for (EdgeId e : out_.at(u))
        if (edges_[e].dst == v)
          return e;
      return std::nullopt;
    }
    std::vector<Vertex> successors(Vertex u) const {
      std::vector<Vertex> s;
      for (EdgeId e : out_.at(u))
        s.push_back(edges_[e].dst);
      return s;
    }

    friend bool operator==(const Arena& a, const Arena& b) {
      return a.names_ == b.names_ && a.owners_ == b.owners_ && a.edges_ == b.edges_ && a.init_ == b.init_;
    }

  private:
    friend class ArenaBuilder;

    std::vector<std::string> names_;
    std::vector<Player> owners_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> out_;
    std::unordered_map<std::string, Vertex> byName_;
    std::optional<Vertex> init_;
    Rational maxAbs_;
};

class ArenaBuilder {
  public:
    Vertex add_vertex(const std::string& name, Player owner) {
      if (name.empty() || name.find_first_of(" \t#") != std::string::npos)
        throw ModelError("invalid vertex name '" + name + "'");
      if (byName_.count(name))
        throw ModelError("duplicate vertex '" + name + "'");
      Vertex v = static_cast<Vertex>(names_.size());
      byName_.emplace(name, v);
      names_.push_back(name);
      owners_.push_back(owner);
      return v;
    }
    bool has_vertex(const std::string& name) const { return byName_.count(name) != 0; }
    Vertex vertex(const std::string& name) const {
      auto it = byName_.find(name);
      if (it == byName_.end())
        throw ModelError("unknown vertex '" + name + "'");
      return it->second;
    }
    ArenaBuilder& add_edge(Vertex src, Vertex dst, Rational w0, Rational w1) {
      check(src);
      check(dst);
      if (!edgeKeys_.emplace(src, dst).second)
        throw ModelError("duplicate edge " + names_[src] + " -> " + names_[dst]);
      edges_.push_back({src, dst, std::move(w0), std::move(w1)});
      return *this;
    }
    ArenaBuilder& add_edge(const std::string& src, const std::string& dst, Rational w0, Rational w1) {
      return add_edge(vertex(src), vertex(dst), std::move(w0), std::move(w1));
    }
    ArenaBuilder& set_init(Vertex v) {
      check(v);
      init_ = v;
      return *this;
    }
    ArenaBuilder& set_init(const std::string& name) { return set_init(vertex(name)); }

    /// Validates the arena invariants; throws ModelError naming the first
    /// dead-end vertex.
    Arena build() const {
      Arena a;
      a.names_ = names_;
      a.owners_ = owners_;
      a.byName_ = byName_;
      a.init_ = init_;
      a.edges_ = edges_;
      std::stable_sort(a.edges_.begin(), a.edges_.end(), [](const Edge& x, const Edge& y) {
        return x.src != y.src ? x.src < y.src : x.dst < y.dst;
      });
      a.out_.assign(names_.size(), {});
      for (EdgeId e = 0; e < static_cast<EdgeId>(a.edges_.size()); ++e) {
        const Edge& ed = a.edges_[e];
        a.out_[ed.src].push_back(e);
        a.maxAbs_ = max(a.maxAbs_, max(abs(ed.w0), abs(ed.w1)));
      }
      for (Vertex v = 0; v < static_cast<Vertex>(names_.size()); ++v)
        if (a.out_[v].empty())
          throw ModelError("dead-end vertex '" + names_[v] + "' has no outgoing edge");
      return a;
    }

  private:
    void check(Vertex v) const {
      if (v < 0 || v >= static_cast<Vertex>(names_.size()))
        throw ModelError("vertex index out of range");
    }

    std::vector<std::string> names_;
    std::vector<Player> owners_;
    std::vector<Edge> edges_;
    std::set<std::pair<Vertex, Vertex>> edgeKeys_;
    std::unordered_map<std::string, Vertex> byName_;
    std::optional<Vertex> init_;
};

// ---------------------------------------------------------------------------
// Text format

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string tok;
  while (is >> tok)
    out.push_back(tok);
  return out;
}

}  // namespace detail

/// Parses the line-based arena format:
///   player0: <id> ...   player1: <id> ...   init: <id>   edge: <src> <dst> <w0> <w1>
/// '#' starts a comment. Vertices get indices in order of first declaration.
inline Arena parse_arena(std::string_view text) {
  ArenaBuilder b;
  std::map<std::string, int> declLine;
  std::optional<std::pair<std::string, int>> init;
  int lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto colon = line.find(':');
    auto toks = detail::split_ws(line);
    if (toks.empty())
      continue;
    if (colon == std::string_view::npos)
      throw ParseError(lineNo, "expected '<key>:'");
    auto key = detail::split_ws(line.substr(0, colon));
    if (key.size() != 1)
      throw ParseError(lineNo, "malformed key");
    auto args = detail::split_ws(line.substr(colon + 1));
    try {
      if (key[0] == "player0" || key[0] == "player1") {
        Player p = key[0] == "player0" ? Player::Zero : Player::One;
        for (auto& id : args) {
          if (b.has_vertex(id))
            throw ParseError(lineNo, "vertex '" + id + "' declared twice");
          b.add_vertex(id, p);
          declLine[id] = lineNo;
        }
      } else if (key[0] == "init") {
        if (args.size() != 1)
          throw ParseError(lineNo, "init takes exactly one vertex");
        if (init)
          throw ParseError(lineNo, "init given twice");
        init = std::make_pair(args[0], lineNo);
      } else if (key[0] == "edge") {
        if (args.size() != 4)
          throw ParseError(lineNo, "edge needs <src> <dst> <w0> <w1>");
        for (int i = 0; i < 2; ++i)
          if (!b.has_vertex(args[i]))
            throw ParseError(lineNo, "unknown vertex '" + args[i] + "' in edge");
        Rational w0, w1;
        try {
          w0 = Rational::parse(args[2]);
          w1 = Rational::parse(args[3]);
        } catch (const std::exception& e) {
          throw ParseError(lineNo, e.what());
        }
        b.add_edge(args[0], args[1], w0, w1);
      } else {
        throw ParseError(lineNo, "unknown key '" + key[0] + "'");
      }
    } catch (const ModelError& e) {
      throw ParseError(lineNo, e.what());
    }
  }
  if (init) {
    if (!b.has_vertex(init->first))
      throw ParseError(init->second, "unknown init vertex '" + init->first + "'");
    b.set_init(init->first);
  }
  try {
    return b.build();
  } catch (const ModelError& e) {
    // Attribute dead ends to the line declaring the vertex.
    std::string msg = e.what();
    for (auto& [id, ln] : declLine)
      if (msg.find("'" + id + "'") != std::string::npos)
        throw ParseError(ln, msg);
    throw ParseError(lineNo, msg);
  }
}

/// Canonical text form: vertex runs in index order, edges in (src, dst)
/// order, rationals in lowest terms. parse_arena(serialize_arena(a)) == a.
inline std::string serialize_arena(const Arena& a) {
  std::ostringstream os;
  for (Vertex v = 0; v < static_cast<Vertex>(a.size());) {
    Player p = a.owner(v);
    os << (p == Player::Zero ? "player0:" : "player1:");
    for (; v < static_cast<Vertex>(a.size()) && a.owner(v) == p; ++v)
      os << ' ' << a.name(v);
    os << '\n';
  }
  if (a.init())
    os << "init: " << a.name(*a.init()) << '\n';
  for (const Edge& e : a.edges())
    os << "edge: " << a.name(e.src) << ' ' << a.name(e.dst) << ' ' << e.w0 << ' ' << e.w1 << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Plays

/// Ultimately periodic play prefix . cycle^omega.
struct Lasso {
    std::vector<Vertex> prefix;
    std::vector<Vertex> cycle;

    Vertex start() const { return prefix.empty() ? cycle.at(0) : prefix.front(); }
    std::size_t size() const { return prefix.size() + cycle.size(); }

    /// Throws ModelError if some consecutive pair is not an edge.
    void validate(const Arena& a) const {
      if (cycle.empty())
        throw ModelError("lasso cycle must be non-empty");
      auto need = [&](Vertex u, Vertex v) {
        if (u < 0 || v < 0 || u >= static_cast<Vertex>(a.size()) || v >= static_cast<Vertex>(a.size()) ||
            !a.edge_between(u, v))
          throw ModelError("lasso step is not an edge");
      };
      for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
        need(prefix[i], prefix[i + 1]);
      if (!prefix.empty())
        need(prefix.back(), cycle.front());
      for (std::size_t i = 0; i < cycle.size(); ++i)
        need(cycle[i], cycle[(i + 1) % cycle.size()]);
    }

    friend bool operator==(const Lasso&, const Lasso&) = default;
};

// ---------------------------------------------------------------------------
// Finite-memory strategies

/// Deterministic transducer. Memory is updated on every visited vertex
/// (including the initial one); the move at a vertex owned by `player` is
/// output(m, v) where m already accounts for v.
struct MealyStrategy {
    Player player = Player::Zero;
    int initMemory = 0;
    std::vector<std::vector<int>> update;     // [memory][vertex] -> memory
    std::vector<std::vector<Vertex>> output;  // [memory][vertex] -> successor, -1 if not owned

    int memory_size() const { return static_cast<int>(update.size()); }
    int start_memory(Vertex v) const { return update.at(initMemory).at(v); }
    Vertex choose(int m, Vertex v) const { return output.at(m).at(v); }

    static MealyStrategy memoryless(const Arena& a, Player p, const std::vector<Vertex>& choice) {
      MealyStrategy s;
      s.player = p;
      s.update.assign(1, std::vector<int>(a.size(), 0));
      s.output.assign(1, std::vector<Vertex>(a.size(), -1));
      for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v)
        if (a.owner(v) == p)
          s.output[0][v] = choice.at(v);
      s.validate(a);
      return s;
    }

    /// Strategy that takes the first listed edge everywhere.
    static MealyStrategy first_edge(const Arena& a, Player p) {
      std::vector<Vertex> choice(a.size(), -1);
      for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v)
        choice[v] = a.edge(a.out(v).front()).dst;
      return memoryless(a, p, choice);
    }

    void validate(const Arena& a) const {
      if (update.empty() || update.size() != output.size())
        throw ModelError("strategy needs at least one memory state");
      if (initMemory < 0 || initMemory >= memory_size())
        throw ModelError("initial memory out of range");
      for (int m = 0; m < memory_size(); ++m) {
        if (update[m].size() != a.size() || output[m].size() != a.size())
          throw ModelError("strategy tables do not match the arena size");
        for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v) {
          if (update[m][v] < 0 || update[m][v] >= memory_size())
            throw ModelError("strategy update leaves the memory range");
          if (a.owner(v) == player) {
            Vertex t = output[m][v];
            if (t < 0 || t >= static_cast<Vertex>(a.size()) || !a.edge_between(v, t))
              throw ModelError("strategy output at '" + a.name(v) + "' is not an edge");
          }
        }
      }
    }
};

// ---------------------------------------------------------------------------
// Products

/// Arena over (vertex, memory) pairs together with the projection back.
struct ProductArena {
    Arena arena;
    std::vector<std::pair<Vertex, int>> origin;
    std::map<std::pair<Vertex, int>, Vertex> index;
    Vertex start = -1;
};

namespace detail {

inline std::string product_name(const Arena& a, Vertex v, int m, int memSize) {
  return memSize == 1 ? a.name(v) : a.name(v) + "|" + std::to_string(m);
}

template <typename Visit>
ProductArena build_product(const Arena& a, const MealyStrategy& s, Player player,
                           const std::vector<std::pair<Vertex, int>>& roots, Visit&& reachableOnly,
                           std::optional<std::pair<Vertex, int>> initKey) {
  ProductArena p;
  ArenaBuilder b;
  std::vector<std::pair<Vertex, int>> queue;
  auto intern = [&](Vertex v, int m) {
    auto key = std::make_pair(v, m);
    auto it = p.index.find(key);
    if (it != p.index.end())
      return it->second;
    Vertex id = b.add_vertex(product_name(a, v, m, s.memory_size()), a.owner(v));
    p.index.emplace(key, id);
    p.origin.push_back(key);
    queue.push_back(key);
    return id;
  };
  for (auto& r : roots)
    intern(r.first, r.second);
  struct Pending { Vertex from; Vertex v; int m; EdgeId base; };
  std::vector<Pending> pending;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto [v, m] = queue[qi];
    Vertex from = p.index.at({v, m});
    for (EdgeId e : a.out(v)) {
      Vertex t = a.edge(e).dst;
      if (a.owner(v) == player && s.choose(m, v) != t)
        continue;
      int m2 = s.update[m][t];
      if (reachableOnly())
        intern(t, m2);
      pending.push_back({from, t, m2, e});
    }
  }
  for (auto& pe : pending) {
    const Edge& be = a.edge(pe.base);
    b.add_edge(pe.from, p.index.at({pe.v, pe.m}), be.w0, be.w1);
  }
  if (initKey) {
    p.start = p.index.at(*initKey);
    b.set_init(p.start);
  }
  p.arena = b.build();
  return p;
}

}  // namespace detail

/// Full product a x s over all (vertex, memory) pairs: the choices of
/// `player` are fixed by s, everything else is left to the opponent.
inline ProductArena product_with_strategy(const Arena& a, const MealyStrategy& s, Player player) {
  s.validate(a);
  std::vector<std::pair<Vertex, int>> roots;
  for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v)
    for (int m = 0; m < s.memory_size(); ++m)
      roots.emplace_back(v, m);
  std::optional<std::pair<Vertex, int>> initKey;
  if (a.init())
    initKey = std::make_pair(*a.init(), s.start_memory(*a.init()));
  return detail::build_product(a, s, player, roots, [] { return false; }, initKey);
}

/// Product restricted to the pairs reachable from (v, start memory).
inline ProductArena product_from(const Arena& a, const MealyStrategy& s, Player player, Vertex v) {
  s.validate(a);
  std::pair<Vertex, int> root{v, s.start_memory(v)};
  return detail::build_product(a, s, player, {root}, [] { return true; }, root);
}

// ---------------------------------------------------------------------------
// Extended arena V x 2^V

/// Tracks the set of vertices visited so far. Only states reachable from
/// (v, {v}) are materialised.
struct ExtendedArena {
    Arena arena;
    std::vector<Vertex> base;                  // projection to the base vertex
    std::vector<std::vector<Vertex>> visited;  // second component, sorted
    Vertex start = 0;
};

inline ExtendedArena build_extended(const Arena& a, Vertex v, std::uint64_t cap = Budget::defaults().extStates) {
  using Key = std::pair<Vertex, std::vector<bool>>;
  std::map<Key, Vertex> ids;
  std::vector<Key> states;
  ExtendedArena ext;
  ArenaBuilder b;
  auto intern = [&](Vertex u, std::vector<bool> set) {
    Key k{u, std::move(set)};
    auto it = ids.find(k);
    if (it != ids.end())
      return it->second;
    if (states.size() >= cap)
      throw BudgetExceeded("extended-arena states", cap);
    std::string nm = a.name(u) + "{";
    std::vector<Vertex> members;
    for (Vertex x = 0; x < static_cast<Vertex>(a.size()); ++x)
      if (k.second[x]) {
        if (!members.empty())
          nm += ",";
        nm += a.name(x);
        members.push_back(x);
      }
    nm += "}";
    Vertex id = b.add_vertex(nm, a.owner(u));
    ids.emplace(k, id);
    states.push_back(k);
    ext.base.push_back(u);
    ext.visited.push_back(std::move(members));
    return id;
  };
  std::vector<bool> init(a.size(), false);
  init[v] = true;
  ext.start = intern(v, init);
  std::vector<std::tuple<Vertex, Vertex, EdgeId>> pending;
  for (std::size_t i = 0; i < states.size(); ++i) {
    Key cur = states[i];
    for (EdgeId e : a.out(cur.first)) {
      Vertex t = a.edge(e).dst;
      auto nxt = cur.second;
      nxt[t] = true;
      Vertex to = intern(t, std::move(nxt));
      pending.emplace_back(static_cast<Vertex>(i), to, e);
    }
  }
  for (auto& [from, to, e] : pending)
    b.add_edge(from, to, a.edge(e).w0, a.edge(e).w1);
  b.set_init(ext.start);
  ext.arena = b.build();
  return ext;
}

}  // namespace qsg
