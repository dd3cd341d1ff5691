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
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qsg/errors.hpp"
#include "qsg/lp.hpp"
#include "qsg/rational.hpp"

namespace qsg {

struct Point2 {
    Rational x;
    Rational y;

    friend bool operator==(const Point2& p, const Point2& q) { return p.x == q.x && p.y == q.y; }
    friend bool operator!=(const Point2& p, const Point2& q) { return !(p == q); }
    friend bool operator<(const Point2& p, const Point2& q) { return p.x != q.x ? p.x < q.x : p.y < q.y; }
};

/// a1*x + a2*y > b (strict) or >= b.
struct HalfPlane {
    Rational a1;
    Rational a2;
    Rational b;
    bool strict = false;

    bool holds(const Point2& p) const {
      Rational lhs = a1 * p.x + a2 * p.y;
      return strict ? lhs > b : lhs >= b;
    }
    /// Complement: a.x < b  <=>  (-a).x > -b, strictness flipped.
    HalfPlane negated() const { return {-a1, -a2, -b, !strict}; }
    LinearConstraint as_lp() const { return {{a1, a2}, strict ? Rel::GT : Rel::GE, b}; }
};

struct ConvexCell {
    std::vector<HalfPlane> constraints;

    bool contains(const Point2& p) const {
      return std::all_of(constraints.begin(), constraints.end(), [&](const HalfPlane& h) { return h.holds(p); });
    }
    std::vector<LinearConstraint> as_lp() const {
      std::vector<LinearConstraint> out;
      for (auto& h : constraints)
        out.push_back(h.as_lp());
      return out;
    }
    bool empty() const { return !lp_feasible(as_lp(), 2); }
};

/// Finite union of convex cells.
struct Region2D {
    std::vector<ConvexCell> cells;

    bool contains(const Point2& p) const {
      return std::any_of(cells.begin(), cells.end(), [&](const ConvexCell& c) { return c.contains(p); });
    }
    bool empty() const {
      return std::all_of(cells.begin(), cells.end(), [](const ConvexCell& c) { return c.empty(); });
    }
    static Region2D everything() { return Region2D{{ConvexCell{}}}; }
    static Region2D nothing() { return Region2D{}; }
};

// ---------------------------------------------------------------------------
// Hulls

inline Rational cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Vertices of the convex hull in counter-clockwise order starting from the
/// lexicographically least point; collinear points are dropped.
inline std::vector<Point2> hull_vertices(std::vector<Point2> pts) {
  if (pts.empty())
    throw std::invalid_argument("convex hull of an empty set");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2)
    return pts;
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]).sign() <= 0)
      --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]).sign() <= 0)
      --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

/// Upper boundary from the leftmost-highest to the rightmost-highest point.
inline std::vector<Point2> upper_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // Keep only the highest point per abscissa.
  std::vector<Point2> top;
  for (auto& p : pts) {
    if (!top.empty() && top.back().x == p.x)
      top.back() = p;
    else
      top.push_back(p);
  }
  std::vector<Point2> h;
  for (auto& p : top) {
    while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), p).sign() >= 0)
      h.pop_back();
    h.push_back(p);
  }
  return h;
}

inline ConvexCell cell_of_hull(const std::vector<Point2>& hv) {
  ConvexCell c;
  if (hv.size() == 1) {
    const Point2& p = hv[0];
    c.constraints = {{1, 0, p.x}, {-1, 0, -p.x}, {0, 1, p.y}, {0, -1, -p.y}};
  } else if (hv.size() == 2) {
    const Point2 &p = hv[0], &q = hv[1];
    Rational dx = q.x - p.x, dy = q.y - p.y;
    Rational np = -dy * p.x + dx * p.y;
    c.constraints = {{-dy, dx, np}, {dy, -dx, -np}, {dx, dy, dx * p.x + dy * p.y}, {-dx, -dy, -(dx * q.x + dy * q.y)}};
  } else {
    for (std::size_t i = 0; i < hv.size(); ++i) {
      const Point2 &p = hv[i], &q = hv[(i + 1) % hv.size()];
      Rational dx = q.x - p.x, dy = q.y - p.y;
      c.constraints.push_back({-dy, dx, -dy * p.x + dx * p.y});
    }
  }
  return c;
}

/// Closed convex polygon (possibly a segment or a point) as a single cell.
inline Region2D convex_hull(const std::vector<Point2>& pts) { return Region2D{{cell_of_hull(hull_vertices(pts))}}; }

/// Vertices of a bounded cell's closure.
inline std::vector<Point2> cell_vertices(const ConvexCell& c) {
  std::set<Point2> out;
  const auto& k = c.constraints;
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = i + 1; j < k.size(); ++j) {
      Rational det = k[i].a1 * k[j].a2 - k[i].a2 * k[j].a1;
      if (det.is_zero())
        continue;
      Point2 p{(k[i].b * k[j].a2 - k[i].a2 * k[j].b) / det, (k[i].a1 * k[j].b - k[i].b * k[j].a1) / det};
      bool ok = std::all_of(k.begin(), k.end(), [&](const HalfPlane& h) { return h.a1 * p.x + h.a2 * p.y >= h.b; });
      if (ok)
        out.insert(p);
    }
  return {out.begin(), out.end()};
}

/// { min(p, q) componentwise : p, q in CH(pts) }. In the plane this is the
/// convex set cut out by the supporting half-planes of the hull whose outer
/// normal has a positive coordinate, together with x >= min x, y >= min y.
inline Region2D f_min_region(const std::vector<Point2>& pts) {
  auto hv = hull_vertices(pts);
  std::set<std::pair<Rational, Rational>> normals{{1, 0}, {0, 1}};
  for (std::size_t i = 0; i < hv.size(); ++i)
    for (std::size_t j = 0; j < hv.size(); ++j) {
      if (i == j)
        continue;
      Rational nx = -(hv[j].y - hv[i].y), ny = hv[j].x - hv[i].x;
      if (nx.sign() <= 0 && ny.sign() <= 0)
        continue;
      Rational s = max(abs(nx), abs(ny));
      normals.emplace(nx / s, ny / s);
    }
  ConvexCell c;
  Rational xmin = hv[0].x, ymin = hv[0].y;
  for (auto& p : hv) {
    xmin = min(xmin, p.x);
    ymin = min(ymin, p.y);
  }
  for (auto& [nx, ny] : normals) {
    Rational h = nx * hv[0].x + ny * hv[0].y;
    for (auto& p : hv)
      h = max(h, nx * p.x + ny * p.y);
    c.constraints.push_back({-nx, -ny, -h});
  }
  c.constraints.push_back({1, 0, xmin});
  c.constraints.push_back({0, 1, ymin});
  return Region2D{{c}};
}

inline Region2D f_min_region(const Region2D& hull) {
  if (hull.cells.size() != 1)
    throw std::invalid_argument("f_min_region expects a single convex cell");
  auto vs = cell_vertices(hull.cells[0]);
  if (vs.empty())
    throw std::invalid_argument("f_min_region expects a bounded nonempty cell");
  return f_min_region(vs);
}

// ---------------------------------------------------------------------------
// Boolean operations

inline Region2D unite(const Region2D& a, const Region2D& b) {
  Region2D r = a;
  r.cells.insert(r.cells.end(), b.cells.begin(), b.cells.end());
  return r;
}

inline Region2D intersect(const Region2D& a, const Region2D& b, std::uint64_t cap = Budget::defaults().cells) {
  Region2D r;
  for (auto& x : a.cells)
    for (auto& y : b.cells) {
      ConvexCell c = x;
      c.constraints.insert(c.constraints.end(), y.constraints.begin(), y.constraints.end());
      if (c.empty())
        continue;
      if (r.cells.size() >= cap)
        throw BudgetExceeded("region cells", cap);
      r.cells.push_back(std::move(c));
    }
  return r;
}

inline Region2D restrict_to(const Region2D& a, const HalfPlane& h) {
  return intersect(a, Region2D{{ConvexCell{{h}}}});
}

/// Complement of a union: intersection over cells of the union of the
/// negated constraints, distributed and pruned of empty cells.
inline Region2D complement(const Region2D& a, std::uint64_t cap = Budget::defaults().cells) {
  Region2D acc = Region2D::everything();
  for (auto& cell : a.cells) {
    Region2D neg;
    for (auto& h : cell.constraints)
      neg.cells.push_back(ConvexCell{{h.negated()}});
    if (cell.constraints.empty())
      return Region2D::nothing();
    acc = intersect(acc, neg, cap);
  }
  return acc;
}

inline bool subset_of(const Region2D& a, const Region2D& b) { return intersect(a, complement(b)).empty(); }
inline bool same_set(const Region2D& a, const Region2D& b) { return subset_of(a, b) && subset_of(b, a); }

/// Supremum of obj . x over the region; the value over a cell is the value
/// over its closure, `attained` says whether some cell reaches it.
inline SupResult sup_linear(const Region2D& r, const Point2& obj) {
  SupResult best;
  for (auto& c : r.cells) {
    auto s = lp_sup({obj.x, obj.y}, c.as_lp());
    if (s.kind == SupResult::Kind::Empty)
      continue;
    if (s.kind == SupResult::Kind::Unbounded)
      return s;
    if (best.kind == SupResult::Kind::Empty || best.value < s.value)
      best = s;
    else if (best.value == s.value)
      best.attained = best.attained || s.attained;
  }
  return best;
}

/// JSON text: a list of cells, each a list of [a1, a2, b, strict] rows,
/// rationals as strings.
inline std::string to_text(const Region2D& r) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    os << (i ? "," : "") << '[';
    const auto& k = r.cells[i].constraints;
    for (std::size_t j = 0; j < k.size(); ++j)
      os << (j ? "," : "") << "[\"" << k[j].a1 << "\",\"" << k[j].a2 << "\",\"" << k[j].b << "\","
         << (k[j].strict ? "true" : "false") << ']';
    os << ']';
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------
// Nondecreasing piecewise-linear functions with value -inf left of a start

/// Piece i is valid on [x0_i, x0_{i+1}) (the last one up to +inf) with value
/// y0_i + slope_i * (c - x0_i). No pieces means -inf everywhere. At a jump
/// the function takes the right-hand value, so hypographs are closed.
class PiecewiseLinear {
  public:
    struct Piece {
        Rational x0;
        Rational y0;
        Rational slope;
        friend bool operator==(const Piece&, const Piece&) = default;
    };

    PiecewiseLinear() = default;
    explicit PiecewiseLinear(std::vector<Piece> pieces) : pieces_(std::move(pieces)) { normalise(); }

    static PiecewiseLinear minus_infinity() { return {}; }
    static PiecewiseLinear constant_from(Rational x0, Rational y) { return PiecewiseLinear({{std::move(x0), std::move(y), 0}}); }

    /// c -> max{ y : (x, y) in CH(pts), x <= c }.
    static PiecewiseLinear best_y_left_of(const std::vector<Point2>& pts) {
      auto up = upper_hull(pts);
      std::vector<Piece> ps;
      std::size_t i = 0;
      for (; i + 1 < up.size(); ++i) {
        Rational s = (up[i + 1].y - up[i].y) / (up[i + 1].x - up[i].x);
        if (s.sign() <= 0)
          break;
        ps.push_back({up[i].x, up[i].y, s});
      }
      ps.push_back({up[i].x, up[i].y, 0});
      return PiecewiseLinear(std::move(ps));
    }

    const std::vector<Piece>& pieces() const { return pieces_; }
    bool is_minus_infinity() const { return pieces_.empty(); }
    std::optional<Rational> start() const {
      if (pieces_.empty())
        return std::nullopt;
      return pieces_.front().x0;
    }

    std::optional<Rational> eval(const Rational& c) const {
      std::optional<Rational> v;
      for (auto& p : pieces_)
        if (p.x0 <= c)
          v = p.y0 + p.slope * (c - p.x0);
      return v;
    }

    /// Left limit at c; nullopt when -inf just left of c.
    std::optional<Rational> eval_left(const Rational& c) const {
      std::optional<Rational> v;
      for (auto& p : pieces_)
        if (p.x0 < c)
          v = p.y0 + p.slope * (c - p.x0);
      return v;
    }

    static PiecewiseLinear max(const PiecewiseLinear& f, const PiecewiseLinear& g) { return merge(f, g, true); }
    static PiecewiseLinear min(const PiecewiseLinear& f, const PiecewiseLinear& g) { return merge(f, g, false); }

    /// {(c, d) : d <= f(c)} as closed cells.
    Region2D hypograph() const {
      Region2D r;
      for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const Piece& p = pieces_[i];
        ConvexCell c;
        c.constraints.push_back({1, 0, p.x0});
        if (i + 1 < pieces_.size())
          c.constraints.push_back({-1, 0, -pieces_[i + 1].x0});
        // d <= y0 + s (c - x0)  <=>  s c - d >= s x0 - y0
        c.constraints.push_back({p.slope, -1, p.slope * p.x0 - p.y0});
        r.cells.push_back(std::move(c));
      }
      return r;
    }

    /// {(c, d) : d > f(c)}.
    Region2D strict_epigraph() const {
      Region2D r;
      if (pieces_.empty())
        return Region2D::everything();
      r.cells.push_back(ConvexCell{{{-1, 0, -pieces_.front().x0, true}}});
      for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const Piece& p = pieces_[i];
        ConvexCell c;
        c.constraints.push_back({1, 0, p.x0});
        if (i + 1 < pieces_.size())
          c.constraints.push_back({-1, 0, -pieces_[i + 1].x0, true});
        c.constraints.push_back({-p.slope, 1, p.y0 - p.slope * p.x0, true});
        r.cells.push_back(std::move(c));
      }
      return r;
    }

    friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

  private:
    void normalise() {
      std::vector<Piece> out;
      for (auto& p : pieces_) {
        if (!out.empty()) {
          const Piece& q = out.back();
          if (q.slope == p.slope && q.y0 + q.slope * (p.x0 - q.x0) == p.y0)
            continue;
        }
        out.push_back(p);
      }
      pieces_ = std::move(out);
    }

    static std::optional<Piece> piece_at(const PiecewiseLinear& f, const Rational& x) {
      std::optional<Piece> r;
      for (auto& p : f.pieces_)
        if (p.x0 <= x)
          r = Piece{x, p.y0 + p.slope * (x - p.x0), p.slope};
      return r;
    }

    static PiecewiseLinear merge(const PiecewiseLinear& f, const PiecewiseLinear& g, bool takeMax) {
      std::set<Rational> breaks;
      for (auto& p : f.pieces_)
        breaks.insert(p.x0);
      for (auto& p : g.pieces_)
        breaks.insert(p.x0);
      std::vector<Rational> bs(breaks.begin(), breaks.end());
      std::vector<Piece> out;
      for (std::size_t i = 0; i < bs.size(); ++i) {
        auto pf = piece_at(f, bs[i]);
        auto pg = piece_at(g, bs[i]);
        if (!pf || !pg) {
          if (takeMax && (pf || pg))
            out.push_back(pf ? *pf : *pg);
          continue;
        }
        auto better = [&](const Piece& a, const Piece& b) {
          // a is the pick at the left end; ties resolved by slope.
          if (a.y0 != b.y0)
            return takeMax ? a.y0 > b.y0 : a.y0 < b.y0;
          return takeMax ? a.slope >= b.slope : a.slope <= b.slope;
        };
        const Piece& first = better(*pf, *pg) ? *pf : *pg;
        const Piece& second = better(*pf, *pg) ? *pg : *pf;
        out.push_back(first);
        if (first.slope != second.slope) {
          Rational t = bs[i] + (second.y0 - first.y0) / (first.slope - second.slope);
          bool inside = t > bs[i] && (i + 1 == bs.size() || t < bs[i + 1]);
          if (inside)
            out.push_back({t, first.y0 + first.slope * (t - bs[i]), second.slope});
        }
      }
      return PiecewiseLinear(std::move(out));
    }

    std::vector<Piece> pieces_;
};

}  // namespace qsg
