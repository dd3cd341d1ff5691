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

#include <optional>
#include <stdexcept>
#include <vector>

#include "qsg/rational.hpp"

namespace qsg {

enum class Rel { LE, GE, EQ, LT, GT };

/// a . x  rel  b over free real variables.
struct LinearConstraint {
    std::vector<Rational> a;
    Rel rel = Rel::LE;
    Rational b;
};

struct LpResult {
    enum class Status { Infeasible, Unbounded, Optimal } status = Status::Infeasible;
    Rational value;
    std::vector<Rational> x;
};

namespace detail {

/// Dense two-phase simplex over exact rationals with Bland's rule.
/// Variables are nonnegative here; callers split free ones.
class Tableau {
  public:
    Tableau(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs)
      : A_(std::move(rows)), b_(std::move(rhs)) {}

    /// Maximises cost . y subject to A y = b, y >= 0.
    LpResult solve(const std::vector<Rational>& cost) {
      const std::size_t m = A_.size();
      const std::size_t n = cost.size();
      for (std::size_t i = 0; i < m; ++i)
        if (b_[i].sign() < 0) {
          for (auto& v : A_[i])
            v = -v;
          b_[i] = -b_[i];
        }
      // Phase 1: one artificial per row.
      for (std::size_t i = 0; i < m; ++i) {
        A_[i].resize(n + m);
        A_[i][n + i] = Rational(1);
      }
      basis_.resize(m);
      for (std::size_t i = 0; i < m; ++i)
        basis_[i] = static_cast<int>(n + i);
      std::vector<Rational> phase1(n + m);
      for (std::size_t i = 0; i < m; ++i)
        phase1[n + i] = Rational(-1);
      iterate(phase1, n + m);
      Rational infeas;
      for (std::size_t i = 0; i < m; ++i)
        if (basis_[i] >= static_cast<int>(n))
          infeas += b_[i];
      if (infeas.sign() != 0)
        return {};
      // Drive remaining (zero) artificials out, dropping redundant rows.
      for (std::size_t i = 0; i < A_.size();) {
        if (basis_[i] < static_cast<int>(n)) {
          ++i;
          continue;
        }
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j)
          if (A_[i][j].sign() != 0) {
            col = j;
            break;
          }
        if (col == n) {
          A_.erase(A_.begin() + static_cast<long>(i));
          b_.erase(b_.begin() + static_cast<long>(i));
          basis_.erase(basis_.begin() + static_cast<long>(i));
          continue;
        }
        pivot(i, col);
        ++i;
      }
      for (auto& row : A_)
        row.resize(n);
      LpResult r;
      if (!iterate(cost, n)) {
        r.status = LpResult::Status::Unbounded;
        return r;
      }
      r.status = LpResult::Status::Optimal;
      r.x.assign(n, Rational(0));
      for (std::size_t i = 0; i < A_.size(); ++i)
        r.x[basis_[i]] = b_[i];
      for (std::size_t j = 0; j < n; ++j)
        r.value += cost[j] * r.x[j];
      return r;
    }

  private:
    void pivot(std::size_t r, std::size_t c) {
      Rational p = A_[r][c];
      for (auto& v : A_[r])
        v /= p;
      b_[r] /= p;
      for (std::size_t i = 0; i < A_.size(); ++i) {
        if (i == r || A_[i][c].sign() == 0)
          continue;
        Rational f = A_[i][c];
        for (std::size_t j = 0; j < A_[i].size(); ++j)
          if (A_[r][j].sign() != 0)
            A_[i][j] -= f * A_[r][j];
        b_[i] -= f * b_[r];
      }
      basis_[r] = static_cast<int>(c);
    }

    /// Returns false when the objective is unbounded.
    bool iterate(const std::vector<Rational>& cost, std::size_t cols) {
      for (;;) {
        std::optional<std::size_t> enter;
        for (std::size_t j = 0; j < cols && !enter; ++j) {
          Rational red = cost[j];
          for (std::size_t i = 0; i < A_.size(); ++i)
            if (A_[i][j].sign() != 0)
              red -= cost[basis_[i]] * A_[i][j];
          if (red.sign() > 0)
            enter = j;
        }
        if (!enter)
          return true;
        std::optional<std::size_t> leave;
        Rational bestRatio;
        for (std::size_t i = 0; i < A_.size(); ++i) {
          if (A_[i][*enter].sign() <= 0)
            continue;
          Rational ratio = b_[i] / A_[i][*enter];
          if (!leave || ratio < bestRatio || (ratio == bestRatio && basis_[i] < basis_[*leave])) {
            leave = i;
            bestRatio = ratio;
          }
        }
        if (!leave)
          return false;
        pivot(*leave, *enter);
      }
    }

    std::vector<std::vector<Rational>> A_;
    std::vector<Rational> b_;
    std::vector<int> basis_;
};

}  // namespace detail

/// Maximises c . x over the closure of the constraint set (strict
/// inequalities are read as non-strict). Variables are free.
inline LpResult lp_maximize(const std::vector<Rational>& c, const std::vector<LinearConstraint>& cons) {
  const std::size_t n = c.size();
  std::size_t slacks = 0;
  for (auto& k : cons) {
    if (k.a.size() != n)
      throw std::invalid_argument("constraint dimension mismatch");
    if (k.rel != Rel::EQ)
      ++slacks;
  }
  const std::size_t cols = 2 * n + slacks;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::size_t s = 2 * n;
  for (auto& k : cons) {
    std::vector<Rational> row(cols);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = k.a[j];
      row[n + j] = -k.a[j];
    }
    if (k.rel == Rel::LE || k.rel == Rel::LT)
      row[s++] = Rational(1);
    else if (k.rel == Rel::GE || k.rel == Rel::GT)
      row[s++] = Rational(-1);
    rows.push_back(std::move(row));
    rhs.push_back(k.b);
  }
  std::vector<Rational> cost(cols);
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = c[j];
    cost[n + j] = -c[j];
  }
  auto r = detail::Tableau(std::move(rows), std::move(rhs)).solve(cost);
  if (r.status == LpResult::Status::Optimal) {
    std::vector<Rational> x(n);
    for (std::size_t j = 0; j < n; ++j)
      x[j] = r.x[j] - r.x[n + j];
    r.x = std::move(x);
  }
  return r;
}

/// Exact feasibility with strict inequalities: maximise a shared slack
/// t <= 1 added to every strict row; the set is nonempty iff t > 0 is
/// reachable. Returns a feasible point if any.
inline std::optional<std::vector<Rational>> lp_feasible_point(const std::vector<LinearConstraint>& cons,
                                                               std::size_t dim) {
  bool anyStrict = false;
  std::vector<LinearConstraint> ext;
  for (auto& k : cons) {
    LinearConstraint e{k.a, k.rel, k.b};
    e.a.push_back(Rational(0));
    if (k.rel == Rel::LT) {
      e.a.back() = Rational(1);
      e.rel = Rel::LE;
      anyStrict = true;
    } else if (k.rel == Rel::GT) {
      e.a.back() = Rational(-1);
      e.rel = Rel::GE;
      anyStrict = true;
    }
    ext.push_back(std::move(e));
  }
  std::vector<Rational> cap(dim + 1);
  cap[dim] = Rational(1);
  ext.push_back({cap, Rel::LE, Rational(1)});
  std::vector<Rational> obj(dim + 1);
  obj[dim] = Rational(anyStrict ? 1 : 0);
  auto r = lp_maximize(obj, ext);
  if (r.status != LpResult::Status::Optimal)
    return std::nullopt;
  if (anyStrict && r.value.sign() <= 0)
    return std::nullopt;
  r.x.pop_back();
  return r.x;
}

inline bool lp_feasible(const std::vector<LinearConstraint>& cons, std::size_t dim) {
  return lp_feasible_point(cons, dim).has_value();
}

struct SupResult {
    enum class Kind { Empty, Unbounded, Finite } kind = Kind::Empty;
    Rational value;
    bool attained = false;

    bool is_finite() const { return kind == Kind::Finite; }
};

/// Supremum of c . x over the (possibly non-closed) polyhedron. The sup over
/// a nonempty set equals the max over its closure; attainment is decided by
/// asking for a strictly feasible point with c . x >= sup.
inline SupResult lp_sup(const std::vector<Rational>& c, const std::vector<LinearConstraint>& cons) {
  SupResult s;
  if (!lp_feasible(cons, c.size()))
    return s;
  auto r = lp_maximize(c, cons);
  if (r.status == LpResult::Status::Unbounded) {
    s.kind = SupResult::Kind::Unbounded;
    return s;
  }
  s.kind = SupResult::Kind::Finite;
  s.value = r.value;
  auto withObj = cons;
  withObj.push_back({c, Rel::GE, r.value});
  s.attained = lp_feasible(withObj, c.size());
  return s;
}

}  // namespace qsg
