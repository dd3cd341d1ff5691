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

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qsg {

using BigInt = mpz_class;

/// Exact arbitrary-precision rational, always kept in lowest terms.
class Rational {
  public:
    Rational() = default;
    Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : q_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
    Rational(const BigInt& num, const BigInt& den) : q_(num, den) {
      if (den == 0)
        throw std::domain_error("rational with zero denominator");
      q_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    /// Accepts "n", "-n", "p/q". Decimal notation is refused so that no
    /// binary floating point value can sneak into an exact computation.
    static Rational parse(std::string_view text) {
      std::string s(text);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
      std::size_t start = 0;
      while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
        ++start;
      s = s.substr(start);
      if (s.empty())
        throw std::invalid_argument("empty rational literal");
      if (s.find_first_of(".eE") != std::string::npos)
        throw std::invalid_argument("'" + s + "' is not an exact rational; write it as p/q (e.g. 3/4 instead of 0.75)");
      auto slash = s.find('/');
      auto check_int = [&](const std::string& part) {
        std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i >= part.size())
          throw std::invalid_argument("malformed rational '" + s + "'");
        for (; i < part.size(); ++i)
          if (!std::isdigit(static_cast<unsigned char>(part[i])))
            throw std::invalid_argument("malformed rational '" + s + "'");
      };
      if (slash == std::string::npos) {
        check_int(s);
        return Rational(BigInt(s[0] == '+' ? s.substr(1) : s), BigInt(1));
      }
      std::string n = s.substr(0, slash), d = s.substr(slash + 1);
      check_int(n);
      check_int(d);
      if (d[0] == '-' || d[0] == '+')
        throw std::invalid_argument("denominator must be unsigned in '" + s + "'");
      BigInt den(d);
      if (den == 0)
        throw std::invalid_argument("zero denominator in '" + s + "'");
      return Rational(BigInt(n[0] == '+' ? n.substr(1) : n), den);
    }

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }

    std::string str() const {
      if (q_.get_den() == 1)
        return q_.get_num().get_str();
      return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }
    double to_double() const { return q_.get_d(); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
      if (o.is_zero())
        throw std::domain_error("division by zero");
      q_ /= o.q_;
      return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) >= 0; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  private:
    mpq_class q_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational pow(const Rational& base, unsigned long e) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), e);
  return Rational(n, d);
}

inline BigInt floor(const Rational& r) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return out;
}

inline BigInt ceil(const Rational& r) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return out;
}

inline Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / Rational(2); }

}  // namespace qsg

template <>
struct std::hash<qsg::Rational> {
  std::size_t operator()(const qsg::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
