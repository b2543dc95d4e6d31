#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "monomial.hpp"
#include "rational.hpp"

namespace liftvf {

struct Term {
  Monomial mono;
  Rational coef;
};

// Sparse polynomial; terms are kept sorted descending in graded-lex order with no zero coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_.push_back({Monomial(nvars), c});
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t index) {
    return monomial(Monomial::variable(nvars, index), 1);
  }

  static Polynomial monomial(const Monomial& m, const Rational& c = 1) {
    Polynomial p(m.size());
    if (c != 0) p.terms_.push_back({m, c});
    return p;
  }

  static Polynomial from_terms(std::size_t nvars, std::vector<Term> terms) {
    Polynomial p(nvars);
    for (const auto& t : terms)
      if (t.mono.size() != nvars) throw std::invalid_argument("variable-count mismatch");
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return compare(a.mono, b.mono, MonomialOrder::Grlex) > 0; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coef += t.coef;
        if (p.terms_.back().coef == 0) p.terms_.pop_back();
      } else if (t.coef != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Highest total degree; zero polynomial reports 0.
  unsigned degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

  // Lowest total degree of a nonzero term; nullopt for zero.
  std::optional<unsigned> order() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.back().mono.degree();
  }

  Rational coefficient(const Monomial& m) const {
    for (const auto& t : terms_)
      if (t.mono == m) return t.coef;
    return 0;
  }

  Rational constant_term() const {
    if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coef;
    return 0;
  }

  Polynomial truncate(unsigned order) const {
    Polynomial r(nvars_);
    for (const auto& t : terms_)
      if (t.mono.degree() < order) r.terms_.push_back(t);
    return r;
  }

  Polynomial homogeneous_part(unsigned d) const {
    Polynomial r(nvars_);
    for (const auto& t : terms_)
      if (t.mono.degree() == d) r.terms_.push_back(t);
    return r;
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) { return multiply(a, b); }

  friend Polynomial operator*(const Rational& c, const Polynomial& a) {
    Polynomial r(a.nvars_);
    if (c == 0) return r;
    r.terms_ = a.terms_;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) return false;
    return true;
  }

  Polynomial mul_monomial(const Monomial& m, const Rational& c = 1) const {
    Polynomial r(nvars_);
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
    return r;
  }

  // Product with every term of degree >= order dropped.
  static Polynomial multiply(const Polynomial& a, const Polynomial& b,
                             std::optional<unsigned> order = std::nullopt) {
    check_same(a, b);
    Polynomial r(a.nvars_);
    if (a.is_zero() || b.is_zero()) return r;
    if (b.terms_.size() == 1 && !order) return a.mul_monomial(b.terms_[0].mono, b.terms_[0].coef);
    if (a.terms_.size() == 1 && !order) return b.mul_monomial(a.terms_[0].mono, a.terms_[0].coef);
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) {
        if (order && s.mono.degree() + t.mono.degree() >= *order) continue;
        auto [it, fresh] = acc.try_emplace(s.mono * t.mono);
        if (fresh)
          it->second = s.coef * t.coef;
        else
          it->second += s.coef * t.coef;
      }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (c != 0) terms.push_back({m, std::move(c)});
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return compare(x.mono, y.mono, MonomialOrder::Grlex) > 0; });
    r.terms_ = std::move(terms);
    return r;
  }

  Polynomial pow(unsigned k, std::optional<unsigned> order = std::nullopt) const {
    Polynomial result = constant(nvars_, 1);
    if (order) result = result.truncate(*order);
    Polynomial base = order ? truncate(*order) : *this;
    while (k) {
      if (k & 1u) result = multiply(result, base, order);
      k >>= 1u;
      if (k) base = multiply(base, base, order);
    }
    return result;
  }

  Polynomial partial_derivative(std::size_t var) const {
    if (var >= nvars_) throw std::out_of_range("partial derivative variable index");
    std::vector<Term> out;
    for (const auto& t : terms_) {
      unsigned e = t.mono[var];
      if (e == 0) continue;
      Monomial m = t.mono;
      m.set(var, e - 1);
      out.push_back({m, t.coef * e});
    }
    Polynomial r(nvars_);
    r.terms_ = std::move(out);
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& x, const Term& y) { return compare(x.mono, y.mono, MonomialOrder::Grlex) > 0; });
    return r;
  }

  // g(f_1, ..., f_p) where g is *this; every f_q shares one variable count.
  Polynomial substitute(const std::vector<Polynomial>& f, std::optional<unsigned> order = std::nullopt) const {
    if (f.size() != nvars_) throw std::invalid_argument("substitute: arity mismatch");
    std::size_t m = f.empty() ? 0 : f.front().nvars_;
    for (const auto& fq : f)
      if (fq.nvars_ != m) throw std::invalid_argument("substitute: source variable-count mismatch");
    std::vector<std::vector<Polynomial>> powers(nvars_);
    auto power = [&](std::size_t q, unsigned e) -> const Polynomial& {
      auto& cache = powers[q];
      if (cache.empty()) cache.push_back(order ? constant(m, 1).truncate(*order) : constant(m, 1));
      while (cache.size() <= e) cache.push_back(multiply(cache.back(), f[q], order));
      return cache[e];
    };
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    for (const auto& t : terms_) {
      Polynomial prod = constant(m, t.coef);
      if (order) prod = prod.truncate(*order);
      for (std::size_t q = 0; q < nvars_ && !prod.is_zero(); ++q)
        if (t.mono[q]) prod = multiply(prod, power(q, t.mono[q]), order);
      for (auto& s : prod.terms_) {
        auto [it, fresh] = acc.try_emplace(s.mono);
        if (fresh)
          it->second = std::move(s.coef);
        else
          it->second += s.coef;
      }
    }
    std::vector<Term> terms;
    for (auto& [mono, c] : acc)
      if (c != 0) terms.push_back({mono, std::move(c)});
    return from_terms(m, std::move(terms));
  }

  Rational evaluate(const std::vector<Rational>& point) const {
    if (point.size() != nvars_) throw std::invalid_argument("evaluate: arity mismatch");
    Rational sum = 0;
    for (const auto& t : terms_) {
      Rational v = t.coef;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (unsigned e = 0; e < t.mono[i]; ++e) v *= point[i];
      sum += v;
    }
    return sum;
  }

  // Canonical text: descending graded-lex terms, "c*x^2*y" style, "/1" suppressed.
  std::string render(const std::vector<std::string>& names) const {
    if (names.size() != nvars_) throw std::invalid_argument("render: name count mismatch");
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
      Rational c = t.coef;
      bool negative = c < 0;
      if (negative) c = -c;
      if (first)
        os << (negative ? "-" : "");
      else
        os << (negative ? " - " : " + ");
      first = false;
      bool unit = c == 1;
      if (!unit || t.mono.is_one()) os << c.get_str();
      bool need_star = !unit;
      for (std::size_t i = 0; i < nvars_; ++i) {
        unsigned e = t.mono[i];
        if (!e) continue;
        if (need_star) os << '*';
        os << names[i];
        if (e > 1) os << '^' << e;
        need_star = true;
      }
    }
    return os.str();
  }

 private:
  static void check_same(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("variable-count mismatch");
  }

  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
    check_same(a, b);
    Polynomial r(a.nvars_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      int c;
      if (i == a.terms_.size())
        c = -1;
      else if (j == b.terms_.size())
        c = 1;
      else
        c = compare(a.terms_[i].mono, b.terms_[j].mono, MonomialOrder::Grlex);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        Term t = b.terms_[j++];
        if (subtract) t.coef = -t.coef;
        r.terms_.push_back(std::move(t));
      } else {
        Rational s = subtract ? Rational(a.terms_[i].coef - b.terms_[j].coef) : Rational(a.terms_[i].coef + b.terms_[j].coef);
        if (s != 0) r.terms_.push_back({a.terms_[i].mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

using PolyVector = std::vector<Polynomial>;

}  // namespace liftvf
