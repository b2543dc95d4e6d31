#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "polynomial.hpp"

namespace liftvf {

// Element of a free module of finite rank over a polynomial ring.
class FreeModuleElement {
 public:
  FreeModuleElement() = default;

  FreeModuleElement(std::size_t rank, std::size_t nvars) : components_(rank, Polynomial(nvars)), nvars_(nvars) {}

  explicit FreeModuleElement(std::vector<Polynomial> components) : components_(std::move(components)) {
    if (components_.empty()) throw std::invalid_argument("free module element needs positive rank");
    nvars_ = components_.front().nvars();
    for (const auto& c : components_)
      if (c.nvars() != nvars_) throw std::invalid_argument("free module element: variable-count mismatch");
  }

  static FreeModuleElement basis_vector(std::size_t rank, std::size_t nvars, std::size_t index,
                                        const Polynomial& coefficient) {
    FreeModuleElement e(rank, nvars);
    e.components_.at(index) = coefficient;
    return e;
  }

  std::size_t rank() const { return components_.size(); }
  std::size_t nvars() const { return nvars_; }
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& operator[](std::size_t i) const { return components_[i]; }
  Polynomial& operator[](std::size_t i) { return components_[i]; }

  bool is_zero() const {
    for (const auto& c : components_)
      if (!c.is_zero()) return false;
    return true;
  }

  std::optional<unsigned> order() const {
    std::optional<unsigned> best;
    for (const auto& c : components_)
      if (auto o = c.order(); o && (!best || *o < *best)) best = o;
    return best;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& c : components_) d = std::max(d, c.degree());
    return d;
  }

  FreeModuleElement truncate(unsigned order) const {
    FreeModuleElement r(*this);
    for (auto& c : r.components_) c = c.truncate(order);
    return r;
  }

  FreeModuleElement homogeneous_part(unsigned d) const {
    FreeModuleElement r(*this);
    for (auto& c : r.components_) c = c.homogeneous_part(d);
    return r;
  }

  friend FreeModuleElement operator+(const FreeModuleElement& a, const FreeModuleElement& b) {
    check_same(a, b);
    FreeModuleElement r(a);
    for (std::size_t i = 0; i < r.rank(); ++i) r.components_[i] += b.components_[i];
    return r;
  }

  friend FreeModuleElement operator-(const FreeModuleElement& a, const FreeModuleElement& b) {
    check_same(a, b);
    FreeModuleElement r(a);
    for (std::size_t i = 0; i < r.rank(); ++i) r.components_[i] -= b.components_[i];
    return r;
  }

  friend FreeModuleElement operator*(const Polynomial& s, const FreeModuleElement& a) {
    FreeModuleElement r(a);
    for (auto& c : r.components_) c = s * c;
    return r;
  }

  friend FreeModuleElement operator*(const Rational& s, const FreeModuleElement& a) {
    FreeModuleElement r(a);
    for (auto& c : r.components_) c = s * c;
    return r;
  }

  friend bool operator==(const FreeModuleElement& a, const FreeModuleElement& b) {
    return a.components_ == b.components_;
  }

  std::string render(const std::vector<std::string>& names) const {
    std::string s = "(";
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (i) s += ", ";
      s += components_[i].render(names);
    }
    return s + ")";
  }

 private:
  static void check_same(const FreeModuleElement& a, const FreeModuleElement& b) {
    if (a.rank() != b.rank() || a.nvars_ != b.nvars_) throw std::invalid_argument("free module ambient mismatch");
  }

  std::vector<Polynomial> components_;
  std::size_t nvars_ = 0;
};

}  // namespace liftvf
