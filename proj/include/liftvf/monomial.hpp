#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace liftvf {

inline constexpr std::size_t kMaxVariables = 12;

class Monomial {
 public:
  Monomial() = default;

  explicit Monomial(std::size_t nvars) : nvars_(check_arity(nvars)) {}

  Monomial(std::initializer_list<unsigned> exps) : nvars_(check_arity(exps.size())) {
    std::size_t i = 0;
    for (unsigned e : exps) set(i++, e);
  }

  static Monomial variable(std::size_t nvars, std::size_t index, unsigned power = 1) {
    Monomial m(nvars);
    m.set(index, power);
    return m;
  }

  std::size_t size() const { return nvars_; }
  unsigned degree() const { return degree_; }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  bool is_one() const { return degree_ == 0; }

  void set(std::size_t i, unsigned e) {
    if (i >= nvars_) throw std::out_of_range("monomial variable index");
    if (e > 0xFFFF) throw std::overflow_error("monomial exponent overflow");
    degree_ = static_cast<std::uint16_t>(degree_ - exps_[i] + e);
    exps_[i] = static_cast<std::uint16_t>(e);
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < nvars_; ++i) r.exps_[i] = static_cast<std::uint16_t>(r.exps_[i] + o.exps_[i]);
    r.degree_ = static_cast<std::uint16_t>(degree_ + o.degree_);
    return r;
  }

  bool divides(const Monomial& o) const {
    if (degree_ > o.degree_) return false;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (exps_[i] > o.exps_[i]) return false;
    return true;
  }

  // Exact quotient o / *this; requires divides(o).
  Monomial quotient_of(const Monomial& o) const {
    Monomial r(o);
    for (std::size_t i = 0; i < nvars_; ++i) r.exps_[i] = static_cast<std::uint16_t>(o.exps_[i] - exps_[i]);
    r.degree_ = static_cast<std::uint16_t>(o.degree_ - degree_);
    return r;
  }

  Monomial lcm(const Monomial& o) const {
    Monomial r(nvars_);
    unsigned d = 0;
    for (std::size_t i = 0; i < nvars_; ++i) {
      r.exps_[i] = std::max(exps_[i], o.exps_[i]);
      d += r.exps_[i];
    }
    r.degree_ = static_cast<std::uint16_t>(d);
    return r;
  }

  bool coprime(const Monomial& o) const {
    for (std::size_t i = 0; i < nvars_; ++i)
      if (exps_[i] && o.exps_[i]) return false;
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.nvars_ == b.nvars_ && a.exps_ == b.exps_;
  }

  std::size_t hash() const {
    std::size_t h = nvars_;
    for (std::size_t i = 0; i < nvars_; ++i) h = h * 1000003u ^ exps_[i];
    return h;
  }

 private:
  static std::uint8_t check_arity(std::size_t n) {
    if (n > kMaxVariables) throw std::invalid_argument("too many variables");
    return static_cast<std::uint8_t>(n);
  }

  std::array<std::uint16_t, kMaxVariables> exps_{};
  std::uint8_t nvars_ = 0;
  std::uint16_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Local orders rank lower degree as larger; ties use reverse lexicographic comparison.
enum class MonomialOrder { Grlex, Grevlex, LocalGrevlex };

// Positive when a > b.
inline int compare(const Monomial& a, const Monomial& b, MonomialOrder order) {
  if (a.degree() != b.degree()) {
    bool a_larger = a.degree() > b.degree();
    if (order == MonomialOrder::LocalGrevlex) a_larger = !a_larger;
    return a_larger ? 1 : -1;
  }
  const std::size_t n = a.size();
  if (order == MonomialOrder::Grlex) {
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
    return 0;
  }
  for (std::size_t i = n; i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  return 0;
}

struct MonomialGreater {
  MonomialOrder order = MonomialOrder::Grlex;
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b, order) > 0; }
};

namespace detail {
inline void enumerate_degree(std::size_t nvars, std::size_t index, unsigned remaining, Monomial& cur,
                             std::vector<Monomial>& out) {
  if (index + 1 == nvars) {
    cur.set(index, remaining);
    out.push_back(cur);
    cur.set(index, 0);
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    cur.set(index, e);
    enumerate_degree(nvars, index + 1, remaining - e, cur, out);
  }
  cur.set(index, 0);
}
}  // namespace detail

// All monomials of total degree d, descending in the given order.
inline std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned d,
                                                 MonomialOrder order = MonomialOrder::Grlex) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (d == 0) out.emplace_back(0);
    return out;
  }
  Monomial cur(nvars);
  detail::enumerate_degree(nvars, 0, d, cur, out);
  std::sort(out.begin(), out.end(), MonomialGreater{order});
  return out;
}

// All monomials of degree < bound, by ascending degree, each degree descending in the order.
inline std::vector<Monomial> monomials_below(std::size_t nvars, unsigned bound,
                                             MonomialOrder order = MonomialOrder::Grlex) {
  std::vector<Monomial> out;
  for (unsigned d = 0; d < bound; ++d) {
    auto part = monomials_of_degree(nvars, d, order);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace liftvf
