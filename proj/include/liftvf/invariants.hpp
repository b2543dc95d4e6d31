#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "germ.hpp"
#include "local_algebra.hpp"

namespace liftvf {

enum class ComputationMode { Formula, BruteForce, Both };

inline std::string to_string(ComputationMode m) {
  switch (m) {
    case ComputationMode::Formula:
      return "formula";
    case ComputationMode::BruteForce:
      return "bruteforce";
    case ComputationMode::Both:
      return "both";
  }
  return "both";
}

inline ComputationMode parse_mode(const std::string& s) {
  if (s == "formula") return ComputationMode::Formula;
  if (s == "bruteforce") return ComputationMode::BruteForce;
  if (s == "both") return ComputationMode::Both;
  throw InputError("unknown mode '" + s + "' (expected formula, bruteforce or both)");
}

inline constexpr unsigned kDefaultMultiplicityCap = 40;

// max_j (n - rank of the Jacobian of f_j at the source point).
inline unsigned corank(const MultiGerm& f) {
  unsigned worst = 0;
  for (const auto& b : f.branches()) {
    std::vector<SparseRow> rows;
    for (std::size_t v = 0; v < b.n(); ++v) {
      RationalRow row;
      for (std::size_t q = 0; q < b.p(); ++q) {
        Rational c = b.components[q].coefficient(Monomial::variable(b.n(), v));
        if (c != 0) row.emplace_back(q, c);
      }
      rows.push_back(to_integer_row(row));
    }
    EchelonBasis jac(b.p());
    for (auto& r : rows) jac.insert(std::move(r));
    worst = std::max(worst, static_cast<unsigned>(b.n() - jac.rank()));
  }
  return worst;
}

// Finite-multiplicity data of a whole multigerm, with one algebra per branch.
class GermAlgebra {
 public:
  explicit GermAlgebra(const MultiGerm& f, unsigned cap = kDefaultMultiplicityCap) : germ_(f) {
    for (const auto& b : f.branches()) branches_.emplace_back(b, branch_multiplicity(b, cap));
  }

  const MultiGerm& germ() const { return germ_; }
  const std::vector<BranchAlgebra>& branches() const { return branches_; }
  const BranchAlgebra& branch(std::size_t j) const { return branches_.at(j); }

  unsigned delta() const {
    unsigned d = 0;
    for (const auto& b : branches_) d += b.delta();
    return d;
  }

  unsigned ell() const {
    unsigned l = 0;
    for (const auto& b : branches_) l = std::max(l, b.ell());
    return l;
  }

 private:
  MultiGerm germ_;
  std::vector<BranchAlgebra> branches_;
};

struct HigherInvariants {
  unsigned i = 0;
  Integer delta;
  Integer gamma;
  ComputationMode mode = ComputationMode::Both;
};

namespace detail {

// dim I^i / I^(i+1) and dim ker of the induced map (I^i/I^(i+1))^n -> (I^i/I^(i+1))^p on one branch.
inline std::pair<Integer, Integer> branch_higher_invariants(const BranchAlgebra& a, unsigned i) {
  const unsigned T = std::max(1u, a.ell() * (i + 1));
  auto next = a.ideal_power(i + 1, T);
  std::size_t upper = next->colength();
  std::size_t lower = i == 0 ? 0 : a.ideal_power(i, T)->colength();
  Integer idelta = Integer(static_cast<unsigned long>(upper - lower));
  StandardCoordinates coords(*next);
  const std::size_t width = coords.size();
  EchelonBasis image(a.p() * width);
  auto standard = a.standard_monomials(T);
  auto powers = power_products(a.branch(), i, T);
  std::vector<FreeModuleElement> columns;
  for (std::size_t v = 0; v < a.n(); ++v) columns.push_back(jacobian_column(a.branch(), v));
  for (const auto& t : standard)
    for (const auto& [alpha, fa] : powers) {
      Polynomial coeff = fa.mul_monomial(t).truncate(T);
      if (coeff.is_zero()) continue;
      for (const auto& col : columns) {
        std::vector<Polynomial> comps;
        for (std::size_t q = 0; q < a.p(); ++q) comps.push_back(Polynomial::multiply(coeff, col[q], T));
        ModuleVector nf = componentwise_normal_form(FreeModuleElement(std::move(comps)), *next);
        RationalRow row;
        for (const auto& e : nf) row.emplace_back(e.term.comp * width + coords.index({e.term.mono, 0}), e.coef);
        image.insert(to_integer_row(row));
      }
    }
  Integer igamma = Integer(static_cast<unsigned long>(a.n())) * idelta - static_cast<unsigned long>(image.rank());
  return {idelta, igamma};
}

}  // namespace detail

inline HigherInvariants higher_invariants_formula(const GermAlgebra& g, unsigned i) {
  const MultiGerm& f = g.germ();
  Integer c = binomial(static_cast<unsigned>(f.n() + i - 1), i);
  Integer d = g.delta();
  return {i, c * d, c * (d - static_cast<unsigned long>(f.branch_count())), ComputationMode::Formula};
}

inline HigherInvariants higher_invariants_bruteforce(const GermAlgebra& g, unsigned i) {
  HigherInvariants out{i, 0, 0, ComputationMode::BruteForce};
  for (const auto& b : g.branches()) {
    auto [d, c] = detail::branch_higher_invariants(b, i);
    out.delta += d;
    out.gamma += c;
  }
  return out;
}

// Both modes must agree when `mode` is Both; a disagreement is an internal-consistency failure.
inline HigherInvariants higher_invariants(const GermAlgebra& g, unsigned i, ComputationMode mode) {
  if (mode == ComputationMode::Formula) return higher_invariants_formula(g, i);
  if (mode == ComputationMode::BruteForce) return higher_invariants_bruteforce(g, i);
  auto a = higher_invariants_formula(g, i);
  auto b = higher_invariants_bruteforce(g, i);
  if (a.delta != b.delta || a.gamma != b.gamma)
    throw ConsistencyError("level " + std::to_string(i) + ": formula (" + a.delta.get_str() + ", " +
                           a.gamma.get_str() + ") disagrees with brute force (" + b.delta.get_str() + ", " +
                           b.gamma.get_str() + ")");
  a.mode = ComputationMode::Both;
  return a;
}

struct GermInvariants {
  unsigned corank = 0;
  unsigned delta = 0;
  std::vector<unsigned> branch_delta;
  Integer gamma;
  unsigned ell = 0;
  // Jet order at which every branch's colength stabilized.
  unsigned stabilized_order = 0;
  std::map<unsigned, HigherInvariants> higher;
};

inline GermInvariants germ_invariants(const GermAlgebra& g, unsigned max_i, ComputationMode mode) {
  GermInvariants out;
  out.corank = corank(g.germ());
  out.delta = g.delta();
  for (const auto& b : g.branches()) out.branch_delta.push_back(b.delta());
  out.ell = g.ell();
  out.stabilized_order = out.ell + 1;
  for (unsigned i = 0; i <= max_i; ++i) out.higher.emplace(i, higher_invariants(g, i, mode));
  out.gamma = out.higher.at(0).gamma;
  return out;
}

// Deletes the quadratic variables of a germ whose last component is g(x_1..x_p) + sum a_j x_j^2
// (a_j = +1 or -1) and whose other components are x_1, ..., x_(p-1).
inline MultiGerm reduce_to_core(const MultiGerm& f) {
  const std::size_t n = f.n(), p = f.p();
  if (n < p) throw HypothesisError("reduce_to_core needs n >= p");
  if (n == p) return f;
  std::vector<Branch> core;
  for (const auto& b : f.branches()) {
    auto reject = [&](const std::string& why) {
      throw HypothesisError("branch '" + b.label + "' is not in Rieger-Ruas form: " + why);
    };
    for (std::size_t q = 0; q + 1 < p; ++q)
      if (!(b.components[q] == Polynomial::variable(n, q))) reject("component " + std::to_string(q + 1) + " is not x_" + std::to_string(q + 1));
    const Polynomial& last = b.components[p - 1];
    std::vector<Term> kept;
    std::vector<bool> seen(n, false);
    for (const auto& t : last.terms()) {
      bool touches_extra = false;
      for (std::size_t v = p; v < n; ++v) touches_extra = touches_extra || t.mono[v] > 0;
      if (!touches_extra) {
        Monomial m(p);
        for (std::size_t v = 0; v < p; ++v) m.set(v, t.mono[v]);
        kept.push_back({m, t.coef});
        continue;
      }
      std::size_t var = n;
      for (std::size_t v = p; v < n; ++v)
        if (t.mono[v] > 0) var = v;
      if (t.mono.degree() != 2 || t.mono[var] != 2) reject("term mixing the quadratic variables");
      if (t.coef != 1 && t.coef != -1) reject("quadratic coefficient is not +1 or -1");
      seen[var] = true;
    }
    for (std::size_t v = p; v < n; ++v)
      if (!seen[v]) reject("variable " + b.source_vars[v] + " has no square term");
    Branch c;
    c.label = b.label;
    c.source_vars.assign(b.source_vars.begin(), b.source_vars.begin() + static_cast<std::ptrdiff_t>(p));
    for (std::size_t q = 0; q + 1 < p; ++q) c.components.push_back(Polynomial::variable(p, q));
    c.components.push_back(Polynomial::from_terms(p, std::move(kept)));
    core.push_back(std::move(c));
  }
  return MultiGerm(f.target_vars(), std::move(core));
}

}  // namespace liftvf
