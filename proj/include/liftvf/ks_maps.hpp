#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "invariants.hpp"
#include "local_algebra.hpp"

namespace liftvf {

// Jet order M = l(i+2)+1 at which the level-i model and its successor are exact.
inline unsigned truncation_order(const GermAlgebra& g, unsigned i) { return g.ell() * (i + 2) + 1; }

// Monomial vector fields X^alpha d/dX_q with |alpha| = i, alpha in graded-lex order, q innermost.
inline std::vector<VectorField> monomial_fields(std::size_t p, unsigned i) {
  std::vector<VectorField> out;
  for (const auto& alpha : monomials_of_degree(p, i, MonomialOrder::Grlex))
    for (std::size_t q = 0; q < p; ++q) out.push_back(VectorField::basis_vector(p, p, q, Polynomial::monomial(alpha)));
  return out;
}

struct KSMapModel {
  unsigned i = 0;
  unsigned truncation_order = 0;
  std::vector<VectorField> domain_basis;
  // Each target basis element as one representative per branch.
  std::vector<std::vector<FreeModuleElement>> target_basis;
  // matrix[r][c]: coordinate r of the image of domain element c.
  std::vector<std::vector<Rational>> matrix;
  std::size_t rank = 0;
  std::vector<VectorField> kernel_basis;

  std::size_t domain_dimension() const { return domain_basis.size(); }
  std::size_t target_dimension() const { return target_basis.size(); }
  std::size_t kernel_dimension() const { return domain_dimension() - rank; }
  std::size_t cokernel_dimension() const { return target_dimension() - rank; }
  bool surjective() const { return rank == target_dimension(); }
  bool injective() const { return rank == domain_dimension(); }
};

namespace detail {

// Per-branch quotient theta(f_j) / (TR_e(f_j) + I^(i+1) theta(f_j) + m^T theta(f_j)).
struct BranchQuotient {
  std::shared_ptr<GroebnerBasis> sb;
  std::shared_ptr<StandardCoordinates> coords;
  std::size_t offset = 0;
};

inline BranchQuotient branch_quotient(const BranchAlgebra& a, unsigned i, unsigned T, std::size_t offset) {
  std::vector<FreeModuleElement> gens;
  for (std::size_t v = 0; v < a.n(); ++v) gens.push_back(jacobian_column(a.branch(), v).truncate(T));
  for (const auto& [beta, fb] : power_products(a.branch(), i + 1, T))
    for (std::size_t q = 0; q < a.p(); ++q) gens.push_back(FreeModuleElement::basis_vector(a.p(), a.n(), q, fb));
  BranchQuotient out;
  out.sb = std::make_shared<GroebnerBasis>(truncated_standard_basis(gens, a.p(), a.n(), T));
  out.coords = std::make_shared<StandardCoordinates>(*out.sb);
  out.offset = offset;
  return out;
}

}  // namespace detail

// The matrix of the level-i reduced Kodaira-Spencer-Mather map over the monomial domain basis.
inline KSMapModel ks_matrix(const GermAlgebra& g, unsigned i) {
  const MultiGerm& f = g.germ();
  const std::size_t p = f.p();
  KSMapModel model;
  model.i = i;
  model.truncation_order = truncation_order(g, i);
  const unsigned T = model.truncation_order;
  model.domain_basis = monomial_fields(p, i);

  std::vector<detail::BranchQuotient> quotients;
  std::size_t total = 0;
  for (const auto& a : g.branches()) {
    quotients.push_back(detail::branch_quotient(a, i, T, total));
    total += quotients.back().coords->size();
  }
  auto reduce_into = [&](std::size_t j, const FreeModuleElement& v, RationalRow& row) {
    const auto& bq = quotients[j];
    for (auto& entry : bq.coords->rational_row(bq.sb->reduce(v), bq.offset)) row.push_back(std::move(entry));
  };

  std::vector<std::vector<std::pair<Monomial, Polynomial>>> powers;
  for (const auto& a : g.branches()) powers.push_back(power_products(a.branch(), i, T));

  // Images of the domain basis, concatenated over branches.
  std::vector<RationalRow> exact_images;
  std::vector<SparseRow> images;
  for (std::size_t k = 0; k < powers.front().size(); ++k)
    for (std::size_t q = 0; q < p; ++q) {
      RationalRow row;
      for (std::size_t j = 0; j < g.branches().size(); ++j) {
        const auto& a = g.branch(j);
        reduce_into(j, FreeModuleElement::basis_vector(p, a.n(), q, powers[j][k].second), row);
      }
      images.push_back(to_integer_row(row));
      exact_images.push_back(std::move(row));
    }

  // Target: the image of f*m^i theta(f), spanned by t f^alpha e_q with t standard modulo I.
  EchelonBasis target(total);
  for (std::size_t j = 0; j < g.branches().size(); ++j) {
    const auto& a = g.branch(j);
    for (const auto& t : a.standard_monomials(T))
      for (const auto& [alpha, fa] : powers[j]) {
        Polynomial c = fa.mul_monomial(t).truncate(T);
        if (c.is_zero()) continue;
        for (std::size_t q = 0; q < p; ++q) {
          RationalRow row;
          reduce_into(j, FreeModuleElement::basis_vector(p, a.n(), q, c), row);
          target.insert(to_integer_row(row));
        }
      }
  }
  auto rows = target.rref();
  for (const auto& r : rows) {
    std::vector<FreeModuleElement> reps;
    for (const auto& bq : quotients) reps.push_back(bq.coords->element(r, bq.offset));
    model.target_basis.push_back(std::move(reps));
  }

  // Coordinates in the reduced target basis are the entries at the pivot columns.
  model.matrix.assign(rows.size(), std::vector<Rational>(images.size()));
  for (std::size_t c = 0; c < exact_images.size(); ++c) {
    std::unordered_map<std::size_t, Rational> at(exact_images[c].begin(), exact_images[c].end());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto it = at.find(rows[r].front().first);
      if (it != at.end()) model.matrix[r][c] = it->second;
    }
  }

  EchelonBasis image_span(total);
  for (const auto& v : images) image_span.insert(v);
  model.rank = image_span.rank();
  for (const auto& rel : nullspace(images, total)) {
    VectorField eta(p, p);
    // Integer rows are exact images scaled by their common denominator.
    for (const auto& [c, coef] : rel) {
      Integer l = 1;
      for (const auto& [col, q] : exact_images[c]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
      eta = eta + Rational(coef * l) * model.domain_basis[c];
    }
    model.kernel_basis.push_back(std::move(eta));
  }
  return model;
}

enum class LevelSource { Matrix, Formula, Both };

inline std::string to_string(LevelSource s) {
  switch (s) {
    case LevelSource::Matrix:
      return "bruteforce";
    case LevelSource::Formula:
      return "formula";
    case LevelSource::Both:
      return "both-agree";
  }
  return "bruteforce";
}

struct KSLevel {
  unsigned i = 0;
  bool surjective = false;
  bool injective = false;
  std::size_t kernel_dimension = 0;
  std::size_t cokernel_dimension = 0;
  std::size_t domain_dimension = 0;
  unsigned truncation_order = 0;
  LevelSource source = LevelSource::Matrix;
};

// A level index, or one of the markers used by the definitions of i1 and i2.
struct LevelValue {
  enum class Kind { Finite, MinusInfinity, InfinityUpToCap } kind = Kind::InfinityUpToCap;
  unsigned value = 0;

  bool finite() const { return kind == Kind::Finite; }
  std::string str() const {
    switch (kind) {
      case Kind::Finite:
        return std::to_string(value);
      case Kind::MinusInfinity:
        return "-inf";
      case Kind::InfinityUpToCap:
        return "inf-up-to-cap";
    }
    return "";
  }
  friend bool operator==(const LevelValue& a, const LevelValue& b) {
    return a.kind == b.kind && (a.kind != Kind::Finite || a.value == b.value);
  }
};

struct KSReport {
  std::vector<KSLevel> levels;
  unsigned cap = 0;
  LevelValue i1;
  LevelValue i2;
  std::optional<std::size_t> min_generators;
  std::string min_generators_note;
  ComputationMode mode = ComputationMode::Both;
};

struct KSConfig {
  unsigned cap = 6;
  ComputationMode mode = ComputationMode::Both;
  // Scan every level up to the cap even after i1 and i2 are settled.
  bool scan_all = false;
  // Test hook: adds one to every formula kernel dimension.
  bool inject_formula_fault = false;
};

// p C(p+i, i+1) - ((p-n) delta_(i+1) + gamma_(i+1) - gamma_i), valid when level i+1 is surjective.
inline Integer kernel_dimension_formula(const GermAlgebra& g, unsigned i, ComputationMode mode) {
  const MultiGerm& f = g.germ();
  const auto p = static_cast<unsigned>(f.p());
  const auto n = static_cast<unsigned>(f.n());
  auto next = higher_invariants(g, i + 1, mode);
  auto cur = higher_invariants(g, i, mode);
  Integer domain = Integer(p) * binomial(p + i, i + 1);
  Integer codim = (Integer(p) - Integer(n)) * next.delta + next.gamma - cur.gamma;
  return domain - codim;
}

inline KSLevel level_from_model(const KSMapModel& m) {
  KSLevel l;
  l.i = m.i;
  l.surjective = m.surjective();
  l.injective = m.injective();
  l.kernel_dimension = m.kernel_dimension();
  l.cokernel_dimension = m.cokernel_dimension();
  l.domain_dimension = m.domain_dimension();
  l.truncation_order = m.truncation_order;
  return l;
}

namespace detail {

inline std::size_t formula_kernel(const GermAlgebra& g, unsigned level, const KSConfig& cfg) {
  Integer k = kernel_dimension_formula(g, level - 1, cfg.mode);
  if (cfg.inject_formula_fault) k += 1;
  if (k < 0) throw ConsistencyError("negative kernel dimension from the formula at level " + std::to_string(level));
  return k.get_ui();
}

}  // namespace detail

// Level data for one level. Known surjectivity (it persists upward) lets formula mode skip the matrix at levels >= 1.
inline KSLevel ks_level(const GermAlgebra& g, unsigned i, const KSConfig& cfg, bool known_surjective) {
  const auto p = static_cast<unsigned>(g.germ().p());
  const bool formula_applies = known_surjective && i >= 1;
  if (formula_applies && cfg.mode == ComputationMode::Formula) {
    KSLevel l;
    l.i = i;
    l.surjective = true;
    l.domain_dimension = p * binomial_size(p + i - 1, i);
    l.kernel_dimension = detail::formula_kernel(g, i, cfg);
    l.injective = l.kernel_dimension == 0;
    l.truncation_order = truncation_order(g, i);
    l.source = LevelSource::Formula;
    return l;
  }
  KSLevel l = level_from_model(ks_matrix(g, i));
  if (l.surjective && i >= 1 && cfg.mode != ComputationMode::BruteForce) {
    std::size_t k = detail::formula_kernel(g, i, cfg);
    if (k != l.kernel_dimension)
      throw ConsistencyError("level " + std::to_string(i) + ": formula kernel dimension " + std::to_string(k) +
                             " disagrees with the matrix kernel dimension " + std::to_string(l.kernel_dimension));
    l.source = LevelSource::Both;
  }
  return l;
}

// Scans levels 0..cap; i1 is the first surjective level, i2 the last injective one.
inline KSReport locate_i1_i2(const GermAlgebra& g, const KSConfig& cfg) {
  KSReport rep;
  rep.cap = cfg.cap;
  rep.mode = cfg.mode;
  bool surjective_seen = false;
  bool injectivity_failed = false;
  for (unsigned i = 0; i <= cfg.cap; ++i) {
    if (!cfg.scan_all && surjective_seen && injectivity_failed) break;
    KSLevel l = ks_level(g, i, cfg, surjective_seen);
    if (surjective_seen && !l.surjective)
      throw ConsistencyError("surjectivity lost at level " + std::to_string(i) + " after level " +
                             std::to_string(rep.i1.value));
    if (injectivity_failed && l.injective)
      throw ConsistencyError("injectivity regained at level " + std::to_string(i));
    if (l.surjective && !surjective_seen) {
      surjective_seen = true;
      rep.i1 = {LevelValue::Kind::Finite, i};
    }
    if (!l.injective && !injectivity_failed) {
      injectivity_failed = true;
      rep.i2 = i == 0 ? LevelValue{LevelValue::Kind::MinusInfinity, 0} : LevelValue{LevelValue::Kind::Finite, i - 1};
    }
    rep.levels.push_back(l);
  }
  if (surjective_seen && rep.i2.finite() && rep.i1.finite() && rep.i1.value < rep.i2.value)
    throw ConsistencyError("i1 < i2 contradicts the ordering of the invariants");
  return rep;
}

// Minimal generator count of Lift(f): dim ker of the level i+1 map where i = i1 = i2.
inline std::size_t min_generators(const GermAlgebra& g, KSReport& rep, const KSConfig& cfg) {
  if (!rep.i1.finite() || !rep.i2.finite() || rep.i1.value != rep.i2.value) {
    rep.min_generators_note = "not applicable (i1 = " + rep.i1.str() + ", i2 = " + rep.i2.str() + ")";
    throw HypothesisError("construction hypothesis violated (i1 != i2): i1 = " + rep.i1.str() + ", i2 = " + rep.i2.str());
  }
  const unsigned level = rep.i1.value + 1;
  std::optional<KSLevel> known;
  for (const auto& l : rep.levels)
    if (l.i == level) known = l;
  std::size_t count = known ? known->kernel_dimension : ks_level(g, level, cfg, true).kernel_dimension;
  rep.min_generators = count;
  rep.min_generators_note = "dim ker at level " + std::to_string(level) + " (" + to_string(cfg.mode) + ")";
  return count;
}

struct StabilityClass {
  bool stable = false;
  bool isolated = false;
};

inline StabilityClass classify_stable(const GermAlgebra& g) {
  KSMapModel m = ks_matrix(g, 0);
  return {m.surjective(), m.injective()};
}

}  // namespace liftvf
