#include <gtest/gtest.h>

#include "liftvf/cli.hpp"
#include "oracle.hpp"

using namespace liftvf;

namespace {

MultiGerm germ(const std::string& body) { return parse_document("germ t {\n" + body + "\n}").germ; }

// Entries with n <= p; the local algebra of a germ with n > p is infinite dimensional.
std::vector<std::string> all_entries() {
  std::vector<std::string> out;
  for (const auto& name : catalog_names()) {
    const MultiGerm f = load_catalog_entry(name).germ;
    if (f.n() <= f.p()) out.push_back(name);
  }
  return out;
}

}  // namespace

TEST(Corank, SmallGerms) {
  EXPECT_EQ(corank(germ("n = 2; p = 2; branch a(x, y) = (x, y);")), 0u);
  EXPECT_EQ(corank(germ("n = 2; p = 2; branch a(x, y) = (x, y^2);")), 1u);
  EXPECT_EQ(corank(germ("n = 2; p = 2; branch a(x, y) = (x^2, y^2);")), 2u);
  EXPECT_EQ(corank(germ("n = 1; p = 2; branch a(y) = (y^2, y^3);")), 1u);
}

TEST(Corank, EveryCatalogGermHasCorankAtMostOne) {
  for (const auto& name : all_entries()) EXPECT_LE(corank(load_catalog_entry(name).germ), 1u) << name;
}

TEST(Delta, CuspHasDeltaTwo) {
  GermAlgebra g(germ("n = 1; p = 2; branch a(x) = (x^2, x^3);"));
  EXPECT_EQ(g.delta(), 2u);
}

TEST(Delta, ImmersionHasDeltaOne) {
  GermAlgebra g(germ("n = 1; p = 2; branch a(x) = (x, x^5);"));
  EXPECT_EQ(g.delta(), 1u);
  EXPECT_EQ(g.ell(), 1u);
}

TEST(Delta, AdditiveOverBranches) {
  for (const auto& name : all_entries()) {
    const MultiGerm f = load_catalog_entry(name).germ;
    GermAlgebra whole(f);
    unsigned sum = 0;
    for (const auto& b : f.branches()) sum += GermAlgebra(MultiGerm(f.target_vars(), {b})).delta();
    EXPECT_EQ(whole.delta(), sum) << name;
  }
}

TEST(Delta, MatchesDenseColength) {
  for (const auto& name : all_entries()) {
    const MultiGerm f = load_catalog_entry(name).germ;
    if (f.n() > 2) continue;
    GermAlgebra g(f);
    for (std::size_t j = 0; j < f.branch_count(); ++j) {
      std::vector<FreeModuleElement> gens;
      for (const auto& c : f.branch(j).components) gens.emplace_back(std::vector<Polynomial>{c});
      const unsigned T = g.branch(j).ell() + 3;
      EXPECT_EQ(g.branch(j).delta(), oracle::ideal_colength(gens, T)) << name << " branch " << j;
    }
  }
}

TEST(Ell, CuspCurveTruncationOrder) {
  GermAlgebra g(germ("n = 1; p = 2; branch a(y) = (y^2, y^3);"));
  EXPECT_EQ(g.ell(), 2u);
  EXPECT_EQ(oracle::ell(g.germ().branch(0)), 2u);
  EXPECT_EQ(truncation_order(g, 1), 7u);
}

TEST(Ell, WhitneyUmbrella) {
  GermAlgebra g(load_catalog_entry("whitney-psi2").germ);
  EXPECT_EQ(g.ell(), 2u);
  EXPECT_EQ(oracle::ell(g.germ().branch(0)), 2u);
}

TEST(Ell, MatchesOracleOnCatalog) {
  for (const auto& name : all_entries()) {
    const MultiGerm f = load_catalog_entry(name).germ;
    if (f.n() > 2) continue;
    GermAlgebra g(f);
    for (std::size_t j = 0; j < f.branch_count(); ++j)
      EXPECT_EQ(g.branch(j).ell(), oracle::ell(f.branch(j))) << name << " branch " << j;
  }
}

TEST(HigherInvariants, CuspBruteForceIsConstant) {
  GermAlgebra g(germ("n = 1; p = 2; branch a(x) = (x^2, x^3);"));
  for (unsigned i = 0; i <= 3; ++i) {
    auto h = higher_invariants_bruteforce(g, i);
    EXPECT_EQ(h.delta, 2) << "i = " << i;
    EXPECT_EQ(h.gamma, 1) << "i = " << i;
  }
}

TEST(HigherInvariants, LevelZeroIsDeltaAndDeltaMinusBranches) {
  for (const auto& name : all_entries()) {
    GermAlgebra g(load_catalog_entry(name).germ);
    auto h = higher_invariants_bruteforce(g, 0);
    EXPECT_EQ(h.delta, g.delta()) << name;
    EXPECT_EQ(h.gamma, Integer(g.delta()) - static_cast<unsigned long>(g.germ().branch_count())) << name;
  }
}

TEST(HigherInvariants, FormulaAgreesWithBruteForce) {
  for (const auto& name : all_entries()) {
    GermAlgebra g(load_catalog_entry(name).germ);
    for (unsigned i = 0; i <= 3; ++i) {
      auto a = higher_invariants_formula(g, i);
      auto b = higher_invariants_bruteforce(g, i);
      EXPECT_EQ(a.delta, b.delta) << name << " i = " << i;
      EXPECT_EQ(a.gamma, b.gamma) << name << " i = " << i;
    }
  }
}

TEST(HigherInvariants, BothModeReportsAgreement) {
  GermAlgebra g(load_catalog_entry("whitney-psi3").germ);
  auto inv = germ_invariants(g, 2, ComputationMode::Both);
  ASSERT_EQ(inv.higher.size(), 3u);
  for (const auto& [i, h] : inv.higher) EXPECT_EQ(h.mode, ComputationMode::Both);
  EXPECT_EQ(inv.gamma, inv.higher.at(0).gamma);
}

TEST(ReduceToCore, SuspensionDropsQuadraticVariable) {
  MultiGerm core = reduce_to_core(load_catalog_entry("suspended-69").germ);
  MultiGerm direct = load_catalog_entry("bigerm-69").germ;
  ASSERT_EQ(core.n(), 2u);
  ASSERT_EQ(core.branch_count(), direct.branch_count());
  for (std::size_t j = 0; j < core.branch_count(); ++j)
    EXPECT_EQ(core.branch(j).components, direct.branch(j).components) << j;
}

TEST(ReduceToCore, EqualDimensionsAreUnchanged) {
  MultiGerm f = load_catalog_entry("ex31-n2").germ;
  EXPECT_EQ(reduce_to_core(f), f);
}

TEST(ReduceToCore, RejectsGermNotInNormalForm) {
  MultiGerm f = germ("n = 2; p = 1; target (X); branch a(x, u) = (x^2 + u^2);");
  EXPECT_NO_THROW(reduce_to_core(f));
  MultiGerm g = germ("n = 3; p = 2; branch a(x, y, u) = (x^2, x^3 + u^2);");
  EXPECT_THROW(reduce_to_core(g), HypothesisError);
}

TEST(ReduceToCore, CoreHasFiniteDelta) {
  MultiGerm f = load_catalog_entry("suspended-69").germ;
  EXPECT_THROW(GermAlgebra{f}, CapReachedError);
  EXPECT_EQ(GermAlgebra(reduce_to_core(f)).delta(), GermAlgebra(load_catalog_entry("bigerm-69").germ).delta());
}

TEST(BuildUnfolding, FoldLineGetsStableUnfolding) {
  MultiGerm f = load_catalog_entry("fold-line").germ;
  UnfoldingSpec u = build_unfolding(f, 4);
  EXPECT_NO_THROW(check_unfolding(f, u));
  EXPECT_TRUE(classify_stable(GermAlgebra(u.F)).stable);
  EXPECT_EQ(u.parameter_index, f.p());
}

TEST(BuildUnfolding, OddCuspGetsStableUnfolding) {
  MultiGerm f = load_catalog_entry("odd-cusp-k1").germ;
  UnfoldingSpec u = build_unfolding(f, 4);
  EXPECT_NO_THROW(check_unfolding(f, u));
  EXPECT_TRUE(classify_stable(GermAlgebra(u.F)).stable);
}

TEST(BuildUnfolding, CatalogUnfoldingsAreConsistent) {
  for (const auto& name : all_entries()) {
    GermDocument d = load_catalog_entry(name);
    if (!d.unfolding) continue;
    UnfoldingSpec u = d.unfolding_spec();
    if (d.germ.n() + 1 == u.F.n()) EXPECT_NO_THROW(check_unfolding(d.germ, u)) << name;
    EXPECT_TRUE(classify_stable(GermAlgebra(u.F)).stable) << name;
  }
}

TEST(BuildUnfolding, WrongSliceIsRejected) {
  MultiGerm f = germ("n = 1; p = 2; branch a(y) = (y^2, 0);");
  MultiGerm g = germ("n = 1; p = 2; branch a(y) = (y^2, y^3);");
  UnfoldingSpec u = build_unfolding(f, 4);
  EXPECT_THROW(check_unfolding(g, u), InputError);
}
