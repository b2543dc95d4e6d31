#include <gtest/gtest.h>

#include "liftvf/cli.hpp"
#include "oracle.hpp"

using namespace liftvf;

namespace {

MultiGerm germ(const std::string& body) { return parse_document("germ t {\n" + body + "\n}").germ; }

MultiGerm entry(const std::string& name) { return load_catalog_entry(name).germ; }

LevelValue level(unsigned v) { return {LevelValue::Kind::Finite, v}; }
const LevelValue kMinusInf{LevelValue::Kind::MinusInfinity, 0};
const LevelValue kCapped{LevelValue::Kind::InfinityUpToCap, 0};

// Germs with finite-dimensional local algebras.
std::vector<std::string> finite_entries() {
  std::vector<std::string> out;
  for (const auto& name : catalog_names())
    if (entry(name).n() <= entry(name).p()) out.push_back(name);
  return out;
}

KSReport scan(const MultiGerm& f, unsigned cap = 4, ComputationMode mode = ComputationMode::Both) {
  KSConfig cfg;
  cfg.cap = cap;
  cfg.mode = mode;
  cfg.scan_all = true;
  return locate_i1_i2(GermAlgebra(f), cfg);
}

std::size_t generators(const MultiGerm& f) {
  GermAlgebra g(f);
  KSConfig cfg;
  KSReport rep = locate_i1_i2(g, cfg);
  return min_generators(g, rep, cfg);
}

}  // namespace

TEST(TruncationOrder, IdentityGerm) {
  GermAlgebra g(germ("n = 2; p = 2; branch a(x, y) = (x, y);"));
  EXPECT_EQ(g.ell(), 1u);
  for (unsigned i = 0; i < 4; ++i) EXPECT_EQ(truncation_order(g, i), i + 3);
}

TEST(TruncationOrder, WhitneyUmbrellaAtLevelOne) {
  EXPECT_EQ(truncation_order(GermAlgebra(entry("whitney-psi2")), 1), 7u);
}

TEST(LevelMaps, FoldAtLevelZero) {
  GermAlgebra g(entry("fold"));
  KSMapModel m = ks_matrix(g, 0);
  auto o = oracle::ks_level(g.germ(), 0, truncation_order(g, 0) + 1);
  EXPECT_TRUE(m.surjective());
  EXPECT_EQ(m.cokernel_dimension(), 0u);
  EXPECT_EQ(m.kernel_dimension(), o.kernel);
  EXPECT_EQ(o.surjective, m.surjective());
  // Level 0 of the fold has the constant field along the fold line in its kernel.
  EXPECT_EQ(m.kernel_dimension(), 1u);
}

TEST(LevelMaps, EmbeddingIsSurjectiveNotInjective) {
  KSMapModel m = ks_matrix(GermAlgebra(entry("embedding-e")), 0);
  EXPECT_TRUE(m.surjective());
  EXPECT_FALSE(m.injective());
}

TEST(LevelMaps, CoordinateAxesAreBijective) {
  KSMapModel m = ks_matrix(GermAlgebra(entry("axes-e0")), 0);
  EXPECT_TRUE(m.surjective());
  EXPECT_TRUE(m.injective());
}

TEST(LevelMaps, MatchDenseOracle) {
  for (const auto& name : finite_entries()) {
    const MultiGerm f = entry(name);
    if (f.n() > 2 || f.p() > 3) continue;
    GermAlgebra g(f);
    for (unsigned i = 0; i <= 2; ++i) {
      KSMapModel m = ks_matrix(g, i);
      auto o = oracle::ks_level(f, i, truncation_order(g, i) + 1);
      EXPECT_EQ(m.kernel_dimension(), o.kernel) << name << " i = " << i;
      EXPECT_EQ(m.surjective(), o.surjective) << name << " i = " << i;
    }
  }
}

TEST(Placement, IsolatedStableGermsSitAtZero) {
  for (const auto* name : {"whitney-psi2", "whitney-psi3", "phi-2", "phi-3", "multistable", "ex31-n2", "ex31-n3"}) {
    KSReport rep = scan(entry(name));
    EXPECT_EQ(rep.i1, level(0)) << name;
    EXPECT_EQ(rep.i2, level(0)) << name;
  }
}

TEST(Placement, ExampleGermsSitAtOne) {
  for (const auto* name : {"cusp-pair", "ex35-quartic", "ex36"}) {
    KSReport rep = scan(entry(name));
    EXPECT_EQ(rep.i1, level(1)) << name;
    EXPECT_EQ(rep.i2, level(1)) << name;
  }
}

TEST(Placement, Embedding) {
  KSReport rep = scan(entry("embedding-e"));
  EXPECT_EQ(rep.i1, level(0));
  EXPECT_EQ(rep.i2, kMinusInf);
}

TEST(Placement, CoordinateAxes) {
  KSReport rep = scan(entry("axes-e0"));
  EXPECT_EQ(rep.i1, level(0));
  EXPECT_EQ(rep.i2, level(0));
}

TEST(Placement, LinesWithCuspNeverBecomesSurjective) {
  KSReport rep = scan(entry("lines-cusp"));
  EXPECT_EQ(rep.i1, kCapped);
  EXPECT_EQ(rep.i2, level(0));
}

TEST(Placement, NonStableFamilyHasNoInjectiveLevel) {
  KSReport rep = scan(entry("sk-plus-1"));
  EXPECT_EQ(rep.i1, kCapped);
  EXPECT_EQ(rep.i2, kMinusInf);
}

TEST(MinGenerators, SpecialFamilies) {
  EXPECT_EQ(generators(entry("ex31-n2")), 2u);
  EXPECT_EQ(generators(entry("ex31-n3")), 3u);
  EXPECT_EQ(generators(entry("phi-2")), 4u);
  EXPECT_EQ(generators(entry("phi-3")), 7u);
  EXPECT_EQ(generators(entry("whitney-psi2")), 4u);
  EXPECT_EQ(generators(entry("whitney-psi3")), 11u);
  EXPECT_EQ(generators(entry("multistable")), 2u);
  EXPECT_EQ(generators(entry("cusp-pair")), 2u);
}

TEST(MinGenerators, RiegerRuasGermInFormulaMode) {
  GermAlgebra g(entry("rieger-ruas"));
  KSConfig cfg;
  cfg.mode = ComputationMode::Formula;
  KSReport rep = locate_i1_i2(g, cfg);
  EXPECT_EQ(min_generators(g, rep, cfg), 17u);
}

TEST(MinGenerators, RejectedWhenLevelsDiffer) {
  GermAlgebra g(entry("embedding-e"));
  KSConfig cfg;
  KSReport rep = locate_i1_i2(g, cfg);
  EXPECT_THROW(min_generators(g, rep, cfg), HypothesisError);
  EXPECT_FALSE(rep.min_generators.has_value());
}

TEST(Stability, Classification) {
  auto psi = classify_stable(GermAlgebra(entry("whitney-psi2")));
  EXPECT_TRUE(psi.stable);
  EXPECT_TRUE(psi.isolated);
  auto e = classify_stable(GermAlgebra(entry("embedding-e")));
  EXPECT_TRUE(e.stable);
  EXPECT_FALSE(e.isolated);
  auto multi = classify_stable(GermAlgebra(entry("multistable")));
  EXPECT_TRUE(multi.stable);
  EXPECT_TRUE(multi.isolated);
  EXPECT_FALSE(classify_stable(GermAlgebra(entry("cusp-pair"))).stable);
}

TEST(Properties, SurjectivityPersistsAndInjectivityDescends) {
  for (const auto& name : finite_entries()) {
    KSReport rep = scan(entry(name), 3);
    for (std::size_t a = 0; a < rep.levels.size(); ++a)
      for (std::size_t b = a + 1; b < rep.levels.size(); ++b) {
        if (rep.levels[a].surjective) EXPECT_TRUE(rep.levels[b].surjective) << name;
        if (rep.levels[b].injective) EXPECT_TRUE(rep.levels[a].injective) << name;
      }
  }
}

TEST(Properties, FirstSurjectiveLevelIsAtLeastLastInjective) {
  for (const auto& name : finite_entries()) {
    KSReport rep = scan(entry(name), 3);
    if (rep.i1.finite() && rep.i2.finite()) EXPECT_GE(rep.i1.value, rep.i2.value) << name;
  }
}

TEST(Properties, LevelPatternAroundCommonValue) {
  for (const auto& name : finite_entries()) {
    KSReport rep = scan(entry(name), 3);
    if (!rep.i1.finite() || !(rep.i1 == rep.i2)) continue;
    const unsigned i = rep.i1.value;
    for (const auto& l : rep.levels) {
      if (l.i < i) {
        EXPECT_TRUE(l.injective && !l.surjective) << name << " level " << l.i;
      } else if (l.i > i) {
        EXPECT_TRUE(l.surjective && !l.injective) << name << " level " << l.i;
      } else {
        EXPECT_TRUE(l.surjective && l.injective) << name << " level " << l.i;
      }
    }
  }
}

TEST(Properties, FormulaKernelMatchesMatrix) {
  for (const auto& name : finite_entries()) {
    GermAlgebra g(entry(name));
    for (unsigned i = 1; i <= 3; ++i) {
      KSMapModel m = ks_matrix(g, i);
      if (!m.surjective()) continue;
      EXPECT_EQ(kernel_dimension_formula(g, i - 1, ComputationMode::BruteForce), Integer(static_cast<unsigned long>(m.kernel_dimension())))
          << name << " i = " << i;
    }
  }
}

TEST(Properties, FormulaModeReproducesBruteForceLevels) {
  for (const auto& name : finite_entries()) {
    KSReport a = scan(entry(name), 3, ComputationMode::Formula);
    KSReport b = scan(entry(name), 3, ComputationMode::BruteForce);
    EXPECT_EQ(a.i1, b.i1) << name;
    EXPECT_EQ(a.i2, b.i2) << name;
    ASSERT_EQ(a.levels.size(), b.levels.size()) << name;
    for (std::size_t k = 0; k < a.levels.size(); ++k) {
      EXPECT_EQ(a.levels[k].kernel_dimension, b.levels[k].kernel_dimension) << name << " level " << k;
      EXPECT_EQ(a.levels[k].surjective, b.levels[k].surjective) << name << " level " << k;
    }
  }
}

TEST(Properties, LevelZeroKernelTracksMatherCount) {
  for (const auto& name : finite_entries()) {
    const MultiGerm f = entry(name);
    GermAlgebra g(f);
    StabilityClass cls = classify_stable(g);
    if (!cls.stable) continue;
    auto h = higher_invariants(g, 0, ComputationMode::Both);
    const Integer rhs = (Integer(static_cast<unsigned long>(f.p())) - static_cast<unsigned long>(f.n())) * h.delta + h.gamma;
    EXPECT_EQ(rhs == static_cast<unsigned long>(f.p()), cls.isolated) << name;
  }
}

TEST(Consistency, InjectedFormulaFaultIsCaught) {
  GermAlgebra g(entry("ex36"));
  KSConfig cfg;
  cfg.inject_formula_fault = true;
  EXPECT_THROW(locate_i1_i2(g, cfg), ConsistencyError);
}

TEST(Consistency, FormulaModeSkipsMatricesAboveFirstSurjectiveLevel) {
  GermAlgebra g(entry("ex36"));
  KSConfig cfg;
  cfg.mode = ComputationMode::Formula;
  cfg.scan_all = true;
  cfg.cap = 3;
  KSReport rep = locate_i1_i2(g, cfg);
  ASSERT_EQ(rep.levels.size(), 4u);
  EXPECT_EQ(rep.levels[1].source, LevelSource::Both);
  EXPECT_EQ(rep.levels[2].source, LevelSource::Formula);
  EXPECT_EQ(rep.levels[3].source, LevelSource::Formula);
}
