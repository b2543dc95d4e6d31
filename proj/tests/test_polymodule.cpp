#include <gtest/gtest.h>

#include <random>

#include "liftvf/groebner.hpp"
#include "liftvf/jet_space.hpp"
#include "liftvf/parse.hpp"
#include "oracle.hpp"

using namespace liftvf;

namespace {

const std::vector<std::string> kXY{"x", "y"};

Polynomial P(const std::string& s, const std::vector<std::string>& names = kXY) { return parse_polynomial(s, names); }

FreeModuleElement V(std::initializer_list<std::string> comps, const std::vector<std::string>& names = kXY) {
  std::vector<Polynomial> ps;
  for (const auto& c : comps) ps.push_back(P(c, names));
  return FreeModuleElement(ps);
}

FreeModuleElement S(const std::string& s, const std::vector<std::string>& names = kXY) { return V({s}, names); }

}  // namespace

TEST(Groebner, MaximalIdeal) {
  auto gb = groebner_basis({S("x"), S("y")});
  EXPECT_EQ(gb.normal_form(S("1")), S("1"));
  EXPECT_TRUE(gb.normal_form(S("x")).is_zero());
  EXPECT_TRUE(gb.contains(S("x^3*y + 5*y")));
}

TEST(Groebner, PrincipalIdeal) {
  auto gb = groebner_basis({S("x^2")});
  ASSERT_EQ(gb.size(), 1u);
  EXPECT_EQ(gb.generators()[0], S("x^2"));
  EXPECT_TRUE(gb.contains(S("x^3")));
  EXPECT_FALSE(gb.contains(S("x")));
}

TEST(Groebner, PrincipalMembershipMatchesHandReduction) {
  // Z*(3*X + Z) lies in (Z); X*Z + Y does not, with remainder Y.
  const std::vector<std::string> t{"X", "Z"};
  auto gb = groebner_basis({S("Z", t)});
  EXPECT_TRUE(gb.contains(S("Z*(3*X + Z)", t)));
  const std::vector<std::string> u{"X", "Y", "Z"};
  auto gb3 = groebner_basis({S("Z", u)});
  EXPECT_EQ(gb3.normal_form(S("X*Z + Y", u)), S("Y", u));
}

TEST(Groebner, EverySPairReducesToZero) {
  auto gens = std::vector<FreeModuleElement>{S("x^3 - 2*x*y"), S("x^2*y - 2*y^2 + x")};
  auto gb = groebner_basis(gens);
  auto basis = gb.generators();
  for (const auto& g : gens) EXPECT_TRUE(gb.contains(g));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      auto a = to_module_vector(basis[i], gb.order());
      auto b = to_module_vector(basis[j], gb.order());
      Monomial l = a.front().term.mono.lcm(b.front().term.mono);
      Polynomial sa = Polynomial::monomial(a.front().term.mono.quotient_of(l), 1 / a.front().coef);
      Polynomial sb = Polynomial::monomial(b.front().term.mono.quotient_of(l), 1 / b.front().coef);
      EXPECT_TRUE(gb.contains(sa * basis[i] - sb * basis[j]));
    }
}

TEST(Groebner, ModuleMembershipAgreesWithJetElimination) {
  // Submodule of K[x,y]^2 generated by tf-columns of the cusp (x, y^3 + x*y) plus the ideal part.
  std::vector<FreeModuleElement> gens{V({"1", "y"}), V({"0", "3*y^2 + x"}), V({"x", "0"}), V({"0", "x"})};
  auto gb = groebner_basis(gens);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coef(-3, 3);
  const unsigned order = 6;
  JetAmbient amb{2, 2, order};
  // Row space of all monomial multiples up to the order, as the independent reference.
  std::vector<FreeModuleElement> multiples;
  for (const auto& g : gens)
    for (const auto& m : monomials_below(2, order)) multiples.push_back(Polynomial::monomial(m) * g);
  auto span = jet_span(multiples, amb);
  for (int trial = 0; trial < 30; ++trial) {
    FreeModuleElement v(2, 2);
    for (const auto& g : gens) {
      Polynomial c = Polynomial::constant(2, coef(rng)) + Rational(coef(rng)) * P("x") + Rational(coef(rng)) * P("y");
      v = v + c * g;
    }
    if (trial % 3 == 0) v = v + V({"0", "1 + y^2"});
    bool member = gb.contains(v);
    EXPECT_EQ(member, trial % 3 != 0);
    EXPECT_EQ(span.contains(v.truncate(order)), member);
  }
}

TEST(Groebner, TruncatedLocalColength) {
  // (y^2, y^3) in one variable: colength 2.
  const std::vector<std::string> y{"y"};
  auto sb = truncated_standard_basis({S("y^2", y), S("y^3", y)}, 1, 1, 5);
  EXPECT_EQ(sb.colength(), 2u);
  // A unit-times-generator case where the global order would fail: (x + x^2) is (x) locally.
  auto local = truncated_standard_basis({S("x + x^2", {"x"})}, 1, 1, 8);
  EXPECT_EQ(local.colength(), 1u);
  auto ideal = truncated_standard_basis({S("x"), S("x*y + y^5 + y^7")}, 1, 2, 12);
  EXPECT_EQ(ideal.colength(), 5u);
}

TEST(Groebner, TruncatedColengthMatchesDenseOracle) {
  std::vector<FreeModuleElement> gens{S("x^2 + y^3"), S("x*y + y^4")};
  for (unsigned T = 2; T <= 9; ++T) {
    auto sb = truncated_standard_basis(gens, 1, 2, T);
    EXPECT_EQ(sb.colength(), oracle::ideal_colength(gens, T)) << "T=" << T;
  }
}

TEST(Syzygy, Koszul) {
  auto syz = syzygy_basis(std::vector<Polynomial>{P("x"), P("y")});
  ASSERT_FALSE(syz.empty());
  auto gb = groebner_basis(syz);
  EXPECT_TRUE(gb.contains(V({"y", "-x"})));
  for (const auto& s : syz) EXPECT_TRUE((s[0] * P("x") + s[1] * P("y")).is_zero());
}

TEST(Syzygy, PowersOfOneVariable) {
  const std::vector<std::string> x{"x"};
  auto syz = syzygy_basis(std::vector<Polynomial>{P("x^2", x), P("x^3", x)});
  auto gb = groebner_basis(syz);
  EXPECT_TRUE(gb.contains(V({"x", "-1"}, x)));
}

TEST(Syzygy, DivisibilityConditionOfTheFoldUnfolding) {
  // Parameter components (X, U, 0, 0) of the squaring-map intersection, together with X itself.
  const std::vector<std::string> t{"X", "Y", "U"};
  std::vector<Polynomial> gens{P("X", t), P("U", t), P("0", t), P("0", t), P("X", t)};
  auto syz = syzygy_basis(gens);
  for (const auto& s : syz) {
    Polynomial sum(3);
    for (std::size_t i = 0; i < gens.size(); ++i) sum += s[i] * gens[i];
    EXPECT_TRUE(sum.is_zero());
    // The coefficient of the second generator is always divisible by X.
    auto gbx = groebner_basis({V({"X"}, t)});
    EXPECT_TRUE(gbx.contains(FreeModuleElement({s[1]})));
  }
}

TEST(Syzygy, ExactIdentityOnRandomInputs) {
  std::vector<Polynomial> gens{P("x^2*y - y^3"), P("x*y^2 + x"), P("x^3 - y")};
  for (const auto& s : syzygy_basis(gens)) {
    Polynomial sum(2);
    for (std::size_t i = 0; i < gens.size(); ++i) sum += s[i] * gens[i];
    EXPECT_TRUE(sum.is_zero());
  }
}

TEST(JetSpan, DuplicateVectors) {
  auto s = jet_span({V({"x", "0"}), V({"x", "0"})}, {2, 2, 3});
  EXPECT_EQ(s.dimension(), 1u);
}

TEST(JetSpan, PowersOfY) {
  const std::vector<std::string> y{"y"};
  for (unsigned delta = 1; delta <= 5; ++delta) {
    std::vector<FreeModuleElement> vs;
    for (unsigned k = 0; k < delta + 3; ++k) vs.push_back(S("y^" + std::to_string(k), y));
    EXPECT_EQ(jet_span(vs, {1, 1, delta}).dimension(), delta);
  }
}

TEST(JetSpan, CuspTangentSpaceCount) {
  // theta(f) / (tf(theta) + I theta(f)) for f = (y^2, y^3) has dimension (p-n)*delta + gamma = 2*... = 3.
  const std::vector<std::string> y{"y"};
  const unsigned order = 6;
  JetAmbient amb{2, 1, order};
  std::vector<FreeModuleElement> tangent;
  for (unsigned k = 0; k < order; ++k) {
    Polynomial s = P("y^" + std::to_string(k), y);
    tangent.push_back(V({"2*y", "3*y^2"}, y).truncate(order));
    tangent.back() = s * tangent.back();
    tangent.push_back(s * V({"y^2", "0"}, y));
    tangent.push_back(s * V({"y^3", "0"}, y));
    tangent.push_back(s * V({"0", "y^2"}, y));
    tangent.push_back(s * V({"0", "y^3"}, y));
  }
  auto span = jet_span(tangent, amb);
  EXPECT_EQ(2 * order - span.dimension(), 3u);
  EXPECT_EQ(2 * order - oracle::dense_rank(tangent, amb), 3u);
}

TEST(JetSpan, InvariantUnderPermutationAndScaling) {
  std::vector<FreeModuleElement> vs{V({"x + y", "x^2"}), V({"y", "x*y"}), V({"x", "x^2 - x*y"}), V({"1", "y"})};
  JetAmbient amb{2, 2, 3};
  auto base = jet_span(vs, amb);
  std::reverse(vs.begin(), vs.end());
  vs[0] = Rational(-7, 3) * vs[0];
  auto other = jet_span(vs, amb);
  EXPECT_EQ(base.dimension(), other.dimension());
  EXPECT_TRUE(base == other);
}

TEST(SubspaceOps, IntersectionWithSelf) {
  auto a = jet_span({V({"x", "y"}), V({"y^2", "0"})}, {2, 2, 3});
  EXPECT_TRUE(intersection(a, a) == a);
}

TEST(SubspaceOps, DimensionFormulaOnRandomSubspaces) {
  std::mt19937 rng(19);
  std::uniform_int_distribution<int> coef(-2, 2);
  JetAmbient amb{1, 2, 4};
  auto monos = monomials_below(2, 4);
  for (int trial = 0; trial < 25; ++trial) {
    auto rnd = [&](int count) {
      std::vector<FreeModuleElement> vs;
      for (int k = 0; k < count; ++k) {
        std::vector<Term> ts;
        for (const auto& m : monos)
          if (int c = coef(rng); c != 0 && coef(rng) > 0) ts.push_back({m, c});
        vs.push_back(FreeModuleElement({Polynomial::from_terms(2, ts)}));
      }
      return jet_span(vs, amb);
    };
    auto a = rnd(5), b = rnd(6);
    EXPECT_EQ(sum(a, b).dimension(), a.dimension() + b.dimension() - intersection(a, b).dimension());
    EXPECT_EQ(quotient_dimension(a, b), a.dimension() - intersection(a, b).dimension());
    for (const auto& v : intersection(a, b).basis_elements()) {
      EXPECT_TRUE(a.contains(v));
      EXPECT_TRUE(b.contains(v));
    }
  }
}

TEST(SubspaceOps, AmbientMismatchThrows) {
  auto a = jet_span({S("x")}, {1, 2, 3});
  auto b = jet_span({S("x")}, {1, 2, 4});
  EXPECT_THROW(sum(a, b), std::invalid_argument);
}

TEST(SubspaceOps, FoldFirstLevelQuotientIsSpannedByXE2) {
  // f = (x, y^2), I = (x, y^2): I*theta(f) modulo (tf(theta) ∩ I*theta(f)) + I^2*theta(f) is spanned by x*e_2.
  const unsigned order = 6;
  JetAmbient amb{2, 2, order};
  std::vector<Polynomial> f{P("x"), P("y^2")};
  std::vector<FreeModuleElement> tangent, level1, level2;
  for (const auto& m : monomials_below(2, order)) {
    Polynomial s = Polynomial::monomial(m);
    tangent.push_back((s * V({"1", "0"})).truncate(order));
    tangent.push_back((s * V({"0", "2*y"})).truncate(order));
    for (std::size_t q = 0; q < 2; ++q) {
      for (const auto& fa : f) level1.push_back((s * fa * FreeModuleElement::basis_vector(2, 2, q, P("1"))).truncate(order));
      for (const auto& fa : f)
        for (const auto& fb : f)
          level2.push_back((s * fa * fb * FreeModuleElement::basis_vector(2, 2, q, P("1"))).truncate(order));
    }
  }
  auto t = jet_span(tangent, amb), a1 = jet_span(level1, amb), a2 = jet_span(level2, amb);
  auto denominator = sum(intersection(t, a1), a2);
  EXPECT_EQ(quotient_dimension(a1, denominator), 1u);
  // Modular law: the quotient equals dim(T + A1) - dim(T + A2).
  EXPECT_FALSE(denominator.contains(V({"0", "x"})));
  auto cat = [](std::vector<FreeModuleElement> a, const std::vector<FreeModuleElement>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  EXPECT_EQ(oracle::dense_rank(cat(tangent, level1), amb), oracle::dense_rank(cat(tangent, level2), amb) + 1);
}

TEST(LinearSystem, SolvesWithFreeVariablesZero) {
  // x0 + x1 = 2, x1 + x2 = 3: pivots x0, x1; x2 free.
  LinearSystem sys(3, 1);
  sys.add_equation({{0, 1}, {1, 1}, {3, 2}});
  sys.add_equation({{1, 1}, {2, 1}, {3, 3}});
  ASSERT_TRUE(sys.consistent(0));
  auto x = sys.solution(0);
  EXPECT_EQ(x[0], -1);
  EXPECT_EQ(x[1], 3);
  EXPECT_EQ(x[2], 0);
  EXPECT_EQ(sys.add_equation({{0, 1}, {2, -1}, {3, 5}}), LinearSystem::Status::Inconsistent);
  EXPECT_FALSE(sys.consistent(0));
}

TEST(Nullspace, SimpleRelation) {
  std::vector<SparseRow> vs{{{0, 1}, {1, 2}}, {{0, 2}, {1, 4}}, {{1, 1}}};
  auto ns = nullspace(vs, 2);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(ns[0][0].first, 0u);
  EXPECT_EQ(ns[0][0].second, 1);
  EXPECT_EQ(ns[0][1].second, Rational(-1, 2));
}
