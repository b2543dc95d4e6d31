// Lift of y -> (y^2, 0), which is not stable, recovered from the stable unfolding (x, y) -> (x, y^2, x*y).

#include <iostream>

#include "liftvf/document.hpp"
#include "liftvf/lift_engine.hpp"

int main() {
  using namespace liftvf;
  GermDocument doc = parse_document(R"(
    germ double-line {
      n = 1; p = 2;
      target (Y, U);
      branch a(y) = (y^2, 0);
      unfolding {
        target (X, Y, U);
        parameter x -> X;
        branch a(x, y) = (x, y^2, x*y);
      }
    }
  )");
  LiftModule lift = restrict_from_unfolding(doc.germ, doc.unfolding_spec(), std::nullopt, {});
  std::cout << lift.generators.size() << " generators, certified to jet order " << lift.certification_order << "\n";
  for (const auto& gen : lift.generators) std::cout << "  " << gen.eta.render(doc.germ.target_vars()) << "\n";

  UnfoldingSpec found = build_unfolding(doc.germ, 4);
  std::cout << "unfolding found by search:";
  for (const auto& c : found.F.branch(0).components) std::cout << " " << c.render(found.F.branch(0).source_vars);
  std::cout << "\n";
}
