#include <doctest.h>

#include <map>

#include "byitfl/rerandom.hpp"

using namespace byitfl;

namespace {
Field f(1009);
}

TEST_CASE("vanish polynomial has exactly the data points as roots") {
  EvalDomain dom = EvalDomain::make(f, 6, 2, 1);
  FieldPoly v = vanish_poly(dom);
  CHECK(v.degree() == 2);
  for (int l = 0; l < 2; ++l) CHECK(v.eval(dom.betas[l]).is_zero());
  CHECK_FALSE(v.eval(dom.betas[2]).is_zero());  // mask point is not a root
  CHECK_FALSE(v.eval(dom.alpha(1)).is_zero());
}

TEST_CASE("sampled contributions vanish at every data point") {
  EvalDomain dom = EvalDomain::make(f, 6, 2, 2);
  Rng rng(4);
  for (int target = 3; target <= 8; ++target) {
    FieldPoly c = sample_vanishing_poly(target, dom, rng);
    CHECK(c.degree() <= target);
    CHECK(c.degree() >= 2);  // V divides it
    for (int l = 0; l < 2; ++l) CHECK(c.eval(dom.betas[l]).is_zero());
  }
}

TEST_CASE("re-randomization moves shares but never the data evaluations") {
  EvalDomain dom = EvalDomain::make(f, 8, 2, 1);
  Rng rng(5);
  std::vector<FieldElement> v = {f.from_int(31), f.from_int(77)};
  SecretBundle b = SecretBundle::from_vector(v, dom, rng);
  auto shares = lcc_encode(b, dom, "x");
  int deg = dom.pack_degree();
  FieldPoly contrib = sample_vanishing_poly(deg, dom, rng);
  auto cshares = zero_contribution_shares(contrib, dom, deg, "z");
  std::vector<PackedShare> fresh;
  for (std::size_t i = 0; i < shares.size(); ++i)
    fresh.push_back(rerandomize_share(shares[i], {cshares[i]}));
  FieldPoly before = decode_coordinate(shares, dom, 0);
  FieldPoly after = decode_coordinate(fresh, dom, 0);
  CHECK_FALSE(before == after);
  CHECK(data_evaluations(before, dom) == data_evaluations(after, dom));
}

TEST_CASE("conversion plan splits live parties into base and syndromes") {
  EvalDomain dom = EvalDomain::make(f, 9, 1, 2);
  std::vector<int> live = {1, 2, 4, 5, 6, 8, 9};
  ConversionPlan plan = make_conversion_plan(live, 3);
  CHECK(plan.base == std::vector<int>{1, 2, 4, 5});
  CHECK(plan.extras == std::vector<int>{6, 8, 9});
}

TEST_CASE("honest syndromes are identically zero; a wrong claim is located") {
  EvalDomain dom = EvalDomain::make(f, 9, 1, 2);
  Rng rng(6);
  int W = 3, b_max = 1;
  std::vector<FieldElement> wc;
  for (int i = 0; i <= W; ++i) wc.push_back(rng.uniform(f));
  FieldPoly w(wc);
  std::vector<int> live = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  ConversionPlan plan = make_conversion_plan(live, W);
  std::map<int, FieldElement> claim;
  for (int i : live) claim.emplace(i, w.eval(dom.alpha(i)));

  auto syndromes = [&] {
    std::vector<FieldElement> out;
    for (int e : plan.extras) {
      auto coeffs = syndrome_base_coeffs(dom, plan, e);
      // coeffs already carry the minus sign of -L_j(alpha_e)
      FieldElement s = claim.at(e);
      for (std::size_t j = 0; j < plan.base.size(); ++j)
        s += coeffs[j] * claim.at(plan.base[j]);
      out.push_back(s);
    }
    return out;
  };

  for (const FieldElement& s : syndromes()) CHECK(s.is_zero());
  CHECK(locate_claim_errors(dom, plan, syndromes(), W, b_max).empty());

  SUBCASE("corrupted extra claim") {
    claim.at(7) += f.one();
    auto bad = locate_claim_errors(dom, plan, syndromes(), W, b_max);
    CHECK(bad == std::vector<int>{7});
  }
  SUBCASE("corrupted base claim") {
    claim.at(2) += f.from_int(5);
    auto bad = locate_claim_errors(dom, plan, syndromes(), W, b_max);
    CHECK(bad == std::vector<int>{2});
  }
}

TEST_CASE("conversion coefficients recombine to the data-point sum") {
  for (int m : {1, 2, 3}) {
    EvalDomain dom = EvalDomain::make(f, 10, m, 1);
    Rng rng(100 + m);
    int W = 4;
    std::vector<FieldElement> wc;
    for (int i = 0; i <= W; ++i) wc.push_back(rng.uniform(f));
    FieldPoly w(wc);
    // any W+1 distinct parties work as the reference set
    std::vector<int> nodes = {2, 3, 5, 7, 10};
    auto gamma = conversion_coeffs(dom, nodes);
    FieldElement got = f.zero();
    for (std::size_t i = 0; i < nodes.size(); ++i)
      got += gamma[i] * w.eval(dom.alpha(nodes[i]));
    FieldElement expect = f.zero();
    for (int l = 0; l < m; ++l) expect += w.eval(dom.betas[l]);
    CHECK(got == expect);
  }
}
