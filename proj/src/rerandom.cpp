#include "byitfl/rerandom.hpp"

#include <algorithm>

namespace byitfl {

FieldPoly vanish_poly(const EvalDomain& domain) {
  const Field& f = *domain.field;
  FieldPoly v = FieldPoly::constant(f.one());
  for (int l = 0; l < domain.m; ++l) {
    FieldPoly factor(std::vector<FieldElement>{-domain.betas[l], f.one()});
    v = v * factor;
  }
  return v;
}

FieldPoly sample_vanishing_poly(int target_degree, const EvalDomain& domain,
                                Rng& rng) {
  if (target_degree < domain.m)
    throw DomainError("vanishing polynomial needs degree >= m");
  const Field& f = *domain.field;
  std::vector<FieldElement> rho(target_degree - domain.m + 1);
  for (auto& e : rho) e = rng.uniform(f);
  return vanish_poly(domain) * FieldPoly(std::move(rho));
}

std::vector<PackedShare> zero_contribution_shares(const FieldPoly& contribution,
                                                  const EvalDomain& domain,
                                                  int degree_bound,
                                                  const std::string& tag) {
  return shares_from_polys({contribution}, domain, degree_bound, tag);
}

PackedShare rerandomize_share(const PackedShare& mine,
                              const std::vector<PackedShare>& contributions) {
  PackedShare out = mine;
  for (const auto& c : contributions) {
    if (c.values.size() == 1 && out.values.size() > 1) {
      // scalar contribution applied to every coordinate slot
      for (auto& v : out.values) v += c.values[0];
    } else {
      if (c.values.size() != out.values.size())
        throw ShapeError("contribution shape mismatch");
      for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] += c.values[i];
    }
  }
  return out;
}

ConversionPlan make_conversion_plan(const std::vector<int>& live_sorted,
                                    int w_degree) {
  if (static_cast<int>(live_sorted.size()) < w_degree + 1)
    throw InsufficientRedundancy("conversion needs W+1 live parties");
  ConversionPlan plan;
  plan.base.assign(live_sorted.begin(), live_sorted.begin() + w_degree + 1);
  plan.extras.assign(live_sorted.begin() + w_degree + 1, live_sorted.end());
  return plan;
}

std::vector<FieldElement> syndrome_base_coeffs(const EvalDomain& domain,
                                               const ConversionPlan& plan,
                                               int extra_party) {
  std::vector<FieldElement> nodes;
  for (int j : plan.base) nodes.push_back(domain.alpha(j));
  std::vector<FieldElement> out;
  out.reserve(plan.base.size());
  for (std::size_t i = 0; i < plan.base.size(); ++i)
    out.push_back(-lagrange_coeff(nodes, i, domain.alpha(extra_party)));
  return out;
}

std::vector<int> locate_claim_errors(
    const EvalDomain& domain, const ConversionPlan& plan,
    const std::vector<FieldElement>& syndrome_values, int w_degree,
    int b_max) {
  bool all_zero = true;
  for (const auto& s : syndrome_values)
    if (!s.is_zero()) {
      all_zero = false;
      break;
    }
  if (all_zero) return {};
  // Virtual received word: zeros at the base positions, syndromes at the
  // extras.  It differs from a degree-<=W codeword exactly at the error
  // positions of the claimed values.
  const Field& f = *domain.field;
  NoisyCodeword cw;
  cw.degree_bound = w_degree;
  std::vector<int> order;
  for (int j : plan.base) {
    cw.entries.emplace_back(domain.alpha(j), f.zero());
    order.push_back(j);
  }
  for (std::size_t i = 0; i < plan.extras.size(); ++i) {
    cw.entries.emplace_back(domain.alpha(plan.extras[i]), syndrome_values[i]);
    order.push_back(plan.extras[i]);
  }
  RsResult res = rs_decode(cw, b_max);
  std::vector<int> bad;
  for (std::size_t pos : res.error_positions) bad.push_back(order[pos]);
  std::sort(bad.begin(), bad.end());
  return bad;
}

std::vector<FieldElement> conversion_coeffs(const EvalDomain& domain,
                                            const std::vector<int>& nodes) {
  std::vector<FieldElement> xs;
  for (int j : nodes) xs.push_back(domain.alpha(j));
  std::vector<FieldElement> out(nodes.size(), domain.field->zero());
  for (int l = 0; l < domain.m; ++l)
    for (std::size_t i = 0; i < nodes.size(); ++i)
      out[i] += lagrange_coeff(xs, i, domain.betas[l]);
  return out;
}

}  // namespace byitfl
