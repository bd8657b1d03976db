#pragma once

#include <vector>

#include "byitfl/lcc.hpp"
#include "byitfl/rs.hpp"

namespace byitfl {

// V(z) = prod_{l in [m]} (z - beta_l).  Contributions built as V(z)*rho(z)
// vanish at every data point by construction, so a contributor can only
// randomize the non-secret degrees of freedom: each party derives its
// contribution share locally as V(alpha_j) * rho(alpha_j) from a dealt
// sharing of rho alone.
FieldPoly vanish_poly(const EvalDomain& domain);

// Random polynomial of degree <= target_degree vanishing at beta_1..beta_m;
// requires target_degree >= m.
FieldPoly sample_vanishing_poly(int target_degree, const EvalDomain& domain,
                                Rng& rng);

// Per-party evaluations of a contribution polynomial.
std::vector<PackedShare> zero_contribution_shares(const FieldPoly& contribution,
                                                  const EvalDomain& domain,
                                                  int degree_bound,
                                                  const std::string& tag);

// New share = old share + sum of all contributions' shares for this owner.
PackedShare rerandomize_share(const PackedShare& mine,
                              const std::vector<PackedShare>& contributions);

// --- Resharing-based conversion -------------------------------------------
//
// Input: each live party holds one evaluation w(alpha_i) of a polynomial w
// with deg w <= W, and sub-shares that value as a replicated scalar.  The
// output is a fresh degree-(m+t-1) replicated-scalar sharing of
// sum_{l in [m]} w(beta_l), obtained by a public linear map over the
// sub-sharings.  Wrong claimed values (Byzantine sub-dealers) are located
// through opened syndromes, which are identically zero in honest runs.

struct ConversionPlan {
  std::vector<int> base;    // W+1 reference parties (ascending index)
  std::vector<int> extras;  // remaining live parties, one syndrome each
};

ConversionPlan make_conversion_plan(const std::vector<int>& live_sorted, int w_degree);

// Coefficients of the syndrome functional for extra party e:
// s_e = x_e - sum_{j in base} L_j(alpha_e) * x_j.  Returned aligned with
// plan.base, with the trailing +1 coefficient for x_e implied.
std::vector<FieldElement> syndrome_base_coeffs(const EvalDomain& domain,
                                               const ConversionPlan& plan,
                                               int extra_party);

// Identify sub-dealers whose claimed value disagrees with the unique
// degree-<=W polynomial near the claims.  syndrome_values aligned with
// plan.extras.  Requires |live| >= W + 2b + 1.
std::vector<int> locate_claim_errors(const EvalDomain& domain,
                                     const ConversionPlan& plan,
                                     const std::vector<FieldElement>& syndrome_values,
                                     int w_degree, int b_max);

// Output-map coefficients gamma_i over the chosen reference set `nodes`
// (party indices, |nodes| = W+1): gamma_i = sum_{l in [m]} L_i(beta_l).
std::vector<FieldElement> conversion_coeffs(const EvalDomain& domain,
                                            const std::vector<int>& nodes);

}  // namespace byitfl
