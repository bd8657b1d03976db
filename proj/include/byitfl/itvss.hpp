#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "byitfl/lcc.hpp"

namespace byitfl {

// Symmetric bivariate polynomial over F_P, degree <= deg in each variable.
class BivarPoly {
 public:
  BivarPoly() = default;
  BivarPoly(int deg, const Field& f);

  int deg() const { return deg_; }
  FieldElement& at(int a, int b) { return c_[a][b]; }
  const FieldElement& at(int a, int b) const { return c_[a][b]; }

  FieldElement eval(const FieldElement& x, const FieldElement& y) const;
  // S(x0, y) as a polynomial in y.
  FieldPoly row_at(const FieldElement& x0) const;
  // S(x, y0) as a polynomial in x.
  FieldPoly col_at(const FieldElement& y0) const;

 private:
  int deg_ = -1;
  std::vector<std::vector<FieldElement>> c_;
};

// Symmetric S with S(x, 0) = u(x) and all remaining degrees of freedom
// uniform.  The anchor 0 is reserved by EvalDomain (never an alpha/beta).
BivarPoly sample_symmetric_embedding(const FieldPoly& u, int deg,
                                     const Field& f, Rng& rng);

// What one receiver holds after a dealing: per coordinate, its row
// S_c(alpha_i, y) and column S_c(x, alpha_i).  For an honest dealer the two
// coincide (S is symmetric); they are carried separately so asymmetric
// corruption is detectable.
struct BivariateShare {
  int dealer = 0;
  int degree = 0;  // declared per-variable bound
  std::vector<FieldPoly> rows;
  std::vector<FieldPoly> cols;

  // The induced LCC share value of coordinate c: S_c(alpha_i, 0).
  FieldElement induced(std::size_t c, const Field& f) const;
  std::size_t coords() const { return rows.size(); }

  bool degree_ok() const;

  void serialize(ByteWriter& w) const;
  static BivariateShare deserialize(ByteReader& r, const Field& f);
};

// Dealer-side state: the sampled bivariates, one per coordinate.
struct VssDealing {
  int dealer = 0;
  int degree = 0;
  std::vector<BivarPoly> polys;

  BivariateShare share_for(const FieldElement& alpha_j) const;
  FieldElement cell(std::size_t c, const FieldElement& x,
                    const FieldElement& y) const;
};

// Deal the coordinate polynomials `embedded` (each of degree <= degree).
VssDealing vss_deal(int dealer, const std::vector<FieldPoly>& embedded,
                    int degree, const Field& f, Rng& rng);

// Pairwise cross-check value i sends to j: per coordinate,
// (row_i(alpha_j), col_i(alpha_j)).
struct VssCheckpoint {
  std::vector<std::pair<FieldElement, FieldElement>> vals;

  void serialize(ByteWriter& w) const;
  static VssCheckpoint deserialize(ByteReader& r, const Field& f);
};

VssCheckpoint make_checkpoint(const BivariateShare& mine,
                              const FieldElement& alpha_j);

// peer == 0 accuses the dealer directly (missing or malformed dealing).
struct Complaint {
  int accuser = 0;
  int peer = 0;
};

// Complaints derived from one party's received checkpoints.  A live peer
// with no checkpoint is complained against; a missing or over-degree
// dealing yields a dealer-level complaint.
std::vector<Complaint> vss_verify_round(
    int me, const std::optional<BivariateShare>& mine,
    const std::map<int, VssCheckpoint>& received, const std::set<int>& peers,
    const EvalDomain& domain);

// Dealer's broadcast answer: true cell values for point complaints, full
// shares for dealer-level complaints and escalations.
struct VssResponse {
  std::map<std::pair<int, int>, std::vector<std::pair<FieldElement, FieldElement>>>
      cells;  // keyed (accuser, peer): (S_c(a_acc, a_peer), S_c(a_peer, a_acc))
  std::map<int, BivariateShare> full_shares;
};

VssResponse vss_respond(const VssDealing& dealing,
                        const std::vector<Complaint>& complaints,
                        const EvalDomain& domain);

// Does the broadcast cell value for (accuser=other side) match my own
// polynomials?  Used by complaint endpoints to decide escalation.
bool cell_matches_mine(const BivariateShare& mine, int me, int other,
                       const std::vector<std::pair<FieldElement, FieldElement>>&
                           cell_for_pair,
                       bool i_am_accuser, const EvalDomain& domain);

// Cross-consistency of a broadcast full share for party x against my own
// share: x's rows/cols evaluated at my alpha must equal my cols/rows at
// alpha_x.
bool share_consistent_with_mine(const BivariateShare& broadcast, int x,
                                const BivariateShare& mine, int me,
                                const EvalDomain& domain);

struct VssVerdict {
  bool accepted = true;
  std::string reason;
};

// Deterministic adjudication from broadcast data only.  confirm_counts maps
// each broadcast-share target to the number of parties confirming
// cross-consistency; threshold is m + t + b.
VssVerdict vss_resolve(const std::vector<Complaint>& complaints,
                       const std::optional<VssResponse>& response,
                       const std::set<int>& escalated,
                       const std::map<int, int>& confirm_counts,
                       int confirm_threshold, int expected_degree,
                       std::size_t expected_coords);

}  // namespace byitfl
