#include <doctest.h>

#include "byitfl/itvss.hpp"

using namespace byitfl;

namespace {

Field f(1009);

struct Setup {
  EvalDomain dom;
  std::vector<FieldPoly> embedded;
  VssDealing dealing;
  std::map<int, BivariateShare> held;  // party -> share

  Setup(int n, int m, int t, std::uint64_t seed, std::size_t coords = 2)
      : dom(EvalDomain::make(f, n, m, t)) {
    Rng rng(seed);
    for (std::size_t c = 0; c < coords; ++c) {
      std::vector<FieldElement> cs;
      for (int i = 0; i <= dom.pack_degree(); ++i) cs.push_back(rng.uniform(f));
      embedded.push_back(FieldPoly(cs));
    }
    dealing = vss_deal(1, embedded, dom.pack_degree(), f, rng);
    for (int j = 1; j <= n; ++j)
      held.emplace(j, dealing.share_for(dom.alpha(j)));
  }
};

}  // namespace

TEST_CASE("honest dealing: induced shares match the embedded polynomials") {
  Setup s(7, 2, 1, 5);
  for (int j = 1; j <= 7; ++j) {
    CHECK(s.held.at(j).degree_ok());
    for (std::size_t c = 0; c < 2; ++c)
      CHECK(s.held.at(j).induced(c, f) ==
            s.embedded[c].eval(s.dom.alpha(j)));
  }
}

TEST_CASE("honest dealing: symmetric rows/cols, no complaints, accepted") {
  Setup s(7, 2, 1, 6);
  std::set<int> peers;
  for (int j = 1; j <= 7; ++j) peers.insert(j);
  for (int me = 1; me <= 7; ++me) {
    std::map<int, VssCheckpoint> received;
    for (int other = 1; other <= 7; ++other) {
      if (other == me) continue;
      received.emplace(other,
                       make_checkpoint(s.held.at(other), s.dom.alpha(me)));
    }
    auto complaints =
        vss_verify_round(me, s.held.at(me), received, peers, s.dom);
    CHECK(complaints.empty());
  }
  std::map<int, int> confirms;
  VssVerdict v = vss_resolve({}, std::nullopt, {}, confirms,
                             /*threshold=*/4, s.dom.pack_degree(), 2);
  CHECK(v.accepted);
}

TEST_CASE("a tampered checkpoint draws a complaint and the dealer's cell "
          "answer sides with the honest holder") {
  Setup s(7, 2, 1, 8);
  std::set<int> peers;
  for (int j = 1; j <= 7; ++j) peers.insert(j);
  int me = 3, liar = 5;
  std::map<int, VssCheckpoint> received;
  for (int other = 1; other <= 7; ++other) {
    if (other == me) continue;
    VssCheckpoint cp = make_checkpoint(s.held.at(other), s.dom.alpha(me));
    if (other == liar) cp.vals[0].first += f.one();
    received.emplace(other, cp);
  }
  auto complaints = vss_verify_round(me, s.held.at(me), received, peers, s.dom);
  REQUIRE(complaints.size() == 1);
  CHECK(complaints[0].accuser == me);
  CHECK(complaints[0].peer == liar);

  VssResponse resp = vss_respond(s.dealing, complaints, s.dom);
  const auto& cell = resp.cells.at({me, liar});
  CHECK(cell_matches_mine(s.held.at(me), me, liar, cell, true, s.dom));
  // the liar's own polynomials also match (only its checkpoint lied)
  CHECK(cell_matches_mine(s.held.at(liar), liar, me, cell, false, s.dom));
  VssVerdict v = vss_resolve(complaints, resp, {}, {}, 4,
                             s.dom.pack_degree(), 2);
  CHECK(v.accepted);
}

TEST_CASE("missing response to a complaint disqualifies the dealer") {
  Setup s(6, 1, 1, 9);
  std::vector<Complaint> complaints = {{2, 4}};
  VssVerdict none = vss_resolve(complaints, std::nullopt, {}, {}, 3,
                                s.dom.pack_degree(), 2);
  CHECK_FALSE(none.accepted);
  VssResponse empty;  // response exists but does not answer the complaint
  VssVerdict unanswered = vss_resolve(complaints, empty, {}, {}, 3,
                                      s.dom.pack_degree(), 2);
  CHECK_FALSE(unanswered.accepted);
}

TEST_CASE("escalation: broadcast share must earn the confirmation quorum") {
  Setup s(6, 1, 1, 10);
  std::vector<Complaint> complaints = {{2, 4}};
  VssResponse resp = vss_respond(s.dealing, complaints, s.dom);
  std::set<int> escalated = {4};
  VssResponse resp2 = vss_respond(s.dealing, {{4, 0}}, s.dom);
  for (auto& [k, v] : resp2.full_shares) resp.full_shares.emplace(k, v);
  REQUIRE(resp.full_shares.count(4) == 1);
  // everyone honest confirms the broadcast share
  std::map<int, int> confirms;
  for (int other = 1; other <= 6; ++other)
    if (other != 4 &&
        share_consistent_with_mine(resp.full_shares.at(4), 4,
                                   s.held.at(other), other, s.dom))
      confirms[4]++;
  CHECK(confirms[4] == 5);
  CHECK(vss_resolve(complaints, resp, escalated, confirms, 3,
                    s.dom.pack_degree(), 2)
            .accepted);
  // below the quorum the dealer is out
  std::map<int, int> weak = {{4, 2}};
  CHECK_FALSE(vss_resolve(complaints, resp, escalated, weak, 3,
                          s.dom.pack_degree(), 2)
                  .accepted);
}

TEST_CASE("over-degree broadcast share is rejected as malformed") {
  Setup s(6, 1, 1, 11);
  Rng rng(12);
  // dealer answers an escalation with a share from a higher-degree dealing
  std::vector<FieldPoly> wide;
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<FieldElement> cs;
    for (int i = 0; i <= s.dom.pack_degree() + 2; ++i)
      cs.push_back(rng.uniform(f));
    wide.push_back(FieldPoly(cs));
  }
  VssDealing bad = vss_deal(1, wide, s.dom.pack_degree() + 2, f, rng);
  VssResponse resp;
  resp.full_shares.emplace(4, bad.share_for(s.dom.alpha(4)));
  std::map<int, int> confirms = {{4, 6}};
  VssVerdict v = vss_resolve({{4, 0}}, resp, {4}, confirms, 3,
                             s.dom.pack_degree(), 2);
  CHECK_FALSE(v.accepted);
}

TEST_CASE("asymmetric dealing is caught by the pairwise checkpoints") {
  // rows from S, cols from an independent S': row/col cross-checks fail
  EvalDomain dom = EvalDomain::make(f, 6, 1, 1);
  Rng rng(13);
  std::vector<FieldPoly> e1, e2;
  for (int c = 0; c < 1; ++c) {
    std::vector<FieldElement> a{rng.uniform(f), rng.uniform(f)};
    std::vector<FieldElement> b{rng.uniform(f), rng.uniform(f)};
    e1.push_back(FieldPoly(a));
    e2.push_back(FieldPoly(b));
  }
  VssDealing d1 = vss_deal(1, e1, dom.pack_degree(), f, rng);
  VssDealing d2 = vss_deal(1, e2, dom.pack_degree(), f, rng);
  std::map<int, BivariateShare> held;
  for (int j = 1; j <= 6; ++j) {
    BivariateShare sh = d1.share_for(dom.alpha(j));
    sh.cols = d2.share_for(dom.alpha(j)).cols;
    held.emplace(j, sh);
  }
  std::set<int> peers;
  for (int j = 1; j <= 6; ++j) peers.insert(j);
  int total_complaints = 0;
  for (int me = 1; me <= 6; ++me) {
    std::map<int, VssCheckpoint> received;
    for (int other = 1; other <= 6; ++other) {
      if (other == me) continue;
      received.emplace(other, make_checkpoint(held.at(other), dom.alpha(me)));
    }
    total_complaints += static_cast<int>(
        vss_verify_round(me, held.at(me), received, peers, dom).size());
  }
  CHECK(total_complaints > 0);
}
