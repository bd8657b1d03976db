#include "byitfl/itvss.hpp"

namespace byitfl {

BivarPoly::BivarPoly(int deg, const Field& f) : deg_(deg) {
  c_.assign(deg + 1, std::vector<FieldElement>(deg + 1, f.zero()));
}

FieldElement BivarPoly::eval(const FieldElement& x,
                             const FieldElement& y) const {
  // Horner in x of the per-row Horner in y.
  const Field& f = *x.field();
  FieldElement acc = f.zero();
  for (int a = deg_; a >= 0; --a) {
    FieldElement rowv = f.zero();
    for (int b = deg_; b >= 0; --b) rowv = rowv * y + c_[a][b];
    acc = acc * x + rowv;
  }
  return acc;
}

FieldPoly BivarPoly::row_at(const FieldElement& x0) const {
  const Field& f = *x0.field();
  std::vector<FieldElement> out(deg_ + 1, f.zero());
  for (int b = 0; b <= deg_; ++b) {
    FieldElement acc = f.zero();
    for (int a = deg_; a >= 0; --a) acc = acc * x0 + c_[a][b];
    out[b] = acc;
  }
  return FieldPoly(std::move(out));
}

FieldPoly BivarPoly::col_at(const FieldElement& y0) const {
  const Field& f = *y0.field();
  std::vector<FieldElement> out(deg_ + 1, f.zero());
  for (int a = 0; a <= deg_; ++a) {
    FieldElement acc = f.zero();
    for (int b = deg_; b >= 0; --b) acc = acc * y0 + c_[a][b];
    out[a] = acc;
  }
  return FieldPoly(std::move(out));
}

BivarPoly sample_symmetric_embedding(const FieldPoly& u, int deg,
                                     const Field& f, Rng& rng) {
  if (u.degree() > deg)
    throw std::invalid_argument("embedded polynomial exceeds degree bound");
  BivarPoly s(deg, f);
  for (int a = 0; a <= deg; ++a) {
    FieldElement ua =
        a <= u.degree() ? u.coeffs()[a] : f.zero();
    s.at(a, 0) = ua;
    s.at(0, a) = ua;
  }
  for (int a = 1; a <= deg; ++a)
    for (int b = a; b <= deg; ++b) {
      FieldElement r = rng.uniform(f);
      s.at(a, b) = r;
      s.at(b, a) = r;
    }
  return s;
}

FieldElement BivariateShare::induced(std::size_t c, const Field& f) const {
  return rows[c].eval(f.zero());
}

bool BivariateShare::degree_ok() const {
  for (const auto& p : rows)
    if (p.degree() > degree) return false;
  for (const auto& p : cols)
    if (p.degree() > degree) return false;
  return rows.size() == cols.size() && !rows.empty();
}

void BivariateShare::serialize(ByteWriter& w) const {
  w.u32(static_cast<std::uint32_t>(dealer));
  w.u32(static_cast<std::uint32_t>(degree));
  w.u32(static_cast<std::uint32_t>(rows.size()));
  for (const auto& p : rows) w.fe_list(p.coeffs());
  for (const auto& p : cols) w.fe_list(p.coeffs());
}

BivariateShare BivariateShare::deserialize(ByteReader& r, const Field& f) {
  BivariateShare s;
  s.dealer = static_cast<int>(r.u32());
  s.degree = static_cast<int>(r.u32());
  std::uint32_t nc = r.u32();
  for (std::uint32_t i = 0; i < nc; ++i) s.rows.emplace_back(r.fe_list(f));
  for (std::uint32_t i = 0; i < nc; ++i) s.cols.emplace_back(r.fe_list(f));
  return s;
}

BivariateShare VssDealing::share_for(const FieldElement& alpha_j) const {
  BivariateShare s;
  s.dealer = dealer;
  s.degree = degree;
  for (const auto& p : polys) {
    s.rows.push_back(p.row_at(alpha_j));
    s.cols.push_back(p.col_at(alpha_j));
  }
  return s;
}

FieldElement VssDealing::cell(std::size_t c, const FieldElement& x,
                              const FieldElement& y) const {
  return polys[c].eval(x, y);
}

VssDealing vss_deal(int dealer, const std::vector<FieldPoly>& embedded,
                    int degree, const Field& f, Rng& rng) {
  VssDealing d;
  d.dealer = dealer;
  d.degree = degree;
  d.polys.reserve(embedded.size());
  for (const auto& u : embedded)
    d.polys.push_back(sample_symmetric_embedding(u, degree, f, rng));
  return d;
}

void VssCheckpoint::serialize(ByteWriter& w) const {
  w.u32(static_cast<std::uint32_t>(vals.size()));
  for (const auto& [r, c] : vals) {
    w.fe(r);
    w.fe(c);
  }
}

VssCheckpoint VssCheckpoint::deserialize(ByteReader& r, const Field& f) {
  VssCheckpoint cp;
  std::uint32_t n = r.u32();
  cp.vals.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    FieldElement a = r.fe(f);
    FieldElement b = r.fe(f);
    cp.vals.emplace_back(a, b);
  }
  return cp;
}

VssCheckpoint make_checkpoint(const BivariateShare& mine,
                              const FieldElement& alpha_j) {
  VssCheckpoint cp;
  cp.vals.reserve(mine.rows.size());
  for (std::size_t c = 0; c < mine.rows.size(); ++c)
    cp.vals.emplace_back(mine.rows[c].eval(alpha_j), mine.cols[c].eval(alpha_j));
  return cp;
}

std::vector<Complaint> vss_verify_round(
    int me, const std::optional<BivariateShare>& mine,
    const std::map<int, VssCheckpoint>& received, const std::set<int>& peers,
    const EvalDomain& domain) {
  std::vector<Complaint> out;
  if (!mine.has_value() || !mine->degree_ok()) {
    out.push_back({me, 0});
    return out;
  }
  const std::size_t nc = mine->coords();
  for (int j : peers) {
    if (j == me) continue;
    auto it = received.find(j);
    if (it == received.end()) {
      out.push_back({me, j});
      continue;
    }
    const VssCheckpoint& cp = it->second;
    if (cp.vals.size() != nc) {
      out.push_back({me, j});
      continue;
    }
    bool ok = true;
    const FieldElement& aj = domain.alpha(j);
    for (std::size_t c = 0; c < nc && ok; ++c) {
      // j sent (row_j(alpha_me), col_j(alpha_me)); they must match my
      // col(alpha_j) and row(alpha_j) respectively.
      if (cp.vals[c].first != mine->cols[c].eval(aj)) ok = false;
      if (cp.vals[c].second != mine->rows[c].eval(aj)) ok = false;
    }
    if (!ok) out.push_back({me, j});
  }
  return out;
}

VssResponse vss_respond(const VssDealing& dealing,
                        const std::vector<Complaint>& complaints,
                        const EvalDomain& domain) {
  VssResponse resp;
  for (const auto& c : complaints) {
    if (c.peer == 0) {
      resp.full_shares.emplace(c.accuser,
                               dealing.share_for(domain.alpha(c.accuser)));
      continue;
    }
    auto key = std::make_pair(c.accuser, c.peer);
    if (resp.cells.count(key)) continue;
    std::vector<std::pair<FieldElement, FieldElement>> vals;
    const FieldElement& aa = domain.alpha(c.accuser);
    const FieldElement& ap = domain.alpha(c.peer);
    for (std::size_t cc = 0; cc < dealing.polys.size(); ++cc)
      vals.emplace_back(dealing.cell(cc, aa, ap), dealing.cell(cc, ap, aa));
    resp.cells.emplace(key, std::move(vals));
  }
  return resp;
}

bool cell_matches_mine(const BivariateShare& mine, int me, int other,
                       const std::vector<std::pair<FieldElement, FieldElement>>&
                           cell_for_pair,
                       bool i_am_accuser, const EvalDomain& domain) {
  if (cell_for_pair.size() != mine.coords()) return false;
  const FieldElement& ao = domain.alpha(other);
  for (std::size_t c = 0; c < mine.coords(); ++c) {
    // cells are (S_c(a_acc, a_peer), S_c(a_peer, a_acc)).
    const FieldElement& mine_first =
        i_am_accuser ? mine.rows[c].eval(ao) : mine.cols[c].eval(ao);
    const FieldElement& mine_second =
        i_am_accuser ? mine.cols[c].eval(ao) : mine.rows[c].eval(ao);
    if (cell_for_pair[c].first != mine_first) return false;
    if (cell_for_pair[c].second != mine_second) return false;
  }
  return true;
}

bool share_consistent_with_mine(const BivariateShare& broadcast, int x,
                                const BivariateShare& mine, int me,
                                const EvalDomain& domain) {
  if (broadcast.coords() != mine.coords()) return false;
  const FieldElement& ax = domain.alpha(x);
  const FieldElement& am = domain.alpha(me);
  for (std::size_t c = 0; c < mine.coords(); ++c) {
    if (broadcast.rows[c].eval(am) != mine.cols[c].eval(ax)) return false;
    if (broadcast.cols[c].eval(am) != mine.rows[c].eval(ax)) return false;
  }
  return true;
}

VssVerdict vss_resolve(const std::vector<Complaint>& complaints,
                       const std::optional<VssResponse>& response,
                       const std::set<int>& escalated,
                       const std::map<int, int>& confirm_counts,
                       int confirm_threshold, int expected_degree,
                       std::size_t expected_coords) {
  VssVerdict v;
  if (complaints.empty()) return v;
  if (!response.has_value()) {
    v.accepted = false;
    v.reason = "no response from dealer";
    return v;
  }
  for (const auto& c : complaints) {
    if (c.peer == 0) {
      if (!response->full_shares.count(c.accuser)) {
        v.accepted = false;
        v.reason = "dealer-level complaint unanswered";
        return v;
      }
    } else if (!response->cells.count({c.accuser, c.peer})) {
      v.accepted = false;
      v.reason = "point complaint unanswered";
      return v;
    }
  }
  for (int x : escalated) {
    if (!response->full_shares.count(x)) {
      v.accepted = false;
      v.reason = "escalation unanswered";
      return v;
    }
  }
  for (const auto& [x, share] : response->full_shares) {
    if (share.degree > expected_degree || !share.degree_ok() ||
        share.coords() != expected_coords) {
      v.accepted = false;
      v.reason = "broadcast share malformed or over degree";
      return v;
    }
    auto it = confirm_counts.find(x);
    int confirms = it == confirm_counts.end() ? 0 : it->second;
    if (confirms < confirm_threshold) {
      v.accepted = false;
      v.reason = "broadcast share lacks consistency quorum";
      return v;
    }
  }
  return v;
}

}  // namespace byitfl
