#include "byitfl/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "byitfl/rs.hpp"

namespace byitfl {

int min_users(int b, int k, int m, int t, int p_drop) {
  return 2 * b + (k + 2) * (m + t - 1) + p_drop + 1;
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Share: return "Share";
    case Phase::NormCheck: return "NormCheck";
    case Phase::Compute: return "Compute";
    case Phase::Mask: return "Mask";
    case Phase::Reconstruct: return "Reconstruct";
  }
  return "?";
}

void ProtocolParams::check() const {
  if (m < 1) throw ProtocolError("m >= 1 required");
  if (t < 1) throw ProtocolError("t >= 1 required");
  if (b < 0 || p_drop < 0 || k < 1 || d < 1 || q < 1)
    throw ProtocolError("negative or zero parameter");
  int need = min_users(b, k, m, t, p_drop);
  if (n < need) {
    std::ostringstream os;
    os << "violates n >= 2b+(k+2)(m+t-1)+p+1: need n >= " << need << ", have "
       << n;
    throw ProtocolError(os.str());
  }
}

mpz_class choose_prime(const ProtocolParams& p,
                       const std::vector<mpz_class>& h_int_coeffs) {
  mpz_class s = 1;
  for (const auto& c : h_int_coeffs)
    if (abs(c) > s) s = abs(c);
  mpz_class lo = paper_field_bound(p.n, p.d, p.q, p.k, s);
  auto qb = quotient_bounds(p.n, p.d, p.q, h_int_coeffs);
  mpz_class rr = 2 * qb.b1 * qb.b2 + 1;
  if (rr > lo) lo = rr;
  mpz_class pts = p.n + p.m + p.t + 2;
  if (pts > lo) lo = pts;
  return next_prime_at_least(lo);
}

mpz_class norm_check_value(const QuantizedUpdate& u) {
  mpz_class acc = 0;
  for (const auto& e : u.values) {
    mpz_class l = e.lift_signed();
    acc += l * l;
  }
  return acc;
}

bool norm_check_passes(const mpz_class& norm_sq, long q, double epsilon) {
  // |N - q^2| < eps * q^2, evaluated exactly in rationals.
  mpz_class q2 = mpz_class(q) * q;
  mpq_class diff(norm_sq - q2);
  if (diff < 0) diff = -diff;
  mpq_class thr = mpq_class(epsilon) * mpq_class(q2);
  return diff < thr;
}

PlainAggregate plaintext_aggregate(const std::map<int, QuantizedUpdate>& updates,
                                   const QuantizedUpdate& g0, double g0_norm,
                                   const std::vector<mpz_class>& h_int_coeffs,
                                   long q, const std::set<int>& include) {
  std::size_t d = g0.values.size();
  std::vector<mpz_class> g0l(d);
  for (std::size_t c = 0; c < d; ++c) g0l[c] = g0.values[c].lift_signed();

  PlainAggregate out;
  out.sigma1 = 0;
  out.sigma2.assign(d, mpz_class(0));
  for (const auto& [i, u] : updates) {
    if (!include.count(i)) continue;
    mpz_class xbar = 0;
    std::vector<mpz_class> ul(d);
    for (std::size_t c = 0; c < d; ++c) {
      ul[c] = u.values[c].lift_signed();
      xbar += g0l[c] * ul[c];
    }
    mpz_class ts = eval_int_poly(h_int_coeffs, xbar);
    out.sigma1 += ts;
    for (std::size_t c = 0; c < d; ++c) out.sigma2[c] += ts * ul[c];
  }
  if (out.sigma1 == 0) throw LowTrustDenominator();
  for (std::size_t c = 0; c < d; ++c) {
    mpz_class num = out.sigma2[c], den = out.sigma1;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    mpz_class g = gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    out.quotients.emplace_back(num, den);
    out.g.push_back(g0_norm * mpq_class(num, den).get_d() /
                    static_cast<double>(q));
  }
  return out;
}

// --------------------------------------------------------------------------

ProtocolEngine::ProtocolEngine(const Field& f, const ProtocolParams& params,
                               const ReluApprox& approx, std::uint64_t seed)
    : field_(f),
      params_(params),
      approx_(approx),
      domain_(EvalDomain::make(f, params.n, params.m, params.t)),
      net_(params.n),
      adv_rng_(mix_seed(seed, 0xADFEEDULL)) {
  params_.check();
  if (approx_.int_coeffs.empty())
    throw ProtocolError("relu approximation lacks its integer embedding");
  for (int i = 0; i <= params.n; ++i)
    honest_rng_.emplace_back(mix_seed(seed, 1000 + i));
}

Rng& ProtocolEngine::party_rng(int party) { return honest_rng_[party]; }

bool ProtocolEngine::attack_active(int party, Phase phase) const {
  if (attack_ == nullptr || !attack_->members.count(party)) return false;
  switch (attack_->kind) {
    case AttackKind::RandomShares:
    case AttackKind::WrongComputation:
      return phase != Phase::Share;
    case AttackKind::InconsistentDeal:
      return phase == Phase::Share;
    default:
      return false;
  }
}

void ProtocolEngine::corrupt_values(std::vector<FieldElement>& vals,
                                    int party) {
  if (!attack_active(party, phase_)) return;
  if (attack_->kind == AttackKind::RandomShares) {
    for (auto& v : vals) v = adv_rng_.uniform(field_);
  } else if (attack_->kind == AttackKind::WrongComputation) {
    for (auto& v : vals) v += field_.one();
  }
}

void ProtocolEngine::corrupt_poly(FieldPoly& p, int party) {
  if (!attack_active(party, phase_) ||
      attack_->kind != AttackKind::RandomShares)
    return;
  std::vector<FieldElement> c = p.coeffs();
  for (auto& v : c) v = adv_rng_.uniform(field_);
  p = FieldPoly(std::move(c));
}

void ProtocolEngine::corrupt_share(BivariateShare& s, int party) {
  if (!attack_active(party, phase_) ||
      attack_->kind != AttackKind::RandomShares)
    return;
  for (auto& p : s.rows) corrupt_poly(p, party);
  for (auto& p : s.cols) corrupt_poly(p, party);
}

void ProtocolEngine::advance_to(Phase phase) {
  if (phase_ == phase) return;
  phase_ = phase;
  if (attack_ == nullptr) return;
  if (attack_->drop_phase == phase) {
    for (int p : attack_->dropouts) {
      net_.drop(p);
      live_.erase(p);
    }
  }
}

// --------------------------------------------------------------------------
// Batched ITVSS: every dealer's session progresses through the same seven
// network rounds (deal, checkpoint, complaint, response, escalation, second
// response, confirmation).

ProtocolEngine::VssOutcome ProtocolEngine::run_vss_batch(
    const std::string& tag,
    const std::map<int, std::vector<FieldPoly>>& embedded, int degree) {
  VssOutcome out;
  if (embedded.empty()) return out;
  std::size_t coords = embedded.begin()->second.size();

  std::map<int, VssDealing> dealings;
  std::map<int, VssDealing> alt_dealings;  // InconsistentDeal column source
  std::map<int, std::map<int, BivariateShare>> held;  // dealer -> recipient

  // Round 1: deal.
  for (const auto& [dealer, polys] : embedded) {
    dealings.emplace(dealer,
                     vss_deal(dealer, polys, degree, field_, party_rng(dealer)));
    bool split = attack_ != nullptr &&
                 attack_->kind == AttackKind::InconsistentDeal &&
                 attack_->members.count(dealer) && phase_ == Phase::Share;
    if (split)
      alt_dealings.emplace(
          dealer, vss_deal(dealer, polys, degree, field_, adv_rng_));
    for (int j : live_) {
      BivariateShare s = dealings.at(dealer).share_for(domain_.alpha(j));
      if (split) {
        // Rows from one symmetric embedding, columns from another: no
        // pairwise check between two recipients can succeed.
        BivariateShare alt = alt_dealings.at(dealer).share_for(domain_.alpha(j));
        s.cols = alt.cols;
      }
      corrupt_share(s, dealer);
      ByteWriter w;
      s.serialize(w);
      net_.submit(dealer, j, tag + ":deal", w.take());
      held[dealer].emplace(j, std::move(s));
    }
  }
  net_.deliver_round();

  // Round 2: pairwise checkpoints.
  // cp[dealer][receiver][sender]
  std::map<int, std::map<int, std::map<int, VssCheckpoint>>> cp;
  for (int j : live_) {
    for (int peer : live_) {
      if (peer == j) continue;
      ByteWriter w;
      w.u32(static_cast<std::uint32_t>(embedded.size()));
      for (const auto& [dealer, _] : embedded) {
        VssCheckpoint c = make_checkpoint(held[dealer].at(j),
                                          domain_.alpha(peer));
        if (attack_active(j, phase_) &&
            attack_->kind == AttackKind::RandomShares)
          for (auto& [a, b] : c.vals) {
            a = adv_rng_.uniform(field_);
            b = adv_rng_.uniform(field_);
          }
        w.u32(static_cast<std::uint32_t>(dealer));
        c.serialize(w);
        cp[dealer][peer][j] = std::move(c);
      }
      net_.submit(j, peer, tag + ":checkpoint", w.take());
    }
  }
  net_.deliver_round();

  // Round 3: complaints (broadcast).
  std::map<int, std::vector<Complaint>> complaints;
  for (int j : live_) {
    ByteWriter w;
    std::vector<std::pair<int, Complaint>> mine;
    for (const auto& [dealer, _] : embedded) {
      std::optional<BivariateShare> share = held[dealer].at(j);
      auto cs = vss_verify_round(j, share, cp[dealer][j], live_, domain_);
      for (const auto& c : cs) mine.emplace_back(dealer, c);
    }
    w.u32(static_cast<std::uint32_t>(mine.size()));
    for (const auto& [dealer, c] : mine) {
      w.u32(static_cast<std::uint32_t>(dealer));
      w.u32(static_cast<std::uint32_t>(c.accuser));
      w.u32(static_cast<std::uint32_t>(c.peer));
      complaints[dealer].push_back(c);
    }
    net_.submit(j, kBroadcast, tag + ":complaint", w.take());
  }
  net_.deliver_round();

  // Round 4: dealer responses (broadcast).
  std::map<int, VssResponse> responses;
  auto serialize_response = [&](const VssResponse& r) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(r.cells.size()));
    for (const auto& [key, vals] : r.cells) {
      w.u32(static_cast<std::uint32_t>(key.first));
      w.u32(static_cast<std::uint32_t>(key.second));
      w.u32(static_cast<std::uint32_t>(vals.size()));
      for (const auto& [a, b] : vals) {
        w.fe(a);
        w.fe(b);
      }
    }
    w.u32(static_cast<std::uint32_t>(r.full_shares.size()));
    for (const auto& [x, s] : r.full_shares) {
      w.u32(static_cast<std::uint32_t>(x));
      s.serialize(w);
    }
    return w.take();
  };
  for (const auto& [dealer, _] : embedded) {
    VssResponse r = vss_respond(dealings.at(dealer), complaints[dealer],
                                domain_);
    if (attack_active(dealer, phase_) &&
        attack_->kind == AttackKind::RandomShares) {
      for (auto& [key, vals] : r.cells)
        for (auto& [a, b] : vals) {
          a = adv_rng_.uniform(field_);
          b = adv_rng_.uniform(field_);
        }
      for (auto& [x, s] : r.full_shares) corrupt_share(s, dealer);
    }
    net_.submit(dealer, kBroadcast, tag + ":response", serialize_response(r));
    responses.emplace(dealer, std::move(r));
  }
  net_.deliver_round();

  // Round 5: escalations (broadcast).  A party escalates when the dealer's
  // broadcast cell for one of its complaint pairs contradicts its own share.
  std::map<int, std::set<int>> escalated;
  for (int j : live_) {
    ByteWriter w;
    std::vector<int> mine;
    for (const auto& [dealer, cs] : complaints) {
      const VssResponse& r = responses.at(dealer);
      const BivariateShare& share = held[dealer].at(j);
      bool esc = false;
      for (const auto& c : cs) {
        if (c.peer == 0) continue;
        if (c.accuser != j && c.peer != j) continue;
        auto it = r.cells.find({c.accuser, c.peer});
        if (it == r.cells.end()) continue;  // unanswered: resolve rejects
        int other = c.accuser == j ? c.peer : c.accuser;
        if (!cell_matches_mine(share, j, other, it->second, c.accuser == j,
                               domain_)) {
          esc = true;
          break;
        }
      }
      if (esc) {
        mine.push_back(dealer);
        escalated[dealer].insert(j);
      }
    }
    w.u32(static_cast<std::uint32_t>(mine.size()));
    for (int dealer : mine) w.u32(static_cast<std::uint32_t>(dealer));
    net_.submit(j, kBroadcast, tag + ":escalate", w.take());
  }
  net_.deliver_round();

  // Round 6: full-share broadcasts for escalated parties.
  for (const auto& [dealer, parties] : escalated) {
    VssResponse& r = responses.at(dealer);
    VssResponse extra;
    for (int x : parties) {
      if (r.full_shares.count(x)) continue;
      BivariateShare s = dealings.at(dealer).share_for(domain_.alpha(x));
      if (attack_active(dealer, phase_) &&
          attack_->kind == AttackKind::RandomShares)
        corrupt_share(s, dealer);
      extra.full_shares.emplace(x, s);
      r.full_shares.emplace(x, std::move(s));
    }
    net_.submit(dealer, kBroadcast, tag + ":response2",
                serialize_response(extra));
  }
  net_.deliver_round();

  // Round 7: consistency confirmations for every broadcast full share.
  std::map<int, std::map<int, int>> confirms;  // dealer -> target -> count
  for (int j : live_) {
    ByteWriter w;
    std::vector<std::pair<int, int>> mine;
    for (const auto& [dealer, r] : responses) {
      const BivariateShare& share = held[dealer].at(j);
      if (!share.degree_ok()) continue;
      for (const auto& [x, bshare] : r.full_shares) {
        if (x == j) continue;
        if (share_consistent_with_mine(bshare, x, share, j, domain_)) {
          mine.emplace_back(dealer, x);
          ++confirms[dealer][x];
        }
      }
    }
    w.u32(static_cast<std::uint32_t>(mine.size()));
    for (const auto& [dealer, x] : mine) {
      w.u32(static_cast<std::uint32_t>(dealer));
      w.u32(static_cast<std::uint32_t>(x));
    }
    net_.submit(j, kBroadcast, tag + ":confirm", w.take());
  }
  net_.deliver_round();

  // Adjudication (deterministic from broadcast data).
  int threshold = params_.m + params_.t + params_.b;
  for (const auto& [dealer, _] : embedded) {
    VssVerdict v = vss_resolve(complaints[dealer], responses.at(dealer),
                               escalated[dealer], confirms[dealer], threshold,
                               degree, coords);
    if (!v.accepted) continue;
    out.accepted.insert(dealer);
    // Repaired shares replace the privately dealt ones.
    for (const auto& [x, bshare] : responses.at(dealer).full_shares)
      if (live_.count(x)) held[dealer][x] = bshare;
    for (int j : live_) {
      const BivariateShare& s = held[dealer].at(j);
      if (!s.degree_ok()) continue;
      std::vector<FieldElement> vals;
      vals.reserve(coords);
      for (std::size_t c = 0; c < coords; ++c)
        vals.push_back(s.induced(c, field_));
      out.induced[dealer].emplace(j, std::move(vals));
    }
  }
  return out;
}

FieldPoly ProtocolEngine::decode_to_federator(
    const std::map<int, FieldElement>& by_sender, int degree,
    std::set<int>* flagged) {
  NoisyCodeword cw;
  cw.degree_bound = degree;
  std::vector<int> order;
  for (const auto& [j, v] : by_sender) {
    cw.entries.emplace_back(domain_.alpha(j), v);
    order.push_back(j);
  }
  RsResult res = rs_decode(cw, params_.b);
  if (flagged != nullptr)
    for (std::size_t pos : res.error_positions) flagged->insert(order[pos]);
  return res.poly;
}

// --------------------------------------------------------------------------

AggregateOutcome ProtocolEngine::run_iteration(
    const std::map<int, QuantizedUpdate>& updates, const QuantizedUpdate& g0,
    double g0_norm, const AttackSpec& attack) {
  auto t0 = std::chrono::steady_clock::now();
  attack_ = &attack;
  phase_ = Phase::Share;
  record_ = RoundRecord{};
  AggregateOutcome out;

  const int m = params_.m, t = params_.t, k = params_.k, b = params_.b;
  const int pack = m + t - 1;
  const std::size_t d = static_cast<std::size_t>(params_.d);
  const std::size_t len = (d + m - 1) / m;  // coordinate slots per share

  if (g0.values.size() != d) throw ProtocolError("g0 dimension mismatch");
  // Only protocol deviation consumes the Byzantine budget; data poisoning
  // (trim, label flip, scaled submissions) is protocol-conformant.
  bool deviates = attack.kind == AttackKind::RandomShares ||
                  attack.kind == AttackKind::WrongComputation ||
                  attack.kind == AttackKind::InconsistentDeal;
  if (deviates && static_cast<int>(attack.members.size()) > b)
    throw ProtocolError("attack exceeds the Byzantine budget b");
  if (static_cast<int>(attack.dropouts.size()) > params_.p_drop)
    throw ProtocolError("dropout schedule exceeds p_drop");

  live_.clear();
  for (const auto& [i, u] : updates) {
    if (i < 1 || i > params_.n) throw ProtocolError("bad user id");
    if (u.values.size() != d) throw ProtocolError("update dimension mismatch");
    live_.insert(i);
  }
  if (attack.drop_phase == Phase::Share)
    for (int p : attack.dropouts) {
      net_.drop(p);
      live_.erase(p);
    }

  // ---- Share ----
  // Federator broadcasts its public root update; parties derive the mask-free
  // degree-(m-1) reference polynomials locally.
  {
    ByteWriter w;
    w.fe_list(g0.values);
    net_.submit(kFederator, kBroadcast, "g0", w.take());
  }
  std::vector<FieldPoly> pub0(len);
  {
    for (std::size_t c = 0; c < len; ++c) {
      std::vector<std::pair<FieldElement, FieldElement>> pts;
      for (int l = 0; l < m; ++l) {
        std::size_t idx = static_cast<std::size_t>(l) * len + c;
        FieldElement v = idx < d ? g0.values[idx] : field_.zero();
        pts.emplace_back(domain_.betas[l], v);
      }
      pub0[c] = poly_interp(pts);
    }
  }

  std::map<int, std::vector<FieldPoly>> share_embedded;
  for (int i : live_) {
    SecretBundle bundle =
        SecretBundle::from_vector(updates.at(i).values, domain_, party_rng(i));
    share_embedded.emplace(i, lcc_encode_polys(bundle, domain_));
  }
  VssOutcome share_out = run_vss_batch("share", share_embedded, pack);
  std::set<int> included;  // dealers whose terms survive
  for (int i : live_)
    if (share_out.accepted.count(i)) included.insert(i);
    else out.disqualified.insert(i);
  // gshare[dealer][party] = per-slot share values
  auto& gshare = share_out.induced;

  // ---- NormCheck ----
  advance_to(Phase::NormCheck);
  std::vector<int> inc_sorted(included.begin(), included.end());
  const int dnorm = 2 * pack;
  {
    std::map<int, std::vector<FieldPoly>> rho_embedded;
    for (int j : live_) {
      std::vector<FieldPoly> polys;
      polys.reserve(inc_sorted.size());
      for (std::size_t idx = 0; idx < inc_sorted.size(); ++idx) {
        std::vector<FieldElement> c(dnorm - m + 1);
        for (auto& e : c) e = party_rng(j).uniform(field_);
        polys.emplace_back(std::move(c));
      }
      rho_embedded.emplace(j, std::move(polys));
    }
    VssOutcome rho_out = run_vss_batch("normrho", rho_embedded, dnorm - m);
    FieldPoly vanish = vanish_poly(domain_);

    // Each party sends the masked per-dealer norm shares to the federator.
    std::map<int, std::vector<FieldElement>> norm_by_sender;
    for (int j : live_) {
      FieldElement vj = vanish.eval(domain_.alpha(j));
      std::vector<FieldElement> vals;
      vals.reserve(inc_sorted.size());
      for (std::size_t idx = 0; idx < inc_sorted.size(); ++idx) {
        int i = inc_sorted[idx];
        auto it = gshare[i].find(j);
        if (it == gshare[i].end()) throw ProtocolError("missing share");
        FieldElement nu = field_.zero();
        for (const auto& v : it->second) nu += v * v;
        for (int c : rho_out.accepted)
          nu += vj * rho_out.induced[c][j][idx];
        vals.push_back(nu);
      }
      corrupt_values(vals, j);
      ByteWriter w;
      w.fe_list(vals);
      net_.submit(j, kFederator, "normshare", w.take());
      norm_by_sender.emplace(j, std::move(vals));
    }
    net_.deliver_round();

    for (std::size_t idx = 0; idx < inc_sorted.size(); ++idx) {
      int i = inc_sorted[idx];
      std::map<int, FieldElement> col;
      for (const auto& [j, vals] : norm_by_sender) col.emplace(j, vals[idx]);
      FieldPoly poly = decode_to_federator(col, dnorm, &out.flagged);
      FieldElement total = field_.zero();
      for (int l = 0; l < m; ++l) total += poly.eval(domain_.betas[l]);
      mpz_class norm_sq = total.lift_signed();
      if (!norm_check_passes(norm_sq, params_.q, params_.epsilon))
        out.excluded_norm.insert(i);
    }
    for (int i : out.excluded_norm) included.erase(i);
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(out.excluded_norm.size()));
    for (int i : out.excluded_norm) w.u32(static_cast<std::uint32_t>(i));
    net_.submit(kFederator, kBroadcast, "exclude", w.take());
    net_.deliver_round();
  }
  inc_sorted.assign(included.begin(), included.end());
  out.included = included;
  if (included.empty()) {
    out.status = "aborted: every user excluded";
    attack_ = nullptr;
    return out;
  }

  // ---- Compute ----
  advance_to(Phase::Compute);
  const int wdeg = 2 * m + t - 2;  // deg of the partial inner products
  std::vector<PackedShare> sigma1_sh;                 // by live party
  std::vector<std::vector<PackedShare>> sigma2_sh;    // [slot][live party]
  std::vector<int> live_sorted(live_.begin(), live_.end());
  {
    // Claims: each party's evaluation of every dealer's inner-product
    // polynomial, sub-shared as replicated scalars (one VSS session per
    // claimant, one coordinate per dealer).
    std::map<int, std::map<int, FieldElement>> claim;  // claimant -> dealer
    std::map<int, std::vector<FieldPoly>> sub_embedded;
    for (int j : live_) {
      std::vector<FieldElement> pub_at_j(len);
      for (std::size_t c = 0; c < len; ++c)
        pub_at_j[c] = pub0[c].eval(domain_.alpha(j));
      std::vector<FieldPoly> polys;
      for (int i : inc_sorted) {
        FieldElement w = field_.zero();
        const auto& sh = gshare[i].at(j);
        for (std::size_t c = 0; c < len; ++c) w += pub_at_j[c] * sh[c];
        claim[j].emplace(i, w);
        SecretBundle rb =
            SecretBundle::replicated_scalar(w, domain_, party_rng(j));
        auto ps = lcc_encode_polys(rb, domain_);
        polys.push_back(ps[0]);
      }
      sub_embedded.emplace(j, std::move(polys));
    }
    VssOutcome sub_out = run_vss_batch("subshare", sub_embedded, pack);

    std::vector<int> accepted(sub_out.accepted.begin(),
                              sub_out.accepted.end());
    if (static_cast<int>(accepted.size()) < wdeg + 2 * b + 1)
      throw InsufficientRedundancy("conversion: too few accepted sub-dealers");
    ConversionPlan plan = make_conversion_plan(accepted, wdeg);

    // Opened syndromes: zero for honest claims; locate wrong claims.
    std::map<int, std::vector<std::vector<FieldElement>>>
        syn_by_sender;  // sender -> [extra][dealer]
    std::map<int, std::vector<FieldElement>> coeffs_by_extra;
    for (int e : plan.extras)
      coeffs_by_extra.emplace(e, syndrome_base_coeffs(domain_, plan, e));
    for (int j : live_) {
      std::vector<std::vector<FieldElement>> rows;
      ByteWriter w;
      w.u32(static_cast<std::uint32_t>(plan.extras.size()));
      for (int e : plan.extras) {
        const auto& coeffs = coeffs_by_extra.at(e);
        std::vector<FieldElement> vals;
        for (std::size_t idx = 0; idx < inc_sorted.size(); ++idx) {
          FieldElement s = sub_out.induced[e][j][idx];
          for (std::size_t bi = 0; bi < plan.base.size(); ++bi)
            s += coeffs[bi] * sub_out.induced[plan.base[bi]][j][idx];
          vals.push_back(s);
        }
        corrupt_values(vals, j);
        w.fe_list(vals);
        rows.push_back(std::move(vals));
      }
      net_.submit(j, kBroadcast, "syndrome", w.take());
      syn_by_sender.emplace(j, std::move(rows));
    }
    net_.deliver_round();

    // Per dealer: decode each syndrome sharing, locate bad claimants, and
    // apply the conversion map over a clean reference set.
    sigma1_sh.assign(live_sorted.size(), PackedShare{});
    sigma2_sh.assign(len, std::vector<PackedShare>(live_sorted.size()));
    std::vector<FieldElement> hcoef = approx_.field_coeffs(field_);
    for (std::size_t idx = 0; idx < inc_sorted.size(); ++idx) {
      int i = inc_sorted[idx];
      std::vector<FieldElement> synd;
      for (std::size_t ei = 0; ei < plan.extras.size(); ++ei) {
        std::map<int, FieldElement> col;
        for (const auto& [j, rows] : syn_by_sender)
          col.emplace(j, rows[ei][idx]);
        FieldPoly sp = decode_to_federator(col, pack, &out.flagged);
        // The syndrome is a replicated scalar; read it at the first beta.
        synd.push_back(sp.is_zero() ? field_.zero()
                                    : sp.eval(domain_.betas[0]));
      }
      std::vector<int> bad =
          locate_claim_errors(domain_, plan, synd, wdeg, b);
      for (int x : bad) out.flagged.insert(x);
      std::vector<int> good;
      for (int x : accepted)
        if (std::find(bad.begin(), bad.end(), x) == bad.end())
          good.push_back(x);
      if (static_cast<int>(good.size()) < wdeg + 1)
        throw InsufficientRedundancy("conversion: reference set too small");
      good.resize(wdeg + 1);
      std::vector<FieldElement> gamma = conversion_coeffs(domain_, good);

      for (std::size_t ji = 0; ji < live_sorted.size(); ++ji) {
        int j = live_sorted[ji];
        FieldElement xbar = field_.zero();
        for (std::size_t gi = 0; gi < good.size(); ++gi)
          xbar += gamma[gi] * sub_out.induced[good[gi]][j][idx];
        PackedShare xs;
        xs.owner = j;
        xs.degree_bound = pack;
        xs.values = {xbar};
        PackedShare ts = apply_poly_to_share(hcoef, xs);
        if (idx == 0) {
          sigma1_sh[ji] = ts;
        } else {
          sigma1_sh[ji] = share_add(sigma1_sh[ji], ts);
        }
        const auto& gsh = gshare[i].at(j);
        for (std::size_t c = 0; c < len; ++c) {
          PackedShare gs;
          gs.owner = j;
          gs.degree_bound = pack;
          gs.values = {gsh[c]};
          PackedShare term = share_mul(ts, gs);
          if (idx == 0) {
            sigma2_sh[c][ji] = term;
          } else {
            sigma2_sh[c][ji] = share_add(sigma2_sh[c][ji], term);
          }
        }
      }
    }
  }

  // ---- Mask + Reconstruct (with the lambda=0 resample loop) ----
  const int d1 = (k + 1) * pack;  // lambda*Sigma1 degree
  const int d2 = (k + 2) * pack;  // lambda*Sigma2 degree
  FieldPoly vanish = vanish_poly(domain_);
  FieldElement m1 = field_.zero();
  std::vector<std::vector<FieldElement>> m2(len);  // [slot][beta index]
  bool have_result = false;
  for (int attempt = 0; attempt < 3 && !have_result; ++attempt) {
    advance_to(Phase::Mask);
    std::map<int, std::vector<FieldPoly>> lambda_embedded;
    for (int j : live_) {
      FieldElement lj = party_rng(j).uniform(field_);
      SecretBundle rb =
          SecretBundle::replicated_scalar(lj, domain_, party_rng(j));
      lambda_embedded.emplace(
          j, std::vector<FieldPoly>{lcc_encode_polys(rb, domain_)[0]});
    }
    VssOutcome lam_out = run_vss_batch("lambda", lambda_embedded, pack);
    if (lam_out.accepted.empty())
      throw ProtocolError("no lambda contribution accepted");

    std::map<int, std::vector<FieldPoly>> rho1_embedded, rho2_embedded;
    for (int j : live_) {
      std::vector<FieldElement> c1(d1 - m + 1);
      for (auto& e : c1) e = party_rng(j).uniform(field_);
      rho1_embedded.emplace(j, std::vector<FieldPoly>{FieldPoly(std::move(c1))});
      std::vector<FieldPoly> p2;
      for (std::size_t c = 0; c < len; ++c) {
        std::vector<FieldElement> cc(d2 - m + 1);
        for (auto& e : cc) e = party_rng(j).uniform(field_);
        p2.emplace_back(std::move(cc));
      }
      rho2_embedded.emplace(j, std::move(p2));
    }
    VssOutcome rho1_out = run_vss_batch("rho1", rho1_embedded, d1 - m);
    VssOutcome rho2_out = run_vss_batch("rho2", rho2_embedded, d2 - m);

    advance_to(Phase::Reconstruct);
    std::map<int, std::vector<FieldElement>> recon_by_sender;
    for (std::size_t ji = 0; ji < live_sorted.size(); ++ji) {
      int j = live_sorted[ji];
      if (!live_.count(j)) continue;
      FieldElement lam = field_.zero();
      for (int c : lam_out.accepted) lam += lam_out.induced[c][j][0];
      FieldElement vj = vanish.eval(domain_.alpha(j));
      std::vector<FieldElement> vals;
      FieldElement v1 = lam * sigma1_sh[ji].values[0];
      for (int c : rho1_out.accepted) v1 += vj * rho1_out.induced[c][j][0];
      vals.push_back(v1);
      for (std::size_t c = 0; c < len; ++c) {
        FieldElement v2 = lam * sigma2_sh[c][ji].values[0];
        for (int cc : rho2_out.accepted)
          v2 += vj * rho2_out.induced[cc][j][c];
        vals.push_back(v2);
      }
      corrupt_values(vals, j);
      ByteWriter w;
      w.fe_list(vals);
      net_.submit(j, kFederator, "reconstruct", w.take());
      recon_by_sender.emplace(j, std::move(vals));
    }
    net_.deliver_round();

    std::map<int, FieldElement> col1;
    for (const auto& [j, vals] : recon_by_sender) col1.emplace(j, vals[0]);
    FieldPoly p1 = decode_to_federator(col1, d1, &out.flagged);
    FieldElement v_first =
        p1.is_zero() ? field_.zero() : p1.eval(domain_.betas[0]);
    for (int l = 1; l < m; ++l) {
      FieldElement v = p1.is_zero() ? field_.zero() : p1.eval(domain_.betas[l]);
      if (v != v_first)
        throw ProtocolError("masked Sigma1 replication violated");
    }
    if (v_first.is_zero()) continue;  // lambda (or Sigma1) hit zero: resample
    m1 = v_first;
    for (std::size_t c = 0; c < len; ++c) {
      std::map<int, FieldElement> col;
      for (const auto& [j, vals] : recon_by_sender)
        col.emplace(j, vals[1 + c]);
      FieldPoly p2 = decode_to_federator(col, d2, &out.flagged);
      m2[c].clear();
      for (int l = 0; l < m; ++l)
        m2[c].push_back(p2.is_zero() ? field_.zero()
                                     : p2.eval(domain_.betas[l]));
    }
    have_result = true;
  }

  auto finish = [&](const std::string& status, bool updated) {
    out.status = status;
    out.updated = updated;
    record_.live.assign(live_.begin(), live_.end());
    record_.included.assign(included.begin(), included.end());
    record_.excluded_norm.assign(out.excluded_norm.begin(),
                                 out.excluded_norm.end());
    record_.disqualified.assign(out.disqualified.begin(),
                                out.disqualified.end());
    record_.flagged.assign(out.flagged.begin(), out.flagged.end());
    record_.masked_sigma1 = out.masked_sigma1.get_str();
    record_.status = status;
    for (const auto& [a, bden] : out.quotients)
      record_.quotients.push_back(a.get_str() + "/" + bden.get_str());
    record_.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    attack_ = nullptr;
    return out;
  };

  if (!have_result) return finish("low-trust-denominator", false);
  out.masked_sigma1 = m1.value();

  // Quotients and the real aggregate.
  auto qb = quotient_bounds(params_.n, params_.d, params_.q,
                            approx_.int_coeffs);
  FieldElement m1_inv = m1.inv();
  out.g.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t l = c / len, slot = c % len;
    FieldElement quot = m2[slot][l] * m1_inv;
    auto [num, den] = rational_reconstruct(quot, qb.b2, qb.b1);
    out.g[c] = g0_norm * mpq_class(num, den).get_d() /
               static_cast<double>(params_.q);
    out.quotients.emplace_back(num, den);
  }
  return finish("ok", true);
}

}  // namespace byitfl
