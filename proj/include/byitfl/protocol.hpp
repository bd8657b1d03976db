#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "byitfl/itvss.hpp"
#include "byitfl/lcc.hpp"
#include "byitfl/quantizer.hpp"
#include "byitfl/relu_poly.hpp"
#include "byitfl/rerandom.hpp"
#include "byitfl/simnet.hpp"

namespace byitfl {

struct ProtocolError : std::runtime_error {
  explicit ProtocolError(const std::string& why)
      : std::runtime_error("protocol: " + why) {}
};
struct LowTrustDenominator : std::runtime_error {
  LowTrustDenominator()
      : std::runtime_error("protocol: trust-score denominator is zero") {}
};

// Feasibility bound: n >= 2b + (k+2)(m+t-1) + p_drop + 1.
int min_users(int b, int k, int m, int t, int p_drop);

enum class Phase { Share = 0, NormCheck, Compute, Mask, Reconstruct };
const char* phase_name(Phase p);

struct ProtocolParams {
  int n = 0;
  int b = 0;
  int t = 1;
  int p_drop = 0;
  int m = 1;
  int k = 2;
  int d = 1;     // model dimension
  long q = 16;   // quantization level
  double epsilon = 0.02;
  double eta = 0.5;    // global learning rate
  double eta_u = 0.1;  // local learning rate

  // Throws ProtocolError naming the violated inequality.
  void check() const;
};

// Smallest prime satisfying both field-size guards plus distinct-point room.
mpz_class choose_prime(const ProtocolParams& p,
                       const std::vector<mpz_class>& h_int_coeffs);

enum class AttackKind {
  None,
  TrimAttack,
  LabelFlip,
  ScaleUpdate,
  RandomShares,
  InconsistentDeal,
  WrongComputation,
  SignFlip,
};

struct AttackSpec {
  AttackKind kind = AttackKind::None;
  std::set<int> members;  // attacking party ids, |members| <= b
  double factor = 2.0;    // ScaleUpdate multiplier
  std::set<int> dropouts;
  Phase drop_phase = Phase::NormCheck;
};

struct AggregateOutcome {
  bool updated = false;
  std::string status;  // "ok", "low-trust-denominator", or abort reason
  std::vector<double> g;                                  // length d
  std::vector<std::pair<mpz_class, mpz_class>> quotients; // per coordinate
  std::set<int> included;       // users whose terms entered the sums
  std::set<int> excluded_norm;  // failed the norm check this round
  std::set<int> disqualified;   // VSS-disqualified dealers
  std::set<int> flagged;        // senders of RS-identified wrong shares
  mpz_class masked_sigma1 = 0;  // decoded lambda*Sigma1 residue
};

// Single-machine oracle: Eq.-level aggregation over the same quantized
// inputs, with the same integer ReLU coefficients.
struct PlainAggregate {
  mpz_class sigma1;                // integer Sigma1
  std::vector<mpz_class> sigma2;   // integer Sigma2 coordinates, length d
  std::vector<std::pair<mpz_class, mpz_class>> quotients;  // reduced
  std::vector<double> g;
};
PlainAggregate plaintext_aggregate(const std::map<int, QuantizedUpdate>& updates,
                                   const QuantizedUpdate& g0, double g0_norm,
                                   const std::vector<mpz_class>& h_int_coeffs,
                                   long q, const std::set<int>& include);

// Sum of squared centered lifts; the Eq. (5) magnitude test.
mpz_class norm_check_value(const QuantizedUpdate& u);
bool norm_check_passes(const mpz_class& norm_sq, long q, double epsilon);

struct RoundRecord {
  std::vector<int> live;
  std::vector<int> included;
  std::vector<int> excluded_norm;
  std::vector<int> disqualified;
  std::vector<int> flagged;
  std::string masked_sigma1;
  std::vector<std::string> quotients;
  std::string status;
  long elapsed_ms = 0;
};

class ProtocolEngine {
 public:
  ProtocolEngine(const Field& f, const ProtocolParams& params,
                 const ReluApprox& approx, std::uint64_t seed);

  // One global iteration.  `updates` maps user id (1..n) to its quantized
  // normalized update; users absent from the map sit the round out.
  AggregateOutcome run_iteration(const std::map<int, QuantizedUpdate>& updates,
                                 const QuantizedUpdate& g0, double g0_norm,
                                 const AttackSpec& attack = {});

  const Network& net() const { return net_; }
  const RoundRecord& record() const { return record_; }
  const EvalDomain& domain() const { return domain_; }

 private:
  struct VssOutcome {
    std::set<int> accepted;
    // induced[dealer][recipient] = per-coordinate share values
    std::map<int, std::map<int, std::vector<FieldElement>>> induced;
  };

  bool attack_active(int party, Phase phase) const;
  void corrupt_values(std::vector<FieldElement>& vals, int party);
  void corrupt_poly(FieldPoly& p, int party);
  void corrupt_share(BivariateShare& s, int party);
  void advance_to(Phase phase);

  VssOutcome run_vss_batch(const std::string& tag,
                           const std::map<int, std::vector<FieldPoly>>& embedded,
                           int degree);

  // RS-decode values sent to the federator; flags error senders.
  FieldPoly decode_to_federator(
      const std::map<int, FieldElement>& by_sender, int degree,
      std::set<int>* flagged);

  Rng& party_rng(int party);

  const Field& field_;
  ProtocolParams params_;
  const ReluApprox& approx_;
  EvalDomain domain_;
  Network net_;
  std::deque<Rng> honest_rng_;  // index 0 = federator
  Rng adv_rng_;
  Phase phase_ = Phase::Share;
  const AttackSpec* attack_ = nullptr;
  std::set<int> live_;
  RoundRecord record_;
};

}  // namespace byitfl
