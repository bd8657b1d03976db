#include "byitfl/quantizer.hpp"

#include <cmath>

namespace byitfl {

std::vector<double> normalize(const std::vector<double>& g) {
  double ss = 0.0;
  for (double x : g) ss += x * x;
  if (ss == 0.0) throw ZeroUpdate();
  double inv = 1.0 / std::sqrt(ss);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i] * inv;
  return out;
}

QuantizedUpdate quantize(const std::vector<double>& g_norm,
                         const QuantConfig& cfg, Rng& rng) {
  const Field& f = *cfg.field;
  QuantizedUpdate out;
  out.values.reserve(g_norm.size());
  for (double x : g_norm) {
    if (x < -1.0 - 1e-12 || x > 1.0 + 1e-12)
      throw RangeError("coordinate outside [-1, 1]");
    double scaled = static_cast<double>(cfg.q) * std::min(1.0, std::max(-1.0, x));
    double fl = std::floor(scaled);
    double frac = scaled - fl;
    long lo = static_cast<long>(fl);
    long v = (rng.real01() < frac) ? lo + 1 : lo;
    if (v > cfg.q) v = cfg.q;
    if (v < -cfg.q) v = -cfg.q;
    out.values.push_back(f.from_int(v));
  }
  return out;
}

std::vector<double> dequantize(const QuantizedUpdate& u,
                               const QuantConfig& cfg) {
  std::vector<double> out;
  out.reserve(u.values.size());
  for (const auto& e : u.values) {
    mpz_class lifted = e.lift_signed();
    if (lifted > cfg.q || lifted < -mpz_class(cfg.q))
      throw WrapAroundDetected("coordinate magnitude exceeds q");
    out.push_back(lifted.get_d() / static_cast<double>(cfg.q));
  }
  return out;
}

mpz_class paper_field_bound(int n, int d, long q, int k, const mpz_class& s) {
  mpz_class dk, q2k1;
  mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d),
                static_cast<unsigned long>(k));
  mpz_ui_pow_ui(q2k1.get_mpz_t(), static_cast<unsigned long>(q),
                static_cast<unsigned long>(2 * k + 1));
  return 2 * n * dk * q2k1 * s + 1;
}

QuotientBounds quotient_bounds(int n, int d, long q,
                               const std::vector<mpz_class>& h_int_coeffs) {
  mpz_class dq2 = mpz_class(d) * q * q;
  mpz_class b1 = 0;
  mpz_class pow = 1;
  for (const auto& h : h_int_coeffs) {
    b1 += abs(h) * pow;
    pow *= dq2;
  }
  b1 *= n;
  if (b1 == 0) b1 = 1;
  QuotientBounds qb;
  qb.b1 = b1;
  qb.b2 = b1 * q;
  return qb;
}

ParamCheck validate_params(const QuantConfig& cfg,
                           const std::vector<mpz_class>& h_int_coeffs) {
  ParamCheck res;
  if (cfg.field == nullptr) {
    res.ok = false;
    res.reason = "no field configured";
    return res;
  }
  const mpz_class& p = cfg.field->prime();
  if (!is_prime(p)) {
    res.ok = false;
    res.reason = "P is not prime";
    return res;
  }
  mpz_class bound = paper_field_bound(cfg.n, cfg.d, cfg.q, cfg.k,
                                      cfg.coeff_scale);
  if (p < bound) {
    res.ok = false;
    res.reason = "violates P >= 2*n*d^k*q^(2k+1)*s + 1";
    return res;
  }
  auto qb = quotient_bounds(cfg.n, cfg.d, cfg.q, h_int_coeffs);
  if (2 * qb.b1 * qb.b2 >= p) {
    res.ok = false;
    res.reason = "violates rational-reconstruction bound 2*B1*B2 < P";
    return res;
  }
  return res;
}

}  // namespace byitfl
