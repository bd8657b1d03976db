#pragma once

#include <vector>

#include "byitfl/field.hpp"
#include "byitfl/rng.hpp"

namespace byitfl {

struct ZeroUpdate : std::runtime_error {
  ZeroUpdate() : std::runtime_error("quantizer: zero update vector") {}
};
struct RangeError : std::runtime_error {
  explicit RangeError(const std::string& why)
      : std::runtime_error("quantizer: " + why) {}
};
struct WrapAroundDetected : std::runtime_error {
  explicit WrapAroundDetected(const std::string& why)
      : std::runtime_error("quantizer: wrap-around: " + why) {}
};

struct QuantConfig {
  long q = 1024;        // 2q+1 quantization intervals
  const Field* field = nullptr;
  int d = 0;            // model dimension (before padding)
  int k = 6;            // trust-score polynomial degree
  int n = 0;            // user count
  mpz_class coeff_scale = 1;  // power-of-ten embedding scale of the fit
};

struct QuantizedUpdate {
  std::vector<FieldElement> values;  // length d
  int source = 0;
};

struct ParamCheck {
  bool ok = true;
  std::string reason;
};

// g / ||g||_2.  Throws ZeroUpdate for the all-zero vector.
std::vector<double> normalize(const std::vector<double>& g);

// Element-wise unbiased stochastic rounding of q*x, then phi into F_P.
// Every coordinate must lie in [-1, 1].
QuantizedUpdate quantize(const std::vector<double>& g_norm,
                         const QuantConfig& cfg, Rng& rng);

// Centered lift then /q.  Guards against values outside [-q, q].
std::vector<double> dequantize(const QuantizedUpdate& u,
                               const QuantConfig& cfg);

// The wrap-around bound: P >= 2 n d^k q^{2k+1} * s + 1 (s accounts for the
// integer embedding of the trust-score coefficients).
mpz_class paper_field_bound(int n, int d, long q, int k, const mpz_class& s);

// |Sigma1| <= B1 = n * sum_j |h_j| (d q^2)^j over the embedded integer
// coefficients; |Sigma2| coordinates <= B2 = q * B1.  Rational
// reconstruction of the quotient needs 2*B1*B2 < P.
struct QuotientBounds {
  mpz_class b1;
  mpz_class b2;
};
QuotientBounds quotient_bounds(int n, int d, long q,
                               const std::vector<mpz_class>& h_int_coeffs);

// Checks both the wrap-around bound and the rational-reconstruction bound.
ParamCheck validate_params(const QuantConfig& cfg,
                           const std::vector<mpz_class>& h_int_coeffs);

}  // namespace byitfl
