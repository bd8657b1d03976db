#pragma once

#include <utility>
#include <vector>

#include <gmpxx.h>

#include "byitfl/field.hpp"

namespace byitfl {

struct FitError : std::runtime_error {
  explicit FitError(const std::string& why)
      : std::runtime_error("relu fit: " + why) {}
};
struct ParamsInfeasible : std::runtime_error {
  explicit ParamsInfeasible(const std::string& why)
      : std::runtime_error("params infeasible: " + why) {}
};

// Degree-k polynomial approximation of ReLU, with its integer embedding for
// evaluation on raw field dot products.
struct ReluApprox {
  int k = 0;
  // h_0..h_k for the fit domain [lo, hi].
  std::vector<double> real_coeffs;
  std::pair<double, double> fit_interval{-1.0, 1.0};
  double max_abs_error = 0.0;

  // Integer embedding (filled by embed_coeffs): hhat_j = round(s * h_j *
  // q^{2(k-j)}) so that hhat(x) = s * q^{2k} * h(x / q^2) + rounding error
  // for |x| <= d*q^2.  coeff_scale is the power-of-ten s; the common factor
  // s * q^{2k} multiplies Sigma1 and Sigma2 equally and cancels in the
  // quotient.
  mpz_class coeff_scale = 0;
  std::vector<mpz_class> int_coeffs;
  long q_used = 0;

  double eval_real(double x) const;

  std::vector<FieldElement> field_coeffs(const Field& f) const;
};

// Unweighted least-squares fit of ReLU on a uniform grid of `nodes` points
// over [-hi, hi]; max_abs_error is measured on a 10x denser grid.  Falls
// back to Chebyshev-spaced nodes if the uniform system is rank-deficient.
ReluApprox fit_relu(int k, double hi, int nodes = 1001);

// Fill the integer embedding for quantization level q.  Requires the fit
// interval to be [-1, 1] (normalized cosine domain).  coeff_scale becomes
// the smallest power of ten making every nonzero scaled coefficient round
// to a nonzero integer with relative error < 1e-3.
void embed_coeffs(ReluApprox& approx, long q);

// Exact integer Horner evaluation of the embedded polynomial (test oracle
// and plaintext-mode aggregation both use this).
mpz_class eval_int_poly(const std::vector<mpz_class>& coeffs,
                        const mpz_class& x);

}  // namespace byitfl
