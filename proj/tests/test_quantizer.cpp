#include <doctest.h>

#include <cmath>

#include "byitfl/quantizer.hpp"

using namespace byitfl;

TEST_CASE("normalize produces a unit vector and rejects zero") {
  std::vector<double> v = {3.0, 4.0};
  auto u = normalize(v);
  CHECK(u[0] == doctest::Approx(0.6));
  CHECK(u[1] == doctest::Approx(0.8));
  CHECK_THROWS_AS(normalize({0.0, 0.0}), ZeroUpdate);
}

TEST_CASE("quantized values stay within [-q, q] and integers are exact") {
  Field f(100003);
  QuantConfig cfg;
  cfg.q = 64;
  cfg.field = &f;
  cfg.d = 3;
  Rng rng(1);
  QuantizedUpdate u = quantize({1.0, -1.0, 0.25}, cfg, rng);
  CHECK(u.values[0].lift_signed() == 64);
  CHECK(u.values[1].lift_signed() == -64);
  mpz_class third = u.values[2].lift_signed();
  CHECK(third >= 16);
  CHECK(third <= 17);
  for (int i = 0; i < 200; ++i) {
    QuantizedUpdate w = quantize({0.999, -0.999, 0.0}, cfg, rng);
    for (const auto& val : w.values) {
      CHECK(val.lift_signed() >= -64);
      CHECK(val.lift_signed() <= 64);
    }
    CHECK(w.values[2].is_zero());
  }
  CHECK_THROWS_AS(quantize({1.5, 0.0, 0.0}, cfg, rng), RangeError);
}

TEST_CASE("stochastic rounding is unbiased") {
  Field f(100003);
  QuantConfig cfg;
  cfg.q = 64;
  cfg.field = &f;
  cfg.d = 20000;
  Rng rng(2);
  for (double x : {0.31, -0.77, 0.003}) {
    std::vector<double> v(cfg.d, x);
    QuantizedUpdate u = quantize(v, cfg, rng);
    double sum = 0.0, sumsq = 0.0;
    for (const auto& val : u.values) {
      double lv = val.lift_signed().get_d();
      sum += lv;
      sumsq += lv * lv;
    }
    double mean = sum / cfg.d;
    double var = sumsq / cfg.d - mean * mean;
    double se = std::sqrt(var / cfg.d) + 1e-12;
    CHECK(std::fabs(mean - cfg.q * x) <= 4 * se);
  }
}

TEST_CASE("dequantize inverts quantize up to half a step") {
  Field f(100003);
  QuantConfig cfg;
  cfg.q = 256;
  cfg.field = &f;
  cfg.d = 4;
  Rng rng(3);
  std::vector<double> v = {0.5, -0.25, 0.9, -1.0};
  QuantizedUpdate u = quantize(v, cfg, rng);
  auto back = dequantize(u, cfg);
  for (int i = 0; i < 4; ++i)
    CHECK(std::fabs(back[i] - v[i]) <= 1.0 / cfg.q);
}

TEST_CASE("field bound formula and parameter validation") {
  // n=2, d=2, q=4, k=1, s=1: P >= 2*2*2*4^3*1 + 1 = 513
  CHECK(paper_field_bound(2, 2, 4, 1, 1) == 513);

  std::vector<mpz_class> h = {1, 2};  // degree-1 embedded coefficients
  QuotientBounds qb = quotient_bounds(2, 2, 4, h);
  // B1 = n * (|h0| + |h1| * d q^2) = 2 * (1 + 2*32) = 130, B2 = q*B1
  CHECK(qb.b1 == 130);
  CHECK(qb.b2 == 520);

  QuantConfig cfg;
  cfg.q = 4;
  cfg.d = 2;
  cfg.k = 1;
  cfg.n = 2;
  cfg.coeff_scale = 1;
  Field small(101);
  cfg.field = &small;
  ParamCheck bad = validate_params(cfg, h);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.reason.empty());
  Field big(next_prime_at_least(2 * qb.b1 * qb.b2 + 1));
  cfg.field = &big;
  CHECK(validate_params(cfg, h).ok);
}
