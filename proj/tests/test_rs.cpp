#include <doctest.h>

#include <algorithm>

#include "byitfl/rng.hpp"
#include "byitfl/rs.hpp"

using namespace byitfl;

namespace {

FieldPoly random_poly(const Field& f, int deg, Rng& rng) {
  std::vector<FieldElement> c;
  for (int i = 0; i <= deg; ++i) c.push_back(rng.uniform(f));
  return FieldPoly(c);
}

}  // namespace

TEST_CASE("exact decode under random errors and erasures") {
  Field f(mpz_class("1000003"));
  Rng rng(20240601);
  for (int trial = 0; trial < 1000; ++trial) {
    int deg = 1 + static_cast<int>(rng.uniform_u64(4));
    int b = static_cast<int>(rng.uniform_u64(3));
    int erasures = static_cast<int>(rng.uniform_u64(3));
    int n = deg + 2 * b + 1 + erasures + static_cast<int>(rng.uniform_u64(3));
    FieldPoly truth = random_poly(f, deg, rng);

    NoisyCodeword cw;
    cw.degree_bound = deg;
    for (int i = 1; i <= n; ++i) {
      FieldElement x = f.from_int(i);
      cw.entries.push_back({x, truth.eval(x)});
    }
    // plant erasures then errors on distinct positions
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = i;
    std::shuffle(pos.begin(), pos.end(), rng.engine());
    for (int e = 0; e < erasures; ++e) cw.entries[pos[e]].second.reset();
    std::vector<std::size_t> planted;
    for (int e = 0; e < b; ++e) {
      int p = pos[erasures + e];
      FieldElement wrong = *cw.entries[p].second + f.one();
      cw.entries[p].second = wrong;
      planted.push_back(p);
    }
    std::sort(planted.begin(), planted.end());

    RsResult res = rs_decode(cw, b);
    CHECK(res.poly == truth);
    CHECK(res.error_positions == planted);
  }
}

TEST_CASE("beyond the radius the planted word is never silently returned") {
  Field f(mpz_class("1000003"));
  Rng rng(77);
  int silent = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int deg = 2, b = 1;
    int n = deg + 2 * b + 1;  // exactly at capacity for b errors
    FieldPoly truth = random_poly(f, deg, rng);
    NoisyCodeword cw;
    cw.degree_bound = deg;
    for (int i = 1; i <= n; ++i) {
      FieldElement x = f.from_int(i);
      cw.entries.push_back({x, truth.eval(x)});
    }
    // plant b+1 errors: more than the decoder is allowed to fix
    for (int e = 0; e < b + 1; ++e)
      cw.entries[e].second = *cw.entries[e].second + f.from_int(1 + e);
    try {
      RsResult res = rs_decode(cw, b);
      CHECK(static_cast<int>(res.error_positions.size()) <= b);
      if (res.poly == truth) ++silent;
    } catch (const DecodeFailure&) {
      // refusing to decode is the expected common outcome
    }
  }
  CHECK(silent == 0);
}

TEST_CASE("insufficient redundancy is rejected up front") {
  Field f(101);
  FieldPoly p({f.from_int(1), f.from_int(2), f.from_int(3)});
  NoisyCodeword cw;
  cw.degree_bound = 2;
  for (int i = 1; i <= 4; ++i) {
    FieldElement x = f.from_int(i);
    cw.entries.push_back({x, p.eval(x)});
  }
  CHECK_THROWS_AS(rs_decode(cw, 1), InsufficientRedundancy);  // need 5 present
  RsResult ok = rs_decode(cw, 0);
  CHECK(ok.poly == p);
}

TEST_CASE("erasure-only decode at exactly degree+1 survivors") {
  Field f(101);
  FieldPoly p({f.from_int(9), f.from_int(4)});
  NoisyCodeword cw;
  cw.degree_bound = 1;
  for (int i = 1; i <= 5; ++i) {
    FieldElement x = f.from_int(i);
    cw.entries.push_back({x, p.eval(x)});
  }
  cw.entries[0].second.reset();
  cw.entries[2].second.reset();
  cw.entries[4].second.reset();
  RsResult res = rs_decode(cw, 0);
  CHECK(res.poly == p);
  CHECK(res.error_positions.empty());
}
