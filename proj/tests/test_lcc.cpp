#include <doctest.h>

#include <map>

#include "byitfl/lcc.hpp"

using namespace byitfl;

namespace {
Field f97(97);
}

TEST_CASE("domain points are distinct and avoid the anchor") {
  EvalDomain dom = EvalDomain::make(f97, 8, 2, 2);
  CHECK(dom.alphas.size() == 8);
  CHECK(dom.betas.size() == 4);
  CHECK(dom.alpha(1).value() == 1);
  CHECK(dom.alpha(8).value() == 8);
  CHECK(dom.betas[0].value() == 9);
  CHECK(dom.betas[3].value() == 12);
  CHECK(dom.pack_degree() == 3);
  // not enough room in a tiny field
  Field tiny(11);
  CHECK_THROWS_AS(EvalDomain::make(tiny, 8, 2, 2), DomainError);
}

TEST_CASE("encode/decode round trip recovers the packed secrets") {
  EvalDomain dom = EvalDomain::make(f97, 8, 2, 1);
  Rng rng(7);
  std::vector<FieldElement> v = {f97.from_int(5), f97.from_int(12),
                                 f97.from_int(30), f97.from_int(44),
                                 f97.from_int(96)};
  SecretBundle b = SecretBundle::from_vector(v, dom, rng);
  REQUIRE(b.subvectors.size() == 2);
  REQUIRE(b.slot_len() == 3);  // ceil(5/2), zero-padded
  CHECK(b.subvectors[1][2].is_zero());
  std::vector<PackedShare> shares = lcc_encode(b, dom, "x");
  REQUIRE(shares.size() == 8);
  for (std::size_t c = 0; c < b.slot_len(); ++c) {
    FieldPoly poly = decode_coordinate(shares, dom, c);
    CHECK(poly.degree() <= dom.pack_degree());
    std::vector<FieldElement> evals = data_evaluations(poly, dom);
    for (int l = 0; l < 2; ++l) CHECK(evals[l] == b.subvectors[l][c]);
  }
}

TEST_CASE("replicated scalar takes the same value at every data point") {
  EvalDomain dom = EvalDomain::make(f97, 7, 3, 2);
  Rng rng(9);
  FieldElement s = f97.from_int(41);
  std::vector<PackedShare> shares = replicate_scalar_encode(s, dom, rng, "r");
  FieldPoly poly = decode_coordinate(shares, dom, 0);
  for (const FieldElement& ev : data_evaluations(poly, dom)) CHECK(ev == s);
}

TEST_CASE("share arithmetic mirrors polynomial arithmetic") {
  EvalDomain dom = EvalDomain::make(f97, 9, 2, 1);
  Rng rng(11);
  auto vec = [&](long base) {
    std::vector<FieldElement> v;
    for (long i = 0; i < 4; ++i) v.push_back(f97.from_int(base + 3 * i));
    return v;
  };
  SecretBundle ba = SecretBundle::from_vector(vec(2), dom, rng);
  SecretBundle bb = SecretBundle::from_vector(vec(19), dom, rng);
  auto sa = lcc_encode(ba, dom, "a"), sb = lcc_encode(bb, dom, "b");

  SUBCASE("addition") {
    std::vector<PackedShare> sum;
    for (std::size_t i = 0; i < sa.size(); ++i)
      sum.push_back(share_add(sa[i], sb[i]));
    FieldPoly poly = decode_coordinate(sum, dom, 1);
    auto evals = data_evaluations(poly, dom);
    for (int l = 0; l < 2; ++l)
      CHECK(evals[l] == ba.subvectors[l][1] + bb.subvectors[l][1]);
  }

  SUBCASE("multiplication by a replicated scalar scales every slot") {
    FieldElement s = f97.from_int(13);
    auto sc = replicate_scalar_encode(s, dom, rng, "s");
    std::vector<PackedShare> prod;
    for (std::size_t i = 0; i < sa.size(); ++i)
      prod.push_back(share_mul(sa[i], sc[i]));
    CHECK(prod[0].degree_bound == 2 * dom.pack_degree());
    FieldPoly poly = decode_coordinate(prod, dom, 0);
    auto evals = data_evaluations(poly, dom);
    for (int l = 0; l < 2; ++l) CHECK(evals[l] == ba.subvectors[l][0] * s);
  }

  SUBCASE("polynomial evaluation on a scalar share") {
    // h(y) = 3 + 2y + y^2 applied share-locally
    std::vector<FieldElement> h = {f97.from_int(3), f97.from_int(2), f97.one()};
    FieldElement s = f97.from_int(10);
    auto sc = replicate_scalar_encode(s, dom, rng, "s");
    std::vector<PackedShare> out;
    for (const auto& sh : sc) out.push_back(apply_poly_to_share(h, sh));
    CHECK(out[0].degree_bound == 2 * dom.pack_degree());
    FieldPoly poly = decode_coordinate(out, dom, 0);
    FieldElement expect = f97.from_int(3 + 2 * 10 + 100);
    for (const FieldElement& ev : data_evaluations(poly, dom))
      CHECK(ev == expect);
  }
}

TEST_CASE("a single share of a fresh sharing is uniform over the mask") {
  // m=1, t=1: enumerate the mask exhaustively in a small field; the observed
  // share value at alpha_1 must hit every residue exactly once, for any secret.
  Field f(101);
  EvalDomain dom = EvalDomain::make(f, 3, 1, 1);
  for (long secret : {0L, 17L, 100L}) {
    std::map<mpz_class, int> counts;
    for (long mask = 0; mask < 101; ++mask) {
      SecretBundle b;
      b.subvectors = {{f.from_int(secret)}};
      b.masks = {{f.from_int(mask)}};
      auto polys = lcc_encode_polys(b, dom);
      counts[polys[0].eval(dom.alpha(1)).value()]++;
    }
    CHECK(counts.size() == 101);
    for (const auto& [_, c] : counts) CHECK(c == 1);
  }
}

TEST_CASE("share serialization round trip") {
  EvalDomain dom = EvalDomain::make(f97, 5, 1, 2);
  Rng rng(3);
  auto shares =
      lcc_encode(SecretBundle::from_vector({f97.from_int(7)}, dom, rng), dom,
                 "tag");
  ByteWriter w;
  shares[2].serialize(w);
  std::vector<std::uint8_t> buf = w.take();
  ByteReader r(buf);
  PackedShare back = PackedShare::deserialize(r, f97);
  CHECK(back.owner == shares[2].owner);
  CHECK(back.values == shares[2].values);
  CHECK(back.degree_bound == shares[2].degree_bound);
  CHECK(back.source_tag == shares[2].source_tag);
}
