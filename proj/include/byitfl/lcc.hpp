#pragma once

#include <string>
#include <vector>

#include "byitfl/field.hpp"
#include "byitfl/rng.hpp"
#include "byitfl/wire.hpp"

namespace byitfl {

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& why)
      : std::runtime_error("lcc domain: " + why) {}
};
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& why)
      : std::runtime_error("lcc shape: " + why) {}
};

// Party points alpha_1..alpha_n and data/mask points beta_1..beta_{m+t}.
// alpha_j = j and beta_l = n + l; zero is reserved as the VSS anchor.
struct EvalDomain {
  const Field* field = nullptr;
  int n = 0;
  int m = 0;
  int t = 0;
  std::vector<FieldElement> alphas;  // size n
  std::vector<FieldElement> betas;   // size m + t

  static EvalDomain make(const Field& f, int n, int m, int t);

  const FieldElement& alpha(int party) const;  // party is 1-based
  int pack_degree() const { return m + t - 1; }
};

// One party's evaluation of an encoding polynomial bundle.
struct PackedShare {
  int owner = 0;  // 1-based party index (alpha index)
  std::vector<FieldElement> values;
  int degree_bound = 0;
  std::string source_tag;

  void serialize(ByteWriter& w) const;
  static PackedShare deserialize(ByteReader& r, const Field& f);
};

// m data sub-vectors plus t uniform mask vectors, all of equal length.
struct SecretBundle {
  std::vector<std::vector<FieldElement>> subvectors;  // m x L
  std::vector<std::vector<FieldElement>> masks;       // t x L

  std::size_t slot_len() const {
    return subvectors.empty() ? 0 : subvectors[0].size();
  }

  // Partition a length-d field vector into m sub-vectors (zero-padding to a
  // multiple of m) and draw t uniform mask vectors from rng.
  static SecretBundle from_vector(const std::vector<FieldElement>& v,
                                  const EvalDomain& domain, Rng& rng);
  // Scalar replicated across all m data slots: the encoding polynomial takes
  // the same value at every beta_j, j in [m].
  static SecretBundle replicated_scalar(const FieldElement& s,
                                        const EvalDomain& domain, Rng& rng);
};

// The degree-(m+t-1) encoding polynomials, one per coordinate slot.
std::vector<FieldPoly> lcc_encode_polys(const SecretBundle& secret,
                                        const EvalDomain& domain);

std::vector<PackedShare> shares_from_polys(const std::vector<FieldPoly>& polys,
                                           const EvalDomain& domain,
                                           int degree_bound,
                                           const std::string& tag);

std::vector<PackedShare> lcc_encode(const SecretBundle& secret,
                                    const EvalDomain& domain,
                                    const std::string& tag = "");

std::vector<PackedShare> replicate_scalar_encode(const FieldElement& s,
                                                 const EvalDomain& domain,
                                                 Rng& rng,
                                                 const std::string& tag = "");

PackedShare share_add(const PackedShare& a, const PackedShare& b);
PackedShare share_mul(const PackedShare& a, const PackedShare& b);
// Horner-evaluate h (coefficients lowest first) on a scalar share.
PackedShare apply_poly_to_share(const std::vector<FieldElement>& h_field,
                                const PackedShare& a);

// Decode helpers (used by the federator and by test oracles): interpolate one
// coordinate slot of a share set back to its encoding polynomial.
FieldPoly decode_coordinate(const std::vector<PackedShare>& shares,
                            const EvalDomain& domain, std::size_t coord);
// Evaluations of poly at beta_1..beta_m.
std::vector<FieldElement> data_evaluations(const FieldPoly& poly,
                                           const EvalDomain& domain);

}  // namespace byitfl
