#pragma once

#include <optional>
#include <vector>

#include "byitfl/field.hpp"

namespace byitfl {

struct InsufficientRedundancy : std::runtime_error {
  explicit InsufficientRedundancy(const std::string& why)
      : std::runtime_error("rs: insufficient redundancy: " + why) {}
};
struct DecodeFailure : std::runtime_error {
  explicit DecodeFailure(const std::string& why)
      : std::runtime_error("rs: decode failure: " + why) {}
};

// Evaluations of a degree-<=D polynomial at distinct points, with up to
// b_max wrong values; std::nullopt marks an erasure (dropout).
struct NoisyCodeword {
  std::vector<std::pair<FieldElement, std::optional<FieldElement>>> entries;
  int degree_bound = 0;
};

struct RsResult {
  FieldPoly poly;
  // Indices into entries of present values that disagree with poly.
  std::vector<std::size_t> error_positions;
};

// Berlekamp-Welch error-and-erasure decoding.  Requires
// (#present entries) >= degree_bound + 2*b_max + 1.
RsResult rs_decode(const NoisyCodeword& cw, int b_max);

}  // namespace byitfl
