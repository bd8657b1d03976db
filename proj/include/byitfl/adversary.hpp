#pragma once

#include "byitfl/harness.hpp"
#include "byitfl/protocol.hpp"

namespace byitfl {

struct Unsupported : std::runtime_error {
  explicit Unsupported(const std::string& why)
      : std::runtime_error("adversary: " + why) {}
};

// LabelFlip: every member user's label y becomes C-1-y.
void apply_data_attack(const AttackSpec& spec, Dataset& data);

// Raw-update forgery.  TrimAttack uses the coordinate mean/std of the honest
// updates (full-knowledge setting); SignFlip negates the member's own update.
// Returns `own` untouched for non-members and non-update attacks.
std::vector<double> apply_update_attack(
    const AttackSpec& spec, int user, const std::vector<double>& own,
    const std::map<int, std::vector<double>>& honest_updates, Rng& adv_rng);

// Field-level forgery after honest quantization (ScaleUpdate): the submitted
// share polynomial encodes factor * g, which the norm check sees as
// factor^2 * q^2.
QuantizedUpdate forge_quantized(const AttackSpec& spec, int user,
                                const QuantizedUpdate& honest, const Field& f);

}  // namespace byitfl
