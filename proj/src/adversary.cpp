#include "byitfl/adversary.hpp"

#include <cmath>

namespace byitfl {

void apply_data_attack(const AttackSpec& spec, Dataset& data) {
  if (spec.kind != AttackKind::LabelFlip) return;
  if (data.num_classes < 2)
    throw Unsupported("label flipping needs a classification task");
  for (int user : spec.members) {
    if (user < 1 || static_cast<std::size_t>(user) > data.partition.size())
      throw Unsupported("attack member outside the user range");
    for (std::size_t idx : data.partition[user - 1])
      data.y[idx] = data.num_classes - 1 - data.y[idx];
  }
}

std::vector<double> apply_update_attack(
    const AttackSpec& spec, int user, const std::vector<double>& own,
    const std::map<int, std::vector<double>>& honest_updates, Rng& adv_rng) {
  if (!spec.members.count(user)) return own;
  switch (spec.kind) {
    case AttackKind::SignFlip: {
      std::vector<double> out(own.size());
      for (std::size_t i = 0; i < own.size(); ++i) out[i] = -own[i];
      return out;
    }
    case AttackKind::TrimAttack: {
      if (honest_updates.empty()) return own;
      std::size_t d = own.size();
      std::vector<double> mu(d, 0.0), sd(d, 0.0);
      for (const auto& [_, u] : honest_updates)
        for (std::size_t i = 0; i < d; ++i) mu[i] += u[i];
      for (auto& v : mu) v /= static_cast<double>(honest_updates.size());
      for (const auto& [_, u] : honest_updates)
        for (std::size_t i = 0; i < d; ++i)
          sd[i] += (u[i] - mu[i]) * (u[i] - mu[i]);
      for (auto& v : sd) v = std::sqrt(v / honest_updates.size());
      double z = adv_rng.uniform_real(3.0, 4.0);
      std::vector<double> out(d);
      for (std::size_t i = 0; i < d; ++i) {
        double sign = mu[i] >= 0.0 ? 1.0 : -1.0;
        out[i] = mu[i] - z * sd[i] * sign;
      }
      return out;
    }
    default:
      return own;
  }
}

QuantizedUpdate forge_quantized(const AttackSpec& spec, int user,
                                const QuantizedUpdate& honest, const Field& f) {
  if (spec.kind != AttackKind::ScaleUpdate || !spec.members.count(user))
    return honest;
  FieldElement factor = f.from_int(static_cast<long>(std::lround(spec.factor)));
  QuantizedUpdate out = honest;
  for (auto& v : out.values) v *= factor;
  return out;
}

}  // namespace byitfl
