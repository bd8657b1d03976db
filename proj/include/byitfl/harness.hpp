#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "byitfl/protocol.hpp"

namespace byitfl {

struct HarnessError : std::runtime_error {
  explicit HarnessError(const std::string& why)
      : std::runtime_error("harness: " + why) {}
};

struct Dataset {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  int num_classes = 2;
  std::vector<std::vector<std::size_t>> partition;  // per user, 0-based
  std::vector<std::size_t> root;                    // federator's clean subset
  std::vector<std::size_t> test;

  std::size_t features() const { return X.empty() ? 0 : X[0].size(); }

  // Two Gaussian blobs at distance `sep` (in noise units) along a random
  // direction.  `class1_share` sets each user's fraction of class-1 samples;
  // index u in [0, n_users).  Root and test sets are balanced.
  static Dataset synthetic_blobs(int n_users, int per_user, int root_size,
                                 int test_size, int features, double sep,
                                 const std::vector<double>& class1_share,
                                 std::uint64_t seed);

  // IDX container (the MNIST format): big-endian magic + dims, raw payload.
  static Dataset load_idx(const std::string& images_path,
                          const std::string& labels_path, std::size_t limit);
  void partition_uniform(int n_users, std::size_t root_size,
                         std::size_t test_size, std::uint64_t seed);
};

enum class ModelKind { Logistic, Mlp };

struct Model {
  ModelKind kind = ModelKind::Logistic;
  int in_dim = 0;
  int hidden = 0;  // Mlp only
  std::vector<double> w;

  int dim() const;
  void init(std::uint64_t seed);
  double score(const std::vector<double>& x) const;  // decision value
  double loss(const Dataset& data, const std::vector<std::size_t>& idx) const;
  std::vector<double> grad(const Dataset& data,
                           const std::vector<std::size_t>& idx) const;
  double accuracy(const Dataset& data,
                  const std::vector<std::size_t>& idx) const;
};

// Eq.-(1)-style local training: `iters` gradient steps at rate eta_u from
// the current weights; returns the weight delta.
std::vector<double> local_update(const Model& model, const Dataset& data,
                                 const std::vector<std::size_t>& idx,
                                 double eta_u, int iters);

std::vector<double> aggregate_fedavg(
    const std::map<int, std::vector<double>>& updates);

// Weighted aggregation by (exact or polynomial-approximated) ReLU of the
// cosine against g0.  With `quantized`, runs the integer pipeline on
// stochastically quantized updates — the plaintext twin of the secure
// protocol (same coefficients, same quantization draws, same norm check).
struct FlTrustOptions {
  bool exact_relu = true;
  const ReluApprox* approx = nullptr;  // required when !exact_relu
  bool quantized = false;
  const Field* field = nullptr;        // required when quantized
  long q = 1024;
  double epsilon = 0.02;
  std::set<int>* excluded_out = nullptr;
};
std::vector<double> aggregate_fltrust(
    const std::map<int, std::vector<double>>& updates,
    const std::vector<double>& g0, const FlTrustOptions& opt,
    std::uint64_t quant_seed);

struct TrainConfig {
  ProtocolParams params;
  std::string aggregator = "fedavg";  // fedavg | fltrust-exact |
                                      // fltrust-approx | byitfl-secure
  AttackSpec attack;
  int rounds = 30;
  int local_iters = 1;
  ModelKind model = ModelKind::Logistic;
  int hidden = 4;
  std::uint64_t seed = 1;
  bool quantized_baseline = false;  // fltrust-approx via the integer pipeline
};

struct MetricsRow {
  int round = 0;
  std::string aggregator;
  std::string attack;
  double loss = 0.0;
  double accuracy = 0.0;
  int excluded_count = 0;
};

std::string attack_name(AttackKind k);
const char* metrics_csv_header();
std::string metrics_csv_row(const MetricsRow& r);

struct TrainResult {
  std::vector<MetricsRow> metrics;
  Model final_model;
};

TrainResult train(const TrainConfig& cfg, const Dataset& data);

}  // namespace byitfl
