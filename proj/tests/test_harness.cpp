#include <doctest.h>

#include <cmath>

#include "byitfl/harness.hpp"

using namespace byitfl;

namespace {

Dataset tiny_blobs() {
  return Dataset::synthetic_blobs(/*n_users=*/4, /*per_user=*/30,
                                  /*root_size=*/20, /*test_size=*/60,
                                  /*features=*/3, /*sep=*/3.0, {}, 11);
}

void check_gradient(Model& model, const Dataset& data) {
  std::vector<std::size_t> idx = data.root;
  std::vector<double> g = model.grad(data, idx);
  double h = 1e-6;
  for (int i = 0; i < model.dim(); i += std::max(1, model.dim() / 7)) {
    Model up = model, dn = model;
    up.w[i] += h;
    dn.w[i] -= h;
    double fd = (up.loss(data, idx) - dn.loss(data, idx)) / (2 * h);
    CHECK(std::fabs(fd - g[i]) <=
          1e-5 * std::max(1.0, std::max(std::fabs(fd), std::fabs(g[i]))));
  }
}

}  // namespace

TEST_CASE("synthetic blobs have the requested shape") {
  Dataset d = tiny_blobs();
  CHECK(d.features() == 3);
  CHECK(d.partition.size() == 4);
  for (const auto& p : d.partition) CHECK(p.size() == 30);
  CHECK(d.root.size() == 20);
  CHECK(d.test.size() == 60);
  CHECK(d.X.size() == 4 * 30 + 20 + 60);
  int ones = 0;
  for (std::size_t i : d.test) ones += d.y[i];
  CHECK(ones == 30);  // balanced test set
  // class1_share steers the per-user label mix
  Dataset skew = Dataset::synthetic_blobs(2, 10, 4, 4, 2, 1.0,
                                          {0.0, 1.0}, 3);
  for (std::size_t i : skew.partition[0]) CHECK(skew.y[i] == 0);
  for (std::size_t i : skew.partition[1]) CHECK(skew.y[i] == 1);
}

TEST_CASE("logistic gradient matches finite differences") {
  Dataset d = tiny_blobs();
  Model m;
  m.kind = ModelKind::Logistic;
  m.in_dim = 3;
  m.init(1);
  m.w = {0.3, -0.2, 0.5, 0.1};
  check_gradient(m, d);
}

TEST_CASE("mlp gradient matches finite differences") {
  Dataset d = tiny_blobs();
  Model m;
  m.kind = ModelKind::Mlp;
  m.in_dim = 3;
  m.hidden = 4;
  m.init(42);
  REQUIRE(m.dim() == 4 * 4 + 4 + 1);
  check_gradient(m, d);
}

TEST_CASE("local training steps reduce the loss on separable data") {
  Dataset d = tiny_blobs();
  Model m;
  m.kind = ModelKind::Logistic;
  m.in_dim = 3;
  m.init(1);
  double before = m.loss(d, d.root);
  std::vector<double> delta = local_update(m, d, d.root, 0.5, 5);
  for (int i = 0; i < m.dim(); ++i) m.w[i] += delta[i];
  CHECK(m.loss(d, d.root) < before);
}

TEST_CASE("fedavg is the coordinate mean") {
  std::map<int, std::vector<double>> ups = {{1, {1.0, 3.0}}, {2, {3.0, 5.0}}};
  CHECK(aggregate_fedavg(ups) == std::vector<double>{2.0, 4.0});
  CHECK_THROWS_AS(aggregate_fedavg({}), HarnessError);
}

TEST_CASE("exact fltrust zeroes opposite updates and keeps aligned ones") {
  std::vector<double> g0 = {2.0, 0.0};
  std::map<int, std::vector<double>> ups = {
      {1, {4.0, 0.0}},    // cosine 1
      {2, {-1.0, 0.0}}};  // cosine -1 -> trust 0
  FlTrustOptions opt;
  opt.exact_relu = true;
  std::vector<double> g = aggregate_fltrust(ups, g0, opt, 0);
  // only user 1 contributes; result is ||g0|| * normalized(u1)
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[1] == doctest::Approx(0.0));
  std::map<int, std::vector<double>> all_bad = {{1, {-1.0, 0.0}}};
  CHECK_THROWS_AS(aggregate_fltrust(all_bad, g0, opt, 0),
                  LowTrustDenominator);
}

TEST_CASE("training is deterministic and improves on clean data") {
  TrainConfig cfg;
  cfg.params.n = 4;
  cfg.params.eta = 1.0;
  cfg.params.eta_u = 0.5;
  cfg.aggregator = "fedavg";
  cfg.rounds = 10;
  cfg.seed = 5;
  Dataset d = tiny_blobs();
  TrainResult r1 = train(cfg, d);
  TrainResult r2 = train(cfg, d);
  REQUIRE(r1.metrics.size() == 10);
  CHECK(r1.final_model.w == r2.final_model.w);
  CHECK(r1.metrics.back().accuracy > 0.85);
  CHECK(r1.metrics.back().loss < r1.metrics.front().loss);
  CHECK(metrics_csv_row(r1.metrics[0]).rfind("1,fedavg,none,", 0) == 0);
  CHECK(std::string(metrics_csv_header()) ==
        "round,aggregator,attack,loss,accuracy,excluded_count");
}
