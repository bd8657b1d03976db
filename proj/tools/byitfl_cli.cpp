// byitfl command-line runner: parameter checks, ReLU fitting, protocol
// simulation, FL training, transcript replay, and an attack benchmark.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "byitfl/adversary.hpp"
#include "byitfl/harness.hpp"
#include "byitfl/protocol.hpp"

using nlohmann::json;
using namespace byitfl;

namespace {

struct Config {
  ProtocolParams params;
  std::uint64_t seed = 1;
  std::string aggregator = "byitfl-secure";
  std::string attack = "none";
  std::string dataset = "synthetic";
  std::string images, labels;
  int rounds = 30;
  int root_size = 100;
  int test_size = 400;
  int per_user = 64;
  int features = 4;
  double sep = 2.0;
  double factor = 2.0;
  int local_iters = 1;
  std::string model = "logistic";
  int hidden = 4;
};

AttackKind parse_attack(const std::string& s) {
  if (s == "none") return AttackKind::None;
  if (s == "trim") return AttackKind::TrimAttack;
  if (s == "labelflip") return AttackKind::LabelFlip;
  if (s == "scale") return AttackKind::ScaleUpdate;
  if (s == "randomshares") return AttackKind::RandomShares;
  if (s == "inconsistentdeal") return AttackKind::InconsistentDeal;
  if (s == "wrongcomputation") return AttackKind::WrongComputation;
  if (s == "signflip") return AttackKind::SignFlip;
  throw CLI::ValidationError("unknown attack: " + s);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open config: " + path);
  Config c;
  c.params.q = 1024;
  c.params.k = 6;
  c.params.epsilon = 0.02;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw CLI::ValidationError("config line " + std::to_string(lineno) +
                                 ": expected key=value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "n") c.params.n = std::stoi(val);
    else if (key == "b") c.params.b = std::stoi(val);
    else if (key == "t") c.params.t = std::stoi(val);
    else if (key == "p_drop") c.params.p_drop = std::stoi(val);
    else if (key == "m") c.params.m = std::stoi(val);
    else if (key == "k") c.params.k = std::stoi(val);
    else if (key == "d") c.params.d = std::stoi(val);
    else if (key == "q") c.params.q = std::stol(val);
    else if (key == "epsilon") c.params.epsilon = std::stod(val);
    else if (key == "eta") c.params.eta = std::stod(val);
    else if (key == "eta_u") c.params.eta_u = std::stod(val);
    else if (key == "seed") c.seed = std::stoull(val);
    else if (key == "aggregator") c.aggregator = val;
    else if (key == "attack") c.attack = val;
    else if (key == "dataset") c.dataset = val;
    else if (key == "images") c.images = val;
    else if (key == "labels") c.labels = val;
    else if (key == "rounds") c.rounds = std::stoi(val);
    else if (key == "root_size") c.root_size = std::stoi(val);
    else if (key == "test_size") c.test_size = std::stoi(val);
    else if (key == "per_user") c.per_user = std::stoi(val);
    else if (key == "features") c.features = std::stoi(val);
    else if (key == "sep") c.sep = std::stod(val);
    else if (key == "factor") c.factor = std::stod(val);
    else if (key == "local_iters") c.local_iters = std::stoi(val);
    else if (key == "model") c.model = val;
    else if (key == "hidden") c.hidden = std::stoi(val);
    else
      throw CLI::ValidationError("config line " + std::to_string(lineno) +
                                 ": unknown key '" + key + "'");
  }
  if (const char* env = std::getenv("BYITFL_SEED")) c.seed = std::stoull(env);
  return c;
}

AttackSpec make_attack(const Config& c) {
  AttackSpec spec;
  spec.kind = parse_attack(c.attack);
  spec.factor = c.factor;
  if (spec.kind != AttackKind::None)
    for (int u = 1; u <= c.params.b; ++u) spec.members.insert(u);
  return spec;
}

Dataset make_dataset(const Config& c) {
  if (c.dataset == "synthetic") {
    return Dataset::synthetic_blobs(c.params.n, c.per_user, c.root_size,
                                    c.test_size, c.features, c.sep, {},
                                    mix_seed(c.seed, 42));
  }
  if (c.dataset == "idx") {
    Dataset d = Dataset::load_idx(c.images, c.labels, 0);
    d.partition_uniform(c.params.n, c.root_size, c.test_size,
                        mix_seed(c.seed, 42));
    return d;
  }
  throw CLI::ValidationError("unknown dataset: " + c.dataset);
}

json record_json(const RoundRecord& r, int round) {
  json j;
  j["round"] = round;
  j["live"] = r.live;
  j["included"] = r.included;
  j["excluded_norm"] = r.excluded_norm;
  j["disqualified"] = r.disqualified;
  j["flagged"] = r.flagged;
  j["masked_sigma1"] = r.masked_sigma1;
  j["quotients"] = r.quotients;
  j["status"] = r.status;
  return j;
}

void append_blob(std::vector<std::uint8_t>& out,
                 const std::vector<std::uint8_t>& blob) {
  std::uint64_t len = blob.size();
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
  out.insert(out.end(), blob.begin(), blob.end());
}

// Deterministic protocol simulation on synthetic unit-vector updates;
// returns the concatenated per-round transcripts and fills `rounds_out`.
std::vector<std::uint8_t> simulate_protocol(const Config& c, json& rounds_out,
                                            json& summary) {
  ProtocolParams params = c.params;
  if (params.d == 0) params.d = 8;
  params.check();
  ReluApprox approx = fit_relu(params.k, 1.0);
  embed_coeffs(approx, params.q);
  Field field(choose_prime(params, approx.int_coeffs));

  std::vector<std::uint8_t> transcripts;
  AttackSpec attack = make_attack(c);
  int disqualified_total = 0, excluded_total = 0;
  for (int round = 1; round <= c.rounds; ++round) {
    Rng data_rng(mix_seed(c.seed, 31000 + round));
    auto draw_unit = [&] {
      std::vector<double> v(params.d);
      for (auto& x : v) x = data_rng.gaussian(0.0, 1.0);
      return normalize(v);
    };
    QuantConfig qc;
    qc.q = params.q;
    qc.field = &field;
    qc.d = params.d;
    std::uint64_t quant_seed = mix_seed(c.seed, 7700 + round);
    Rng frng(mix_seed(quant_seed, 0));
    QuantizedUpdate g0 = quantize(draw_unit(), qc, frng);
    std::map<int, QuantizedUpdate> updates;
    for (int u = 1; u <= params.n; ++u) {
      Rng urng(mix_seed(quant_seed, u));
      QuantizedUpdate qi = quantize(draw_unit(), qc, urng);
      updates.emplace(u, forge_quantized(attack, u, qi, field));
    }
    ProtocolEngine engine(field, params, approx,
                          mix_seed(c.seed, 5500 + round));
    AggregateOutcome out = engine.run_iteration(updates, g0, 1.0, attack);
    rounds_out.push_back(record_json(engine.record(), round));
    disqualified_total += static_cast<int>(out.disqualified.size());
    excluded_total += static_cast<int>(out.excluded_norm.size());
    append_blob(transcripts, engine.net().serialize_transcript());
  }
  summary["rounds"] = c.rounds;
  summary["disqualified_total"] = disqualified_total;
  summary["excluded_total"] = excluded_total;
  summary["prime"] = field.prime().get_str();
  return transcripts;
}

int run_train(const Config& c, const std::string& metrics_path,
              const std::string& summary_path) {
  TrainConfig tc;
  tc.params = c.params;
  tc.aggregator = c.aggregator;
  tc.attack = make_attack(c);
  tc.rounds = c.rounds;
  tc.local_iters = c.local_iters;
  tc.model = c.model == "mlp" ? ModelKind::Mlp : ModelKind::Logistic;
  tc.hidden = c.hidden;
  tc.seed = c.seed;
  Dataset data = make_dataset(c);

  auto start = std::chrono::steady_clock::now();
  TrainResult result = train(tc, data);
  auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();

  std::ofstream metrics(metrics_path);
  metrics << metrics_csv_header() << '\n';
  int excluded_total = 0;
  for (const auto& row : result.metrics) {
    metrics << metrics_csv_row(row) << '\n';
    excluded_total += row.excluded_count;
  }
  json summary;
  summary["aggregator"] = tc.aggregator;
  summary["attack"] = attack_name(tc.attack.kind);
  summary["final_accuracy"] = result.metrics.back().accuracy;
  summary["final_loss"] = result.metrics.back().loss;
  summary["excluded_total"] = excluded_total;
  std::ofstream(summary_path) << summary.dump(2) << '\n';
  std::cout << "final_accuracy=" << result.metrics.back().accuracy
            << " wall_ms=" << wall << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ByITFL simulator and experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", transcript_path;
  int fit_k = 6;
  std::string fit_json = "relu_coeffs.json", fit_csv = "relu_curve.csv";

  auto* check = app.add_subcommand("check-params", "Validate parameters");
  check->add_option("--config", config_path)->required();

  auto* fit = app.add_subcommand("fit-relu", "Fit the ReLU polynomial");
  fit->add_option("--k", fit_k, "polynomial degree");
  fit->add_option("--json", fit_json, "coefficient output path");
  fit->add_option("--csv", fit_csv, "curve output path");

  auto* runp = app.add_subcommand("run-protocol", "Simulate secure rounds");
  runp->add_option("--config", config_path)->required();
  runp->add_option("--out-dir", out_dir);

  auto* tr = app.add_subcommand("train", "Federated training experiment");
  tr->add_option("--config", config_path)->required();
  tr->add_option("--out-dir", out_dir);

  auto* rp = app.add_subcommand("replay", "Re-run and compare a transcript");
  rp->add_option("--config", config_path)->required();
  rp->add_option("--transcript", transcript_path)->required();

  auto* ab = app.add_subcommand("attack-bench",
                                "Aggregators x attacks benchmark");
  ab->add_option("--config", config_path)->required();
  ab->add_option("--out-dir", out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      Config c = load_config(config_path);
      if (c.params.d == 0) c.params.d = 8;
      c.params.check();
      ReluApprox approx = fit_relu(c.params.k, 1.0);
      embed_coeffs(approx, c.params.q);
      QuantConfig qc;
      qc.q = c.params.q;
      qc.d = c.params.d;
      qc.k = c.params.k;
      qc.n = c.params.n;
      qc.coeff_scale = approx.coeff_scale;
      Field field(choose_prime(c.params, approx.int_coeffs));
      qc.field = &field;
      ParamCheck pc = validate_params(qc, approx.int_coeffs);
      if (!pc.ok) {
        std::cerr << pc.reason << '\n';
        return 1;
      }
      std::cout << "OK (min n = "
                << min_users(c.params.b, c.params.k, c.params.m, c.params.t,
                             c.params.p_drop)
                << ", prime bits = " << mpz_sizeinbase(field.prime().get_mpz_t(), 2)
                << ")\n";
      return 0;
    }
    if (fit->parsed()) {
      ReluApprox approx = fit_relu(fit_k, 1.0);
      json j;
      j["k"] = approx.k;
      j["coefficients"] = approx.real_coeffs;
      j["max_abs_error"] = approx.max_abs_error;
      std::ofstream(fit_json) << j.dump(2) << '\n';
      std::ofstream csv(fit_csv);
      csv << "x,relu,approx,error\n";
      for (int i = 0; i <= 400; ++i) {
        double x = -1.0 + i / 200.0;
        double r = std::max(0.0, x);
        double a = approx.eval_real(x);
        csv << x << ',' << r << ',' << a << ',' << (a - r) << '\n';
      }
      std::cout << "max_abs_error=" << approx.max_abs_error << '\n';
      return 0;
    }
    if (runp->parsed()) {
      Config c = load_config(config_path);
      json rounds = json::array(), summary;
      std::vector<std::uint8_t> transcripts =
          simulate_protocol(c, rounds, summary);
      std::ofstream(out_dir + "/rounds.json") << rounds.dump(2) << '\n';
      std::ofstream(out_dir + "/summary.json") << summary.dump(2) << '\n';
      std::ofstream tf(out_dir + "/transcript.bin", std::ios::binary);
      tf.write(reinterpret_cast<const char*>(transcripts.data()),
               transcripts.size());
      std::cout << summary.dump() << '\n';
      return 0;
    }
    if (tr->parsed()) {
      Config c = load_config(config_path);
      return run_train(c, out_dir + "/metrics.csv", out_dir + "/summary.json");
    }
    if (rp->parsed()) {
      Config c = load_config(config_path);
      std::ifstream tf(transcript_path, std::ios::binary);
      if (!tf) {
        std::cerr << "cannot open transcript: " << transcript_path << '\n';
        return 1;
      }
      std::vector<std::uint8_t> recorded(
          (std::istreambuf_iterator<char>(tf)),
          std::istreambuf_iterator<char>());
      json rounds = json::array(), summary;
      std::vector<std::uint8_t> fresh = simulate_protocol(c, rounds, summary);
      if (fresh == recorded) {
        std::cout << "replay OK: transcript matches (" << fresh.size()
                  << " bytes)\n";
        return 0;
      }
      std::cerr << "replay MISMATCH: recorded " << recorded.size()
                << " bytes, fresh run " << fresh.size() << " bytes\n";
      return 1;
    }
    if (ab->parsed()) {
      Config c = load_config(config_path);
      std::ofstream csv(out_dir + "/attack_bench.csv");
      csv << metrics_csv_header() << '\n';
      json summary = json::array();
      for (const std::string agg :
           {"fedavg", "fltrust-exact", "fltrust-approx"}) {
        for (const std::string atk : {"none", "trim", "labelflip", "signflip"}) {
          Config run = c;
          run.aggregator = agg;
          run.attack = atk;
          TrainConfig tc;
          tc.params = run.params;
          tc.aggregator = agg;
          tc.attack = make_attack(run);
          tc.rounds = run.rounds;
          tc.local_iters = run.local_iters;
          tc.model = run.model == "mlp" ? ModelKind::Mlp : ModelKind::Logistic;
          tc.hidden = run.hidden;
          tc.seed = run.seed;
          Dataset data = make_dataset(run);
          TrainResult result = train(tc, data);
          for (const auto& row : result.metrics)
            csv << metrics_csv_row(row) << '\n';
          json entry;
          entry["aggregator"] = agg;
          entry["attack"] = atk;
          entry["final_accuracy"] = result.metrics.back().accuracy;
          summary.push_back(entry);
          std::cout << agg << " vs " << atk << ": "
                    << result.metrics.back().accuracy << '\n';
        }
      }
      std::ofstream(out_dir + "/summary.json") << summary.dump(2) << '\n';
      return 0;
    }
  } catch (const ProtocolError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
