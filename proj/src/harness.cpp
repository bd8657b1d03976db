#include "byitfl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "byitfl/adversary.hpp"

namespace byitfl {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::uint32_t read_be32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw HarnessError("truncated IDX header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

Dataset Dataset::synthetic_blobs(int n_users, int per_user, int root_size,
                                 int test_size, int features, double sep,
                                 const std::vector<double>& class1_share,
                                 std::uint64_t seed) {
  if (n_users < 1 || per_user < 1 || features < 1)
    throw HarnessError("bad synthetic dataset shape");
  Rng rng(mix_seed(seed, 0xDA7A));
  std::vector<double> dir(features);
  for (auto& v : dir) v = rng.gaussian(0.0, 1.0);
  double norm = l2(dir);
  for (auto& v : dir) v /= norm;

  Dataset out;
  out.num_classes = 2;
  auto sample = [&](int cls) {
    std::vector<double> x(features);
    double shift = (cls == 1 ? 0.5 : -0.5) * sep;
    for (int f = 0; f < features; ++f)
      x[f] = shift * dir[f] + rng.gaussian(0.0, 1.0);
    out.X.push_back(std::move(x));
    out.y.push_back(cls);
    return out.X.size() - 1;
  };

  out.partition.resize(n_users);
  for (int u = 0; u < n_users; ++u) {
    double share = u < static_cast<int>(class1_share.size())
                       ? class1_share[u]
                       : 0.5;
    int ones = static_cast<int>(std::lround(share * per_user));
    for (int s = 0; s < per_user; ++s)
      out.partition[u].push_back(sample(s < ones ? 1 : 0));
  }
  for (int s = 0; s < root_size; ++s) out.root.push_back(sample(s % 2));
  for (int s = 0; s < test_size; ++s) out.test.push_back(sample(s % 2));
  return out;
}

Dataset Dataset::load_idx(const std::string& images_path,
                          const std::string& labels_path, std::size_t limit) {
  std::ifstream img(images_path, std::ios::binary);
  std::ifstream lab(labels_path, std::ios::binary);
  if (!img || !lab) throw HarnessError("cannot open IDX files");
  std::uint32_t magic_i = read_be32(img);
  std::uint32_t magic_l = read_be32(lab);
  if (magic_i != 2051 || magic_l != 2049)
    throw HarnessError("bad IDX magic numbers");
  std::uint32_t n_img = read_be32(img);
  std::uint32_t rows = read_be32(img);
  std::uint32_t cols = read_be32(img);
  std::uint32_t n_lab = read_be32(lab);
  std::size_t n = std::min<std::size_t>(std::min(n_img, n_lab),
                                        limit == 0 ? n_img : limit);
  std::size_t pix = std::size_t(rows) * cols;
  Dataset out;
  out.num_classes = 10;
  std::vector<unsigned char> buf(pix);
  for (std::size_t i = 0; i < n; ++i) {
    img.read(reinterpret_cast<char*>(buf.data()), pix);
    char yl;
    lab.read(&yl, 1);
    if (!img || !lab) throw HarnessError("truncated IDX payload");
    std::vector<double> x(pix);
    for (std::size_t p = 0; p < pix; ++p) x[p] = buf[p] / 255.0;
    out.X.push_back(std::move(x));
    out.y.push_back(static_cast<int>(static_cast<unsigned char>(yl)));
  }
  return out;
}

void Dataset::partition_uniform(int n_users, std::size_t root_size,
                                std::size_t test_size, std::uint64_t seed) {
  std::vector<std::size_t> idx(X.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(mix_seed(seed, 0x9A87));
  std::shuffle(idx.begin(), idx.end(), rng.engine());
  if (root_size + test_size >= idx.size())
    throw HarnessError("root+test exceed the dataset");
  root.assign(idx.begin(), idx.begin() + root_size);
  test.assign(idx.begin() + root_size, idx.begin() + root_size + test_size);
  partition.assign(n_users, {});
  std::size_t at = root_size + test_size;
  for (std::size_t i = at; i < idx.size(); ++i)
    partition[(i - at) % n_users].push_back(idx[i]);
}

// --------------------------------------------------------------------------

int Model::dim() const {
  if (kind == ModelKind::Logistic) return in_dim + 1;
  return hidden * (in_dim + 1) + hidden + 1;
}

void Model::init(std::uint64_t seed) {
  w.assign(dim(), 0.0);
  if (kind == ModelKind::Mlp) {
    Rng rng(mix_seed(seed, 0x111D));
    for (int i = 0; i < dim(); ++i) w[i] = rng.gaussian(0.0, 0.5);
  }
}

double Model::score(const std::vector<double>& x) const {
  if (kind == ModelKind::Logistic) {
    double s = w[in_dim];
    for (int f = 0; f < in_dim; ++f) s += w[f] * x[f];
    return s;
  }
  // weights: W[h][f], then b0[h], then v[h], then c
  const double* W = w.data();
  const double* b0 = W + hidden * in_dim;
  const double* v = b0 + hidden;
  double c = v[hidden];
  double s = c;
  for (int h = 0; h < hidden; ++h) {
    double a = b0[h];
    for (int f = 0; f < in_dim; ++f) a += W[h * in_dim + f] * x[f];
    s += v[h] * std::tanh(a);
  }
  return s;
}

double Model::loss(const Dataset& data,
                   const std::vector<std::size_t>& idx) const {
  if (idx.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i : idx) {
    double yy = data.y[i] == 1 ? 1.0 : -1.0;
    double m = yy * score(data.X[i]);
    // log(1 + exp(-m)), stably
    total += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
  }
  return total / idx.size();
}

std::vector<double> Model::grad(const Dataset& data,
                                const std::vector<std::size_t>& idx) const {
  std::vector<double> g(dim(), 0.0);
  if (idx.empty()) return g;
  for (std::size_t i : idx) {
    const auto& x = data.X[i];
    double yy = data.y[i] == 1 ? 1.0 : -1.0;
    double m = yy * score(x);
    double sig = 1.0 / (1.0 + std::exp(m));  // dl/dm = -sigmoid(-m)
    double coef = -yy * sig;
    if (kind == ModelKind::Logistic) {
      for (int f = 0; f < in_dim; ++f) g[f] += coef * x[f];
      g[in_dim] += coef;
    } else {
      const double* W = w.data();
      const double* b0 = W + hidden * in_dim;
      const double* v = b0 + hidden;
      double* gW = g.data();
      double* gb0 = gW + hidden * in_dim;
      double* gv = gb0 + hidden;
      for (int h = 0; h < hidden; ++h) {
        double a = b0[h];
        for (int f = 0; f < in_dim; ++f) a += W[h * in_dim + f] * x[f];
        double th = std::tanh(a);
        gv[h] += coef * th;
        double back = coef * v[h] * (1.0 - th * th);
        gb0[h] += back;
        for (int f = 0; f < in_dim; ++f) gW[h * in_dim + f] += back * x[f];
      }
      gv[hidden] += coef;  // bias c
    }
  }
  for (auto& v : g) v /= idx.size();
  return g;
}

double Model::accuracy(const Dataset& data,
                       const std::vector<std::size_t>& idx) const {
  if (idx.empty()) return 0.0;
  int hit = 0;
  for (std::size_t i : idx) {
    int pred = score(data.X[i]) > 0.0 ? 1 : 0;
    if (pred == data.y[i]) ++hit;
  }
  return static_cast<double>(hit) / idx.size();
}

std::vector<double> local_update(const Model& model, const Dataset& data,
                                 const std::vector<std::size_t>& idx,
                                 double eta_u, int iters) {
  Model local = model;
  for (int c = 0; c < iters; ++c) {
    std::vector<double> g = local.grad(data, idx);
    for (double v : g)
      if (!std::isfinite(v)) throw HarnessError("NaN gradient");
    for (int i = 0; i < local.dim(); ++i) local.w[i] -= eta_u * g[i];
  }
  std::vector<double> out(local.dim());
  for (int i = 0; i < local.dim(); ++i) out[i] = local.w[i] - model.w[i];
  return out;
}

std::vector<double> aggregate_fedavg(
    const std::map<int, std::vector<double>>& updates) {
  if (updates.empty()) throw HarnessError("no updates to average");
  std::size_t d = updates.begin()->second.size();
  std::vector<double> g(d, 0.0);
  for (const auto& [_, u] : updates)
    for (std::size_t i = 0; i < d; ++i) g[i] += u[i];
  for (auto& v : g) v /= updates.size();
  return g;
}

std::vector<double> aggregate_fltrust(
    const std::map<int, std::vector<double>>& updates,
    const std::vector<double>& g0, const FlTrustOptions& opt,
    std::uint64_t quant_seed) {
  double g0n = l2(g0);
  if (g0n == 0.0) throw HarnessError("zero federator update");

  if (opt.quantized) {
    if (opt.field == nullptr || opt.approx == nullptr)
      throw HarnessError("quantized mode needs a field and an approximation");
    QuantConfig qc;
    qc.q = opt.q;
    qc.field = opt.field;
    qc.d = static_cast<int>(g0.size());
    Rng frng(mix_seed(quant_seed, 0));
    QuantizedUpdate q0 = quantize(normalize(g0), qc, frng);
    std::map<int, QuantizedUpdate> qu;
    std::set<int> include;
    for (const auto& [i, u] : updates) {
      Rng urng(mix_seed(quant_seed, i));
      try {
        qu.emplace(i, quantize(normalize(u), qc, urng));
      } catch (const ZeroUpdate&) {
        continue;
      }
      if (norm_check_passes(norm_check_value(qu.at(i)), opt.q, opt.epsilon))
        include.insert(i);
      else if (opt.excluded_out != nullptr)
        opt.excluded_out->insert(i);
    }
    PlainAggregate agg = plaintext_aggregate(qu, q0, g0n,
                                             opt.approx->int_coeffs, opt.q,
                                             include);
    return agg.g;
  }

  std::vector<double> g0u = normalize(g0);
  std::vector<double> acc(g0.size(), 0.0);
  double ts_sum = 0.0;
  for (const auto& [i, u] : updates) {
    std::vector<double> un;
    try {
      un = normalize(u);
    } catch (const ZeroUpdate&) {
      continue;
    }
    double cosv = dot(g0u, un);
    double ts = opt.exact_relu ? std::max(0.0, cosv)
                               : opt.approx->eval_real(cosv);
    ts_sum += ts;
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += ts * un[c];
  }
  if (std::fabs(ts_sum) < 1e-9 * updates.size()) throw LowTrustDenominator();
  for (auto& v : acc) v *= g0n / ts_sum;
  return acc;
}

// --------------------------------------------------------------------------

std::string attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::None: return "none";
    case AttackKind::TrimAttack: return "trim";
    case AttackKind::LabelFlip: return "labelflip";
    case AttackKind::ScaleUpdate: return "scale";
    case AttackKind::RandomShares: return "randomshares";
    case AttackKind::InconsistentDeal: return "inconsistentdeal";
    case AttackKind::WrongComputation: return "wrongcomputation";
    case AttackKind::SignFlip: return "signflip";
  }
  return "?";
}

const char* metrics_csv_header() {
  return "round,aggregator,attack,loss,accuracy,excluded_count";
}

std::string metrics_csv_row(const MetricsRow& r) {
  std::ostringstream os;
  os << r.round << ',' << r.aggregator << ',' << r.attack << ',' << r.loss
     << ',' << r.accuracy << ',' << r.excluded_count;
  return os.str();
}

TrainResult train(const TrainConfig& cfg, const Dataset& data) {
  Dataset working = data;
  AttackSpec attack = cfg.attack;
  if (attack.kind == AttackKind::LabelFlip) apply_data_attack(attack, working);

  Model model;
  model.kind = cfg.model;
  model.in_dim = static_cast<int>(working.features());
  model.hidden = cfg.hidden;
  model.init(cfg.seed);

  ProtocolParams params = cfg.params;
  params.d = model.dim();

  bool secure = cfg.aggregator == "byitfl-secure";
  bool quant_baseline =
      cfg.aggregator == "fltrust-approx" && cfg.quantized_baseline;
  ReluApprox approx;
  std::optional<Field> field;
  if (secure || cfg.aggregator == "fltrust-approx") {
    approx = fit_relu(params.k, 1.0);
    embed_coeffs(approx, params.q);
  }
  if (secure || quant_baseline) {
    params.check();
    field.emplace(choose_prime(params, approx.int_coeffs));
  }

  Rng adv_rng(mix_seed(cfg.seed, 0xBAD));
  TrainResult result;
  for (int round = 1; round <= cfg.rounds; ++round) {
    std::vector<double> g0 =
        local_update(model, working, working.root, params.eta_u,
                     cfg.local_iters);
    std::map<int, std::vector<double>> updates, honest;
    for (int u = 1; u <= params.n; ++u) {
      auto g = local_update(model, working, working.partition[u - 1],
                            params.eta_u, cfg.local_iters);
      updates.emplace(u, g);
      if (!attack.members.count(u)) honest.emplace(u, std::move(g));
    }
    if (attack.kind == AttackKind::TrimAttack ||
        attack.kind == AttackKind::SignFlip)
      for (int u : attack.members)
        updates[u] = apply_update_attack(attack, u, updates[u], honest,
                                         adv_rng);

    std::uint64_t quant_seed = mix_seed(cfg.seed, 7700 + round);
    std::vector<double> g;
    int excluded = 0;
    bool skip = false;
    try {
      if (cfg.aggregator == "fedavg") {
        g = aggregate_fedavg(updates);
      } else if (cfg.aggregator == "fltrust-exact" ||
                 cfg.aggregator == "fltrust-approx") {
        FlTrustOptions opt;
        opt.exact_relu = cfg.aggregator == "fltrust-exact";
        opt.approx = &approx;
        opt.quantized = quant_baseline;
        opt.field = field ? &*field : nullptr;
        opt.q = params.q;
        opt.epsilon = params.epsilon;
        std::set<int> excl;
        opt.excluded_out = &excl;
        g = aggregate_fltrust(updates, g0, opt, quant_seed);
        excluded = static_cast<int>(excl.size());
      } else if (secure) {
        QuantConfig qc;
        qc.q = params.q;
        qc.field = &*field;
        qc.d = params.d;
        Rng frng(mix_seed(quant_seed, 0));
        QuantizedUpdate q0 = quantize(normalize(g0), qc, frng);
        std::map<int, QuantizedUpdate> qu;
        for (const auto& [i, u] : updates) {
          Rng urng(mix_seed(quant_seed, i));
          try {
            QuantizedUpdate qi = quantize(normalize(u), qc, urng);
            qu.emplace(i, forge_quantized(attack, i, qi, *field));
          } catch (const ZeroUpdate&) {
            continue;  // sits the round out
          }
        }
        ProtocolEngine engine(*field, params, approx,
                              mix_seed(cfg.seed, 5500 + round));
        AggregateOutcome out =
            engine.run_iteration(qu, q0, l2(g0), attack);
        excluded = static_cast<int>(out.excluded_norm.size() +
                                    out.disqualified.size());
        if (!out.updated) skip = true;
        else g = out.g;
      } else {
        throw HarnessError("unknown aggregator: " + cfg.aggregator);
      }
    } catch (const LowTrustDenominator&) {
      skip = true;
    }
    // A trust-weighted aggregate of unit vectors cannot exceed ||g0|| unless
    // the trust denominator has (nearly) vanished; skip such rounds instead
    // of taking an unbounded step.
    if (!skip && cfg.aggregator != "fedavg") {
      double gn = 0.0, g0n2 = 0.0;
      for (double v : g) gn += v * v;
      for (double v : g0) g0n2 += v * v;
      if (gn > 100.0 * g0n2) skip = true;
    }
    if (!skip)
      for (int i = 0; i < model.dim(); ++i) model.w[i] += params.eta * g[i];

    MetricsRow row;
    row.round = round;
    row.aggregator = cfg.aggregator;
    row.attack = attack_name(attack.kind);
    row.loss = model.loss(data, data.test);
    row.accuracy = model.accuracy(data, data.test);
    row.excluded_count = excluded;
    result.metrics.push_back(row);
  }
  result.final_model = model;
  return result;
}

}  // namespace byitfl
