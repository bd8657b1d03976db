#include "byitfl/relu_poly.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace byitfl {

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }

std::vector<double> solve_ls(const std::vector<double>& xs, int k,
                             double scale) {
  Eigen::MatrixXd V(xs.size(), k + 1);
  Eigen::VectorXd y(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double p = 1.0;
    for (int j = 0; j <= k; ++j) {
      V(i, j) = p;
      p *= xs[i];
    }
    y(i) = relu(xs[i] * scale) / scale;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
  if (qr.rank() < k + 1) return {};
  Eigen::VectorXd h = qr.solve(y);
  return std::vector<double>(h.data(), h.data() + k + 1);
}

}  // namespace

double ReluApprox::eval_real(double x) const {
  double acc = 0.0;
  for (auto it = real_coeffs.rbegin(); it != real_coeffs.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

std::vector<FieldElement> ReluApprox::field_coeffs(const Field& f) const {
  if (int_coeffs.empty()) throw FitError("integer embedding not computed");
  std::vector<FieldElement> out;
  out.reserve(int_coeffs.size());
  for (const auto& c : int_coeffs) out.push_back(f.from_int(c));
  return out;
}

ReluApprox fit_relu(int k, double hi, int nodes) {
  if (k < 1) throw FitError("degree must be >= 1");
  if (hi <= 0.0) throw FitError("interval must be symmetric around 0");
  if (nodes < 10 * k) throw FitError("need at least 10*k nodes");
  if (nodes % 2 == 0) ++nodes;  // keep the grid symmetric including 0

  // Fit on the unit grid; ReLU(hi*u) = hi*ReLU(u), so unit-domain
  // coefficients c_j map to h_j = c_j * hi^{1-j}.
  std::vector<double> us(nodes);
  for (int i = 0; i < nodes; ++i) us[i] = -1.0 + 2.0 * i / (nodes - 1);
  std::vector<double> c = solve_ls(us, k, hi);
  if (c.empty()) {
    // Chebyshev fallback.
    for (int i = 0; i < nodes; ++i)
      us[i] = std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * nodes));
    c = solve_ls(us, k, hi);
    if (c.empty()) throw FitError("rank-deficient normal system");
  }

  ReluApprox out;
  out.k = k;
  out.fit_interval = {-hi, hi};
  out.real_coeffs.resize(k + 1);
  double scale = 1.0;
  for (int j = 0; j <= k; ++j) {
    out.real_coeffs[j] = c[j] * hi / scale;
    scale *= hi;
  }
  // Max error on a 10x denser unit grid.
  int dense = 10 * nodes;
  double maxerr = 0.0;
  for (int i = 0; i <= dense; ++i) {
    double u = -1.0 + 2.0 * i / dense;
    double x = u * hi;
    maxerr = std::max(maxerr, std::fabs(out.eval_real(x) - relu(x)));
  }
  out.max_abs_error = maxerr;
  return out;
}

void embed_coeffs(ReluApprox& approx, long q) {
  if (approx.fit_interval.first != -1.0 || approx.fit_interval.second != 1.0)
    throw FitError("integer embedding expects the unit fit interval");
  const int k = approx.k;
  constexpr double kZeroThreshold = 1e-9;

  // q^{2(k-j)} as exact integers.
  std::vector<mpz_class> qpow(k + 1);
  for (int j = 0; j <= k; ++j) {
    mpz_ui_pow_ui(qpow[j].get_mpz_t(), static_cast<unsigned long>(q),
                  static_cast<unsigned long>(2 * (k - j)));
  }

  mpz_class s = 1;
  const int kMaxExp = 60;
  for (int e = 0; e <= kMaxExp; ++e) {
    bool ok = true;
    std::vector<mpz_class> coeffs(k + 1, mpz_class(0));
    for (int j = 0; j <= k && ok; ++j) {
      double hj = approx.real_coeffs[j];
      if (std::fabs(hj) <= kZeroThreshold) continue;
      mpq_class val(hj);  // exact binary rational of the double
      val *= mpq_class(s) * mpq_class(qpow[j]);
      // round to nearest
      mpq_class shifted = val + mpq_class(1, 2);
      mpz_class rounded;
      mpz_fdiv_q(rounded.get_mpz_t(), shifted.get_num().get_mpz_t(),
                 shifted.get_den().get_mpz_t());
      if (rounded == 0) {
        ok = false;
        break;
      }
      mpq_class err = mpq_class(rounded) - val;
      if (err < 0) err = -err;
      mpq_class absval = val < 0 ? mpq_class(-val) : val;
      if (err * 1000 >= absval) {
        ok = false;
        break;
      }
      coeffs[j] = rounded;
    }
    if (ok) {
      approx.coeff_scale = s;
      approx.int_coeffs = std::move(coeffs);
      approx.q_used = q;
      return;
    }
    s *= 10;
  }
  throw ParamsInfeasible("no power-of-ten scale embeds the coefficients");
}

mpz_class eval_int_poly(const std::vector<mpz_class>& coeffs,
                        const mpz_class& x) {
  mpz_class acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

}  // namespace byitfl
