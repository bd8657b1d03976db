#include "byitfl/field.hpp"

#include <cassert>

namespace byitfl {

FieldElement::FieldElement(mpz_class v, const Field* f)
    : v_(std::move(v)), field_(f) {
  assert(field_ != nullptr);
  mpz_mod(v_.get_mpz_t(), v_.get_mpz_t(), field_->prime().get_mpz_t());
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  assert(field_ == o.field_);
  mpz_class r = v_ + o.v_;
  if (r >= field_->prime()) r -= field_->prime();
  FieldElement out;
  out.v_ = std::move(r);
  out.field_ = field_;
  return out;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  assert(field_ == o.field_);
  mpz_class r = v_ - o.v_;
  if (r < 0) r += field_->prime();
  FieldElement out;
  out.v_ = std::move(r);
  out.field_ = field_;
  return out;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  assert(field_ == o.field_);
  mpz_class r = v_ * o.v_;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), field_->prime().get_mpz_t());
  FieldElement out;
  out.v_ = std::move(r);
  out.field_ = field_;
  return out;
}

FieldElement FieldElement::operator-() const {
  FieldElement out;
  out.v_ = v_ == 0 ? mpz_class(0) : mpz_class(field_->prime() - v_);
  out.field_ = field_;
  return out;
}

FieldElement FieldElement::inv() const { return field_->inv(*this); }

FieldElement FieldElement::pow(unsigned long e) const {
  mpz_class r;
  mpz_powm_ui(r.get_mpz_t(), v_.get_mpz_t(), e, field_->prime().get_mpz_t());
  FieldElement out;
  out.v_ = std::move(r);
  out.field_ = field_;
  return out;
}

mpz_class FieldElement::lift_signed() const {
  mpz_class half = field_->prime() / 2;
  if (v_ > half) return v_ - field_->prime();
  return v_;
}

Field::Field(mpz_class prime) : p_(std::move(prime)) {
  if (p_ < 2) throw std::invalid_argument("field prime must be >= 2");
}

FieldElement Field::from_int(const mpz_class& v) const {
  return FieldElement(v, this);
}

FieldElement Field::inv(const FieldElement& a) const {
  if (a.is_zero()) throw DivisionByZero();
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.value().get_mpz_t(), p_.get_mpz_t()) == 0)
    throw DivisionByZero();
  return FieldElement(r, this);
}

FieldPoly::FieldPoly(std::vector<FieldElement> coeffs)
    : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

FieldPoly FieldPoly::constant(const FieldElement& c) {
  return FieldPoly(std::vector<FieldElement>{c});
}

FieldElement FieldPoly::coeff(std::size_t i) const {
  if (i < coeffs_.size()) return coeffs_[i];
  // Out-of-range coefficients are zero; need a field to make one.
  assert(!coeffs_.empty());
  return coeffs_[0].field()->zero();
}

FieldElement FieldPoly::eval(const FieldElement& x) const {
  if (coeffs_.empty()) return x.field()->zero();
  // Horner.
  FieldElement acc = coeffs_.back();
  for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

FieldPoly FieldPoly::operator+(const FieldPoly& o) const {
  if (coeffs_.empty()) return o;
  if (o.coeffs_.empty()) return *this;
  std::vector<FieldElement> out(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < coeffs_.size() && i < o.coeffs_.size())
      out[i] = coeffs_[i] + o.coeffs_[i];
    else if (i < coeffs_.size())
      out[i] = coeffs_[i];
    else
      out[i] = o.coeffs_[i];
  }
  return FieldPoly(std::move(out));
}

FieldPoly FieldPoly::operator-(const FieldPoly& o) const {
  if (o.coeffs_.empty()) return *this;
  return *this + o.scaled(-o.coeffs_[0].field()->one());
}

FieldPoly FieldPoly::operator*(const FieldPoly& o) const {
  if (coeffs_.empty() || o.coeffs_.empty()) return FieldPoly();
  const Field* f = coeffs_[0].field();
  std::vector<FieldElement> out(coeffs_.size() + o.coeffs_.size() - 1,
                                f->zero());
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      out[i + j] += coeffs_[i] * o.coeffs_[j];
  return FieldPoly(std::move(out));
}

FieldPoly FieldPoly::scaled(const FieldElement& c) const {
  if (coeffs_.empty()) return FieldPoly();
  std::vector<FieldElement> out = coeffs_;
  for (auto& e : out) e *= c;
  return FieldPoly(std::move(out));
}

std::pair<FieldPoly, FieldPoly> FieldPoly::divrem(const FieldPoly& d) const {
  if (d.is_zero()) throw DivisionByZero();
  const Field* f = d.coeffs_[0].field();
  std::vector<FieldElement> rem = coeffs_;
  std::vector<FieldElement> quot;
  int dd = d.degree();
  FieldElement lead_inv = d.coeffs_.back().inv();
  int rd = static_cast<int>(rem.size()) - 1;
  while (rd >= 0 && rem.back().is_zero()) {
    rem.pop_back();
    --rd;
  }
  if (rd < dd) return {FieldPoly(), FieldPoly(std::move(rem))};
  quot.assign(rd - dd + 1, f->zero());
  while (rd >= dd) {
    FieldElement c = rem.back() * lead_inv;
    quot[rd - dd] = c;
    for (int i = 0; i <= dd; ++i)
      rem[rd - dd + i] -= c * d.coeffs_[i];
    while (!rem.empty() && rem.back().is_zero()) rem.pop_back();
    rd = static_cast<int>(rem.size()) - 1;
  }
  return {FieldPoly(std::move(quot)), FieldPoly(std::move(rem))};
}

FieldElement poly_eval(const FieldPoly& f, const FieldElement& x) {
  return f.eval(x);
}

FieldPoly poly_interp(
    const std::vector<std::pair<FieldElement, FieldElement>>& points) {
  if (points.empty())
    throw std::invalid_argument("poly_interp: empty point set");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i].first == points[j].first) throw DuplicateNode();
  const Field* f = points[0].first.field();
  // Newton form with divided differences over F_P.
  std::size_t n = points.size();
  std::vector<FieldElement> dd(n);
  for (std::size_t i = 0; i < n; ++i) dd[i] = points[i].second;
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) *
              (points[i].first - points[i - level].first).inv();
  FieldPoly result = FieldPoly::constant(dd[n - 1]);
  for (std::size_t i = n - 1; i-- > 0;) {
    // result = result * (x - x_i) + dd[i]
    FieldPoly shift(std::vector<FieldElement>{-points[i].first, f->one()});
    result = result * shift + FieldPoly::constant(dd[i]);
  }
  return result;
}

FieldElement lagrange_coeff(const std::vector<FieldElement>& xs, std::size_t i,
                            const FieldElement& x) {
  FieldElement num = x.field()->one();
  FieldElement den = x.field()->one();
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (j == i) continue;
    num *= x - xs[j];
    den *= xs[i] - xs[j];
  }
  return num * den.inv();
}

std::pair<mpz_class, mpz_class> rational_reconstruct(
    const FieldElement& c, const mpz_class& num_bound,
    const mpz_class& den_bound) {
  const mpz_class& p = c.field()->prime();
  if (num_bound < 0 || den_bound < 1)
    throw ReconstructFailed("invalid bounds");
  if (2 * num_bound * den_bound >= p)
    throw ReconstructFailed("bounds too large for modulus (2*N*D >= P)");
  // Half-extended Euclid on (P, c); stop at the first remainder <= N.
  mpz_class r0 = p, r1 = c.value();
  mpz_class t0 = 0, t1 = 1;
  while (r1 > num_bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    mpz_class t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  mpz_class a = r1, b = t1;
  if (b < 0) {
    a = -a;
    b = -b;
  }
  if (b == 0 || b > den_bound) throw ReconstructFailed("no pair within bounds");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (g != 1) throw ReconstructFailed("candidate not in lowest terms");
  // Verify a = b*c mod P.
  mpz_class check = b * c.value() - a;
  mpz_mod(check.get_mpz_t(), check.get_mpz_t(), p.get_mpz_t());
  if (check != 0) throw ReconstructFailed("verification failed");
  return {a, b};
}

namespace {
// Fixed witness schedule; deterministic and reproducible across runs.
const unsigned long kWitnesses[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                    23, 29, 31, 37, 41, 43, 47};

bool miller_rabin_round(const mpz_class& n, const mpz_class& d, unsigned r,
                        unsigned long a) {
  mpz_class base = a;
  if (base >= n) base %= n;
  if (base <= 1) return true;
  mpz_class x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < r; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}
}  // namespace

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  for (unsigned long w : kWitnesses) {
    if (n == w) return true;
    if (n % w == 0) return false;
  }
  mpz_class d = n - 1;
  unsigned r = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++r;
  }
  for (unsigned long a : kWitnesses)
    if (!miller_rabin_round(n, d, r, a)) return false;
  return true;
}

mpz_class next_prime_at_least(const mpz_class& n) {
  mpz_class c = n < 2 ? mpz_class(2) : n;
  if (mpz_even_p(c.get_mpz_t()) && c != 2) ++c;
  while (!is_prime(c)) c += (c == 2 ? 1 : 2);
  return c;
}

}  // namespace byitfl
