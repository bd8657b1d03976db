#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace byitfl {

struct DivisionByZero : std::runtime_error {
  DivisionByZero() : std::runtime_error("field: inverse of zero") {}
};
struct DuplicateNode : std::runtime_error {
  DuplicateNode() : std::runtime_error("interpolation: duplicate x node") {}
};
struct ReconstructFailed : std::runtime_error {
  explicit ReconstructFailed(const std::string& why)
      : std::runtime_error("rational reconstruction failed: " + why) {}
};

class Field;

// Residue in [0, P).  The owning Field must outlive every element.
class FieldElement {
 public:
  FieldElement() : field_(nullptr) {}
  FieldElement(mpz_class v, const Field* f);

  const mpz_class& value() const { return v_; }
  const Field* field() const { return field_; }
  bool is_zero() const { return v_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement inv() const;
  FieldElement pow(unsigned long e) const;

  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  bool operator==(const FieldElement& o) const { return v_ == o.v_; }
  bool operator!=(const FieldElement& o) const { return v_ != o.v_; }
  // Total order on residues, for use as map keys.
  bool operator<(const FieldElement& o) const { return v_ < o.v_; }

  // Centered lift: the representative in (-P/2, P/2].
  mpz_class lift_signed() const;

 private:
  mpz_class v_;
  const Field* field_;
};

// The prime-field context.  Immutable once constructed.
class Field {
 public:
  explicit Field(mpz_class prime);

  const mpz_class& prime() const { return p_; }

  FieldElement from_int(const mpz_class& v) const;
  FieldElement from_int(long v) const { return from_int(mpz_class(v)); }
  FieldElement zero() const { return from_int(0); }
  FieldElement one() const { return from_int(1); }

  // a^{-1} mod P.  Throws DivisionByZero on zero input.
  FieldElement inv(const FieldElement& a) const;

 private:
  mpz_class p_;
};

// Univariate polynomial over F_P, coefficients lowest-degree first.
// Trailing zero coefficients are trimmed; the zero polynomial is empty.
class FieldPoly {
 public:
  FieldPoly() = default;
  explicit FieldPoly(std::vector<FieldElement> coeffs);

  static FieldPoly constant(const FieldElement& c);
  static FieldPoly zero() { return FieldPoly(); }

  bool is_zero() const { return coeffs_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<FieldElement>& coeffs() const { return coeffs_; }
  FieldElement coeff(std::size_t i) const;

  FieldElement eval(const FieldElement& x) const;

  FieldPoly operator+(const FieldPoly& o) const;
  FieldPoly operator-(const FieldPoly& o) const;
  FieldPoly operator*(const FieldPoly& o) const;
  FieldPoly scaled(const FieldElement& c) const;

  // Polynomial long division; returns (quotient, remainder).
  std::pair<FieldPoly, FieldPoly> divrem(const FieldPoly& divisor) const;

  bool operator==(const FieldPoly& o) const { return coeffs_ == o.coeffs_; }

 private:
  std::vector<FieldElement> coeffs_;
};

FieldElement poly_eval(const FieldPoly& f, const FieldElement& x);

// Unique polynomial of degree < points.size() through all points.
// Throws DuplicateNode on repeated x.
FieldPoly poly_interp(
    const std::vector<std::pair<FieldElement, FieldElement>>& points);

// Lagrange coefficient L_i(x) for node set xs: product over j != i of
// (x - xs[j]) / (xs[i] - xs[j]).
FieldElement lagrange_coeff(const std::vector<FieldElement>& xs, std::size_t i,
                            const FieldElement& x);

// Lift c back to a signed rational a/b with |a| <= num_bound,
// 0 < b <= den_bound, gcd(a,b) = 1.  Requires 2*num_bound*den_bound < P,
// which makes the answer unique.  Half-extended Euclid.
std::pair<mpz_class, mpz_class> rational_reconstruct(const FieldElement& c,
                                                     const mpz_class& num_bound,
                                                     const mpz_class& den_bound);

// Deterministic Miller-Rabin with a fixed witness schedule.
bool is_prime(const mpz_class& n);
// Smallest prime >= n.
mpz_class next_prime_at_least(const mpz_class& n);

}  // namespace byitfl
