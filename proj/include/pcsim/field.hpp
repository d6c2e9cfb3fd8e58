#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pcsim {

// Arithmetic in the prime field F_q on canonical representatives in [0, q).
// q is checked for primality at construction and capped below 2^32 so that
// products never overflow 64-bit intermediates.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t q);

  std::uint64_t q() const { return q_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % q_; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + q_ - b % q_) % q_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % q_; }
  std::uint64_t neg(std::uint64_t a) const { a %= q_; return a == 0 ? 0 : q_ - a; }
  std::uint64_t inv(std::uint64_t a) const;  // extended Euclid; throws on 0
  std::uint64_t div(std::uint64_t a, std::uint64_t b) const { return mul(a % q_, inv(b)); }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

  // Canonical representative of an arbitrary signed integer.
  std::uint64_t from_int(std::int64_t x) const;

  bool operator==(const PrimeField& o) const { return q_ == o.q_; }
  bool operator!=(const PrimeField& o) const { return q_ != o.q_; }

 private:
  std::uint64_t q_;
};

// A single field value tagged with its field, so mixed-field operations are
// caught instead of silently producing garbage.
struct FieldElement {
  std::uint64_t value = 0;
  const PrimeField* field = nullptr;

  FieldElement() = default;
  FieldElement(std::uint64_t v, const PrimeField& f) : value(v % f.q()), field(&f) {}

  bool operator==(const FieldElement& o) const {
    return value == o.value && field == o.field;
  }
};

enum class ArithOp { Add, Sub, Mul, Div };

FieldElement field_arith(const FieldElement& a, const FieldElement& b, ArithOp op);

FieldElement operator+(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a, const FieldElement& b);
FieldElement operator*(const FieldElement& a, const FieldElement& b);
FieldElement operator/(const FieldElement& a, const FieldElement& b);

// Univariate polynomial over F_q, coefficients lowest-degree first, trailing
// zeros trimmed (the zero polynomial has an empty coefficient vector).
class UniPoly {
 public:
  explicit UniPoly(const PrimeField& f) : field_(&f) {}
  UniPoly(const PrimeField& f, std::vector<std::uint64_t> coeffs);

  static UniPoly constant(const PrimeField& f, std::uint64_t c);

  const PrimeField& field() const { return *field_; }
  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  std::uint64_t eval(std::uint64_t x) const;  // Horner

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scaled(std::uint64_t c) const;

  bool operator==(const UniPoly& o) const;

 private:
  void trim();

  const PrimeField* field_;
  std::vector<std::uint64_t> coeffs_;
};

FieldElement poly_eval(const UniPoly& p, const FieldElement& x);

// i-th Lagrange basis polynomial for the point set gamma (0-based i):
// degree |gamma|-1, value 1 at gamma[i] and 0 at every other gamma[t].
UniPoly lagrange_basis(const PrimeField& f, const std::vector<std::uint64_t>& gamma,
                       std::size_t i);

// Unique polynomial of degree < |points| through the given (x, y) pairs.
UniPoly lagrange_interpolate(const PrimeField& f,
                             const std::vector<std::pair<std::uint64_t, std::uint64_t>>& points);

}  // namespace pcsim
