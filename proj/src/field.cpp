#include "pcsim/field.hpp"

#include <stdexcept>

namespace pcsim {

namespace {

bool is_prime(std::uint64_t q) {
  if (q < 2) return false;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

}  // namespace

PrimeField::PrimeField(std::uint64_t q) : q_(q) {
  if (!is_prime(q)) {
    throw std::invalid_argument("field modulus " + std::to_string(q) + " is not prime");
  }
  if (q >= (1ULL << 32)) {
    throw std::invalid_argument("field modulus too large (must fit in 32 bits)");
  }
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
  a %= q_;
  if (a == 0) throw std::domain_error("division by zero in F_q");
  // Extended Euclid on (q, a); works uniformly for all q including q = 2.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(q_), new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(q_);
  return static_cast<std::uint64_t>(t);
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
  a %= q_;
  std::uint64_t r = 1;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t PrimeField::from_int(std::int64_t x) const {
  std::int64_t m = x % static_cast<std::int64_t>(q_);
  if (m < 0) m += static_cast<std::int64_t>(q_);
  return static_cast<std::uint64_t>(m);
}

namespace {

const PrimeField& common_field(const FieldElement& a, const FieldElement& b) {
  if (a.field == nullptr || b.field == nullptr) {
    throw std::invalid_argument("field element without a field");
  }
  if (*a.field != *b.field) {
    throw std::invalid_argument("mixed-field arithmetic");
  }
  return *a.field;
}

}  // namespace

FieldElement field_arith(const FieldElement& a, const FieldElement& b, ArithOp op) {
  const PrimeField& f = common_field(a, b);
  switch (op) {
    case ArithOp::Add: return {f.add(a.value, b.value), f};
    case ArithOp::Sub: return {f.sub(a.value, b.value), f};
    case ArithOp::Mul: return {f.mul(a.value, b.value), f};
    case ArithOp::Div: return {f.div(a.value, b.value), f};
  }
  throw std::logic_error("unreachable");
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  return field_arith(a, b, ArithOp::Add);
}
FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  return field_arith(a, b, ArithOp::Sub);
}
FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  return field_arith(a, b, ArithOp::Mul);
}
FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  return field_arith(a, b, ArithOp::Div);
}

UniPoly::UniPoly(const PrimeField& f, std::vector<std::uint64_t> coeffs)
    : field_(&f), coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c %= f.q();
  trim();
}

UniPoly UniPoly::constant(const PrimeField& f, std::uint64_t c) {
  return UniPoly(f, {c});
}

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::uint64_t UniPoly::eval(std::uint64_t x) const {
  std::uint64_t acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = field_->add(field_->mul(acc, x), *it);
  }
  return acc;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  if (*field_ != *o.field_) throw std::invalid_argument("mixed-field polynomials");
  std::vector<std::uint64_t> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::uint64_t a = i < coeffs_.size() ? coeffs_[i] : 0;
    std::uint64_t b = i < o.coeffs_.size() ? o.coeffs_[i] : 0;
    c[i] = field_->add(a, b);
  }
  return UniPoly(*field_, std::move(c));
}

UniPoly UniPoly::operator-(const UniPoly& o) const {
  return *this + o.scaled(field_->neg(1));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (*field_ != *o.field_) throw std::invalid_argument("mixed-field polynomials");
  if (is_zero() || o.is_zero()) return UniPoly(*field_);
  std::vector<std::uint64_t> c(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
      c[i + j] = field_->add(c[i + j], field_->mul(coeffs_[i], o.coeffs_[j]));
    }
  }
  return UniPoly(*field_, std::move(c));
}

UniPoly UniPoly::scaled(std::uint64_t c) const {
  std::vector<std::uint64_t> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = field_->mul(coeffs_[i], c);
  return UniPoly(*field_, std::move(out));
}

bool UniPoly::operator==(const UniPoly& o) const {
  return *field_ == *o.field_ && coeffs_ == o.coeffs_;
}

FieldElement poly_eval(const UniPoly& p, const FieldElement& x) {
  if (x.field == nullptr || *x.field != p.field()) {
    throw std::invalid_argument("evaluation point from a different field");
  }
  return {p.eval(x.value), p.field()};
}

UniPoly lagrange_basis(const PrimeField& f, const std::vector<std::uint64_t>& gamma,
                       std::size_t i) {
  if (i >= gamma.size()) throw std::invalid_argument("basis index out of range");
  for (std::size_t a = 0; a < gamma.size(); ++a) {
    for (std::size_t b = a + 1; b < gamma.size(); ++b) {
      if (gamma[a] % f.q() == gamma[b] % f.q()) {
        throw std::invalid_argument("repeated interpolation points");
      }
    }
  }
  UniPoly p = UniPoly::constant(f, 1);
  for (std::size_t t = 0; t < gamma.size(); ++t) {
    if (t == i) continue;
    // (z - gamma[t]) / (gamma[i] - gamma[t])
    std::uint64_t denom = f.inv(f.sub(gamma[i], gamma[t]));
    UniPoly factor(f, {f.mul(f.neg(gamma[t]), denom), denom});
    p = p * factor;
  }
  return p;
}

UniPoly lagrange_interpolate(
    const PrimeField& f,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& points) {
  if (points.empty()) throw std::invalid_argument("interpolation needs at least one point");
  std::vector<std::uint64_t> xs;
  xs.reserve(points.size());
  for (const auto& p : points) xs.push_back(p.first % f.q());
  UniPoly acc(f);
  for (std::size_t i = 0; i < points.size(); ++i) {
    acc = acc + lagrange_basis(f, xs, i).scaled(points[i].second);
  }
  return acc;
}

}  // namespace pcsim
