#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace pcsim {

// Exact arithmetic for rate formulas. Terms like nu^mu reach 7^44 in the
// figure grids, far past 64 bits, so all closed-form rates are assembled from
// arbitrary-precision integers and only converted to double at the reporting
// boundary.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt big_pow(const BigInt& base, unsigned exp) {
  BigInt r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace pcsim
