#pragma once

#include <cstdint>
#include <vector>

#include "pcsim/field.hpp"
#include "pcsim/linalg.hpp"

namespace pcsim {

// An [n, k] linear code given by a full-rank k x n generator matrix.
struct LinearCode {
  const PrimeField* field = nullptr;
  std::size_t n = 0;
  std::size_t k = 0;
  FqMatrix G;

  LinearCode(const PrimeField& f, std::size_t n_, std::size_t k_, FqMatrix g);
};

// Reed–Solomon code with a Lagrange generator: G[i][j] = iota_i(alpha_j),
// where iota_i is the Lagrange basis polynomial for the interpolation points
// gamma. Systematic iff gamma_i = alpha_i for i < k (then G starts with I_k).
struct RSCode {
  LinearCode base;
  std::vector<std::uint64_t> alpha;  // n distinct evaluation points
  std::vector<std::uint64_t> gamma;  // k distinct interpolation points
  bool systematic = false;
};

RSCode rs_code(const PrimeField& f, std::size_t n, std::size_t k,
               std::vector<std::uint64_t> alpha, std::vector<std::uint64_t> gamma);

// Convenience constructor with the default point layout alpha_j = j-1,
// gamma_i = alpha_i (systematic).
RSCode rs_code_default(const PrimeField& f, std::size_t n, std::size_t k);

// c = w * G.
std::vector<std::uint64_t> encode_row(const LinearCode& code,
                                      const std::vector<std::uint64_t>& w);

// True iff the column submatrix G|_I is invertible (|I| = k required).
bool is_information_set(const LinearCode& code, const std::vector<std::size_t>& coords);

// True iff the selected columns contain an information set, i.e. they span
// the full message space.
bool contains_information_set(const LinearCode& code,
                              const std::vector<std::size_t>& coords);

// The g-fold star-product (Hadamard) closure of an RS code: an RS code on the
// same evaluation points with dimension min{g(k-1)+1, n}.
RSCode star_product_code(const RSCode& code, unsigned g);

// Element-wise product of two equal-length vectors.
std::vector<std::uint64_t> star_product(const PrimeField& f,
                                        const std::vector<std::uint64_t>& u,
                                        const std::vector<std::uint64_t>& v);

}  // namespace pcsim
