#include "pcsim/codes.hpp"

#include <stdexcept>
#include <string>

namespace pcsim {

LinearCode::LinearCode(const PrimeField& f, std::size_t n_, std::size_t k_, FqMatrix g)
    : field(&f), n(n_), k(k_), G(std::move(g)) {
  if (k > n) throw std::invalid_argument("code dimension exceeds blocklength");
  if (G.rows() != k || G.cols() != n) {
    throw std::invalid_argument("generator matrix has wrong shape");
  }
  if (G.rank() != k) throw std::invalid_argument("generator matrix is rank-deficient");
}

RSCode rs_code(const PrimeField& f, std::size_t n, std::size_t k,
               std::vector<std::uint64_t> alpha, std::vector<std::uint64_t> gamma) {
  if (f.q() < n) {
    throw std::invalid_argument("field too small: need q >= n for " +
                                std::to_string(n) + " evaluation points");
  }
  if (alpha.size() != n || gamma.size() != k) {
    throw std::invalid_argument("wrong number of evaluation/interpolation points");
  }
  for (auto& a : alpha) a %= f.q();
  for (auto& g : gamma) g %= f.q();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (alpha[i] == alpha[j]) throw std::invalid_argument("repeated evaluation points");
    }
  }
  FqMatrix G(f, k, n);
  for (std::size_t i = 0; i < k; ++i) {
    UniPoly basis = lagrange_basis(f, gamma, i);  // also rejects repeated gamma
    for (std::size_t j = 0; j < n; ++j) G.at(i, j) = basis.eval(alpha[j]);
  }
  bool systematic = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (gamma[i] != alpha[i]) {
      systematic = false;
      break;
    }
  }
  return RSCode{LinearCode(f, n, k, std::move(G)), std::move(alpha), std::move(gamma),
                systematic};
}

RSCode rs_code_default(const PrimeField& f, std::size_t n, std::size_t k) {
  std::vector<std::uint64_t> alpha(n), gamma(k);
  for (std::size_t j = 0; j < n; ++j) alpha[j] = j;
  for (std::size_t i = 0; i < k; ++i) gamma[i] = i;
  return rs_code(f, n, k, std::move(alpha), std::move(gamma));
}

std::vector<std::uint64_t> encode_row(const LinearCode& code,
                                      const std::vector<std::uint64_t>& w) {
  if (w.size() != code.k) throw std::invalid_argument("message length mismatch");
  return vec_mat_mul(*code.field, w, code.G);
}

bool is_information_set(const LinearCode& code, const std::vector<std::size_t>& coords) {
  if (coords.size() != code.k) {
    throw std::invalid_argument("information set must have exactly k coordinates");
  }
  return code.G.select_columns(coords).rank() == code.k;
}

bool contains_information_set(const LinearCode& code,
                              const std::vector<std::size_t>& coords) {
  if (coords.size() < code.k) return false;
  return code.G.select_columns(coords).rank() == code.k;
}

RSCode star_product_code(const RSCode& code, unsigned g) {
  if (g < 1) throw std::invalid_argument("star-product exponent must be positive");
  const PrimeField& f = *code.base.field;
  std::size_t n = code.base.n;
  std::size_t k_star = std::min<std::size_t>(g * (code.base.k - 1) + 1, n);
  // Interpolation points for the product code: keep the systematic convention
  // by extending along the evaluation points.
  std::vector<std::uint64_t> gamma(code.alpha.begin(), code.alpha.begin() + k_star);
  return rs_code(f, n, k_star, code.alpha, std::move(gamma));
}

std::vector<std::uint64_t> star_product(const PrimeField& f,
                                        const std::vector<std::uint64_t>& u,
                                        const std::vector<std::uint64_t>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("star product length mismatch");
  std::vector<std::uint64_t> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = f.mul(u[i], v[i]);
  return out;
}

}  // namespace pcsim
