#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "pcsim/codes.hpp"
#include "pcsim/rng.hpp"

using namespace pcsim;

namespace {

// All k-subsets of {0, ..., n-1}.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t next) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = next; i + (k - cur.size()) <= n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

LinearCode example_code(const PrimeField& F) {
  return LinearCode(F, 4, 2, FqMatrix::from_rows(F, {{1, 0, 1, 1}, {0, 1, 1, 1}}));
}

}  // namespace

TEST_CASE("linear code construction validates rank and shape") {
  PrimeField F(5);
  CHECK_NOTHROW(example_code(F));
  // Rank-deficient generator.
  CHECK_THROWS_AS(LinearCode(F, 4, 2, FqMatrix::from_rows(F, {{1, 2, 3, 4}, {2, 4, 1, 3}})),
                  std::invalid_argument);
  // k > n.
  CHECK_THROWS_AS(LinearCode(F, 1, 2, FqMatrix::from_rows(F, {{1}, {0}})),
                  std::invalid_argument);
}

TEST_CASE("lagrange generator: systematic layout and evaluation semantics") {
  PrimeField F(5);
  RSCode rs = rs_code_default(F, 4, 2);
  CHECK(rs.systematic);
  CHECK(rs.alpha == std::vector<std::uint64_t>{0, 1, 2, 3});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(rs.base.G.at(i, j) == (i == j ? 1u : 0u));

  // Column j of the encoding equals the message interpolant evaluated at alpha_j.
  SplitRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint64_t> w{rng.uniform(5), rng.uniform(5)};
    auto c = encode_row(rs.base, w);
    UniPoly p = lagrange_interpolate(F, {{rs.gamma[0], w[0]}, {rs.gamma[1], w[1]}});
    for (std::size_t j = 0; j < 4; ++j) CHECK(c[j] == p.eval(rs.alpha[j]));
    // Systematic: prefix of the codeword is the message itself.
    CHECK(c[0] == w[0]);
    CHECK(c[1] == w[1]);
  }

  // Non-systematic when gamma is not the alpha prefix.
  RSCode shifted = rs_code(F, 4, 2, {0, 1, 2, 3}, {3, 1});
  CHECK_FALSE(shifted.systematic);

  CHECK_THROWS_AS(rs_code(F, 4, 2, {0, 1, 1, 3}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(rs_code_default(F, 6, 2), std::invalid_argument);  // q < n

  // k = n: the generator is square and invertible.
  RSCode full = rs_code_default(F, 4, 4);
  CHECK(full.base.G.invertible());
}

TEST_CASE("encode_row basics and the worked [4,2] example") {
  PrimeField F(3);
  LinearCode code = example_code(F);
  CHECK(encode_row(code, {0, 0}) == std::vector<std::uint64_t>{0, 0, 0, 0});
  CHECK(encode_row(code, {1, 0}) == std::vector<std::uint64_t>{1, 0, 1, 1});
  CHECK(encode_row(code, {1, 2}) == std::vector<std::uint64_t>{1, 2, 0, 0});
  CHECK_THROWS_AS(encode_row(code, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("information sets of the worked [4,2] code") {
  PrimeField F(3);
  LinearCode code = example_code(F);
  CHECK(is_information_set(code, {0, 2}));
  CHECK(is_information_set(code, {1, 3}));
  CHECK_FALSE(is_information_set(code, {2, 3}));  // equal columns
  CHECK_THROWS_AS(is_information_set(code, {0}), std::invalid_argument);
  CHECK(contains_information_set(code, {0, 2, 3}));
  CHECK_FALSE(contains_information_set(code, {2, 3}));
}

TEST_CASE("RS codes are MDS: every k-subset of coordinates is an information set") {
  PrimeField F(11);
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::size_t k = 1; k <= n; ++k) {
      RSCode rs = rs_code_default(F, n, k);
      for (const auto& I : subsets(n, k)) CHECK(is_information_set(rs.base, I));
    }
}

TEST_CASE("decode by projection onto any information set returns the message") {
  PrimeField F(13);
  SplitRng rng(17);
  RSCode rs = rs_code_default(F, 6, 3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::uint64_t> w{rng.uniform(13), rng.uniform(13), rng.uniform(13)};
    auto c = encode_row(rs.base, w);
    for (const auto& I : subsets(6, 3)) {
      FqMatrix sub = rs.base.G.select_columns(I);
      std::vector<std::uint64_t> proj;
      for (std::size_t j : I) proj.push_back(c[j]);
      CHECK(solve_row_system(sub, proj) == w);
    }
  }
}

TEST_CASE("star product: element-wise semantics") {
  PrimeField F(7);
  std::vector<std::uint64_t> u{1, 2, 0}, ones{1, 1, 1};
  CHECK(star_product(F, u, ones) == u);
  CHECK(star_product(F, {1, 2, 0}, {2, 2, 5}) == std::vector<std::uint64_t>{2, 4, 0});
  CHECK_THROWS_AS(star_product(F, {1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("star-product code dimension follows min{g(k-1)+1, n}") {
  PrimeField F(11);
  RSCode rs42 = rs_code_default(F, 4, 2);
  CHECK(star_product_code(rs42, 2).base.k == 3);
  CHECK(star_product_code(rs42, 1).base.k == 2);
  CHECK(star_product_code(rs42, 5).base.k == 4);  // capped at n
  RSCode rs72 = rs_code_default(F, 7, 2);
  CHECK(star_product_code(rs72, 2).base.k == 3);

  // The star code shares evaluation points and stays systematic.
  RSCode star = star_product_code(rs42, 2);
  CHECK(star.alpha == rs42.alpha);
  CHECK(star.systematic);
  CHECK(star.gamma == std::vector<std::uint64_t>{0, 1, 2});
}

TEST_CASE("products of codewords live in the star-product code") {
  PrimeField F(13);
  SplitRng rng(23);
  for (unsigned g : {1u, 2u, 3u}) {
    RSCode rs = rs_code_default(F, 8, 2);
    RSCode star = star_product_code(rs, g);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::uint64_t> prod(8, 1);
      for (unsigned rep = 0; rep < g; ++rep) {
        std::vector<std::uint64_t> w{rng.uniform(13), rng.uniform(13)};
        prod = star_product(F, prod, encode_row(rs.base, w));
      }
      // Interpolating the product on the evaluation points must give degree
      // at most g(k-1), i.e. dimension of the star code.
      std::vector<std::pair<std::uint64_t, std::uint64_t>> pts;
      for (std::size_t j = 0; j < 8; ++j) pts.emplace_back(rs.alpha[j], prod[j]);
      UniPoly p = lagrange_interpolate(F, pts);
      CHECK(p.degree() < static_cast<int>(star.base.k));
    }
  }
}
