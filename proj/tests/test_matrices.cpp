#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pcsim/matrices.hpp"

using namespace pcsim;

namespace {

LinearCode worked_42_code(const PrimeField& F) {
  return LinearCode(F, 4, 2, FqMatrix::from_rows(F, {{1, 0, 1, 1}, {0, 1, 1, 1}}));
}

// Column regularity plus per-column disjoint cover of [nu] by A and B.
void check_structure(const RateMatrix& m) {
  InterferenceMatrices im = interference(m);
  REQUIRE(im.a.size() == m.kappa);
  REQUIRE(im.b.size() == m.nu - m.kappa);
  for (std::size_t j = 0; j < m.cols; ++j) {
    std::set<std::size_t> seen;
    for (const auto& row : im.a) seen.insert(row[j]);
    for (const auto& row : im.b) seen.insert(row[j]);
    CHECK(seen.size() == m.nu);
    CHECK(*seen.rbegin() == m.nu - 1);
    std::size_t weight = 0;
    for (std::size_t u = 0; u < m.nu; ++u) weight += m.lambda[u][j];
    CHECK(weight == m.kappa);
  }
}

}  // namespace

TEST_CASE("PIR validation on the worked [4,2] example") {
  PrimeField F(5);
  LinearCode code = worked_42_code(F);
  RateMatrix m;
  m.kind = RateMatrixKind::PIR;
  m.kappa = 1;
  m.nu = 2;
  m.cols = 4;
  m.lambda = {{1, 0, 1, 0}, {0, 1, 0, 1}};
  CHECK(validate(m, code).ok);

  // Break column regularity.
  RateMatrix bad = m;
  bad.lambda[0][1] = 1;
  ValidationReport vr = validate(bad, code);
  CHECK_FALSE(vr.ok);
  REQUIRE_FALSE(vr.violations.empty());
  CHECK(vr.violations.front().find("weight") != std::string::npos);

  // Row support {3, 4} is not an information set of this code.
  RateMatrix dep = m;
  dep.lambda = {{0, 0, 1, 1}, {1, 1, 0, 0}};
  CHECK_FALSE(validate(dep, code).ok);
}

TEST_CASE("interference split of the worked PIR matrix") {
  RateMatrix m;
  m.kind = RateMatrixKind::PIR;
  m.kappa = 1;
  m.nu = 2;
  m.cols = 4;
  m.lambda = {{1, 0, 1, 0}, {0, 1, 0, 1}};
  InterferenceMatrices im = interference(m);
  CHECK(im.a == std::vector<std::vector<std::size_t>>{{0, 1, 0, 1}});
  CHECK(im.b == std::vector<std::vector<std::size_t>>{{1, 0, 1, 0}});
  CHECK(coordinate_set(im, 0) == std::vector<std::size_t>{0, 2});
  CHECK(coordinate_set(im, 1) == std::vector<std::size_t>{1, 3});
}

TEST_CASE("PPC validation and interference of the printed 3x4 matrix") {
  PrimeField F(5);
  RSCode rs = rs_code_default(F, 4, 2);
  RSCode star = star_product_code(rs, 2);
  REQUIRE(star.base.k == 3);

  // The printed fixture: each row omits one database, zeros on the
  // anti-diagonal. Round-trips through the text format.
  const std::string text = "1110\n1101\n1011\n0111\n";
  RateMatrix m = rate_matrix_from_text(text, RateMatrixKind::PPC);
  CHECK(m.kappa == 3);
  CHECK(m.nu == 4);
  CHECK(to_text(m) == text);
  CHECK(validate(m, rs.base, &star.base).ok);

  InterferenceMatrices im = interference(m);
  CHECK(im.a == std::vector<std::vector<std::size_t>>{
                    {0, 0, 0, 1}, {1, 1, 2, 2}, {2, 3, 3, 3}});
  CHECK(im.b == std::vector<std::vector<std::size_t>>{{3, 2, 1, 0}});
  CHECK(coordinate_set(im, 3) == std::vector<std::size_t>{1, 2, 3});

  // All-ones with kappa = nu is column regular but fails the kappa/nu = k~/n
  // ratio whenever k~ < n.
  RateMatrix ones;
  ones.kind = RateMatrixKind::PPC;
  ones.kappa = 2;
  ones.nu = 2;
  ones.cols = 4;
  ones.lambda = {{1, 1, 1, 1}, {1, 1, 1, 1}};
  CHECK_FALSE(validate(ones, rs.base, &star.base).ok);
}

TEST_CASE("cyclic constructions validate against MDS storage") {
  CHECK(construct_mds_cyclic(2, 1).lambda ==
        std::vector<std::vector<std::uint8_t>>{{1, 0}, {0, 1}});

  PrimeField F(11);
  {
    RSCode rs = rs_code_default(F, 4, 3);
    RateMatrix m = construct_mds_cyclic(4, 3, RateMatrixKind::PIR);
    CHECK(validate(m, rs.base).ok);
    check_structure(m);
  }
  {
    // PPC matrix for the [7,2] code with g=2: star dimension 3.
    RSCode rs = rs_code_default(F, 7, 2);
    RSCode star = star_product_code(rs, 2);
    RateMatrix m = construct_mds_cyclic(7, 3, RateMatrixKind::PPC);
    CHECK(validate(m, rs.base, &star.base).ok);
    check_structure(m);
  }
  {
    // Reduced row count: nu must divide n.
    RSCode rs = rs_code_default(F, 4, 2);
    RateMatrix m = construct_mds_cyclic_nu(4, 1, 2, RateMatrixKind::PIR);
    CHECK(m.nu == 2);
    CHECK(m.kappa == 1);
    CHECK(validate(m, rs.base).ok);
    check_structure(m);
    CHECK_THROWS_AS(construct_mds_cyclic_nu(4, 1, 3), std::invalid_argument);
  }
}

TEST_CASE("queried-database count for the systematic scheme") {
  CHECK(n_hat(4, 2, 3) == 4);
  CHECK(n_hat(7, 2, 3) == 5);
  CHECK(n_hat(6, 3, 6) == 6);  // k~ = n
  CHECK(nu_sys(4, 2, 3) == 3);
  CHECK(nu_sys(7, 2, 3) == 4);
  // k~ = k: remainder 2 < k so n_hat = k + (delta-1)k~ = 6, and nu = n_hat.
  CHECK(n_hat(8, 3, 3) == 6);
  CHECK(nu_sys(8, 3, 3) == 6);
}

TEST_CASE("systematic construction reproduces the printed 2x3 fixture") {
  SysPpcConstruction c = construct_sys_ppc(4, 2, 3);
  CHECK(c.n_hat == 4);
  CHECK(c.rho == 2);
  CHECK(c.rate.kappa == 2);
  CHECK(c.rate.nu == 3);
  CHECK(c.rate.lambda == std::vector<std::vector<std::uint8_t>>{
                             {1, 0, 1, 1}, {0, 1, 1, 1}, {1, 1, 0, 0}});
  CHECK(c.im.a == std::vector<std::vector<std::size_t>>{{0, 1, 0, 0}, {2, 2, 1, 1}});
  CHECK(c.im.b == std::vector<std::vector<std::size_t>>{{1, 0, 2, 2}});

  PrimeField F(5);
  RSCode rs = rs_code_default(F, 4, 2);
  RSCode star = star_product_code(rs, 2);
  CHECK(validate(c.rate, rs.base, &star.base).ok);
}

TEST_CASE("systematic construction sweep: n <= 12, k <= 4, g <= 3") {
  PrimeField F(13);
  for (std::size_t n = 2; n <= 12; ++n)
    for (std::size_t k = 1; k <= 4 && k <= n; ++k)
      for (unsigned g = 1; g <= 3; ++g) {
        const std::size_t k_star = std::min<std::size_t>(g * (k - 1) + 1, n);
        if (k_star >= n) continue;  // degenerate: trivial download regime
        SysPpcConstruction c = construct_sys_ppc(n, k, k_star);
        CHECK(c.rate.nu == nu_sys(n, k, k_star));
        CHECK(c.n_hat == n_hat(n, k, k_star));
        CHECK(c.rho == (c.n_hat / k_star) * c.rate.kappa);
        check_structure(c.rate);

        RSCode rs = rs_code_default(F, n, k);
        RSCode star = star_product_code(rs, g);
        ValidationReport vr = validate(c.rate, rs.base, &star.base);
        if (!vr.ok) {
          CAPTURE(n);
          CAPTURE(k);
          CAPTURE(g);
          CAPTURE(vr.violations.front());
        }
        CHECK(vr.ok);

        // Row-count identity between the two closed forms.
        CHECK(nu_sys(n, k, k_star) ==
              c.n_hat - (c.n_hat / k_star) * (k_star - k));
      }
}

TEST_CASE("text round-trip rejects malformed input") {
  CHECK_THROWS_AS(rate_matrix_from_text("10\n1\n", RateMatrixKind::PIR),
                  std::invalid_argument);
  CHECK_THROWS_AS(rate_matrix_from_text("1x\n01\n", RateMatrixKind::PIR),
                  std::invalid_argument);
  // Irregular column weight parses (kappa from the first column) but fails
  // validation.
  RateMatrix irregular = rate_matrix_from_text("11\n01\n", RateMatrixKind::PIR);
  CHECK(irregular.kappa == 1);
  PrimeField F(3);
  RSCode rs = rs_code_default(F, 2, 1);
  CHECK_FALSE(validate(irregular, rs.base).ok);
}
