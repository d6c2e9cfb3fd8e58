#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "pcsim/analysis.hpp"

using namespace pcsim;

TEST_CASE("retrieval capacities") {
  CHECK(mds_pir_capacity(2, 1, 2) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(mds_pir_capacity(4, 2, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mds_pir_capacity(3, 3, 4) == doctest::Approx(0.25).epsilon(1e-12));  // k = n

  CHECK(plc_capacity(2, 1, 2) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(plc_capacity(4, 2, 2) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(plc_capacity(5, 2, 1) == doctest::Approx(1.0).epsilon(1e-12));

  // The linear capacity is the retrieval capacity with f replaced by the rank.
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t r = 1; r <= 6; ++r)
        CHECK(plc_capacity(n, k, r) ==
              doctest::Approx(mds_pir_capacity(n, k, r)).epsilon(1e-15));
}

TEST_CASE("converse bound: full-rank linear sets reduce to the linear capacity") {
  PrimeField F(5);
  for (std::size_t mu : {2, 3, 4}) {
    CandidateSet set = linear_set(F, FqMatrix::identity(F, mu));
    ConverseResult cr = ppc_converse(set, 4, 2);
    CHECK(cr.rank == mu);
    CHECK(cr.maximized);
    CHECK(cr.bound == doctest::Approx(plc_capacity(4, 2, mu)).epsilon(1e-12));
  }
}

TEST_CASE("converse bound: monomial sets over F_3 match the published points") {
  PrimeField F3(3);
  // All monomials, one variable: {w, w^2}.
  CandidateSet f1 = all_monomials_set(F3, 1, 2);
  CHECK(ppc_converse(f1, 7, 2).bound == doctest::Approx(0.579380164285695).epsilon(1e-9));
  // Nonparallel monomials, two variables: {x, y, xy}.
  CandidateSet f2 = nonparallel_monomials_set(F3, 2, 2);
  CHECK(ppc_converse(f2, 7, 2).bound == doctest::Approx(0.70444313178854).epsilon(1e-9));
}

TEST_CASE("polynomial rate: published points and the degenerate regime") {
  const double h = 0.579380164285695;
  CHECK(ppc_rate(7, 2, 2, 2, 5, h) == doctest::Approx(0.237915473653148).epsilon(1e-9));
  CHECK(ppc_rate(4, 2, 2, 2, 5, 1.0) == doctest::Approx(0.317224287484511).epsilon(1e-9));
  // n <= g(k-1)+1: download everything, rate H_min / f.
  CHECK(ppc_rate(3, 2, 2, 2, 5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ppc_rate(3, 2, 2, 4, 10, 0.8) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("asymptotic polynomial rate") {
  const double h = 0.579380164285695;
  CHECK(ppc_rate_asymptotic(7, 2, 2, h) == doctest::Approx(0.220716253061217).epsilon(1e-9));
  CHECK(ppc_rate_asymptotic(3, 2, 2, 1.0) == 0.0);
  // g = 1 collapses to 1 - k/n.
  for (std::size_t n = 2; n <= 9; ++n)
    for (std::size_t k = 1; k < n; ++k)
      CHECK(ppc_rate_asymptotic(n, k, 1, 1.0) ==
            doctest::Approx(1.0 - static_cast<double>(k) / n).epsilon(1e-12));
}

TEST_CASE("rates converge to the asymptote from above as f grows") {
  const double limit = ppc_rate_asymptotic(7, 2, 2, 1.0);
  double prev = 2.0;
  for (std::size_t f = 1; f <= 64; ++f) {
    const std::size_t mu = monomial_count(static_cast<unsigned>(f), 2);
    const double rate = ppc_rate(7, 2, 2, f, mu, 1.0);
    CHECK(rate >= limit - 1e-12);
    CHECK(rate <= prev + 1e-12);
    prev = rate;
  }
  CHECK(prev == doctest::Approx(limit).epsilon(1e-9));
}

TEST_CASE("systematic rate: published points") {
  // (n,k,g) = (4,2,2) at mu = 3 is the worked systematic example: 0.45 H_min.
  CHECK(sys_ppc_rate(4, 2, 2, 2, 3, 1.0) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(sys_ppc_rate(4, 2, 2, 2, 5, 1.0) == doctest::Approx(0.372699386503067).epsilon(1e-9));
  CHECK(sys_ppc_rate(3, 2, 2, 2, 5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("systematic asymptotic rate: all three cases") {
  // floor(n/k~) > 1 and remainder < k: (floor(n/k~)k - k) / n_hat.
  CHECK(sys_ppc_rate_asymptotic(7, 2, 2, 1.0) == doctest::Approx(0.4).epsilon(1e-12));
  // floor(n/k~) = 1 and remainder < k: max{n - k~, 0} / n.
  CHECK(sys_ppc_rate_asymptotic(4, 2, 2, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
  // remainder >= k: floor(n/k~)k / n_hat; n = 8, k~ = 3: rem = 2 >= k.
  CHECK(sys_ppc_rate_asymptotic(8, 2, 2, 1.0) == doctest::Approx(4.0 / 8).epsilon(1e-12));
  // Degenerate n <= g(k-1)+1 clamps to zero.
  CHECK(sys_ppc_rate_asymptotic(3, 2, 2, 1.0) == 0.0);
}

TEST_CASE("achievable closed forms never exceed the converse") {
  PrimeField F3(3);
  for (std::size_t f : {1, 2}) {
    for (bool np : {false, true}) {
      CandidateSet set = np ? nonparallel_monomials_set(F3, f, 2)
                            : all_monomials_set(F3, f, 2);
      const double h = h_min(set);
      const std::size_t mu = set.mu();
      for (std::size_t n : {4, 5, 7}) {
        const double conv = ppc_converse(set, n, 2).bound;
        CHECK(ppc_rate(n, 2, 2, f, mu, h) <= conv + 1e-9);
        CHECK(sys_ppc_rate(n, 2, 2, f, mu, h) <= conv + 1e-9);
        CHECK(to_double(sys_ppc_rate_ratio_all_n(n, 2, 2, f, mu)) * h <= conv + 1e-9);
      }
    }
  }
  // Linear full-rank sets: the exact ratio equals the capacity.
  PrimeField F(5);
  for (std::size_t r : {1, 2, 3}) {
    CandidateSet set = linear_set(F, FqMatrix::identity(F, r));
    CHECK(to_double(plc_rate_ratio(4, 2, r)) ==
          doctest::Approx(plc_capacity(4, 2, r)).epsilon(1e-12));
    CHECK(to_double(plc_rate_ratio(4, 2, r)) <= ppc_converse(set, 4, 2).bound + 1e-9);
  }
}

TEST_CASE("degree-1 polynomial rate equals the retrieval capacity") {
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::size_t k = 1; k < n; ++k)
      for (std::size_t f = 1; f <= 4; ++f)
        CHECK(ppc_rate(n, k, 1, f, f, 1.0) ==
              doctest::Approx(mds_pir_capacity(n, k, f)).epsilon(1e-12));
}

TEST_CASE("per-database counts: worked-example fixtures") {
  // Nonparallel monomials over the [4,2] code: 84 sums per database, total
  // download 336. (mu, f, M(f,g), kappa, nu) = (3, 2, 5, 3, 4).
  CHECK(ppc_per_db_count(3, 2, 5, 3, 4) == 84);
  // Systematic variant of the same setup: (kappa, nu) = (2, 3), 30 sums per
  // database, total download 4 * 30 = 120.
  CHECK(ppc_per_db_count(3, 2, 5, 2, 3) == 30);
  // Linear rank-2 reduction at (kappa, nu) = (1, 2): 15 -> 12 sums.
  CHECK(plc_per_db_count(4, 2, 1, 2) == 12);
  // Full rank removes nothing: all 2^mu - 1 types survive.
  CHECK(plc_per_db_count(3, 3, 1, 2) == 7);
}

TEST_CASE("figure data: fixtures agree with computed curves") {
  FigureData a = figure_data("fig4a");
  CHECK(a.max_abs_delta <= 1e-5);
  FigureData b = figure_data("fig4b");
  CHECK(b.max_abs_delta <= 1e-5);
  FigureData c = figure_data("fig5a");
  CHECK(c.max_abs_delta <= 1e-6);
  CHECK_THROWS_AS(figure_data("fig9z"), std::invalid_argument);

  // Specific transcribed points remain pinned.
  auto value_of = [](const FigureData& d, double x, const std::string& series,
                     bool fixture) {
    for (const FigureRow& r : d.rows)
      if (r.fixture == fixture && r.series == series && std::abs(r.x - x) < 1e-12)
        return r.value;
    return -1.0;
  };
  CHECK(value_of(a, 1.0, "rs_lagrange", false) ==
        doctest::Approx(0.38625344285713).epsilon(1e-6));
  CHECK(value_of(c, 0.1, "sys_rs_lagrange", false) ==
        doctest::Approx(0.600679056468906).epsilon(1e-6));
  CHECK(value_of(c, 0.5, "trivial", false) == doctest::Approx(0.5).epsilon(1e-12));

  // CSV: header plus one line per row, sources labeled.
  const std::string csv = figure_csv(a);
  CHECK(csv.rfind("figure,x,series,value,source\n", 0) == 0);
  CHECK(csv.find("paper_fixture") != std::string::npos);
  CHECK(csv.find("computed") != std::string::npos);
}

TEST_CASE("large-scale figure: staircase steps span k~ consecutive n") {
  FigureData d = figure_data("fig5b");
  CHECK(d.max_abs_delta == 0.0);  // no fixture series on this grid
  // Collect the systematic curve by n (x = k/n with k = 20).
  std::map<std::size_t, double> by_n;
  for (const FigureRow& r : d.rows)
    if (!r.fixture && r.series == "sys_rs_lagrange")
      by_n[static_cast<std::size_t>(std::lround(20.0 / r.x))] = r.value;
  REQUIRE(by_n.size() == 361);  // n = 40..400
  // Walk n ascending and measure run lengths of constant rate.
  std::vector<std::size_t> runs;
  std::size_t run = 1;
  for (std::size_t n = 41; n <= 400; ++n) {
    if (std::abs(by_n[n] - by_n[n - 1]) < 1e-15) {
      ++run;
    } else {
      runs.push_back(run);
      run = 1;
    }
  }
  runs.push_back(run);
  // Below n = k + k~ = 59 every database is used (n_hat = n), so the rate
  // moves with each n: 19 width-1 steps for n = 40..58. From there on the
  // subset size is pinned for k~ = 39 consecutive n, giving 39-wide treads
  // until the sweep edge clips the last one at n = 400.
  REQUIRE(runs.size() == 28);
  for (std::size_t i = 0; i < 19; ++i) CHECK(runs[i] == 1);
  for (std::size_t i = 19; i + 1 < runs.size(); ++i) CHECK(runs[i] == 39);
  CHECK(runs.back() == 30);
  // The trivial series is the constant 1/f.
  for (const FigureRow& r : d.rows)
    if (r.series == "trivial") CHECK(r.value == doctest::Approx(0.1).epsilon(1e-15));
}
