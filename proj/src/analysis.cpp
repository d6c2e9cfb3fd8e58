#include "pcsim/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "pcsim/matrices.hpp"

namespace pcsim {

double mds_pir_capacity(std::size_t n, std::size_t k, std::size_t f) {
  if (k == 0 || k > n || f == 0) throw std::invalid_argument("need 1 <= k <= n, f >= 1");
  if (k == n) return 1.0 / static_cast<double>(f);  // repeated-root limit
  double c = static_cast<double>(k) / static_cast<double>(n);
  return (1.0 - c) / (1.0 - std::pow(c, static_cast<double>(f)));
}

double plc_capacity(std::size_t n, std::size_t k, std::size_t r) {
  return mds_pir_capacity(n, k, r);
}

namespace {

// Joint entropy (q-ary units) of the evaluations selected by each mask over
// idx, from one enumeration of the message space. A mask bit i selects
// idx[i].
std::vector<double> masked_entropies(const CandidateSet& set,
                                     const std::vector<std::size_t>& idx,
                                     const std::vector<std::size_t>& masks) {
  const PrimeField& fld = *set.field;
  std::uint64_t q = fld.q();
  std::size_t count = 1;
  for (std::size_t i = 0; i < set.f; ++i) {
    if (count > 10'000'000 / q) throw std::runtime_error("message space too large for entropy enumeration");
    count *= q;
  }
  if (count * idx.size() > 50'000'000) {
    throw std::runtime_error("entropy enumeration budget exceeded");
  }
  std::vector<std::vector<std::uint64_t>> evals(count,
                                                std::vector<std::uint64_t>(idx.size()));
  std::vector<std::uint64_t> w(set.f, 0);
  for (std::size_t m = 0; m < count; ++m) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      evals[m][i] = evaluate(set.functions[idx[i]], w, fld);
    }
    for (std::size_t d = 0; d < set.f; ++d) {
      if (++w[d] < q) break;
      w[d] = 0;
    }
  }
  double logq = std::log(static_cast<double>(q));
  std::vector<double> out(masks.size(), 0.0);
  std::vector<std::vector<std::uint64_t>> keys(count);
  for (std::size_t mi = 0; mi < masks.size(); ++mi) {
    std::size_t mask = masks[mi];
    for (std::size_t m = 0; m < count; ++m) {
      auto& key = keys[m];
      key.clear();
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (mask & (std::size_t{1} << i)) key.push_back(evals[m][i]);
      }
    }
    std::sort(keys.begin(), keys.end());
    double acc = 0.0;
    std::size_t run = 1;
    for (std::size_t m = 1; m <= count; ++m) {
      if (m < count && keys[m] == keys[m - 1]) {
        ++run;
        continue;
      }
      double p = static_cast<double>(run) / static_cast<double>(count);
      acc -= p * std::log(p);
      run = 1;
    }
    out[mi] = acc / logq;
  }
  return out;
}

struct OrderingResult {
  double denom = 0.0;
  std::vector<std::size_t> order;  // positions into the minimum set
  bool maximized = true;
};

// Maximizes sum_{v=1}^{r-1} alpha^v H(l_{v+1} | l_1..l_v) over orderings that
// start at a minimum-entropy member, via subset DP (conditioning depends only
// on the set of preceding members).
OrderingResult best_ordering(const std::vector<double>& h, std::size_t r, double alpha) {
  std::size_t full = (std::size_t{1} << r) - 1;
  double hb = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r; ++i) hb = std::min(hb, h[std::size_t{1} << i]);

  const double unset = -std::numeric_limits<double>::infinity();
  std::vector<double> dp(full + 1, unset);
  std::vector<std::pair<std::size_t, std::size_t>> from(full + 1, {0, 0});
  for (std::size_t i = 0; i < r; ++i) {
    if (std::abs(h[std::size_t{1} << i] - hb) <= 1e-9) dp[std::size_t{1} << i] = 0.0;
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if (dp[mask] == unset) continue;
    std::size_t pc = static_cast<std::size_t>(std::popcount(mask));
    if (pc == r) continue;
    double weight = std::pow(alpha, static_cast<double>(pc));
    for (std::size_t j = 0; j < r; ++j) {
      std::size_t bit = std::size_t{1} << j;
      if (mask & bit) continue;
      double val = dp[mask] + weight * (h[mask | bit] - h[mask]);
      if (val > dp[mask | bit]) {
        dp[mask | bit] = val;
        from[mask | bit] = {mask, j};
      }
    }
  }
  OrderingResult res;
  res.denom = hb + dp[full];
  std::vector<std::size_t> rev;
  std::size_t mask = full;
  while (std::popcount(mask) > 1) {
    rev.push_back(from[mask].second);
    mask = from[mask].first;
  }
  rev.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
  res.order.assign(rev.rbegin(), rev.rend());
  return res;
}

// Identity-ordering fallback for minimum sets past the exhaustive-search cap.
OrderingResult identity_ordering(const CandidateSet& set,
                                 const std::vector<std::size_t>& l, double alpha) {
  std::size_t r = l.size();
  if (r > 24) throw std::runtime_error("minimum set too large for converse evaluation");
  std::vector<std::size_t> masks;
  for (std::size_t i = 0; i < r; ++i) masks.push_back(std::size_t{1} << i);
  for (std::size_t v = 1; v <= r; ++v) masks.push_back((std::size_t{1} << v) - 1);
  std::vector<double> h = masked_entropies(set, l, masks);
  double hb = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r; ++i) hb = std::min(hb, h[i]);
  OrderingResult res;
  res.maximized = false;
  res.denom = hb;
  for (std::size_t v = 1; v < r; ++v) {
    res.denom += std::pow(alpha, static_cast<double>(v)) * (h[r + v] - h[r + v - 1]);
  }
  for (std::size_t i = 0; i < r; ++i) res.order.push_back(i);
  return res;
}

}  // namespace

ConverseResult ppc_converse(const CandidateSet& set, std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (set.mu() == 0) throw std::invalid_argument("empty candidate set");
  EffectiveRank er = effective_rank(set);
  double hmin = h_min(set);
  double alpha = static_cast<double>(k) / static_cast<double>(n);

  ConverseResult best;
  best.rank = er.r;
  best.bound = -std::numeric_limits<double>::infinity();
  for (const auto& l : er.min_sets) {
    OrderingResult ord;
    if (l.size() <= 8) {
      std::vector<std::size_t> masks;
      for (std::size_t mask = 1; mask < (std::size_t{1} << l.size()); ++mask) {
        masks.push_back(mask);
      }
      std::vector<double> h(std::size_t{1} << l.size(), 0.0);
      std::vector<double> vals = masked_entropies(set, l, masks);
      for (std::size_t i = 0; i < masks.size(); ++i) h[masks[i]] = vals[i];
      ord = best_ordering(h, l.size(), alpha);
    } else {
      ord = identity_ordering(set, l, alpha);
    }
    double bound = hmin / ord.denom;
    if (bound > best.bound) {
      best.bound = bound;
      best.order.clear();
      for (std::size_t pos : ord.order) best.order.push_back(l[pos]);
    }
    best.maximized = best.maximized && ord.maximized;
  }
  return best;
}

BigInt ppc_per_db_count(std::size_t mu, std::size_t f, std::size_t cap_m,
                        std::size_t kappa, std::size_t nu) {
  if (f == 0 || mu < f || kappa == 0 || nu < kappa) {
    throw std::invalid_argument("bad per-database count parameters");
  }
  std::size_t eta = mu > cap_m ? mu - cap_m : 0;
  BigInt per = BigInt(f) * big_pow(BigInt(kappa), static_cast<unsigned>(mu));
  for (std::size_t tau = 2; tau <= mu; ++tau) {
    BigInt rho = binomial(static_cast<unsigned>(mu), static_cast<unsigned>(tau)) -
                 binomial(static_cast<unsigned>(eta), static_cast<unsigned>(tau));
    per += rho * big_pow(BigInt(kappa), static_cast<unsigned>(mu - tau + 1)) *
           big_pow(BigInt(nu - kappa), static_cast<unsigned>(tau - 1));
  }
  return per;
}

BigInt plc_per_db_count(std::size_t mu, std::size_t r, std::size_t kappa,
                        std::size_t nu) {
  if (r == 0 || r > mu || kappa == 0 || nu < kappa) {
    throw std::invalid_argument("bad per-database count parameters");
  }
  BigInt per = 0;
  for (std::size_t tau = 1; tau <= mu; ++tau) {
    BigInt cnt = binomial(static_cast<unsigned>(mu), static_cast<unsigned>(tau)) -
                 binomial(static_cast<unsigned>(mu - r), static_cast<unsigned>(tau));
    per += cnt * big_pow(BigInt(kappa), static_cast<unsigned>(mu - tau + 1)) *
           big_pow(BigInt(nu - kappa), static_cast<unsigned>(tau - 1));
  }
  return per;
}

Rational plc_rate_ratio(std::size_t n, std::size_t k, std::size_t r) {
  if (k == 0 || k > n || r == 0) throw std::invalid_argument("need 1 <= k <= n, r >= 1");
  if (k == n) return Rational(1, static_cast<unsigned>(r));
  BigInt nr = big_pow(BigInt(n), static_cast<unsigned>(r));
  BigInt kr = big_pow(BigInt(k), static_cast<unsigned>(r));
  return Rational(BigInt(n - k) * big_pow(BigInt(n), static_cast<unsigned>(r - 1)),
                  nr - kr);
}

namespace {

std::size_t star_dim_full(std::size_t k, unsigned g) { return g * (k - 1) + 1; }

void check_rate_args(std::size_t n, std::size_t k, unsigned g, std::size_t f,
                     std::size_t mu) {
  if (k == 0 || k > n || g == 0 || f == 0) {
    throw std::invalid_argument("need 1 <= k <= n, g >= 1, f >= 1");
  }
  if (mu < f) throw std::invalid_argument("mu must be at least f");
}

}  // namespace

Rational ppc_rate_ratio(std::size_t n, std::size_t k, unsigned g, std::size_t f,
                        std::size_t mu) {
  check_rate_args(n, k, g, f, mu);
  std::size_t kt = star_dim_full(k, g);
  if (n <= kt) return Rational(1, static_cast<unsigned>(f));
  std::size_t cap_m = monomial_count(static_cast<unsigned>(f), g);
  BigInt per = ppc_per_db_count(mu, f, cap_m, kt, n);
  return Rational(BigInt(k) * big_pow(BigInt(n), static_cast<unsigned>(mu)),
                  BigInt(n) * per);
}

Rational sys_ppc_rate_ratio(std::size_t n, std::size_t k, unsigned g, std::size_t f,
                            std::size_t mu) {
  check_rate_args(n, k, g, f, mu);
  std::size_t kt = star_dim_full(k, g);
  if (n <= kt) return Rational(1, static_cast<unsigned>(f));
  std::size_t nh = n_hat(n, k, kt);
  std::size_t nu = nu_sys(n, k, kt);
  std::size_t cap_m = monomial_count(static_cast<unsigned>(f), g);
  BigInt per = ppc_per_db_count(mu, f, cap_m, k, nu);
  return Rational(BigInt(k) * big_pow(BigInt(nu), static_cast<unsigned>(mu)),
                  BigInt(nh) * per);
}

Rational sys_ppc_rate_ratio_all_n(std::size_t n, std::size_t k, unsigned g,
                                  std::size_t f, std::size_t mu) {
  check_rate_args(n, k, g, f, mu);
  std::size_t kt = star_dim_full(k, g);
  if (n <= kt) return Rational(1, static_cast<unsigned>(f));
  std::size_t nu = n - (n / kt) * (kt - k);
  std::size_t cap_m = monomial_count(static_cast<unsigned>(f), g);
  BigInt per = ppc_per_db_count(mu, f, cap_m, k, nu);
  return Rational(BigInt(k) * big_pow(BigInt(nu), static_cast<unsigned>(mu)),
                  BigInt(n) * per);
}

double ppc_rate(std::size_t n, std::size_t k, unsigned g, std::size_t f,
                std::size_t mu, double h_min) {
  return to_double(ppc_rate_ratio(n, k, g, f, mu)) * h_min;
}

double ppc_rate_asymptotic(std::size_t n, std::size_t k, unsigned g, double h_min) {
  if (k == 0 || k > n || g == 0) throw std::invalid_argument("need 1 <= k <= n, g >= 1");
  std::size_t kt = star_dim_full(k, g);
  std::size_t num = n > kt ? n - kt : 0;
  return static_cast<double>(k) / static_cast<double>(n) *
         (static_cast<double>(num) / static_cast<double>(kt)) * h_min;
}

double sys_ppc_rate(std::size_t n, std::size_t k, unsigned g, std::size_t f,
                    std::size_t mu, double h_min) {
  return to_double(sys_ppc_rate_ratio(n, k, g, f, mu)) * h_min;
}

double sys_ppc_rate_asymptotic(std::size_t n, std::size_t k, unsigned g,
                               double h_min) {
  if (k == 0 || k > n || g == 0) throw std::invalid_argument("need 1 <= k <= n, g >= 1");
  std::size_t kt_full = star_dim_full(k, g);
  std::size_t kt = std::min(kt_full, n);
  std::size_t delta = n / kt;
  std::size_t rem = n - delta * kt;
  if (delta == 1 && rem < k) {
    std::size_t num = n > kt_full ? n - kt_full : 0;
    return static_cast<double>(num) / static_cast<double>(n) * h_min;
  }
  std::size_t nh = n_hat(n, k, kt);
  if (delta > 1 && rem < k) {
    return static_cast<double>(delta * k - k) / static_cast<double>(nh) * h_min;
  }
  return static_cast<double>(delta * k) / static_cast<double>(nh) * h_min;
}

namespace {

// Reference points transcribed from the published rate curves.

// n=7, k=2, g=2, all monomials over F_3, x = f. 8 points per series.
const double kF4aConverse[] = {0.579380164285695, 0.450629016666652, 0.423725791791031,
                               0.416619279559735, 0.414632421594621, 0.414068223886962,
                               0.41390730644965, 0.41386135300907};
const double kF4aRs[] = {0.38625344285713, 0.237915473653148, 0.22168944039731,
                         0.220738565673707, 0.220716455604713, 0.220716253803995,
                         0.220716253062335, 0.220716253061218};
const double kF4aLimit[] = {0.220716253061217, 0.220716253061217, 0.220716253061217,
                            0.220716253061217, 0.220716253061217, 0.220716253061217,
                            0.220716253061217, 0.220716253061217};
const double kF4aSys[] = {0.413842974489782, 0.26312498378038, 0.248958414239293,
                          0.248316449804179, 0.248305848852434, 0.248305784839244,
                          0.248305784693995, 0.248305784693869};
const double kF4aSysBase[] = {0.165537189795913, 0.165537189795913, 0.165537189795913,
                              0.165537189795913, 0.165537189795913, 0.165537189795913,
                              0.165537189795913, 0.165537189795913};

// Same grid with parallel monomials excluded.
const double kF4bConverse[] = {1.0, 0.70444313178854, 0.662386825413105,
                               0.651277612408273, 0.64817166850409, 0.647289689791154,
                               0.647038136563762, 0.64696630012092};
const double kF4bRs[] = {0.666666666666666, 0.422665879073124, 0.356064971634178,
                         0.345683730333475, 0.345048318405106, 0.34503350636826,
                         0.345033371169571, 0.345033370672687};
const double kF4bLimit[] = {0.345033370671938, 0.345033370671938, 0.345033370671938,
                            0.345033370671938, 0.345033370671938, 0.345033370671938,
                            0.345033370671938, 0.345033370671938};
const double kF4bSys[] = {0.714285714, 0.462098264292774, 0.39710860465152,
                          0.388569987168796, 0.388169210702191, 0.388162582124122,
                          0.388162542096833, 0.388162542006009};
const double kF4bSysBase[] = {0.258775028003953, 0.258775028003953, 0.258775028003953,
                              0.258775028003953, 0.258775028003953, 0.258775028003953,
                              0.258775028003953, 0.258775028003953};

// f=2, k=2, g=2, H_min := 1, x = k/n for n = 20..4. 17 points per series.
const double kF5aRs[] = {0.567442289345916, 0.562341691586083, 0.556701030927835,
                         0.550432656504346, 0.543429770226457, 0.535561268209083,
                         0.526665021523951, 0.516539164089487, 0.504930966469428,
                         0.491523147681875, 0.475918522748905, 0.457627118644068,
                         0.436069413392952, 0.410637933983239, 0.380952380952381,
                         0.347801892042293, 0.317224287484511};
const double kF5aLimit[] = {0.566666666666667, 0.56140350877193, 0.555555555555556,
                            0.549019607843137, 0.541666666666667, 0.533333333333333,
                            0.523809523809524, 0.512820512820513, 0.5,
                            0.484848484848485, 0.466666666666667, 0.444444444444444,
                            0.416666666666667, 0.380952380952381, 0.333333333333333,
                            0.266666666666667, 0.166666666666667};
const double kF5aSys[] = {0.600679056468906, 0.589448150394178, 0.589448150394178,
                          0.589448150394178, 0.573815644509732, 0.573815644509732,
                          0.573815644509732, 0.550833781603012, 0.550833781603012,
                          0.550833781603012, 0.514830508474576, 0.514830508474576,
                          0.514830508474576, 0.457142857142857, 0.457142857142857,
                          0.457142857142857, 0.372699386503067};
const double kF5aSysBase[] = {0.1, 0.105263157894737, 0.111111111111111,
                              0.117647058823529, 0.125, 0.133333333333333,
                              0.142857142857143, 0.153846153846154, 0.166666666666667,
                              0.181818181818182, 0.2, 0.222222222222222, 0.25,
                              0.285714285714286, 0.333333333333333, 0.4, 0.25};

void add_row(FigureData& d, const std::string& fig, double x, const char* series,
             double value, bool fixture) {
  d.rows.push_back(FigureRow{fig, x, series, value, fixture});
}

void finish(FigureData& d) {
  std::sort(d.rows.begin(), d.rows.end(), [](const FigureRow& a, const FigureRow& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.series != b.series) return a.series < b.series;
    return a.fixture < b.fixture;
  });
  d.max_abs_delta = 0.0;
  for (std::size_t i = 0; i + 1 < d.rows.size(); ++i) {
    const auto& a = d.rows[i];
    const auto& b = d.rows[i + 1];
    if (a.x == b.x && a.series == b.series && !a.fixture && b.fixture) {
      d.max_abs_delta = std::max(d.max_abs_delta, std::abs(a.value - b.value));
    }
  }
}

}  // namespace

FigureData figure_data(const std::string& which) {
  FigureData out;
  if (which == "fig4a" || which == "fig4b") {
    PrimeField f3(3);
    bool nonparallel = which == "fig4b";
    // The asymptote is one horizontal line; its normalization is the large-f
    // minimum entropy, which has stabilized by the right edge of the sweep.
    double h_limit = h_min(nonparallel ? nonparallel_monomials_set(f3, 8, 2)
                                       : all_monomials_set(f3, 8, 2));
    for (std::size_t f = 1; f <= 8; ++f) {
      CandidateSet cs = nonparallel ? nonparallel_monomials_set(f3, f, 2)
                                    : all_monomials_set(f3, f, 2);
      double h = h_min(cs);
      double x = static_cast<double>(f);
      std::size_t mu = cs.mu();
      add_row(out, which, x, "converse", ppc_converse(cs, 7, 2).bound, false);
      add_row(out, which, x, "rs_lagrange",
              to_double(ppc_rate_ratio(7, 2, 2, f, mu)) * h, false);
      add_row(out, which, x, "rs_lagrange_limit",
              ppc_rate_asymptotic(7, 2, 2, h_limit), false);
      add_row(out, which, x, "sys_rs_lagrange",
              to_double(sys_ppc_rate_ratio_all_n(7, 2, 2, f, mu)) * h, false);
      std::size_t i = f - 1;
      add_row(out, which, x, "converse", nonparallel ? kF4bConverse[i] : kF4aConverse[i],
              true);
      add_row(out, which, x, "rs_lagrange", nonparallel ? kF4bRs[i] : kF4aRs[i], true);
      add_row(out, which, x, "rs_lagrange_limit",
              nonparallel ? kF4bLimit[i] : kF4aLimit[i], true);
      add_row(out, which, x, "sys_rs_lagrange", nonparallel ? kF4bSys[i] : kF4aSys[i],
              true);
      add_row(out, which, x, "sys_baseline", nonparallel ? kF4bSysBase[i] : kF4aSysBase[i],
              true);
    }
  } else if (which == "fig5a") {
    const std::size_t k = 2, f = 2, mu = 5;
    std::size_t i = 0;
    for (std::size_t n = 20; n >= 4; --n, ++i) {
      double x = static_cast<double>(k) / static_cast<double>(n);
      add_row(out, which, x, "trivial", 0.5, false);
      add_row(out, which, x, "rs_lagrange", to_double(ppc_rate_ratio(n, k, 2, f, mu)),
              false);
      add_row(out, which, x, "rs_lagrange_limit", ppc_rate_asymptotic(n, k, 2, 1.0),
              false);
      add_row(out, which, x, "sys_rs_lagrange",
              to_double(sys_ppc_rate_ratio(n, k, 2, f, mu)), false);
      add_row(out, which, x, "trivial", 0.5, true);
      add_row(out, which, x, "rs_lagrange", kF5aRs[i], true);
      add_row(out, which, x, "rs_lagrange_limit", kF5aLimit[i], true);
      add_row(out, which, x, "sys_rs_lagrange", kF5aSys[i], true);
      add_row(out, which, x, "sys_baseline", kF5aSysBase[i], true);
    }
  } else if (which == "fig5b") {
    const std::size_t k = 20, f = 10;
    const std::size_t mu = monomial_count(10, 2);
    for (std::size_t n = 400; n >= 40; --n) {
      double x = static_cast<double>(k) / static_cast<double>(n);
      add_row(out, which, x, "trivial", 0.1, false);
      add_row(out, which, x, "rs_lagrange", to_double(ppc_rate_ratio(n, k, 2, f, mu)),
              false);
      add_row(out, which, x, "rs_lagrange_limit", ppc_rate_asymptotic(n, k, 2, 1.0),
              false);
      add_row(out, which, x, "sys_rs_lagrange",
              to_double(sys_ppc_rate_ratio(n, k, 2, f, mu)), false);
    }
  } else {
    throw std::invalid_argument("unknown figure id: " + which);
  }
  finish(out);
  return out;
}

std::string figure_csv(const FigureData& data) {
  std::string s = "figure,x,series,value,source\n";
  char buf[160];
  for (const auto& row : data.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.15g,%s,%.15g,%s\n", row.figure.c_str(), row.x,
                  row.series.c_str(), row.value,
                  row.fixture ? "paper_fixture" : "computed");
    s += buf;
  }
  return s;
}

}  // namespace pcsim
