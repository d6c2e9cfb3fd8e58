#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcsim/functions.hpp"
#include "pcsim/rational.hpp"

namespace pcsim {

// Retrieval capacity of an [n,k]-coded store with f messages:
// (1 - k/n) / (1 - (k/n)^f), with the k = n limit convention 1/f.
double mds_pir_capacity(std::size_t n, std::size_t k, std::size_t f);

// Capacity of private linear-combination retrieval; depends on the candidate
// set only through the rank r of its coefficient matrix.
double plc_capacity(std::size_t n, std::size_t k, std::size_t r);

struct ConverseResult {
  double bound = 0.0;
  std::size_t rank = 0;
  // False when the minimum set is too large for exhaustive ordering search;
  // the bound is then evaluated for the identity ordering only.
  bool maximized = true;
  std::vector<std::size_t> order;  // candidate indices, best ordering found
};

// Upper bound on the private-computation rate of any protocol for this
// candidate set: H_min / (H_B + sum_{v=1}^{r-1} (k/n)^v H(X^(l_{v+1}) |
// X^(l_1..l_v))), where H_B is the smallest single-candidate entropy in the
// minimum determining set L, the first element of the ordering attains H_B,
// and the remaining order maximizes the weighted sum. When several minimum
// sets exist the largest resulting bound is reported.
ConverseResult ppc_converse(const CandidateSet& set, std::size_t n, std::size_t k);

// Retained sums downloaded from one database: f kappa^mu singletons plus, per
// round tau >= 2, (C(mu,tau) - C(eta,tau)) kappa^(mu-tau+1) (nu-kappa)^(tau-1)
// with eta = max(mu - cap_m, 0).
BigInt ppc_per_db_count(std::size_t mu, std::size_t f, std::size_t cap_m,
                        std::size_t kappa, std::size_t nu);

// Same with the rank-r linear elimination: sum_tau (C(mu,tau) - C(mu-r,tau))
// kappa^(mu-tau+1) (nu-kappa)^(tau-1).
BigInt plc_per_db_count(std::size_t mu, std::size_t r, std::size_t kappa,
                        std::size_t nu);

// Download-normalized rates: the achieved rate is ratio * H_min. Exact.
Rational plc_rate_ratio(std::size_t n, std::size_t k, std::size_t r);
Rational ppc_rate_ratio(std::size_t n, std::size_t k, unsigned g, std::size_t f,
                        std::size_t mu);
Rational sys_ppc_rate_ratio(std::size_t n, std::size_t k, unsigned g, std::size_t f,
                            std::size_t mu);
// Variant of the systematic scheme that keeps all n databases in play instead
// of restricting to the n_hat subset; used by the fig4 series.
Rational sys_ppc_rate_ratio_all_n(std::size_t n, std::size_t k, unsigned g,
                                  std::size_t f, std::size_t mu);

double ppc_rate(std::size_t n, std::size_t k, unsigned g, std::size_t f,
                std::size_t mu, double h_min);
double ppc_rate_asymptotic(std::size_t n, std::size_t k, unsigned g, double h_min);
double sys_ppc_rate(std::size_t n, std::size_t k, unsigned g, std::size_t f,
                    std::size_t mu, double h_min);
double sys_ppc_rate_asymptotic(std::size_t n, std::size_t k, unsigned g,
                               double h_min);

struct FigureRow {
  std::string figure;
  double x = 0.0;
  std::string series;
  double value = 0.0;
  bool fixture = false;  // true for transcribed reference points
};

struct FigureData {
  std::vector<FigureRow> rows;
  // Largest |computed - fixture| over (series, x) pairs present in both.
  double max_abs_delta = 0.0;
};

// which: fig4a | fig4b | fig5a | fig5b.
FigureData figure_data(const std::string& which);

// CSV with header `figure,x,series,value,source`; deterministic formatting
// and row order.
std::string figure_csv(const FigureData& data);

}  // namespace pcsim
