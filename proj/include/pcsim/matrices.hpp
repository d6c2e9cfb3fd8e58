#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcsim/codes.hpp"

namespace pcsim {

enum class RateMatrixKind { PIR, GenericPC, PPC, SysPPC };

// Binary nu x cols matrix steering which databases see desired-symbol queries
// for each virtual row class. Column weight is kappa everywhere.
struct RateMatrix {
  RateMatrixKind kind = RateMatrixKind::GenericPC;
  std::size_t kappa = 0;
  std::size_t nu = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::uint8_t>> lambda;  // nu rows of 0/1
};

// Per-column split of the row classes [nu]: column j of `a` lists the kappa
// classes with lambda=1 (desired placement), column j of `b` the rest.
// Entries are 0-based class indices.
struct InterferenceMatrices {
  std::size_t kappa = 0;
  std::size_t nu = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::size_t>> a;  // kappa x cols
  std::vector<std::vector<std::size_t>> b;  // (nu - kappa) x cols
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Kind-specific checks: column regularity for all kinds; PIR rows must cover
// storage-code information sets; PPC additionally requires kappa/nu = k~/n
// and rows covering star-code information sets; SysPPC requires the first
// floor(cols/k~)*kappa rows to cover star-code information sets and the rest
// to have support exactly [k].
ValidationReport validate(const RateMatrix& m, const LinearCode& storage,
                          const LinearCode* star = nullptr);

// Splits each column into the lambda=1 classes (A) and lambda=0 classes (B),
// listed in increasing class order.
InterferenceMatrices interference(const RateMatrix& m);

// S(u|A): the columns of A containing class u (0-based).
std::vector<std::size_t> coordinate_set(const InterferenceMatrices& im, std::size_t u);

// nu = n rows; row i has cyclic support {i, ..., i+kappa-1} mod n. Every such
// window is an information set for any MDS code of dimension kappa.
RateMatrix construct_mds_cyclic(std::size_t n, std::size_t kappa,
                                RateMatrixKind kind = RateMatrixKind::GenericPC);

// Cyclic construction with nu < n rows, valid when nu divides n: row u covers
// the databases whose index mod nu falls in the width-kappa window at u.
RateMatrix construct_mds_cyclic_nu(std::size_t n, std::size_t kappa, std::size_t nu,
                                   RateMatrixKind kind = RateMatrixKind::GenericPC);

// Number of databases the systematic scheme queries.
std::size_t n_hat(std::size_t n, std::size_t k, std::size_t k_tilde);

// Row count of the systematic rate matrix; equals
// n_hat - floor(n_hat/k~)*(k~-k).
std::size_t nu_sys(std::size_t n, std::size_t k, std::size_t k_tilde);

struct SysPpcConstruction {
  RateMatrix rate;
  InterferenceMatrices im;
  std::size_t n_hat = 0;
  std::size_t rho = 0;  // rows covering star-code information sets
};

// Builds the systematic rate matrix via its interference matrix A: classes
// above rho fill the first k columns' top rows, then 1..rho are assigned
// cyclically down the remaining slots in column-major order. Columns are
// reported in increasing class order.
SysPpcConstruction construct_sys_ppc(std::size_t n, std::size_t k, std::size_t k_tilde);

// Plain-text fixture format: one row per line, '0'/'1' characters.
std::string to_text(const RateMatrix& m);
RateMatrix rate_matrix_from_text(const std::string& text, RateMatrixKind kind);

}  // namespace pcsim
