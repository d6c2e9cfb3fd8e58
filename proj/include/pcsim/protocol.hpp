#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pcsim/codes.hpp"
#include "pcsim/functions.hpp"
#include "pcsim/matrices.hpp"
#include "pcsim/querygen.hpp"
#include "pcsim/rational.hpp"
#include "pcsim/rng.hpp"

namespace pcsim {

enum class Variant { PLC, PPC, SysPPC };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

// Everything a run needs: the storage code, the candidate set, the rate
// matrix with its interference split, and the derived sizes. Construct via
// make_params, which validates the pieces against each other.
struct SchemeParams {
  Variant variant = Variant::PLC;
  const PrimeField* field = nullptr;
  std::size_t n = 0;
  std::size_t k = 0;
  unsigned g = 1;
  std::size_t f = 0;
  CandidateSet candidates;

  // Encoding code. `rs` is set unless a custom PLC generator was supplied;
  // `star` is its g-fold star product (PPC / SysPPC only).
  std::optional<LinearCode> storage;
  std::optional<RSCode> rs;
  std::optional<RSCode> star;

  RateMatrix rate;
  InterferenceMatrices im;
  std::size_t n_hat = 0;  // databases actually queried (= rate.cols)
  std::size_t rho = 0;    // SysPPC: rows whose support covers a star information set

  // When n <= g(k-1)+1 the scheme degenerates to downloading all messages
  // from one information set; queries and the rate matrix are unused.
  bool trivial = false;

  BigInt beta_exact{1};          // nu^mu
  std::size_t beta = 1;          // clamped copy when simulation is feasible
  bool simulation_feasible = true;
  std::size_t message_len = 0;   // L = beta * k

  std::size_t mu() const { return candidates.mu(); }
  const LinearCode& storage_code() const { return *storage; }
};

// Builds and validates scheme parameters. `lambda` overrides the default rate
// matrix (reduced cyclic for PLC/PPC, the systematic construction for
// SysPPC); `plc_generator` replaces the Lagrange storage code (PLC only).
SchemeParams make_params(Variant variant, const PrimeField& field, std::size_t n,
                         std::size_t k, CandidateSet candidates,
                         const RateMatrix* lambda = nullptr,
                         const LinearCode* plc_generator = nullptr);

// The redundancy-elimination structure the candidate set induces: dependent
// rows of the coefficient matrix for PLC, the identity positions and monomial
// basis size for PPC / SysPPC.
EliminationScheme elimination_for(const SchemeParams& params);

// Effective message count: rank of the coefficient matrix for PLC, mu for the
// polynomial variants (candidate sets are duplicate-free by construction).
std::size_t effective_r(const SchemeParams& params);

struct MessageStore {
  std::vector<FqMatrix> w;  // f matrices, beta x k, uniform entries
};

struct CodedStore {
  std::vector<FqMatrix> c;  // f matrices, beta x n, row-wise encodings
};

std::pair<MessageStore, CodedStore> build_store(const SchemeParams& params,
                                                SplitRng& rng);

// Database j's response: for each retained sum, in round order (desired list
// before undesired list), the value sum_z sign_z * phi^(v_z)(C_{pi(t_z), j}).
std::vector<std::uint64_t> answer(const QuerySet& queries, const SchemeParams& params,
                                  const CodedStore& store,
                                  const std::vector<std::size_t>& pi);

// Raised when recovery disagrees with direct evaluation; carries a diff.
struct RecoveryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the answers are structurally undecodable (inconsistent system,
// underdetermined rows): an invariant violation, not a data mismatch.
struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecodeResult {
  FqMatrix x;  // beta x k evaluation table of the desired candidate, physical rows
  // Desired symbols credited to the round whose queries introduced their
  // virtual row; sums to k * beta.
  std::vector<std::size_t> recovered_per_round;
};

// answers[j] must align with answer() over plan.per_db[j]; the permutation is
// inverted exactly once, when the output table is assembled.
DecodeResult decode_plc(const SchemeParams& params, const QueryPlan& plan,
                        const std::vector<std::vector<std::uint64_t>>& answers);
DecodeResult decode_ppc(const SchemeParams& params, const QueryPlan& plan,
                        const std::vector<std::vector<std::uint64_t>>& answers);
DecodeResult decode_sys_ppc(const SchemeParams& params, const QueryPlan& plan,
                            const std::vector<std::vector<std::uint64_t>>& answers);

// Element-wise check of the decoded table against direct evaluation of
// candidate v on the messages. On mismatch returns a human-readable diff of
// the first few offending cells.
bool verify_recovery(const FqMatrix& decoded, const MessageStore& messages,
                     const CandidateSet& candidates, std::size_t v,
                     std::string* diff = nullptr);

// Certifies that every sum dropped by redundancy elimination is recoverable
// from the retained answers plus offline-computable symbols at its own
// database (rank argument, checked on a concrete realization).
bool removed_reconstructible(const SchemeParams& params, std::size_t v,
                             std::uint64_t seed);

// Exact download cost of one run: rate.cols * per-database count.
BigInt closed_form_denominator(const SchemeParams& params);

// L / D as an exact rational; multiply by H_min for the rate.
Rational closed_form_ratio(const SchemeParams& params);

struct RateReport {
  Variant variant = Variant::PLC;
  std::size_t n = 0, k = 0, g = 1, f = 0, mu = 0;
  std::uint64_t q = 0;
  std::size_t v = 0;  // 0-based; serialized 1-based
  std::uint64_t seed = 0;
  std::size_t message_len = 0;
  double h_min = 0.0;
  BigInt download{0};
  Rational measured_ratio{0};  // L / D from counted answers
  double rate_measured = 0.0;  // measured_ratio * H_min
  double rate_closed_form = 0.0;
  double converse = 0.0;
  std::vector<std::size_t> recovered_per_round;
};

struct RunResult {
  RateReport report;
  FqMatrix decoded;
};

// Full pipeline: store, queries, elimination, answers, decode, verification
// against direct evaluation (throws RecoveryError with a diff on mismatch),
// and the exact-count cross-check against closed_form_denominator (throws
// DecodeError on a count mismatch).
RunResult run_end_to_end(const SchemeParams& params, std::size_t v, std::uint64_t seed);

// `variant,n,k,q,g,f,mu,v,seed,L,Hmin,D,rate_measured,rate_closed_form,converse`
std::string rate_csv_header();
std::string rate_csv_row(const RateReport& r);

}  // namespace pcsim
