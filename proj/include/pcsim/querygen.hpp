#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcsim/matrices.hpp"
#include "pcsim/rng.hpp"

namespace pcsim {

enum class Role { Desired, Undesired };

// One signed symbol reference inside a query: sign * phi^(v')(row t).
// Indices are 0-based internally; serialization is 1-based.
struct Term {
  std::size_t v = 0;  // virtual message index in [mu]
  std::size_t t = 0;  // virtual row index in [beta]
  int sign = +1;
};

// A tau-sum: tau terms with pairwise-distinct virtual indices, asked of one
// database.
struct TauSum {
  std::vector<Term> terms;  // ascending virtual index
  std::size_t db = 0;
  Role role = Role::Undesired;

  std::size_t round() const { return terms.size(); }
  std::vector<std::size_t> type() const;  // sorted virtual indices
};

struct RoundQueries {
  std::vector<TauSum> desired;
  std::vector<TauSum> undesired;
};

struct QuerySet {
  std::size_t db = 0;
  std::vector<RoundQueries> rounds;  // rounds[tau - 1]

  std::size_t total() const;
};

// Complete query realization for one requested index v: all databases'
// query sets plus the shared randomness that produced them.
struct QueryPlan {
  std::size_t v = 0;
  std::size_t mu = 0;
  std::size_t kappa = 0;
  std::size_t nu = 0;
  std::size_t cols = 0;
  std::size_t beta = 0;  // nu^mu virtual rows
  std::uint64_t seed = 0;
  std::vector<std::size_t> pi;  // permutation over [beta]
  std::vector<int> sigma;       // one-time pad, +-1 per virtual row
  std::vector<QuerySet> per_db;
  // Types removed by eliminate_redundancy, per round (empty until then).
  std::vector<std::vector<std::vector<std::size_t>>> removed;
};

// Number of virtual rows handled through round tau (round boundaries of the
// query generator): alpha_1 = kappa^(mu-1), alpha_mu = nu^(mu-1).
std::uint64_t alpha_bound(std::size_t mu, std::size_t kappa, std::size_t nu,
                          std::size_t tau);

// Per-database number of tau-sums generated in round tau, before elimination.
std::uint64_t round_count(std::size_t mu, std::size_t kappa, std::size_t nu,
                          std::size_t tau);

// Per-database total over all rounds, before elimination.
std::uint64_t pre_elimination_count(std::size_t mu, std::size_t kappa, std::size_t nu);

// Uniformly random permutation of [beta], shared by every database and
// virtual message of one run.
std::vector<std::size_t> index_prep(std::size_t beta, SplitRng& rng);

// Round 1 for class u: the alpha_1 desired singleton rows u*alpha_1 + l and
// the same rows for every other virtual index as undesired singletons.
std::pair<std::vector<TauSum>, std::vector<TauSum>> initial_round(
    std::size_t u, std::uint64_t alpha_1, std::size_t db, std::size_t v, std::size_t mu);

// Desired rows of round tau >= 2 for class u: l*nu + u for
// l in [alpha_(tau-1), alpha_tau).
std::vector<std::size_t> desired_rows(std::size_t u, std::uint64_t alpha_prev,
                                      std::uint64_t alpha_tau, std::size_t nu);

// Full generator: rounds 1..mu for every database, with the one-time pad
// already applied. Queries follow the supplied interference matrices.
QueryPlan q_gen(std::size_t v, std::size_t mu, const InterferenceMatrices& im,
                std::uint64_t seed);

// Multiplies every term's structural sign by the pad entry of its row.
// q_gen calls this last; exposed so tests can strip or reapply the pad.
void apply_pad(QueryPlan& plan);

// Which candidate-set structure drives redundancy elimination.
struct EliminationScheme {
  enum class Kind { PLC, PPC } kind = Kind::PLC;
  // PLC: candidate indices dependent on the others (non-pivot rows of V).
  std::vector<std::size_t> dependent;
  // PPC: positions of the f identity-message candidates, and the size of the
  // monomial basis M(f, g); indices >= basis_size are eliminated in rounds
  // tau >= 2.
  std::vector<std::size_t> message_indices;
  std::size_t basis_size = 0;
};

// Drops every sum whose type is eliminable under the scheme, recording the
// removed types per round. The removed multiset is identical for every v.
void eliminate_redundancy(QueryPlan& plan, const EliminationScheme& scheme);

// The round-tau types the scheme removes (independent of any realization).
std::vector<std::vector<std::size_t>> removed_types(const EliminationScheme& scheme,
                                                    std::size_t mu, std::size_t tau);

struct PrivacyReport {
  bool counts_match = true;    // per-db, per-round type-cardinality counts
  bool removed_match = true;   // removed-type multisets agree across v
  bool signs_uniform = true;   // chi-square on canonical sign patterns
  double p_value = 1.0;
  std::vector<std::string> notes;

  bool ok() const { return counts_match && removed_match && signs_uniform; }
};

// Structural checks (a) and (b) on one plan per v (same run configuration).
PrivacyReport privacy_shape(const std::vector<QueryPlan>& plans);

// Full check: regenerates `trials` independent runs per v, samples one
// canonicalized sum per run from a structurally identical slot, and tests
// sign-pattern homogeneity across v at significance alpha.
PrivacyReport privacy_check(std::size_t mu, const InterferenceMatrices& im,
                            const std::optional<EliminationScheme>& scheme,
                            std::size_t trials, std::uint64_t seed,
                            double alpha = 0.01);

// Line format `j tau role sign1*v1:t1 sign2*v2:t2 ...` (1-based indices,
// role D/U), one sum per line.
std::string to_text(const TauSum& sum);
std::string to_text(const QueryPlan& plan);

}  // namespace pcsim
