#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pcsim/field.hpp"
#include "pcsim/linalg.hpp"
#include "pcsim/rational.hpp"

namespace pcsim {

// Monomial in f variables, recorded as its exponent vector.
struct Monomial {
  std::vector<std::uint32_t> exponents;

  unsigned degree() const {
    unsigned d = 0;
    for (auto e : exponents) d += e;
    return d;
  }

  bool operator==(const Monomial& o) const { return exponents == o.exponents; }
  bool operator<(const Monomial& o) const { return exponents < o.exponents; }
};

// Multivariate polynomial of bounded degree: finitely many monomials with
// nonzero coefficients, kept sorted by exponent vector.
struct CandidateFunction {
  std::vector<std::pair<Monomial, std::uint64_t>> terms;

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms) {
      (void)c;
      d = std::max(d, m.degree());
    }
    return d;
  }
};

// The mu candidate functions the user may privately evaluate, over f uniform
// message variables in F_q, all of degree <= g.
struct CandidateSet {
  const PrimeField* field = nullptr;
  std::size_t f = 0;
  unsigned g = 1;
  std::vector<CandidateFunction> functions;
  // Position of the identity candidate w |-> w_v (up to scalar) for each
  // variable, when present.
  std::vector<std::optional<std::size_t>> identity_index;
  bool includes_identity_messages = false;

  std::size_t mu() const { return functions.size(); }
};

// Validates degrees, rejects zero functions and scalar-multiple duplicates,
// and locates the identity-message candidates.
CandidateSet make_candidate_set(const PrimeField& f, std::size_t num_vars, unsigned g,
                                std::vector<CandidateFunction> functions);

// M(m, g) = C(g+m, g) - 1: monomials in m variables of degree in [1, g].
std::uint64_t monomial_count(unsigned m, unsigned g);

// mu(m, g) = (q^M - 1)/(q - 1): polynomials up to scalar multiplication.
BigInt polynomial_count(unsigned m, unsigned g, std::uint64_t q);

// Count of nonparallel monomials (exponent vectors in [1, g] weight whose
// entries are not all divisible by a common prime <= g), by inclusion-
// exclusion over the primes.
std::uint64_t nonparallel_count(unsigned f, unsigned g);

// All monomials with 1 <= degree <= g, ordered by (degree, then exponent
// vector from the first variable down), so the f linear monomials come first
// in variable order.
std::vector<Monomial> monomial_basis(std::size_t f, unsigned g);

// Canonical generated candidate sets.
CandidateSet all_monomials_set(const PrimeField& field, std::size_t f, unsigned g);
CandidateSet nonparallel_monomials_set(const PrimeField& field, std::size_t f, unsigned g);
// Linear candidates from the mu x f coefficient matrix V.
CandidateSet linear_set(const PrimeField& field, const FqMatrix& v);
// Every polynomial of degree <= g up to scalar multiplication, monomials
// first; only sensible for tiny q^M (guarded).
CandidateSet all_polynomials_set(const PrimeField& field, std::size_t f, unsigned g);

std::uint64_t evaluate(const CandidateFunction& fn, const std::vector<std::uint64_t>& w,
                       const PrimeField& field);

// mu x f matrix of linear coefficients; rejects nonlinear candidates.
FqMatrix linear_map(const CandidateSet& set);

// mu x M(f, g) matrix expressing each candidate over monomial_basis(f, g).
FqMatrix monomial_expansion(const CandidateSet& set);

struct EffectiveRank {
  std::size_t r = 0;
  std::vector<std::size_t> min_set;                 // lexicographically smallest
  std::vector<std::vector<std::size_t>> min_sets;   // all minimum sets found
};

// Smallest subset of candidates whose joint evaluation distinguishes message
// vectors exactly as well as all mu candidates do (equivalently: equal joint
// entropy). Exact, by partition counting over the q^f message space.
EffectiveRank effective_rank(const CandidateSet& set);

struct DistributionTable {
  std::map<std::vector<std::uint64_t>, Rational> support;
  double entropy_q = 0.0;  // in q-ary units
};

DistributionTable distribution(const CandidateSet& set,
                               const std::vector<std::size_t>& subset);

// Exact number of distinct joint evaluation tuples over the message space.
std::size_t joint_class_count(const CandidateSet& set,
                              const std::vector<std::size_t>& subset);

// Joint entropy H(X^(S)) of prototype evaluations, q-ary units, exact
// enumeration over uniform messages.
double entropy_joint(const CandidateSet& set, const std::vector<std::size_t>& subset);

// H(target | given) = H(target u given) - H(given).
double entropy_conditional(const CandidateSet& set,
                           const std::vector<std::size_t>& target,
                           const std::vector<std::size_t>& given);

double h_min(const CandidateSet& set);
double h_max(const CandidateSet& set);
// Minimum single-candidate entropy over a given index set.
double h_min_b(const CandidateSet& set, const std::vector<std::size_t>& subset);

}  // namespace pcsim
