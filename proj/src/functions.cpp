#include "pcsim/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace pcsim {

namespace {

// Messages are enumerated with an odometer over [0, q)^f.
bool advance(std::vector<std::uint64_t>& w, std::uint64_t q) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (++w[i] < q) return true;
    w[i] = 0;
  }
  return false;
}

// Enumeration cost guard shared by the exact entropy / rank routines.
std::uint64_t message_space_size(const CandidateSet& set) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < set.f; ++i) {
    total *= set.field->q();
    if (total > 10'000'000ULL)
      throw std::runtime_error("message space q^f exceeds the enumeration budget");
  }
  return total;
}

// Two candidates are duplicates when one is a scalar multiple of the other;
// normalizing the leading coefficient to 1 gives a canonical form.
CandidateFunction normalized(const CandidateFunction& fn, const PrimeField& field) {
  CandidateFunction out = fn;
  std::sort(out.terms.begin(), out.terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::uint64_t lead = out.terms.front().second;
  std::uint64_t scale = field.inv(lead);
  for (auto& [m, c] : out.terms) {
    (void)m;
    c = field.mul(c, scale);
  }
  return out;
}

}  // namespace

CandidateSet make_candidate_set(const PrimeField& field, std::size_t num_vars, unsigned g,
                                std::vector<CandidateFunction> functions) {
  if (num_vars == 0) throw std::invalid_argument("candidate set needs at least one variable");
  if (g == 0) throw std::invalid_argument("candidate degree bound must be positive");
  if (functions.empty()) throw std::invalid_argument("candidate set is empty");

  CandidateSet set;
  set.field = &field;
  set.f = num_vars;
  set.g = g;
  set.identity_index.assign(num_vars, std::nullopt);

  std::vector<CandidateFunction> canon;
  for (std::size_t idx = 0; idx < functions.size(); ++idx) {
    CandidateFunction& fn = functions[idx];
    // Drop zero coefficients, reduce the rest mod q, merge repeated monomials.
    std::map<Monomial, std::uint64_t> merged;
    for (auto& [m, c] : fn.terms) {
      if (m.exponents.size() != num_vars)
        throw std::invalid_argument("monomial arity does not match the variable count");
      std::uint64_t val = c % field.q();
      if (val == 0) continue;
      std::uint64_t& slot = merged[m];
      slot = field.add(slot, val);
      if (slot == 0) merged.erase(m);
    }
    fn.terms.assign(merged.begin(), merged.end());
    if (fn.terms.empty())
      throw std::invalid_argument("candidate " + std::to_string(idx + 1) + " is the zero function");
    if (fn.degree() > g)
      throw std::invalid_argument("candidate " + std::to_string(idx + 1) +
                                  " exceeds the degree bound");
    if (fn.degree() == 0)
      throw std::invalid_argument("candidate " + std::to_string(idx + 1) + " is constant");

    CandidateFunction c = normalized(fn, field);
    for (const auto& prev : canon)
      if (prev.terms == c.terms)
        throw std::invalid_argument("candidate " + std::to_string(idx + 1) +
                                    " is a scalar multiple of an earlier candidate");
    canon.push_back(c);

    // Identity candidate: a single degree-1 monomial (any scalar) in variable v.
    if (fn.terms.size() == 1 && fn.terms[0].first.degree() == 1) {
      const auto& e = fn.terms[0].first.exponents;
      std::size_t v = static_cast<std::size_t>(
          std::find(e.begin(), e.end(), 1u) - e.begin());
      if (!set.identity_index[v]) set.identity_index[v] = idx;
    }

    set.functions.push_back(std::move(fn));
  }

  set.includes_identity_messages =
      std::all_of(set.identity_index.begin(), set.identity_index.end(),
                  [](const auto& o) { return o.has_value(); });
  return set;
}

std::uint64_t monomial_count(unsigned m, unsigned g) {
  BigInt c = binomial(g + m, g) - 1;
  if (c > BigInt(UINT64_MAX)) throw std::overflow_error("monomial count overflows");
  return static_cast<std::uint64_t>(c);
}

BigInt polynomial_count(unsigned m, unsigned g, std::uint64_t q) {
  BigInt c = binomial(g + m, g) - 1;
  if (c > BigInt(4096)) throw std::overflow_error("polynomial count: monomial basis too large");
  BigInt total = big_pow(BigInt(q), static_cast<unsigned>(c));
  return (total - 1) / (BigInt(q) - 1);
}

std::uint64_t nonparallel_count(unsigned f, unsigned g) {
  if (f == 0 || g == 0) throw std::invalid_argument("nonparallel count needs f, g >= 1");
  // Inclusion-exclusion over squarefree divisors d (products of primes <= g):
  // vectors with every entry divisible by d and weight <= g number
  // C(floor(g/d) + f, f) - 1.
  std::vector<unsigned> primes;
  for (unsigned p = 2; p <= g; ++p) {
    bool prime = true;
    for (unsigned d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (prime) primes.push_back(p);
  }
  BigInt total = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << primes.size()); ++mask) {
    unsigned long long d = 1;
    int sign = 1;
    for (std::size_t i = 0; i < primes.size(); ++i)
      if (mask & (1ULL << i)) {
        d *= primes[i];
        sign = -sign;
      }
    if (d > g) continue;
    BigInt count = binomial(g / d + f, f) - 1;
    total += sign * count;
  }
  if (total < 0 || total > BigInt(UINT64_MAX))
    throw std::overflow_error("nonparallel count out of range");
  return static_cast<std::uint64_t>(total);
}

std::vector<Monomial> monomial_basis(std::size_t f, unsigned g) {
  std::vector<Monomial> out;
  Monomial m;
  m.exponents.assign(f, 0);
  // Odometer over exponent vectors bounded by g in each coordinate, filtered
  // by total degree.
  while (true) {
    unsigned d = m.degree();
    if (d >= 1 && d <= g) out.push_back(m);
    bool carried = false;
    for (std::size_t i = 0; i < f; ++i) {
      if (++m.exponents[i] <= g) {
        carried = true;
        break;
      }
      m.exponents[i] = 0;
    }
    if (!carried) break;
  }
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.exponents > b.exponents;  // first-variable-major within a degree
  });
  return out;
}

CandidateSet all_monomials_set(const PrimeField& field, std::size_t f, unsigned g) {
  std::vector<CandidateFunction> fns;
  for (const Monomial& m : monomial_basis(f, g)) fns.push_back({{{m, 1}}});
  return make_candidate_set(field, f, g, std::move(fns));
}

CandidateSet nonparallel_monomials_set(const PrimeField& field, std::size_t f, unsigned g) {
  std::vector<CandidateFunction> fns;
  for (const Monomial& m : monomial_basis(f, g)) {
    // Parallel monomials repeat an earlier evaluation pattern: all exponents
    // share a prime divisor <= g.
    std::uint32_t gcd = 0;
    for (auto e : m.exponents) gcd = std::gcd(gcd, e);
    if (gcd == 1) fns.push_back({{{m, 1}}});
  }
  return make_candidate_set(field, f, g, std::move(fns));
}

CandidateSet linear_set(const PrimeField& field, const FqMatrix& v) {
  std::vector<CandidateFunction> fns;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    CandidateFunction fn;
    for (std::size_t j = 0; j < v.cols(); ++j) {
      if (v.at(i, j) == 0) continue;
      Monomial m;
      m.exponents.assign(v.cols(), 0);
      m.exponents[j] = 1;
      fn.terms.push_back({m, v.at(i, j)});
    }
    fns.push_back(std::move(fn));
  }
  return make_candidate_set(field, v.cols(), 1, std::move(fns));
}

CandidateSet all_polynomials_set(const PrimeField& field, std::size_t f, unsigned g) {
  std::vector<Monomial> basis = monomial_basis(f, g);
  std::uint64_t q = field.q();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    total *= q;
    if (total > 1'000'000ULL)
      throw std::runtime_error("all-polynomials set exceeds the enumeration budget");
  }
  // Canonical representatives have leading coefficient 1; emit the pure
  // monomials first, then everything else in coefficient-vector order.
  std::vector<CandidateFunction> monos, rest;
  std::vector<std::uint64_t> coeffs(basis.size(), 0);
  while (advance(coeffs, q)) {
    std::size_t lead = 0;
    while (coeffs[lead] == 0) ++lead;
    if (coeffs[lead] != 1) continue;
    CandidateFunction fn;
    std::size_t support = 0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (coeffs[i]) {
        fn.terms.push_back({basis[i], coeffs[i]});
        ++support;
      }
    if (support == 1)
      monos.push_back(std::move(fn));
    else
      rest.push_back(std::move(fn));
  }
  // Monomial representatives appear in basis order already? The coefficient
  // odometer runs least-significant-first, so re-sort them by basis position.
  std::sort(monos.begin(), monos.end(), [&](const auto& a, const auto& b) {
    auto pos = [&](const CandidateFunction& fn) {
      return std::find(basis.begin(), basis.end(), fn.terms[0].first) - basis.begin();
    };
    return pos(a) < pos(b);
  });
  std::vector<CandidateFunction> fns = std::move(monos);
  fns.insert(fns.end(), rest.begin(), rest.end());
  return make_candidate_set(field, f, g, std::move(fns));
}

std::uint64_t evaluate(const CandidateFunction& fn, const std::vector<std::uint64_t>& w,
                       const PrimeField& field) {
  std::uint64_t acc = 0;
  for (const auto& [m, c] : fn.terms) {
    if (m.exponents.size() != w.size())
      throw std::invalid_argument("message arity does not match the candidate");
    std::uint64_t term = c % field.q();
    for (std::size_t i = 0; i < w.size(); ++i)
      if (m.exponents[i]) term = field.mul(term, field.pow(w[i] % field.q(), m.exponents[i]));
    acc = field.add(acc, term);
  }
  return acc;
}

FqMatrix linear_map(const CandidateSet& set) {
  FqMatrix v(*set.field, set.mu(), set.f);
  for (std::size_t i = 0; i < set.mu(); ++i)
    for (const auto& [m, c] : set.functions[i].terms) {
      if (m.degree() != 1)
        throw std::invalid_argument("linear_map: candidate " + std::to_string(i + 1) +
                                    " is not linear");
      std::size_t var = static_cast<std::size_t>(
          std::find(m.exponents.begin(), m.exponents.end(), 1u) - m.exponents.begin());
      v.at(i, var) = c;
    }
  return v;
}

FqMatrix monomial_expansion(const CandidateSet& set) {
  std::vector<Monomial> basis = monomial_basis(set.f, set.g);
  FqMatrix e(*set.field, set.mu(), basis.size());
  for (std::size_t i = 0; i < set.mu(); ++i)
    for (const auto& [m, c] : set.functions[i].terms) {
      auto it = std::find(basis.begin(), basis.end(), m);
      e.at(i, static_cast<std::size_t>(it - basis.begin())) = c;
    }
  return e;
}

std::size_t joint_class_count(const CandidateSet& set,
                              const std::vector<std::size_t>& subset) {
  message_space_size(set);
  std::set<std::vector<std::uint64_t>> classes;
  std::vector<std::uint64_t> w(set.f, 0);
  std::vector<std::uint64_t> key(subset.size());
  do {
    for (std::size_t i = 0; i < subset.size(); ++i)
      key[i] = evaluate(set.functions.at(subset[i]), w, *set.field);
    classes.insert(key);
  } while (advance(w, set.field->q()));
  return classes.size();
}

EffectiveRank effective_rank(const CandidateSet& set) {
  std::size_t mu = set.mu();
  std::vector<std::size_t> all(mu);
  for (std::size_t i = 0; i < mu; ++i) all[i] = i;
  std::size_t full = joint_class_count(set, all);

  // A subset's evaluation partition coarsens the full one, so it matches the
  // full partition exactly when the class counts agree. An element is
  // necessary when dropping it alone already loses resolution; every
  // equivalent subset must then contain it.
  std::vector<std::size_t> necessary;
  for (std::size_t v = 0; v < mu; ++v) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < mu; ++i)
      if (i != v) rest.push_back(i);
    if (joint_class_count(set, rest) != full) necessary.push_back(v);
  }

  EffectiveRank out;
  if (!necessary.empty() && joint_class_count(set, necessary) == full) {
    out.r = necessary.size();
    out.min_set = necessary;
    out.min_sets = {necessary};
    return out;
  }

  std::vector<std::size_t> optional_elems;
  for (std::size_t i = 0; i < mu; ++i)
    if (std::find(necessary.begin(), necessary.end(), i) == necessary.end())
      optional_elems.push_back(i);

  for (std::size_t extra = necessary.empty() ? 1 : 0; extra <= optional_elems.size(); ++extra) {
    std::size_t target = necessary.size() + extra;
    if (binomial(optional_elems.size(), extra) > BigInt(2'000'000))
      throw std::runtime_error("minimum-set search exceeds the enumeration budget");
    std::vector<std::vector<std::size_t>> hits;
    // Combination odometer over the optional elements.
    std::vector<std::size_t> pick(extra);
    for (std::size_t i = 0; i < extra; ++i) pick[i] = i;
    while (true) {
      std::vector<std::size_t> cand = necessary;
      for (auto p : pick) cand.push_back(optional_elems[p]);
      std::sort(cand.begin(), cand.end());
      if (joint_class_count(set, cand) == full) hits.push_back(cand);
      // Advance the combination.
      std::size_t i = extra;
      while (i > 0 && pick[i - 1] == optional_elems.size() - extra + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < extra; ++j) pick[j] = pick[j - 1] + 1;
    }
    if (!hits.empty()) {
      std::sort(hits.begin(), hits.end());
      out.r = target;
      out.min_set = hits.front();
      out.min_sets = std::move(hits);
      return out;
    }
    if (extra == optional_elems.size()) break;
  }
  throw std::logic_error("minimum-set search fell through");  // unreachable: full set matches
}

DistributionTable distribution(const CandidateSet& set,
                               const std::vector<std::size_t>& subset) {
  std::uint64_t total = message_space_size(set);
  std::map<std::vector<std::uint64_t>, std::uint64_t> counts;
  std::vector<std::uint64_t> w(set.f, 0);
  std::vector<std::uint64_t> key(subset.size());
  do {
    for (std::size_t i = 0; i < subset.size(); ++i)
      key[i] = evaluate(set.functions.at(subset[i]), w, *set.field);
    ++counts[key];
  } while (advance(w, set.field->q()));

  DistributionTable table;
  double h = 0.0;
  for (const auto& [key_, c] : counts) {
    table.support.emplace(key_, Rational(BigInt(c), BigInt(total)));
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  table.entropy_q = h / std::log(static_cast<double>(set.field->q()));
  return table;
}

double entropy_joint(const CandidateSet& set, const std::vector<std::size_t>& subset) {
  if (subset.empty()) return 0.0;
  return distribution(set, subset).entropy_q;
}

double entropy_conditional(const CandidateSet& set,
                           const std::vector<std::size_t>& target,
                           const std::vector<std::size_t>& given) {
  std::vector<std::size_t> joint = target;
  for (auto v : given)
    if (std::find(joint.begin(), joint.end(), v) == joint.end()) joint.push_back(v);
  return entropy_joint(set, joint) - entropy_joint(set, given);
}

double h_min(const CandidateSet& set) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < set.mu(); ++v)
    best = std::min(best, entropy_joint(set, {v}));
  return best;
}

double h_max(const CandidateSet& set) {
  double best = 0.0;
  for (std::size_t v = 0; v < set.mu(); ++v)
    best = std::max(best, entropy_joint(set, {v}));
  return best;
}

double h_min_b(const CandidateSet& set, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw std::invalid_argument("h_min_b over an empty set");
  double best = std::numeric_limits<double>::infinity();
  for (auto v : subset) best = std::min(best, entropy_joint(set, {v}));
  return best;
}

}  // namespace pcsim
