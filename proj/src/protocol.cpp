#include "pcsim/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "pcsim/analysis.hpp"

namespace pcsim {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::PLC: return "plc";
    case Variant::PPC: return "ppc";
    case Variant::SysPPC: return "sys_ppc";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  std::string key;  // case- and underscore-insensitive: SysPPC == sys_ppc
  for (char ch : s)
    if (ch != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (key == "plc") return Variant::PLC;
  if (key == "ppc") return Variant::PPC;
  if (key == "sysppc") return Variant::SysPPC;
  throw std::invalid_argument("unknown variant '" + s + "' (plc, ppc, sys_ppc)");
}

namespace {

constexpr std::size_t kMaxStoreCells = 50'000'000;  // beta * f * n guard

std::size_t star_dim(unsigned deg, std::size_t k, std::size_t n) {
  return std::min<std::size_t>(static_cast<std::size_t>(deg) * (k - 1) + 1, n);
}

}  // namespace

SchemeParams make_params(Variant variant, const PrimeField& field, std::size_t n,
                         std::size_t k, CandidateSet candidates,
                         const RateMatrix* lambda, const LinearCode* plc_generator) {
  if (k == 0 || n == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (candidates.field == nullptr || *candidates.field != field)
    throw std::invalid_argument("candidate set was built over a different field");
  if (candidates.mu() == 0) throw std::invalid_argument("empty candidate set");

  SchemeParams p;
  p.variant = variant;
  p.field = &field;
  p.n = n;
  p.k = k;
  p.f = candidates.f;
  p.g = candidates.g;
  p.candidates = std::move(candidates);

  if (variant == Variant::PLC) {
    p.g = 1;
    linear_map(p.candidates);  // rejects nonlinear candidates
  } else {
    if (!p.candidates.includes_identity_messages)
      throw std::invalid_argument(
          "polynomial variants need every message among the candidates");
    // Redundancy elimination treats candidates past the monomial basis as
    // combinations of the first M; that only holds if the set leads with the
    // basis itself.
    const std::uint64_t m = monomial_count(static_cast<unsigned>(p.f), p.g);
    if (p.mu() > m) {
      FqMatrix e = monomial_expansion(p.candidates);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t b = 0; b < m; ++b)
          if ((e.at(i, b) != 0) != (i == b))
            throw std::invalid_argument(
                "with mu > M(f,g) the candidate list must start with the "
                "monomial basis in order");
    }
  }

  if (plc_generator != nullptr) {
    if (variant != Variant::PLC)
      throw std::invalid_argument("custom generators are supported for PLC only");
    if (plc_generator->n != n || plc_generator->k != k ||
        *plc_generator->field != field)
      throw std::invalid_argument("generator shape does not match [n, k] over F_q");
    p.storage = *plc_generator;
  } else {
    if (field.q() < n)
      throw std::invalid_argument("Lagrange point layout needs q >= n");
    RSCode code = rs_code_default(field, n, k);
    p.storage = code.base;
    p.rs = std::move(code);
  }
  if (variant != Variant::PLC) p.star = star_product_code(*p.rs, p.g);

  p.trivial = (n <= static_cast<std::size_t>(p.g) * (k - 1) + 1);
  if (p.trivial) {
    p.n_hat = k;
    p.beta_exact = 1;
    p.beta = 1;
    p.message_len = k;
    return p;
  }

  const std::size_t k_tilde = star_dim(p.g, k, n);
  if (variant == Variant::SysPPC) {
    if (lambda != nullptr)
      throw std::invalid_argument("the systematic variant builds its own rate matrix");
    SysPpcConstruction c = construct_sys_ppc(n, k, k_tilde);
    p.rate = std::move(c.rate);
    p.im = std::move(c.im);
    p.n_hat = c.n_hat;
    p.rho = c.rho;
  } else {
    const std::size_t dim = (variant == Variant::PLC) ? k : k_tilde;
    if (lambda != nullptr) {
      p.rate = *lambda;
      if (p.rate.cols != n)
        throw std::invalid_argument("rate matrix column count must equal n");
      if (p.rate.kappa * n != dim * p.rate.nu)
        throw std::invalid_argument(
            "rate matrix needs kappa/nu = " + std::to_string(dim) + "/" +
            std::to_string(n));
      if (variant == Variant::PPC && p.rate.kind != RateMatrixKind::PPC)
        throw std::invalid_argument("PPC runs need a PPC-kind rate matrix");
      if (variant == Variant::PLC && p.rate.kind != RateMatrixKind::PIR &&
          p.rate.kind != RateMatrixKind::GenericPC)
        throw std::invalid_argument("PLC runs need a PIR or generic rate matrix");
    } else {
      const std::size_t d = std::gcd(n, dim);
      p.rate = construct_mds_cyclic_nu(
          n, dim / d, n / d,
          variant == Variant::PLC ? RateMatrixKind::PIR : RateMatrixKind::PPC);
    }
    p.n_hat = n;
  }

  {
    ValidationReport rep =
        validate(p.rate, p.storage_code(), p.star ? &p.star->base : nullptr);
    if (!rep.ok)
      throw std::invalid_argument("rate matrix failed validation: " +
                                  rep.violations.front());
    if (p.variant != Variant::SysPPC) p.im = interference(p.rate);
  }

  p.beta_exact = big_pow(BigInt(p.rate.nu), static_cast<unsigned>(p.mu()));
  BigInt cells = p.beta_exact * BigInt(p.f) * BigInt(n);
  p.simulation_feasible = (cells <= BigInt(kMaxStoreCells));
  if (p.simulation_feasible) {
    p.beta = static_cast<std::size_t>(p.beta_exact);
    p.message_len = p.beta * k;
  } else {
    p.beta = 0;
    p.message_len = 0;
  }
  return p;
}

EliminationScheme elimination_for(const SchemeParams& params) {
  EliminationScheme s;
  if (params.variant == Variant::PLC) {
    s.kind = EliminationScheme::Kind::PLC;
    FqMatrix v = linear_map(params.candidates);
    SparseSolver span(*params.field);
    for (std::size_t i = 0; i < v.rows(); ++i) {
      SparseSolver::Combo row;
      for (std::size_t j = 0; j < v.cols(); ++j)
        if (v.at(i, j) != 0) row.emplace_back(j, v.at(i, j));
      const std::size_t before = span.rank();
      span.add_equation(row, 0);
      if (span.rank() == before) s.dependent.push_back(i);
    }
  } else {
    s.kind = EliminationScheme::Kind::PPC;
    for (const auto& idx : params.candidates.identity_index)
      s.message_indices.push_back(*idx);
    s.basis_size = monomial_count(static_cast<unsigned>(params.f), params.g);
  }
  return s;
}

std::size_t effective_r(const SchemeParams& params) {
  if (params.variant != Variant::PLC) return params.mu();
  return linear_map(params.candidates).rank();
}

std::pair<MessageStore, CodedStore> build_store(const SchemeParams& params,
                                                SplitRng& rng) {
  if (!params.simulation_feasible)
    throw std::invalid_argument("configuration too large to simulate");
  const PrimeField& F = *params.field;
  MessageStore ms;
  CodedStore cs;
  for (std::size_t m = 0; m < params.f; ++m) {
    FqMatrix w(F, params.beta, params.k);
    for (std::size_t r = 0; r < params.beta; ++r)
      for (std::size_t c = 0; c < params.k; ++c) w.at(r, c) = rng.uniform(F.q());
    FqMatrix coded(F, params.beta, params.n);
    for (std::size_t r = 0; r < params.beta; ++r) {
      std::vector<std::uint64_t> cw = encode_row(params.storage_code(), w.row(r));
      for (std::size_t j = 0; j < params.n; ++j) coded.at(r, j) = cw[j];
    }
    ms.w.push_back(std::move(w));
    cs.c.push_back(std::move(coded));
  }
  return {std::move(ms), std::move(cs)};
}

namespace {

// Applies fn to every retained sum of one database's query set, in answer
// order: rounds ascending, desired sums before undesired ones.
template <typename Fn>
void for_each_sum(const QuerySet& qs, Fn&& fn) {
  for (const RoundQueries& round : qs.rounds) {
    for (const TauSum& s : round.desired) fn(s);
    for (const TauSum& s : round.undesired) fn(s);
  }
}

}  // namespace

std::vector<std::uint64_t> answer(const QuerySet& queries, const SchemeParams& params,
                                  const CodedStore& store,
                                  const std::vector<std::size_t>& pi) {
  const PrimeField& F = *params.field;
  std::vector<std::uint64_t> out;
  std::vector<std::uint64_t> point(params.f);
  for_each_sum(queries, [&](const TauSum& s) {
    std::uint64_t acc = 0;
    for (const Term& term : s.terms) {
      const std::size_t row = pi.at(term.t);
      for (std::size_t m = 0; m < params.f; ++m)
        point[m] = store.c[m].at(row, s.db);
      const std::uint64_t val =
          evaluate(params.candidates.functions[term.v], point, F);
      acc = term.sign > 0 ? F.add(acc, val) : F.sub(acc, val);
    }
    out.push_back(acc);
  });
  return out;
}

namespace {

// Constraint-driven decoder. Unknowns are "atoms": basis function b evaluated
// on the coded row of virtual index t, one value per database. Every answered
// sum is a linear equation over atoms at its database. Two facts propagate
// knowledge across databases: a sum whose content has maximum degree d is a
// codeword of the degree-d star code (dimension min{d(k-1)+1, n}), and so is
// the per-row evaluation vector of any single candidate. Whenever enough
// coordinates of such a vector are determined, the rest follow by solving the
// generator system (the interpolation step of the decoding procedure).
class Decoder {
 public:
  Decoder(const SchemeParams& params, const QueryPlan& plan)
      : p_(params),
        plan_(plan),
        F_(*params.field),
        expansion_(params.variant == Variant::PLC
                       ? linear_map(params.candidates)
                       : monomial_expansion(params.candidates)),
        cols_(plan.cols) {
    if (plan.beta != p_.beta || plan.mu != p_.mu())
      throw std::invalid_argument("query plan does not match the scheme parameters");
    basis_m_ = expansion_.cols();
    if (p_.variant == Variant::PLC) {
      basis_deg_.assign(basis_m_, 1);
    } else {
      basis_ = monomial_basis(p_.f, p_.g);
      for (const Monomial& m : basis_) basis_deg_.push_back(m.degree());
      offline_done_.assign(cols_, std::vector<std::uint8_t>(p_.beta, 0));
    }
    for (const CandidateFunction& fn : p_.candidates.functions)
      cand_deg_.push_back(p_.variant == Variant::PLC ? 1u : fn.degree());
    solvers_.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) solvers_.emplace_back(F_);
    for (std::size_t t = 0; t < p_.beta; ++t)
      out_row_.push_back(track(candidate_combo(plan_.v, t)));
  }

  SparseSolver::Combo candidate_combo(std::size_t v, std::size_t t) const {
    SparseSolver::Combo combo;
    for (std::size_t b = 0; b < basis_m_; ++b)
      if (expansion_.at(v, b) != 0)
        combo.emplace_back(t * basis_m_ + b, expansion_.at(v, b));
    return combo;
  }

  SparseSolver::Combo sum_combo(const TauSum& s) const {
    SparseSolver::Combo combo;
    for (const Term& term : s.terms) {
      const std::uint64_t sc = term.sign > 0 ? 1 : F_.q() - 1;
      for (std::size_t b = 0; b < basis_m_; ++b) {
        const std::uint64_t c = expansion_.at(term.v, b);
        if (c != 0) combo.emplace_back(term.t * basis_m_ + b, F_.mul(sc, c));
      }
    }
    return canonical(std::move(combo));
  }

  void add_answers(const std::vector<std::vector<std::uint64_t>>& answers) {
    if (answers.size() != cols_)
      throw std::invalid_argument("need one answer vector per queried database");
    for (std::size_t j = 0; j < cols_; ++j) {
      std::size_t idx = 0;
      for_each_sum(plan_.per_db[j], [&](const TauSum& s) {
        if (idx >= answers[j].size())
          throw std::invalid_argument("answer vector too short for database " +
                                      std::to_string(j + 1));
        insert_equation(j, sum_combo(s), answers[j][idx]);
        track(sum_combo(s));
        ++idx;
      });
      if (idx != answers[j].size())
        throw std::invalid_argument("answer vector too long for database " +
                                    std::to_string(j + 1));
    }
  }

  void run() {
    bool progress = true;
    while (progress) {
      progress = false;
      if (basis_m_ > p_.f) progress = offline_closure();
      for (Tracked& tr : tracked_) {
        if (tr.filled) continue;
        for (std::size_t j = 0; j < cols_; ++j) {
          if (tr.coords.count(j)) continue;
          const std::size_t rk = solvers_[j].rank();
          if (tr.tried_rank[j] == rk) continue;
          tr.tried_rank[j] = rk;
          if (auto val = solvers_[j].reduce(tr.combo)) {
            tr.coords.emplace(j, *val);
            progress = true;
          }
        }
        if (!tr.filled && tr.coords.size() >= tr.dim &&
            tr.coords.size() != tr.fill_attempt_at) {
          tr.fill_attempt_at = tr.coords.size();
          if (try_fill(tr)) progress = true;
        }
      }
    }
  }

  std::optional<std::uint64_t> value_of(std::size_t db,
                                        const SparseSolver::Combo& combo) const {
    return solvers_[db].reduce(canonical(combo));
  }

  DecodeResult extract() {
    FqMatrix x(F_, p_.beta, p_.k);
    for (std::size_t t = 0; t < p_.beta; ++t) {
      const Tracked& tr = tracked_[out_row_[t]];
      const std::size_t physical = plan_.pi[t];
      if (p_.variant == Variant::PLC) {
        if (!tr.filled)
          throw DecodeError("virtual row " + std::to_string(t + 1) +
                            " left undetermined by the answers");
        for (std::size_t i = 0; i < p_.k; ++i) x.at(physical, i) = tr.w[i];
        continue;
      }
      // Systematic Lagrange layout: the evaluation table entries are the
      // codeword coordinates at the first k databases.
      for (std::size_t i = 0; i < p_.k; ++i) {
        auto it = tr.coords.find(i);
        std::optional<std::uint64_t> val;
        if (it != tr.coords.end()) val = it->second;
        else val = solvers_[i].reduce(tr.combo);
        if (!val)
          throw DecodeError("virtual row " + std::to_string(t + 1) +
                            " undetermined at database " + std::to_string(i + 1));
        x.at(physical, i) = *val;
      }
    }
    DecodeResult res{std::move(x), {}};
    std::uint64_t prev = 0;
    for (std::size_t tau = 1; tau <= p_.mu(); ++tau) {
      const std::uint64_t bound = alpha_bound(p_.mu(), plan_.kappa, plan_.nu, tau);
      res.recovered_per_round.push_back(static_cast<std::size_t>(
          (bound - prev) * plan_.nu * p_.k));
      prev = bound;
    }
    return res;
  }

 private:
  struct Tracked {
    SparseSolver::Combo combo;
    std::size_t dim = 0;
    std::map<std::size_t, std::uint64_t> coords;
    std::vector<std::size_t> tried_rank;
    std::size_t fill_attempt_at = 0;
    std::vector<std::uint64_t> w;
    bool filled = false;
  };

  SparseSolver::Combo canonical(SparseSolver::Combo combo) const {
    std::sort(combo.begin(), combo.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseSolver::Combo out;
    for (const auto& [idx, c] : combo) {
      const std::uint64_t r = c % F_.q();
      if (!out.empty() && out.back().first == idx)
        out.back().second = F_.add(out.back().second, r);
      else
        out.emplace_back(idx, r);
      if (out.back().second == 0) out.pop_back();
    }
    return out;
  }

  std::size_t dim_of(const SparseSolver::Combo& combo) const {
    unsigned deg = 1;
    for (const auto& [atom, c] : combo) {
      (void)c;
      deg = std::max(deg, basis_deg_[atom % basis_m_]);
    }
    return star_dim(deg, p_.k, p_.n);
  }

  std::size_t track(SparseSolver::Combo combo) {
    combo = canonical(std::move(combo));
    if (combo.empty())
      throw std::logic_error("attempted to track an identically-zero combination");
    auto [it, fresh] = index_.try_emplace(combo, tracked_.size());
    if (fresh) {
      Tracked tr;
      tr.combo = std::move(combo);
      tr.dim = dim_of(tr.combo);
      tr.tried_rank.assign(cols_, static_cast<std::size_t>(-1));
      tracked_.push_back(std::move(tr));
    }
    return it->second;
  }

  void insert_equation(std::size_t db, const SparseSolver::Combo& combo,
                       std::uint64_t value) {
    if (!solvers_[db].add_equation(combo, value))
      throw DecodeError("inconsistent answers at database " + std::to_string(db + 1));
  }

  const FqMatrix& generator_for(std::size_t d) {
    auto it = gens_.find(d);
    if (it != gens_.end()) return it->second;
    if (d == p_.k && !p_.rs) return gens_.emplace(d, p_.storage_code().G).first->second;
    const std::vector<std::uint64_t>& alpha = p_.rs->alpha;
    FqMatrix g = rs_code(F_, p_.n, d, alpha,
                         std::vector<std::uint64_t>(alpha.begin(), alpha.begin() + d))
                     .base.G;
    return gens_.emplace(d, std::move(g)).first->second;
  }

  // The nonlinear step of the decoding procedure: the f linear-basis atoms of
  // a virtual row are the coded message symbols at that database, and once all
  // of them are pinned, every higher-degree basis monomial there evaluates
  // pointwise. This is what makes the eliminated product singletons redundant.
  bool offline_closure() {
    bool any = false;
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t t = 0; t < p_.beta; ++t) {
        if (offline_done_[j][t]) continue;
        std::vector<std::uint64_t> c(p_.f);
        bool all = true;
        for (std::size_t m = 0; m < p_.f && all; ++m) {
          auto val = solvers_[j].reduce({{t * basis_m_ + m, 1}});
          if (val) c[m] = *val;
          else all = false;
        }
        if (!all) continue;
        offline_done_[j][t] = 1;
        for (std::size_t b = p_.f; b < basis_m_; ++b) {
          std::uint64_t val = 1;
          for (std::size_t m = 0; m < p_.f; ++m)
            if (basis_[b].exponents[m] != 0)
              val = F_.mul(val, F_.pow(c[m], basis_[b].exponents[m]));
          insert_equation(j, {{t * basis_m_ + b, 1}}, val);
        }
        any = true;
      }
    return any;
  }

  bool try_fill(Tracked& tr) {
    const FqMatrix& g = generator_for(tr.dim);
    // Greedily pick known coordinates whose generator columns are independent.
    std::vector<std::size_t> chosen;
    for (const auto& [j, val] : tr.coords) {
      (void)val;
      chosen.push_back(j);
      if (g.select_columns(chosen).rank() < chosen.size()) chosen.pop_back();
      if (chosen.size() == tr.dim) break;
    }
    if (chosen.size() < tr.dim) return false;
    std::vector<std::uint64_t> vals;
    for (std::size_t j : chosen) vals.push_back(tr.coords.at(j));
    std::vector<std::uint64_t> w = solve_row_system(g.select_columns(chosen), vals);
    for (const auto& [j, val] : tr.coords) {
      std::uint64_t pred = 0;
      for (std::size_t i = 0; i < tr.dim; ++i)
        pred = F_.add(pred, F_.mul(w[i], g.at(i, j)));
      if (pred != val)
        throw DecodeError(
            "interpolated codeword disagrees with a derived coordinate at database " +
            std::to_string(j + 1));
    }
    for (std::size_t j = 0; j < cols_; ++j) {
      if (tr.coords.count(j)) continue;
      std::uint64_t pred = 0;
      for (std::size_t i = 0; i < tr.dim; ++i)
        pred = F_.add(pred, F_.mul(w[i], g.at(i, j)));
      tr.coords.emplace(j, pred);
      insert_equation(j, tr.combo, pred);
    }
    tr.w = std::move(w);
    tr.filled = true;
    return true;
  }

  const SchemeParams& p_;
  const QueryPlan& plan_;
  const PrimeField& F_;
  FqMatrix expansion_;  // mu x basis_m coefficient rows over the atom basis
  std::size_t cols_ = 0;
  std::size_t basis_m_ = 0;
  std::vector<Monomial> basis_;
  std::vector<unsigned> basis_deg_;
  std::vector<unsigned> cand_deg_;
  std::vector<std::vector<std::uint8_t>> offline_done_;
  std::vector<SparseSolver> solvers_;
  std::vector<Tracked> tracked_;
  std::map<SparseSolver::Combo, std::size_t> index_;
  std::vector<std::size_t> out_row_;
  std::map<std::size_t, FqMatrix> gens_;
};

DecodeResult decode_common(const SchemeParams& params, const QueryPlan& plan,
                           const std::vector<std::vector<std::uint64_t>>& answers) {
  if (params.trivial)
    throw std::invalid_argument("trivial configurations have no query plan");
  Decoder dec(params, plan);
  dec.add_answers(answers);
  dec.run();
  return dec.extract();
}

}  // namespace

DecodeResult decode_plc(const SchemeParams& params, const QueryPlan& plan,
                        const std::vector<std::vector<std::uint64_t>>& answers) {
  if (params.variant != Variant::PLC)
    throw std::invalid_argument("decode_plc needs PLC parameters");
  return decode_common(params, plan, answers);
}

DecodeResult decode_ppc(const SchemeParams& params, const QueryPlan& plan,
                        const std::vector<std::vector<std::uint64_t>>& answers) {
  if (params.variant != Variant::PPC)
    throw std::invalid_argument("decode_ppc needs PPC parameters");
  return decode_common(params, plan, answers);
}

DecodeResult decode_sys_ppc(const SchemeParams& params, const QueryPlan& plan,
                            const std::vector<std::vector<std::uint64_t>>& answers) {
  if (params.variant != Variant::SysPPC)
    throw std::invalid_argument("decode_sys_ppc needs systematic parameters");
  return decode_common(params, plan, answers);
}

bool verify_recovery(const FqMatrix& decoded, const MessageStore& messages,
                     const CandidateSet& candidates, std::size_t v,
                     std::string* diff) {
  const PrimeField& F = *candidates.field;
  const std::size_t rows = messages.w.front().rows();
  const std::size_t cols = messages.w.front().cols();
  std::vector<std::uint64_t> point(messages.w.size());
  std::size_t mismatches = 0;
  std::ostringstream out;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      for (std::size_t m = 0; m < point.size(); ++m) point[m] = messages.w[m].at(r, c);
      const std::uint64_t expect = evaluate(candidates.functions[v], point, F);
      if (decoded.at(r, c) != expect) {
        if (mismatches < 8)
          out << "row " << r + 1 << " col " << c + 1 << ": decoded "
              << decoded.at(r, c) << ", direct evaluation " << expect << "\n";
        ++mismatches;
      }
    }
  if (diff != nullptr) {
    if (mismatches == 0)
      *diff = "";
    else
      *diff = std::to_string(mismatches) + " of " + std::to_string(rows * cols) +
              " cells differ\n" + out.str();
  }
  return mismatches == 0;
}

bool removed_reconstructible(const SchemeParams& params, std::size_t v,
                             std::uint64_t seed) {
  if (params.trivial) return true;
  QueryPlan full = q_gen(v, params.mu(), params.im, seed);
  QueryPlan kept = full;
  const EliminationScheme scheme = elimination_for(params);
  eliminate_redundancy(kept, scheme);

  SplitRng msg_rng = SplitRng(seed).split(3);
  auto [ms, cs] = build_store(params, msg_rng);
  (void)ms;
  std::vector<std::vector<std::uint64_t>> answers;
  for (std::size_t j = 0; j < kept.cols; ++j)
    answers.push_back(answer(kept.per_db[j], params, cs, kept.pi));

  Decoder dec(params, kept);
  dec.add_answers(answers);
  dec.run();

  // Type sets dropped per round, as the elimination predicate defines them.
  std::vector<std::set<std::vector<std::size_t>>> dropped(params.mu() + 1);
  for (std::size_t tau = 1; tau <= params.mu(); ++tau)
    for (auto& type : removed_types(scheme, params.mu(), tau))
      dropped[tau].insert(type);

  std::vector<std::uint64_t> point(params.f);
  for (std::size_t j = 0; j < full.cols; ++j) {
    bool ok = true;
    for_each_sum(full.per_db[j], [&](const TauSum& s) {
      if (!dropped[s.round()].count(s.type())) return;
      auto derived = dec.value_of(j, dec.sum_combo(s));
      if (!derived) {
        ok = false;
        return;
      }
      // The derived value must also be the true answer.
      std::uint64_t acc = 0;
      for (const Term& term : s.terms) {
        for (std::size_t m = 0; m < params.f; ++m)
          point[m] = cs.c[m].at(full.pi[term.t], s.db);
        const std::uint64_t val =
            evaluate(params.candidates.functions[term.v], point, *params.field);
        acc = term.sign > 0 ? params.field->add(acc, val) : params.field->sub(acc, val);
      }
      if (*derived != acc) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

BigInt closed_form_denominator(const SchemeParams& params) {
  if (params.trivial) return BigInt(params.f) * BigInt(params.k);
  BigInt per_db;
  if (params.variant == Variant::PLC)
    per_db = plc_per_db_count(params.mu(), effective_r(params), params.rate.kappa,
                              params.rate.nu);
  else
    per_db = ppc_per_db_count(params.mu(), params.f,
                              monomial_count(static_cast<unsigned>(params.f), params.g),
                              params.rate.kappa, params.rate.nu);
  return BigInt(params.rate.cols) * per_db;
}

Rational closed_form_ratio(const SchemeParams& params) {
  if (params.trivial) return Rational(1, params.f);
  return Rational(BigInt(params.k) * params.beta_exact, closed_form_denominator(params));
}

namespace {

// Trivial fallback when n <= g(k-1)+1: download every message from one
// information set of the storage code and evaluate offline.
RunResult run_trivial(const SchemeParams& params, std::size_t v, std::uint64_t seed) {
  const PrimeField& F = *params.field;
  SplitRng msg_rng = SplitRng(seed).split(3);
  auto [ms, cs] = build_store(params, msg_rng);

  std::vector<std::size_t> info;
  const FqMatrix& g = params.storage_code().G;
  for (std::size_t j = 0; j < params.n && info.size() < params.k; ++j) {
    info.push_back(j);
    if (g.select_columns(info).rank() < info.size()) info.pop_back();
  }
  if (info.size() < params.k)
    throw DecodeError("storage generator has no information set");

  const FqMatrix sub = g.select_columns(info);
  FqMatrix x(F, params.beta, params.k);
  std::vector<std::uint64_t> point(params.f);
  BigInt downloaded = 0;
  for (std::size_t r = 0; r < params.beta; ++r) {
    std::vector<std::vector<std::uint64_t>> rows(params.f);
    for (std::size_t m = 0; m < params.f; ++m) {
      std::vector<std::uint64_t> coords;
      for (std::size_t j : info) coords.push_back(cs.c[m].at(r, j));
      downloaded += static_cast<int>(coords.size());
      rows[m] = solve_row_system(sub, coords);
    }
    for (std::size_t i = 0; i < params.k; ++i) {
      for (std::size_t m = 0; m < params.f; ++m) point[m] = rows[m][i];
      x.at(r, i) = evaluate(params.candidates.functions[v], point, F);
    }
  }

  RunResult res{RateReport{}, std::move(x)};
  res.report.recovered_per_round = {params.beta * params.k};
  res.report.download = downloaded;
  std::string diff;
  if (!verify_recovery(res.decoded, ms, params.candidates, v, &diff))
    throw RecoveryError(diff);
  return res;
}

}  // namespace

RunResult run_end_to_end(const SchemeParams& params, std::size_t v, std::uint64_t seed) {
  if (v >= params.mu())
    throw std::invalid_argument("candidate index out of range");

  RunResult res = [&] {
    if (params.trivial) return run_trivial(params, v, seed);

    QueryPlan plan = q_gen(v, params.mu(), params.im, seed);
    eliminate_redundancy(plan, elimination_for(params));

    SplitRng msg_rng = SplitRng(seed).split(3);
    auto [ms, cs] = build_store(params, msg_rng);
    std::vector<std::vector<std::uint64_t>> answers;
    BigInt downloaded = 0;
    for (std::size_t j = 0; j < plan.cols; ++j) {
      answers.push_back(answer(plan.per_db[j], params, cs, plan.pi));
      downloaded += static_cast<int>(answers.back().size());
    }

    DecodeResult dec = params.variant == Variant::PLC ? decode_plc(params, plan, answers)
                       : params.variant == Variant::PPC
                           ? decode_ppc(params, plan, answers)
                           : decode_sys_ppc(params, plan, answers);
    std::string diff;
    if (!verify_recovery(dec.x, ms, params.candidates, v, &diff))
      throw RecoveryError(diff);
    RunResult r{RateReport{}, std::move(dec.x)};
    r.report.download = downloaded;
    r.report.recovered_per_round = std::move(dec.recovered_per_round);
    return r;
  }();

  const BigInt expect = closed_form_denominator(params);
  if (res.report.download != expect)
    throw DecodeError("download count " + res.report.download.str() +
                      " does not match the closed form " + expect.str());

  RateReport& rep = res.report;
  rep.variant = params.variant;
  rep.n = params.n;
  rep.k = params.k;
  rep.g = params.g;
  rep.f = params.f;
  rep.mu = params.mu();
  rep.q = params.field->q();
  rep.v = v;
  rep.seed = seed;
  rep.message_len = params.message_len;
  rep.h_min = h_min(params.candidates);
  rep.measured_ratio = Rational(BigInt(params.message_len), rep.download);
  rep.rate_measured = to_double(rep.measured_ratio) * rep.h_min;
  rep.rate_closed_form = to_double(closed_form_ratio(params)) * rep.h_min;
  rep.converse = ppc_converse(params.candidates, params.n, params.k).bound;
  return res;
}

std::string rate_csv_header() {
  return "variant,n,k,q,g,f,mu,v,seed,L,Hmin,D,rate_measured,rate_closed_form,converse";
}

std::string rate_csv_row(const RateReport& r) {
  char num[128];
  std::string out = to_string(r.variant);
  auto add = [&out](const std::string& s) {
    out += ',';
    out += s;
  };
  add(std::to_string(r.n));
  add(std::to_string(r.k));
  add(std::to_string(r.q));
  add(std::to_string(r.g));
  add(std::to_string(r.f));
  add(std::to_string(r.mu));
  add(std::to_string(r.v + 1));
  add(std::to_string(r.seed));
  add(std::to_string(r.message_len));
  std::snprintf(num, sizeof(num), "%.15g", r.h_min);
  add(num);
  add(r.download.str());
  std::snprintf(num, sizeof(num), "%.15g", r.rate_measured);
  add(num);
  std::snprintf(num, sizeof(num), "%.15g", r.rate_closed_form);
  add(num);
  std::snprintf(num, sizeof(num), "%.15g", r.converse);
  add(num);
  return out;
}

}  // namespace pcsim
