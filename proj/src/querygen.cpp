#include "pcsim/querygen.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pcsim/rational.hpp"
#include "pcsim/stats.hpp"

namespace pcsim {

namespace {

std::uint64_t to_u64_checked(const BigInt& x, const char* what) {
  if (x < 0 || x > BigInt(UINT64_MAX)) throw std::overflow_error(what);
  return static_cast<std::uint64_t>(x);
}

// Sorted list of virtual indices excluding v.
std::vector<std::size_t> others(std::size_t mu, std::size_t v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mu; ++i)
    if (i != v) out.push_back(i);
  return out;
}

// All size-r subsets of `pool` (which is sorted), in lexicographic order.
std::vector<std::vector<std::size_t>> combinations(const std::vector<std::size_t>& pool,
                                                   std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  if (r > pool.size()) return out;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    std::vector<std::size_t> pick(r);
    for (std::size_t i = 0; i < r; ++i) pick[i] = pool[idx[i]];
    out.push_back(std::move(pick));
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == pool.size() - r + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Splits the side-information pool into kappa structurally balanced chunks:
// group by type, order groups lexicographically, sort each group by its row
// vector, cut each group into kappa consecutive runs, and let chunk i collect
// run i of every group. Each chunk then holds the same type profile.
std::vector<std::vector<TauSum>> partition_chunks(const std::vector<TauSum>& pool,
                                                  std::size_t kappa) {
  std::map<std::vector<std::size_t>, std::vector<TauSum>> by_type;
  for (const TauSum& s : pool) by_type[s.type()].push_back(s);
  std::vector<std::vector<TauSum>> chunks(kappa);
  for (auto& [type, group] : by_type) {
    (void)type;
    if (group.size() % kappa != 0)
      throw std::logic_error("side-information group not divisible by kappa");
    std::sort(group.begin(), group.end(), [](const TauSum& a, const TauSum& b) {
      std::vector<std::size_t> ra, rb;
      for (const Term& x : a.terms) ra.push_back(x.t);
      for (const Term& x : b.terms) rb.push_back(x.t);
      return ra < rb;
    });
    std::size_t per = group.size() / kappa;
    for (std::size_t i = 0; i < kappa; ++i)
      for (std::size_t m = 0; m < per; ++m) chunks[i].push_back(group[i * per + m]);
  }
  return chunks;
}

std::size_t desired_row_of(const TauSum& sum, std::size_t v) {
  for (const Term& term : sum.terms)
    if (term.v == v) return term.t;
  throw std::logic_error("desired sum carries no desired term");
}

// Message symmetry for one (class, database, round) block: every tau-type
// avoiding v is emitted, with row indices inherited from the desired sums.
// The term for v_z copies the desired row of the sum whose side-information
// type is T \ {v_z}; repeated types pair off in ascending row order. Signs
// alternate by position.
std::vector<TauSum> m_sym(const std::vector<TauSum>& desired_block, std::size_t mu,
                          std::size_t v, std::size_t db) {
  std::vector<TauSum> out;
  if (desired_block.empty()) return out;
  std::size_t tau = desired_block.front().round();

  std::map<std::vector<std::size_t>, std::vector<std::size_t>> group_rows;
  for (const TauSum& d : desired_block) {
    std::vector<std::size_t> si_type;
    for (const Term& term : d.terms)
      if (term.v != v) si_type.push_back(term.v);
    group_rows[si_type].push_back(desired_row_of(d, v));
  }
  std::size_t per_group = group_rows.begin()->second.size();
  for (auto& [type, rows] : group_rows) {
    (void)type;
    if (rows.size() != per_group)
      throw std::logic_error("uneven side-information type groups");
    std::sort(rows.begin(), rows.end());
  }

  for (const auto& type : combinations(others(mu, v), tau)) {
    for (std::size_t m = 0; m < per_group; ++m) {
      TauSum sum;
      sum.db = db;
      sum.role = Role::Undesired;
      for (std::size_t z = 0; z < tau; ++z) {
        std::vector<std::size_t> si = type;
        si.erase(si.begin() + static_cast<std::ptrdiff_t>(z));
        auto it = group_rows.find(si);
        if (it == group_rows.end())
          throw std::logic_error("missing side-information group for symmetry");
        sum.terms.push_back({type[z], it->second[m], (z % 2 == 0) ? +1 : -1});
      }
      out.push_back(std::move(sum));
    }
  }
  return out;
}

}  // namespace

std::vector<std::size_t> TauSum::type() const {
  std::vector<std::size_t> t;
  for (const Term& term : terms) t.push_back(term.v);
  std::sort(t.begin(), t.end());
  return t;
}

std::size_t QuerySet::total() const {
  std::size_t n = 0;
  for (const RoundQueries& r : rounds) n += r.desired.size() + r.undesired.size();
  return n;
}

std::uint64_t alpha_bound(std::size_t mu, std::size_t kappa, std::size_t nu,
                          std::size_t tau) {
  if (mu == 0 || tau == 0 || tau > mu) throw std::invalid_argument("need 1 <= tau <= mu");
  if (kappa == 0 || kappa > nu) throw std::invalid_argument("need 1 <= kappa <= nu");
  BigInt a = big_pow(BigInt(kappa), static_cast<unsigned>(mu - 1));
  for (std::size_t h = 1; h + 1 <= tau; ++h)
    a += binomial(static_cast<unsigned>(mu - 1), static_cast<unsigned>(h)) *
         big_pow(BigInt(kappa), static_cast<unsigned>(mu - 1 - h)) *
         big_pow(BigInt(nu - kappa), static_cast<unsigned>(h));
  return to_u64_checked(a, "round boundary overflows");
}

std::uint64_t round_count(std::size_t mu, std::size_t kappa, std::size_t nu,
                          std::size_t tau) {
  if (tau == 0 || tau > mu) throw std::invalid_argument("need 1 <= tau <= mu");
  BigInt c = binomial(static_cast<unsigned>(mu), static_cast<unsigned>(tau)) *
             big_pow(BigInt(kappa), static_cast<unsigned>(mu - tau + 1)) *
             big_pow(BigInt(nu - kappa), static_cast<unsigned>(tau - 1));
  return to_u64_checked(c, "round count overflows");
}

std::uint64_t pre_elimination_count(std::size_t mu, std::size_t kappa, std::size_t nu) {
  std::uint64_t total = 0;
  for (std::size_t tau = 1; tau <= mu; ++tau) total += round_count(mu, kappa, nu, tau);
  return total;
}

std::vector<std::size_t> index_prep(std::size_t beta, SplitRng& rng) {
  if (beta == 0) throw std::invalid_argument("beta must be positive");
  return rng.permutation(beta);
}

std::pair<std::vector<TauSum>, std::vector<TauSum>> initial_round(
    std::size_t u, std::uint64_t alpha_1, std::size_t db, std::size_t v, std::size_t mu) {
  std::vector<TauSum> desired, undesired;
  for (std::uint64_t l = 0; l < alpha_1; ++l)
    desired.push_back({{{v, static_cast<std::size_t>(u * alpha_1 + l), +1}}, db,
                       Role::Desired});
  for (std::size_t vp = 0; vp < mu; ++vp) {
    if (vp == v) continue;
    for (std::uint64_t l = 0; l < alpha_1; ++l)
      undesired.push_back({{{vp, static_cast<std::size_t>(u * alpha_1 + l), +1}}, db,
                           Role::Undesired});
  }
  return {std::move(desired), std::move(undesired)};
}

std::vector<std::size_t> desired_rows(std::size_t u, std::uint64_t alpha_prev,
                                      std::uint64_t alpha_tau, std::size_t nu) {
  std::vector<std::size_t> rows;
  for (std::uint64_t l = alpha_prev; l < alpha_tau; ++l)
    rows.push_back(static_cast<std::size_t>(l * nu + u));
  return rows;
}

QueryPlan q_gen(std::size_t v, std::size_t mu, const InterferenceMatrices& im,
                std::uint64_t seed) {
  if (mu == 0) throw std::invalid_argument("mu must be positive");
  if (v >= mu) throw std::invalid_argument("requested index v out of range");
  if (im.a.size() != im.kappa || im.b.size() != im.nu - im.kappa)
    throw std::invalid_argument("interference matrices inconsistent with (kappa, nu)");
  for (const auto& row : im.a)
    if (row.size() != im.cols) throw std::invalid_argument("ragged interference matrix");
  for (const auto& row : im.b)
    if (row.size() != im.cols) throw std::invalid_argument("ragged interference matrix");

  QueryPlan plan;
  plan.v = v;
  plan.mu = mu;
  plan.kappa = im.kappa;
  plan.nu = im.nu;
  plan.cols = im.cols;
  plan.seed = seed;
  BigInt beta_big = big_pow(BigInt(im.nu), static_cast<unsigned>(mu));
  if (beta_big > BigInt(100'000'000))
    throw std::invalid_argument("nu^mu virtual rows exceed the generation budget");
  plan.beta = static_cast<std::size_t>(beta_big);

  SplitRng rng(seed);
  SplitRng pi_rng = rng.split(1);
  SplitRng sigma_rng = rng.split(2);
  plan.pi = index_prep(plan.beta, pi_rng);
  plan.sigma.resize(plan.beta);
  for (std::size_t t = 0; t < plan.beta; ++t) plan.sigma[t] = sigma_rng.sign();

  plan.per_db.assign(im.cols, QuerySet{});
  for (std::size_t j = 0; j < im.cols; ++j) {
    plan.per_db[j].db = j;
    plan.per_db[j].rounds.assign(mu, RoundQueries{});
  }
  plan.removed.assign(mu, {});

  // Undesired sums per (database, round, class), the donor pool for
  // side-information exploitation in the following round.
  std::vector<std::vector<std::map<std::size_t, std::vector<TauSum>>>> store(
      im.cols, std::vector<std::map<std::size_t, std::vector<TauSum>>>(mu + 1));

  std::uint64_t alpha_1 = alpha_bound(mu, im.kappa, im.nu, 1);
  for (std::size_t j = 0; j < im.cols; ++j) {
    for (std::size_t i = 0; i < im.kappa; ++i) {
      std::size_t u = im.a[i][j];
      auto [des, und] = initial_round(u, alpha_1, j, v, mu);
      auto& round = plan.per_db[j].rounds[0];
      round.desired.insert(round.desired.end(), des.begin(), des.end());
      round.undesired.insert(round.undesired.end(), und.begin(), und.end());
      store[j][1][u] = std::move(und);
    }
  }

  for (std::size_t tau = 2; tau <= mu; ++tau) {
    std::uint64_t alpha_prev = alpha_bound(mu, im.kappa, im.nu, tau - 1);
    std::uint64_t alpha_tau = alpha_bound(mu, im.kappa, im.nu, tau);
    for (std::size_t j = 0; j < im.cols; ++j) {
      // Exploit-SI: pull the previous round's undesired sums of every
      // interfering class from the nearest database that serves that class.
      std::vector<TauSum> pool;
      for (std::size_t i = 0; i < im.nu - im.kappa; ++i) {
        std::size_t ub = im.b[i][j];
        std::vector<std::size_t> donors = coordinate_set(im, ub);
        if (donors.empty())
          throw std::invalid_argument("no donor database for class " +
                                      std::to_string(ub + 1));
        std::size_t donor = donors.front();
        auto it = store[donor][tau - 1].find(ub);
        if (it == store[donor][tau - 1].end())
          throw std::logic_error("donor database lacks the expected pool");
        for (TauSum s : it->second) {
          s.db = j;
          pool.push_back(std::move(s));
        }
      }

      std::vector<std::vector<TauSum>> chunks = partition_chunks(pool, im.kappa);
      for (std::size_t i = 0; i < im.kappa; ++i) {
        std::size_t u = im.a[i][j];
        std::vector<std::size_t> rows = desired_rows(u, alpha_prev, alpha_tau, im.nu);
        if (rows.size() != chunks[i].size())
          throw std::logic_error("desired rows and side-information chunk disagree");

        // Set addition with the running sign convention: the new desired term
        // enters positive and the attached side-information sum is negated
        // wholesale, so earlier rounds' cancellations survive verbatim.
        std::vector<TauSum> desired_block;
        for (std::size_t m = 0; m < rows.size(); ++m) {
          TauSum sum;
          sum.db = j;
          sum.role = Role::Desired;
          sum.terms.push_back({v, rows[m], +1});
          for (const Term& term : chunks[i][m].terms)
            sum.terms.push_back({term.v, term.t, -term.sign});
          std::sort(sum.terms.begin(), sum.terms.end(),
                    [](const Term& a, const Term& b) { return a.v < b.v; });
          desired_block.push_back(std::move(sum));
        }

        std::vector<TauSum> symmetric = m_sym(desired_block, mu, v, j);
        auto& round = plan.per_db[j].rounds[tau - 1];
        round.desired.insert(round.desired.end(), desired_block.begin(),
                             desired_block.end());
        round.undesired.insert(round.undesired.end(), symmetric.begin(), symmetric.end());
        store[j][tau][u] = std::move(symmetric);
      }
    }
  }

  apply_pad(plan);
  return plan;
}

void apply_pad(QueryPlan& plan) {
  for (QuerySet& qs : plan.per_db)
    for (RoundQueries& round : qs.rounds) {
      for (TauSum& sum : round.desired)
        for (Term& term : sum.terms) term.sign *= plan.sigma.at(term.t);
      for (TauSum& sum : round.undesired)
        for (Term& term : sum.terms) term.sign *= plan.sigma.at(term.t);
    }
}

std::vector<std::vector<std::size_t>> removed_types(const EliminationScheme& scheme,
                                                    std::size_t mu, std::size_t tau) {
  if (scheme.kind == EliminationScheme::Kind::PLC) {
    for (auto d : scheme.dependent)
      if (d >= mu) throw std::invalid_argument("dependent index out of range");
    std::vector<std::size_t> dep = scheme.dependent;
    std::sort(dep.begin(), dep.end());
    return combinations(dep, tau);
  }
  // PPC
  for (auto m : scheme.message_indices)
    if (m >= mu) throw std::invalid_argument("message index out of range");
  if (tau == 1) {
    std::set<std::size_t> keep(scheme.message_indices.begin(),
                               scheme.message_indices.end());
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t c = 0; c < mu; ++c)
      if (!keep.count(c)) out.push_back({c});
    return out;
  }
  std::vector<std::size_t> beyond;
  for (std::size_t c = scheme.basis_size; c < mu; ++c) beyond.push_back(c);
  return combinations(beyond, tau);
}

void eliminate_redundancy(QueryPlan& plan, const EliminationScheme& scheme) {
  for (std::size_t tau = 1; tau <= plan.mu; ++tau) {
    auto removed = removed_types(scheme, plan.mu, tau);
    std::set<std::vector<std::size_t>> removed_set(removed.begin(), removed.end());
    for (QuerySet& qs : plan.per_db) {
      auto& round = qs.rounds[tau - 1];
      auto drop = [&](std::vector<TauSum>& sums) {
        sums.erase(std::remove_if(sums.begin(), sums.end(),
                                  [&](const TauSum& s) {
                                    return removed_set.count(s.type()) > 0;
                                  }),
                   sums.end());
      };
      drop(round.desired);
      drop(round.undesired);
    }
    plan.removed[tau - 1] = std::move(removed);
  }
}

PrivacyReport privacy_shape(const std::vector<QueryPlan>& plans) {
  PrivacyReport report;
  if (plans.size() < 2) {
    report.notes.push_back("fewer than two plans; nothing to compare");
    return report;
  }
  const QueryPlan& ref = plans.front();
  for (const QueryPlan& p : plans) {
    if (p.cols != ref.cols || p.mu != ref.mu) {
      report.counts_match = false;
      report.notes.push_back("plans disagree on shape parameters");
      return report;
    }
    for (std::size_t j = 0; j < ref.cols; ++j)
      for (std::size_t tau = 1; tau <= ref.mu; ++tau) {
        std::size_t a = ref.per_db[j].rounds[tau - 1].desired.size() +
                        ref.per_db[j].rounds[tau - 1].undesired.size();
        std::size_t b = p.per_db[j].rounds[tau - 1].desired.size() +
                        p.per_db[j].rounds[tau - 1].undesired.size();
        if (a != b) {
          report.counts_match = false;
          report.notes.push_back("database " + std::to_string(j + 1) + " round " +
                                 std::to_string(tau) + ": count " + std::to_string(b) +
                                 " for v=" + std::to_string(p.v + 1) + " vs " +
                                 std::to_string(a));
        }
      }
    if (p.removed != ref.removed) {
      report.removed_match = false;
      report.notes.push_back("removed-type ledger differs for v=" +
                             std::to_string(p.v + 1));
    }
  }
  return report;
}

PrivacyReport privacy_check(std::size_t mu, const InterferenceMatrices& im,
                            const std::optional<EliminationScheme>& scheme,
                            std::size_t trials, std::uint64_t seed, double alpha) {
  SplitRng root(seed);

  auto make_plan = [&](std::size_t v, std::uint64_t run_seed) {
    QueryPlan plan = q_gen(v, mu, im, run_seed);
    if (scheme) eliminate_redundancy(plan, *scheme);
    return plan;
  };

  // Structural comparison on one realization per v.
  std::vector<QueryPlan> plans;
  for (std::size_t v = 0; v < mu; ++v)
    plans.push_back(make_plan(v, root.split(v + 1).next()));
  PrivacyReport report = privacy_shape(plans);

  // Multi-round sums carry the informative sign patterns; collect them in a
  // fixed structural order so the same slot can be sampled for every v.
  auto flatten = [](const QueryPlan& plan) {
    std::vector<const TauSum*> sums;
    for (const QuerySet& qs : plan.per_db)
      for (std::size_t tau = 2; tau <= plan.mu; ++tau) {
        for (const TauSum& s : qs.rounds[tau - 1].desired) sums.push_back(&s);
        for (const TauSum& s : qs.rounds[tau - 1].undesired) sums.push_back(&s);
      }
    return sums;
  };

  std::size_t slots = flatten(plans.front()).size();
  for (const QueryPlan& p : plans)
    if (flatten(p).size() != slots) {
      report.counts_match = false;
      report.notes.push_back("multi-round slot counts differ across v");
      return report;
    }
  if (slots == 0 || mu < 2) {
    report.notes.push_back("no multi-round sums; sign test vacuous");
    return report;
  }

  // One sampled sum per (trial, v) keeps the tallies independent across
  // trials, which the chi-square null requires.
  std::map<std::string, std::size_t> key_index;
  std::vector<std::vector<std::size_t>> table(mu);
  SplitRng slot_rng = root.split(999);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::size_t slot = static_cast<std::size_t>(slot_rng.uniform(slots));
    for (std::size_t v = 0; v < mu; ++v) {
      std::uint64_t run_seed = root.split(1000 + trial * mu + v).next();
      QueryPlan plan = make_plan(v, run_seed);
      const TauSum& s = *flatten(plan)[slot];
      std::string pattern = std::to_string(s.round()) + ":";
      int head = s.terms.front().sign;
      for (const Term& term : s.terms) pattern += (term.sign * head > 0) ? '+' : '-';
      auto [it, inserted] = key_index.emplace(pattern, key_index.size());
      (void)inserted;
      for (auto& row : table) row.resize(key_index.size(), 0);
      ++table[v][it->second];
    }
  }
  report.p_value = chi_square_homogeneity(table);
  report.signs_uniform = report.p_value >= alpha;
  if (!report.signs_uniform)
    report.notes.push_back("sign-pattern chi-square p=" + std::to_string(report.p_value));
  return report;
}

std::string to_text(const TauSum& sum) {
  std::ostringstream os;
  os << (sum.db + 1) << ' ' << sum.round() << ' '
     << (sum.role == Role::Desired ? 'D' : 'U');
  for (const Term& term : sum.terms)
    os << ' ' << (term.sign > 0 ? "+1*" : "-1*") << (term.v + 1) << ':' << (term.t + 1);
  return os.str();
}

std::string to_text(const QueryPlan& plan) {
  std::ostringstream os;
  for (const QuerySet& qs : plan.per_db)
    for (const RoundQueries& round : qs.rounds) {
      for (const TauSum& s : round.desired) os << to_text(s) << '\n';
      for (const TauSum& s : round.undesired) os << to_text(s) << '\n';
    }
  return os.str();
}

}  // namespace pcsim
