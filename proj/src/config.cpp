#include "pcsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pcsim {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

template <typename T>
T get_required(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("config is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("config field '") + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("config field '") + key + "' has the wrong type");
  }
}

CandidateSpec parse_candidates(const json& j) {
  CandidateSpec spec;
  spec.type = get_required<std::string>(j, "type");
  if (spec.type == "linear") {
    spec.matrix = get_required<std::vector<std::vector<std::int64_t>>>(j, "matrix");
    if (spec.matrix.empty()) bad("candidate matrix must have at least one row");
  } else if (spec.type == "explicit") {
    if (!j.contains("functions")) bad("explicit candidates need a 'functions' list");
    for (const json& fn : j.at("functions")) {
      std::vector<std::pair<std::int64_t, std::vector<std::uint32_t>>> terms;
      for (const json& term : fn) {
        terms.emplace_back(get_required<std::int64_t>(term, "coeff"),
                           get_required<std::vector<std::uint32_t>>(term, "exponents"));
      }
      if (terms.empty()) bad("explicit candidates must have at least one term");
      spec.functions.push_back(std::move(terms));
    }
    if (spec.functions.empty()) bad("explicit candidate list is empty");
  } else if (spec.type != "all_monomials" && spec.type != "nonparallel_monomials" &&
             spec.type != "all_polynomials") {
    bad("unknown candidate type '" + spec.type +
        "' (all_monomials, nonparallel_monomials, all_polynomials, linear, explicit)");
  }
  return spec;
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }

  Config cfg;
  cfg.variant = variant_from_string(get_required<std::string>(j, "variant"));
  cfg.n = get_required<std::size_t>(j, "n");
  cfg.k = get_required<std::size_t>(j, "k");
  cfg.q = get_required<std::uint64_t>(j, "q");
  cfg.g = get_optional<unsigned>(j, "g").value_or(1);
  cfg.f = get_required<std::size_t>(j, "f");
  cfg.mu = get_optional<std::size_t>(j, "mu");
  if (!j.contains("candidates")) bad("config is missing 'candidates'");
  cfg.candidates = parse_candidates(j.at("candidates"));
  if (j.contains("lambda")) {
    const json& l = j.at("lambda");
    LambdaSpec spec;
    spec.type = get_required<std::string>(l, "type");
    if (spec.type == "cyclic_nu")
      spec.nu = get_required<std::size_t>(l, "nu");
    else if (spec.type == "text")
      spec.text = get_required<std::string>(l, "text");
    else if (spec.type != "cyclic")
      bad("unknown lambda type '" + spec.type + "' (cyclic, cyclic_nu, text)");
    cfg.lambda = std::move(spec);
  }
  cfg.seed = get_optional<std::uint64_t>(j, "seed").value_or(1);
  cfg.trials = get_optional<std::size_t>(j, "trials").value_or(1);
  cfg.f_list = get_optional<std::vector<std::size_t>>(j, "f_list").value_or(
      std::vector<std::size_t>{});
  cfg.hmin_override = get_optional<double>(j, "hmin_override");
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

LoadedScheme instantiate(const Config& cfg, std::optional<std::size_t> f_override) {
  if (cfg.q < 2) bad("q must be a prime >= 2");
  auto field = std::make_unique<PrimeField>(cfg.q);  // rejects composite q

  const std::size_t f = f_override.value_or(cfg.f);
  if (f == 0) bad("f must be positive");

  CandidateSet set;
  if (cfg.candidates.type == "all_monomials") {
    set = all_monomials_set(*field, f, cfg.g);
  } else if (cfg.candidates.type == "nonparallel_monomials") {
    set = nonparallel_monomials_set(*field, f, cfg.g);
  } else if (cfg.candidates.type == "all_polynomials") {
    set = all_polynomials_set(*field, f, cfg.g);
  } else if (f_override.has_value() && *f_override != cfg.f) {
    bad("f_list sweeps need a generated candidate type");
  } else if (cfg.candidates.type == "linear") {
    for (const auto& row : cfg.candidates.matrix)
      if (row.size() != cfg.f) bad("candidate matrix rows must have f entries");
    set = linear_set(*field, FqMatrix::from_rows(*field, cfg.candidates.matrix));
  } else {  // explicit
    std::vector<CandidateFunction> fns;
    for (const auto& spec_fn : cfg.candidates.functions) {
      CandidateFunction fn;
      for (const auto& [coeff, exponents] : spec_fn) {
        if (exponents.size() != cfg.f)
          bad("explicit exponent vectors must have f entries");
        fn.terms.emplace_back(Monomial{exponents}, field->from_int(coeff));
      }
      std::sort(fn.terms.begin(), fn.terms.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      fns.push_back(std::move(fn));
    }
    set = make_candidate_set(*field, cfg.f, cfg.g, std::move(fns));
  }
  if (cfg.mu.has_value() && !f_override.has_value() && set.mu() != *cfg.mu)
    bad("candidate set has " + std::to_string(set.mu()) +
        " functions, config says mu = " + std::to_string(*cfg.mu));

  std::optional<RateMatrix> lambda;
  if (cfg.lambda.has_value()) {
    const RateMatrixKind kind = cfg.variant == Variant::PLC ? RateMatrixKind::PIR
                                : cfg.variant == Variant::PPC
                                    ? RateMatrixKind::PPC
                                    : RateMatrixKind::SysPPC;
    const std::size_t dim =
        cfg.variant == Variant::PLC
            ? cfg.k
            : std::min<std::size_t>(static_cast<std::size_t>(cfg.g) * (cfg.k - 1) + 1,
                                    cfg.n);
    if (cfg.lambda->type == "cyclic") {
      lambda = construct_mds_cyclic(cfg.n, dim, kind);
    } else if (cfg.lambda->type == "cyclic_nu") {
      const std::size_t nu = cfg.lambda->nu;
      if (nu == 0 || (dim * nu) % cfg.n != 0)
        bad("cyclic_nu needs nu with kappa = dim*nu/n integral");
      lambda = construct_mds_cyclic_nu(cfg.n, dim * nu / cfg.n, nu, kind);
    } else {
      lambda = rate_matrix_from_text(cfg.lambda->text, kind);
    }
  }

  SchemeParams params = make_params(cfg.variant, *field, cfg.n, cfg.k, std::move(set),
                                    lambda ? &*lambda : nullptr);
  return LoadedScheme{std::move(field), std::move(params)};
}

}  // namespace pcsim
