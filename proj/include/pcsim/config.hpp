#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcsim/protocol.hpp"

namespace pcsim {

// Candidate-set description: a named generator, an explicit coefficient
// matrix for linear sets, or fully spelled-out polynomials.
struct CandidateSpec {
  // all_monomials | nonparallel_monomials | all_polynomials | linear | explicit
  std::string type;
  std::vector<std::vector<std::int64_t>> matrix;  // linear: mu x f coefficients
  // explicit: one entry per candidate, each a list of (coeff, exponent vector)
  std::vector<std::vector<std::pair<std::int64_t, std::vector<std::uint32_t>>>>
      functions;
};

// Rate-matrix override. `cyclic` is the full nu = n construction, `cyclic_nu`
// the reduced one with the given row count, `text` a literal 0/1 matrix.
struct LambdaSpec {
  std::string type;  // cyclic | cyclic_nu | text
  std::size_t nu = 0;
  std::string text;
};

struct Config {
  Variant variant = Variant::PLC;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t q = 0;
  unsigned g = 1;
  std::size_t f = 0;
  std::optional<std::size_t> mu;  // optional cross-check of the candidate count
  CandidateSpec candidates;
  std::optional<LambdaSpec> lambda;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::vector<std::size_t> f_list;       // rates sweep over message counts
  std::optional<double> hmin_override;   // replaces H_min in closed-form output
};

Config parse_config(const std::string& json_text);
Config load_config_file(const std::string& path);

// A config turned into live objects. The field is heap-owned so the pointers
// inside params stay valid when the holder moves.
struct LoadedScheme {
  std::unique_ptr<PrimeField> field;
  SchemeParams params;
};

// Builds the candidate set and scheme parameters. `f_override` substitutes
// the message count (generated candidate types only), for rates sweeps.
LoadedScheme instantiate(const Config& cfg,
                         std::optional<std::size_t> f_override = std::nullopt);

}  // namespace pcsim
