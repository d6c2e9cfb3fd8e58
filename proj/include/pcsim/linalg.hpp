#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pcsim/field.hpp"

namespace pcsim {

// Dense matrix over F_q. Row-vector convention throughout: codewords are
// message-row times generator, c = w * G.
class FqMatrix {
 public:
  FqMatrix(const PrimeField& f, std::size_t rows, std::size_t cols)
      : field_(&f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static FqMatrix identity(const PrimeField& f, std::size_t n);
  // Builds a matrix from signed integer entries (reduced mod q).
  static FqMatrix from_rows(const PrimeField& f,
                            const std::vector<std::vector<std::int64_t>>& rows);

  const PrimeField& field() const { return *field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint64_t& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::uint64_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<std::uint64_t> row(std::size_t r) const;

  FqMatrix mul(const FqMatrix& o) const;
  FqMatrix transposed() const;
  FqMatrix select_columns(const std::vector<std::size_t>& cols) const;

  std::size_t rank() const;
  bool invertible() const;
  FqMatrix inverse() const;

  // In-place reduced row echelon form; returns the pivot column indices in
  // order (one per pivot row).
  std::vector<std::size_t> rref();

  bool operator==(const FqMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_ &&
           *field_ == *o.field_;
  }

 private:
  const PrimeField* field_;
  std::size_t rows_, cols_;
  std::vector<std::uint64_t> data_;
};

// x * M for a row vector x.
std::vector<std::uint64_t> vec_mat_mul(const PrimeField& f,
                                       const std::vector<std::uint64_t>& x,
                                       const FqMatrix& m);

// Solves w * A = b for square invertible A (|b| = A.cols()); throws if A is
// singular.
std::vector<std::uint64_t> solve_row_system(const FqMatrix& a,
                                            const std::vector<std::uint64_t>& b);

// Incremental Gaussian elimination over F_q with sparse rows, for linear
// systems whose unknowns are indexed by a large but sparsely-touched space.
// Keeps a row-echelon basis (leading coefficient 1, keyed by pivot index);
// answers "is this combination determined, and to what value?" queries.
class SparseSolver {
 public:
  using Combo = std::vector<std::pair<std::size_t, std::uint64_t>>;

  explicit SparseSolver(const PrimeField& f) : field_(&f) {}

  // Returns false only when the equation contradicts previously inserted ones
  // (the combination is already determined with a different value).
  bool add_equation(const Combo& coeffs, std::uint64_t value);

  // If the target combination lies in the span of inserted equations, returns
  // its determined value.
  std::optional<std::uint64_t> reduce(const Combo& coeffs) const;

  std::size_t rank() const { return rows_.size(); }

 private:
  struct Row {
    Combo coeffs;  // sorted by index, leading coefficient 1
    std::uint64_t rhs = 0;
  };

  // In-place reduction against the basis; returns the accumulated rhs.
  std::uint64_t reduce_sparse(Combo& v) const;

  const PrimeField* field_;
  std::map<std::size_t, Row> rows_;  // keyed by pivot index
};

}  // namespace pcsim
