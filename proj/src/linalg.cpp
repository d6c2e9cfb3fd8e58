#include "pcsim/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace pcsim {

FqMatrix FqMatrix::identity(const PrimeField& f, std::size_t n) {
  FqMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FqMatrix FqMatrix::from_rows(const PrimeField& f,
                             const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) return FqMatrix(f, 0, 0);
  FqMatrix m(f, rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      throw std::invalid_argument("ragged matrix rows");
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = f.from_int(rows[r][c]);
  }
  return m;
}

std::vector<std::uint64_t> FqMatrix::row(std::size_t r) const {
  return std::vector<std::uint64_t>(data_.begin() + r * cols_,
                                    data_.begin() + (r + 1) * cols_);
}

FqMatrix FqMatrix::mul(const FqMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix dimension mismatch");
  FqMatrix out(*field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      std::uint64_t a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        out.at(i, j) = field_->add(out.at(i, j), field_->mul(a, o.at(k, j)));
      }
    }
  }
  return out;
}

FqMatrix FqMatrix::transposed() const {
  FqMatrix out(*field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  }
  return out;
}

FqMatrix FqMatrix::select_columns(const std::vector<std::size_t>& cols) const {
  FqMatrix out(*field_, rows_, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] >= cols_) throw std::out_of_range("column index out of range");
    for (std::size_t i = 0; i < rows_; ++i) out.at(i, j) = at(i, cols[j]);
  }
  return out;
}

std::vector<std::size_t> FqMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t sel = r;
    while (sel < rows_ && at(sel, c) == 0) ++sel;
    if (sel == rows_) continue;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(at(r, j), at(sel, j));
    std::uint64_t inv = field_->inv(at(r, c));
    for (std::size_t j = 0; j < cols_; ++j) at(r, j) = field_->mul(at(r, j), inv);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || at(i, c) == 0) continue;
      std::uint64_t factor = at(i, c);
      for (std::size_t j = 0; j < cols_; ++j) {
        at(i, j) = field_->sub(at(i, j), field_->mul(factor, at(r, j)));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t FqMatrix::rank() const {
  FqMatrix copy = *this;
  return copy.rref().size();
}

bool FqMatrix::invertible() const {
  return rows_ == cols_ && rank() == rows_;
}

FqMatrix FqMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
  FqMatrix aug(*field_, rows_, 2 * cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = 1;
  }
  auto pivots = aug.rref();
  if (pivots.size() != rows_ || pivots.back() >= cols_) {
    throw std::invalid_argument("matrix is singular");
  }
  FqMatrix inv(*field_, rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
  }
  return inv;
}

std::vector<std::uint64_t> vec_mat_mul(const PrimeField& f,
                                       const std::vector<std::uint64_t>& x,
                                       const FqMatrix& m) {
  if (x.size() != m.rows()) throw std::invalid_argument("vector/matrix dimension mismatch");
  std::vector<std::uint64_t> out(m.cols(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out[j] = f.add(out[j], f.mul(x[i], m.at(i, j)));
    }
  }
  return out;
}

std::vector<std::uint64_t> solve_row_system(const FqMatrix& a,
                                            const std::vector<std::uint64_t>& b) {
  // w * A = b  <=>  A^T * w^T = b^T; eliminate on the augmented transpose.
  if (a.rows() != a.cols() || b.size() != a.cols()) {
    throw std::invalid_argument("solve_row_system expects a square system");
  }
  const PrimeField& f = a.field();
  std::size_t n = a.rows();
  FqMatrix aug(f, n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(j, i);
    aug.at(i, n) = b[i] % f.q();
  }
  auto pivots = aug.rref();
  if (pivots.size() != n || pivots.back() >= n) {
    throw std::invalid_argument("singular system");
  }
  std::vector<std::uint64_t> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = aug.at(i, n);
  return w;
}

namespace {

// Sorts by index, merges duplicates mod q, drops zero coefficients.
SparseSolver::Combo normalize_combo(const PrimeField& f,
                                    const SparseSolver::Combo& coeffs) {
  SparseSolver::Combo v = coeffs;
  std::sort(v.begin(), v.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseSolver::Combo out;
  for (const auto& [idx, c] : v) {
    std::uint64_t r = c % f.q();
    if (!out.empty() && out.back().first == idx) {
      out.back().second = f.add(out.back().second, r);
      if (out.back().second == 0) out.pop_back();
    } else if (r != 0) {
      out.push_back({idx, r});
    }
  }
  return out;
}

// v -= factor * row, both sorted by index.
SparseSolver::Combo subtract_scaled(const PrimeField& f, const SparseSolver::Combo& v,
                                    std::uint64_t factor,
                                    const SparseSolver::Combo& row) {
  SparseSolver::Combo out;
  out.reserve(v.size() + row.size());
  std::size_t i = 0, j = 0;
  while (i < v.size() || j < row.size()) {
    if (j == row.size() || (i < v.size() && v[i].first < row[j].first)) {
      out.push_back(v[i++]);
    } else if (i == v.size() || row[j].first < v[i].first) {
      out.push_back({row[j].first, f.neg(f.mul(factor, row[j].second))});
      ++j;
    } else {
      std::uint64_t c = f.sub(v[i].second, f.mul(factor, row[j].second));
      if (c != 0) out.push_back({v[i].first, c});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

std::uint64_t SparseSolver::reduce_sparse(Combo& v) const {
  // Echelon reduction: cancelling the leading index only introduces strictly
  // larger ones, so a single ascending sweep terminates.
  std::uint64_t rhs = 0;
  while (!v.empty()) {
    auto it = rows_.find(v.front().first);
    if (it == rows_.end()) break;
    std::uint64_t factor = v.front().second;
    v = subtract_scaled(*field_, v, factor, it->second.coeffs);
    rhs = field_->sub(rhs, field_->mul(factor, it->second.rhs));
  }
  return rhs;
}

bool SparseSolver::add_equation(const Combo& coeffs, std::uint64_t value) {
  Combo v = normalize_combo(*field_, coeffs);
  std::uint64_t rhs = field_->add(value % field_->q(), reduce_sparse(v));
  if (v.empty()) return rhs == 0;  // redundant (true) or contradictory (false)
  std::uint64_t inv = field_->inv(v.front().second);
  for (auto& [idx, c] : v) {
    (void)idx;
    c = field_->mul(c, inv);
  }
  rhs = field_->mul(rhs, inv);
  std::size_t pivot = v.front().first;
  rows_.emplace(pivot, Row{std::move(v), rhs});
  return true;
}

std::optional<std::uint64_t> SparseSolver::reduce(const Combo& coeffs) const {
  Combo v = normalize_combo(*field_, coeffs);
  std::uint64_t rhs = reduce_sparse(v);
  if (!v.empty()) return std::nullopt;
  // Equations entered as combo = value; the sweep subtracts, so flip the sign.
  return field_->neg(rhs);
}

}  // namespace pcsim
