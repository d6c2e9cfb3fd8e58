#include "pcsim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace pcsim {

namespace {

// Lower regularized gamma by series expansion; converges quickly for x < s+1.
double gamma_p_series(double s, double x) {
  double sum = 1.0 / s;
  double term = sum;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Upper regularized gamma by continued fraction (Lentz); for x >= s+1.
double gamma_q_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double regularized_gamma_q(double s, double x) {
  if (s <= 0.0) throw std::invalid_argument("gamma shape must be positive");
  if (x < 0.0) throw std::invalid_argument("gamma argument must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

double chi_square_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

double chi_square_homogeneity(const std::vector<std::vector<std::size_t>>& table) {
  if (table.size() < 2) return 1.0;
  std::size_t cols = table.front().size();
  for (const auto& row : table)
    if (row.size() != cols) throw std::invalid_argument("ragged contingency table");

  // Keep only columns that were observed at all.
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t sum = 0;
    for (const auto& row : table) sum += row[c];
    if (sum > 0) keep.push_back(c);
  }
  if (keep.size() < 2) return 1.0;

  double total = 0.0;
  std::vector<double> row_sum(table.size(), 0.0), col_sum(keep.size(), 0.0);
  for (std::size_t r = 0; r < table.size(); ++r)
    for (std::size_t c = 0; c < keep.size(); ++c) {
      double v = static_cast<double>(table[r][keep[c]]);
      row_sum[r] += v;
      col_sum[c] += v;
      total += v;
    }
  if (total == 0.0) return 1.0;

  double stat = 0.0;
  for (std::size_t r = 0; r < table.size(); ++r)
    for (std::size_t c = 0; c < keep.size(); ++c) {
      double expected = row_sum[r] * col_sum[c] / total;
      if (expected <= 0.0) continue;
      double diff = static_cast<double>(table[r][keep[c]]) - expected;
      stat += diff * diff / expected;
    }
  double df = static_cast<double>((table.size() - 1) * (keep.size() - 1));
  if (df <= 0.0) return 1.0;
  return chi_square_sf(stat, df);
}

}  // namespace pcsim
