#pragma once

#include <cstddef>
#include <vector>

namespace pcsim {

// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).
double regularized_gamma_q(double s, double x);

// Survival function P(X >= x) for a chi-square variable with df degrees of
// freedom.
double chi_square_sf(double x, double df);

// Pearson homogeneity test across the rows of a contingency table (rows =
// groups, columns = categories). All-zero columns are dropped. Returns the
// p-value; a table with fewer than two informative rows or columns is
// vacuously homogeneous (p = 1).
double chi_square_homogeneity(const std::vector<std::vector<std::size_t>>& table);

}  // namespace pcsim
