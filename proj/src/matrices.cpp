#include "pcsim/matrices.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pcsim {

namespace {

std::vector<std::size_t> row_support(const RateMatrix& m, std::size_t i) {
  std::vector<std::size_t> s;
  for (std::size_t j = 0; j < m.cols; ++j)
    if (m.lambda[i][j]) s.push_back(j);
  return s;
}

}  // namespace

ValidationReport validate(const RateMatrix& m, const LinearCode& storage,
                          const LinearCode* star) {
  ValidationReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };

  if (m.lambda.size() != m.nu) {
    fail("row count does not match nu");
    return report;
  }
  for (std::size_t i = 0; i < m.nu; ++i)
    if (m.lambda[i].size() != m.cols) {
      fail("row " + std::to_string(i + 1) + " has the wrong length");
      return report;
    }

  for (std::size_t j = 0; j < m.cols; ++j) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < m.nu; ++i) w += m.lambda[i][j] ? 1 : 0;
    if (w != m.kappa)
      fail("column " + std::to_string(j + 1) + " has weight " + std::to_string(w) +
           ", expected " + std::to_string(m.kappa));
  }

  switch (m.kind) {
    case RateMatrixKind::GenericPC:
      break;  // column regularity only
    case RateMatrixKind::PIR:
      for (std::size_t i = 0; i < m.nu; ++i)
        if (!contains_information_set(storage, row_support(m, i)))
          fail("row " + std::to_string(i + 1) +
               " does not cover a storage-code information set");
      break;
    case RateMatrixKind::PPC: {
      if (star == nullptr) throw std::invalid_argument("PPC validation needs the star code");
      if (m.kappa * storage.n != star->k * m.nu)
        fail("kappa/nu does not equal ktilde/n");
      for (std::size_t i = 0; i < m.nu; ++i)
        if (!contains_information_set(*star, row_support(m, i)))
          fail("row " + std::to_string(i + 1) +
               " does not cover a star-code information set");
      break;
    }
    case RateMatrixKind::SysPPC: {
      if (star == nullptr)
        throw std::invalid_argument("SysPPC validation needs the star code");
      std::size_t rho = (m.cols / star->k) * m.kappa;
      if (rho > m.nu) {
        fail("rho exceeds nu");
        break;
      }
      for (std::size_t i = 0; i < rho; ++i)
        if (!contains_information_set(*star, row_support(m, i)))
          fail("row " + std::to_string(i + 1) +
               " does not cover a star-code information set");
      std::vector<std::size_t> systematic(storage.k);
      for (std::size_t j = 0; j < storage.k; ++j) systematic[j] = j;
      for (std::size_t i = rho; i < m.nu; ++i)
        if (row_support(m, i) != systematic)
          fail("row " + std::to_string(i + 1) +
               " must have support exactly the first k coordinates");
      break;
    }
  }
  return report;
}

InterferenceMatrices interference(const RateMatrix& m) {
  if (m.kappa > m.nu) throw std::invalid_argument("kappa exceeds nu");
  InterferenceMatrices im;
  im.kappa = m.kappa;
  im.nu = m.nu;
  im.cols = m.cols;
  im.a.assign(m.kappa, std::vector<std::size_t>(m.cols));
  im.b.assign(m.nu - m.kappa, std::vector<std::size_t>(m.cols));
  for (std::size_t j = 0; j < m.cols; ++j) {
    std::size_t ai = 0, bi = 0;
    for (std::size_t u = 0; u < m.nu; ++u) {
      if (m.lambda[u][j]) {
        if (ai == m.kappa) throw std::invalid_argument("column weight exceeds kappa");
        im.a[ai++][j] = u;
      } else {
        if (bi + m.kappa == m.nu) throw std::invalid_argument("column weight below kappa");
        im.b[bi++][j] = u;
      }
    }
  }
  return im;
}

std::vector<std::size_t> coordinate_set(const InterferenceMatrices& im, std::size_t u) {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < im.cols; ++j)
    for (const auto& row : im.a)
      if (row[j] == u) {
        cols.push_back(j);
        break;
      }
  return cols;
}

RateMatrix construct_mds_cyclic(std::size_t n, std::size_t kappa, RateMatrixKind kind) {
  if (kappa == 0 || kappa > n) throw std::invalid_argument("need 1 <= kappa <= n");
  RateMatrix m;
  m.kind = kind;
  m.kappa = kappa;
  m.nu = n;
  m.cols = n;
  m.lambda.assign(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < kappa; ++t) m.lambda[i][(i + t) % n] = 1;
  return m;
}

RateMatrix construct_mds_cyclic_nu(std::size_t n, std::size_t kappa, std::size_t nu,
                                   RateMatrixKind kind) {
  if (nu == 0 || nu > n || n % nu != 0) throw std::invalid_argument("need nu dividing n");
  if (kappa == 0 || kappa > nu) throw std::invalid_argument("need 1 <= kappa <= nu");
  RateMatrix m;
  m.kind = kind;
  m.kappa = kappa;
  m.nu = nu;
  m.cols = n;
  m.lambda.assign(nu, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t t = 0; t < kappa; ++t)
        if (j % nu == (i + t) % nu) m.lambda[i][j] = 1;
  return m;
}

std::size_t n_hat(std::size_t n, std::size_t k, std::size_t k_tilde) {
  if (k > k_tilde || k_tilde > n) throw std::invalid_argument("need k <= ktilde <= n");
  std::size_t delta = n / k_tilde;
  std::size_t rem = n - delta * k_tilde;
  if (rem >= k) return k + delta * k_tilde;
  return delta == 1 ? n : k + (delta - 1) * k_tilde;
}

std::size_t nu_sys(std::size_t n, std::size_t k, std::size_t k_tilde) {
  std::size_t nh = n_hat(n, k, k_tilde);
  return nh - (nh / k_tilde) * (k_tilde - k);
}

SysPpcConstruction construct_sys_ppc(std::size_t n, std::size_t k, std::size_t k_tilde) {
  SysPpcConstruction out;
  std::size_t nh = n_hat(n, k, k_tilde);
  // Recompute the split for the reduced column count.
  std::size_t delta = nh / k_tilde;
  std::size_t gamma = nh - delta * k_tilde;  // <= k by choice of n_hat
  std::size_t nu = gamma + delta * k;
  std::size_t rho = delta * k;

  // Partial fill: classes rho+1..rho+gamma occupy the top gamma rows of the
  // first k columns (0-based classes rho..rho+gamma-1).
  std::vector<std::vector<std::size_t>> a(k, std::vector<std::size_t>(nh, SIZE_MAX));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < gamma; ++i) a[i][j] = rho + i;

  // Remaining slots, walked column-major, take classes 0..rho-1 cyclically.
  std::size_t e = 0;
  for (std::size_t j = 0; j < nh; ++j)
    for (std::size_t i = 0; i < k; ++i)
      if (a[i][j] == SIZE_MAX) a[i][j] = (e++) % rho;

  // Canonical increasing order within each column.
  for (std::size_t j = 0; j < nh; ++j) {
    std::vector<std::size_t> col(k);
    for (std::size_t i = 0; i < k; ++i) col[i] = a[i][j];
    std::sort(col.begin(), col.end());
    for (std::size_t i = 0; i < k; ++i) a[i][j] = col[i];
  }

  RateMatrix m;
  m.kind = RateMatrixKind::SysPPC;
  m.kappa = k;
  m.nu = nu;
  m.cols = nh;
  m.lambda.assign(nu, std::vector<std::uint8_t>(nh, 0));
  for (std::size_t j = 0; j < nh; ++j)
    for (std::size_t i = 0; i < k; ++i) m.lambda[a[i][j]][j] = 1;

  out.rate = m;
  out.im = interference(m);
  out.n_hat = nh;
  out.rho = rho;
  return out;
}

std::string to_text(const RateMatrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.nu; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) os << (m.lambda[i][j] ? '1' : '0');
    os << '\n';
  }
  return os.str();
}

RateMatrix rate_matrix_from_text(const std::string& text, RateMatrixKind kind) {
  RateMatrix m;
  m.kind = kind;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::uint8_t> row;
    for (char c : line) {
      if (c == '0')
        row.push_back(0);
      else if (c == '1')
        row.push_back(1);
      else if (c == ' ' || c == '\t' || c == '\r')
        continue;
      else
        throw std::invalid_argument("rate matrix text may contain only 0/1");
    }
    if (!m.lambda.empty() && row.size() != m.cols)
      throw std::invalid_argument("ragged rate matrix text");
    m.cols = row.size();
    m.lambda.push_back(std::move(row));
  }
  if (m.lambda.empty()) throw std::invalid_argument("empty rate matrix text");
  m.nu = m.lambda.size();
  // Column weight defines kappa; the validator re-checks regularity.
  std::size_t w = 0;
  for (std::size_t i = 0; i < m.nu; ++i) w += m.lambda[i][0] ? 1 : 0;
  m.kappa = w;
  return m;
}

}  // namespace pcsim
