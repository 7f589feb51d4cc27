#include "tocs/combin.hpp"

#include <cstdlib>
#include <stdexcept>

namespace tocs::combin {

std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (std::llabs(n) > kMaxBinomArg || std::llabs(k) > kMaxBinomArg) {
    throw std::out_of_range("binom: |n|, |k| must be <= 62 (got n=" +
                            std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  // Running product with interleaved division; each intermediate is itself
  // a binomial coefficient, so nothing overflows within the argument guard.
  std::uint64_t acc = 1;
  for (std::int64_t j = 1; j <= k; ++j) {
    acc = acc * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
  }
  return static_cast<std::int64_t>(acc);
}

double binom_real(double n, int k) {
  if (k < 0) return 0.0;
  double acc = 1.0;
  for (int j = 1; j <= k; ++j) {
    acc = acc * (n - static_cast<double>(k - j)) / static_cast<double>(j);
  }
  return acc;
}

const char* identity_name(Identity id) {
  switch (id) {
    case Identity::T2_14: return "T2_14";
    case Identity::T2_15: return "T2_15";
    case Identity::T2_16a: return "T2_16a";
    case Identity::T2_16b: return "T2_16b";
    case Identity::T2_17: return "T2_17";
    case Identity::T2_18: return "T2_18";
    case Identity::T2_19: return "T2_19";
    case Identity::T2_20: return "T2_20";
  }
  return "?";
}

namespace {

[[noreturn]] void domain_fail(Identity id, const std::string& bound) {
  throw std::domain_error(std::string(identity_name(id)) + " requires " + bound);
}

std::int64_t sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

IdentityCheck check_identity(Identity id, const IdentityParams& p) {
  const int m = p.m, k = p.k, i = p.i, nu = p.nu;
  IdentityCheck out;
  switch (id) {
    case Identity::T2_14: {
      if (k < 0) domain_fail(id, "k >= 0 (got k=" + std::to_string(k) + ")");
      if (m < 1) domain_fail(id, "m >= 1 (got m=" + std::to_string(m) + ")");
      if (i < 1 || i > m)
        domain_fail(id, "1 <= i <= m (got i=" + std::to_string(i) +
                            ", m=" + std::to_string(m) + ")");
      for (int j = 1; j <= k; ++j) out.lhs += binom(j + m - i - 1, m - i);
      out.rhs = binom(m + k - i, m - i + 1);
      break;
    }
    case Identity::T2_15: {
      if (k < 1) domain_fail(id, "k >= 1 (got k=" + std::to_string(k) + ")");
      if (m < 1) domain_fail(id, "m >= 1 (got m=" + std::to_string(m) + ")");
      for (int j = 0; j <= m - 1; ++j)
        out.lhs += sign_pow(j) * binom(m - 1, j) * binom(k + m - j - 1, m - j);
      out.rhs = binom(k, m);
      break;
    }
    case Identity::T2_16a:
    case Identity::T2_16b: {
      if (m < 2) domain_fail(id, "m >= 2 (got m=" + std::to_string(m) + ")");
      if (k < m - 1)
        domain_fail(id, "k >= m-1 (got k=" + std::to_string(k) +
                            ", m=" + std::to_string(m) + ")");
      const int shift = (id == Identity::T2_16a) ? 1 : 2;
      for (int j = 0; j <= m - 1; ++j)
        out.lhs += sign_pow(j) * binom(k, j) * binom(k + m - j - shift, m - j);
      out.rhs = sign_pow(m - 1) * binom(k, m);
      break;
    }
    case Identity::T2_17: {
      if (k < 1) domain_fail(id, "k >= 1 (got k=" + std::to_string(k) + ")");
      if (m < 1) domain_fail(id, "m >= 1 (got m=" + std::to_string(m) + ")");
      for (int j = 0; j <= m - 1; ++j) out.lhs += sign_pow(j) * binom(k, j);
      out.rhs = sign_pow(m - 1) * binom(k - 1, m - 1);
      break;
    }
    case Identity::T2_18: {
      if (k < 1) domain_fail(id, "k >= 1 (got k=" + std::to_string(k) + ")");
      if (m < 1) domain_fail(id, "m >= 1 (got m=" + std::to_string(m) + ")");
      for (int j = 0; j <= m - 1; ++j)
        out.lhs += sign_pow(j) * binom(m, j) * binom(k + m - j - 1, m - j);
      out.rhs = binom(k - 1, m) + sign_pow(m - 1);
      break;
    }
    case Identity::T2_19: {
      if (m < 1) domain_fail(id, "m >= 1 (got m=" + std::to_string(m) + ")");
      for (int j = 0; j <= m - 1; ++j) out.lhs += sign_pow(j) * binom(m, j);
      out.rhs = sign_pow(m - 1);
      break;
    }
    case Identity::T2_20: {
      if (m < 1) domain_fail(id, "m >= 1 (got m=" + std::to_string(m) + ")");
      if (nu < 0 || nu > m - 1)
        domain_fail(id, "0 <= nu <= m-1 (got nu=" + std::to_string(nu) +
                            ", m=" + std::to_string(m) + ")");
      if (k < 0 || k > m - 1 - nu)
        domain_fail(id, "0 <= k <= m-1-nu (got k=" + std::to_string(k) +
                            ", m=" + std::to_string(m) + ", nu=" + std::to_string(nu) + ")");
      for (int j = 0; j <= m - (nu + 1); ++j)
        out.lhs += sign_pow(j) * binom(m - (nu + 1), j) *
                   binom(k + m - (j + nu) - 1, m - (j + nu));
      out.rhs = 0;
      break;
    }
  }
  out.holds = (out.lhs == out.rhs);
  return out;
}

IdentityTally sweep_identity(Identity id, int max_m, int max_k) {
  IdentityTally tally;
  auto run = [&](const IdentityParams& p) {
    ++tally.cases;
    if (!check_identity(id, p).holds) ++tally.failures;
  };
  for (int m = 1; m <= max_m; ++m) {
    switch (id) {
      case Identity::T2_14:
        for (int k = 0; k <= max_k; ++k)
          for (int i = 1; i <= m; ++i) run({m, k, i, 0});
        break;
      case Identity::T2_15:
      case Identity::T2_17:
      case Identity::T2_18:
        for (int k = 1; k <= max_k; ++k) run({m, k, 1, 0});
        break;
      case Identity::T2_16a:
      case Identity::T2_16b:
        if (m >= 2)
          for (int k = m - 1; k <= max_k; ++k) run({m, k, 1, 0});
        break;
      case Identity::T2_19:
        run({m, 0, 1, 0});
        break;
      case Identity::T2_20:
        for (int nu = 0; nu <= m - 1; ++nu)
          for (int k = 0; k <= m - 1 - nu && k <= max_k; ++k) run({m, k, 1, nu});
        break;
    }
  }
  return tally;
}

}  // namespace tocs::combin
