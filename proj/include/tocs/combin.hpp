#pragma once

#include <cstdint>
#include <string>

namespace tocs::combin {

// Largest |n|, |k| accepted by binom(). Every intermediate of the running
// product/divide loop then stays below 2^64 and the result below 2^63.
inline constexpr std::int64_t kMaxBinomArg = 62;

// C(n, k) with the extended convention C(n, k) = 0 whenever k < 0 or k > n.
// Exact; throws std::out_of_range past kMaxBinomArg.
std::int64_t binom(std::int64_t n, std::int64_t k);

// Binomial coefficient as a double, for step counts that may exceed the
// exact-integer guard. Exact whenever the true value and all intermediate
// binomials fit 53 bits.
double binom_real(double n, int k);

// Identity families used as cross-module test oracles.
enum class Identity { T2_14, T2_15, T2_16a, T2_16b, T2_17, T2_18, T2_19, T2_20 };

struct IdentityParams {
  int m = 1;
  int k = 0;
  int i = 1;   // T2_14 only
  int nu = 0;  // T2_20 only
};

struct IdentityCheck {
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  bool holds = false;
};

const char* identity_name(Identity id);

// Left side by literal summation, right side by the closed form.
// Throws std::domain_error naming the violated bound when params fall
// outside the identity's stated domain.
IdentityCheck check_identity(Identity id, const IdentityParams& p);

struct IdentityTally {
  long cases = 0;
  long failures = 0;
};

// Exhaustive check over every admissible (m, k, i, nu) with
// 1 <= m <= max_m and 0 <= k <= max_k.
IdentityTally sweep_identity(Identity id, int max_m, int max_k);

inline constexpr Identity kAllIdentities[] = {
    Identity::T2_14, Identity::T2_15, Identity::T2_16a, Identity::T2_16b,
    Identity::T2_17, Identity::T2_18, Identity::T2_19,  Identity::T2_20};

}  // namespace tocs::combin
