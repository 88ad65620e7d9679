#pragma once

#include <cstdint>
#include <vector>

#include "testel/word.hpp"

namespace testel {

// Engine-wide bounds. All defaults are part of the documented behaviour;
// raising them is allowed, silent truncation is not.
struct Config {
  // Almost-primitivity scan refuses beyond these (the maximal-subgroup scan
  // is (p^n - 1)/(p - 1) rewrites).
  int ap_rank_bound = 6;
  int ap_prime_bound = 13;

  // Candidate cap for finite-group endomorphism enumeration
  // (|G| ^ #generators candidates).
  std::uint64_t endo_budget = 1'000'000;

  // Densification: subset search multipliers 1..densify_multiplier_cap.
  int densify_multiplier_cap = 4;

  // Fallback primes for the discrete -> pro-p transfer rule.
  std::vector<int> transfer_fallback_primes = {2, 3, 5};
};

bool is_prime(int p);
void require_prime(int p);

// Largest e with p^e | k; requires k != 0.
int p_valuation(const Int& k, int p);

Int gcd_int(const Int& a, const Int& b);

}  // namespace testel
