#pragma once

// Rational-integer utilities: Kronecker symbols, budgeted factorization,
// Hensel-lifted square roots and prime sieving.

#include <cstdint>
#include <map>
#include <vector>

#include <gmpxx.h>

namespace wief {

using Int = mpz_class;

/// Trial-division bound used by factor_integer before Pollard-rho takes over.
inline constexpr std::uint32_t kTrialDivisionBound = 10'000;

/// Work limit for factor_integer. `iterations` counts Pollard-rho map
/// evaluations summed over all composites encountered; `seed` drives the rho
/// constants and the random Miller-Rabin bases used above 3.3e24.
struct FactorBudget {
  std::uint64_t iterations = 2'000'000;
  std::uint64_t seed = 0x5eed'2024'0001ULL;
};

struct FactorMap {
  std::map<Int, unsigned> factors;
  Int cofactor = 1;
  bool complete = true;

  /// prod p^e * cofactor; equals the factored input.
  Int product() const;
};

/// Kronecker symbol (a/n), n != 0.
int kronecker(const Int& a, const Int& n);

/// Miller-Rabin: deterministic prime bases below 3.317e24, otherwise 64
/// pseudo-random bases drawn from `seed`.
bool is_probable_prime(const Int& n, std::uint64_t seed = FactorBudget{}.seed);

FactorMap factor_integer(const Int& n, const FactorBudget& budget = {});

/// r with r^2 = d mod p^k. The root is the smaller of the two roots mod p,
/// Hensel-lifted, so successive levels reduce to one another.
/// Throws NonResidue unless kronecker(d, p) = +1; p must be an odd prime.
Int hensel_sqrt(const Int& d, const Int& p, unsigned k);

/// Lift a simple root r0 of x^2 + c1*x + c0 modulo p to a root modulo p^k.
/// Requires 2*r0 + c1 to be a unit mod p.
Int hensel_lift_quadratic(const Int& c1, const Int& c0, const Int& p, unsigned k,
                          const Int& r0);

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
Int sqrt_mod_prime(const Int& a, const Int& p);

/// Exponent of p in n (n != 0, p > 1).
unsigned ord_p(const Int& n, const Int& p);

/// Least nonnegative residue.
Int mod(const Int& a, const Int& m);

Int inverse_mod(const Int& a, const Int& m);

Int pow_ui(const Int& base, unsigned long e);

bool is_squarefree(const Int& n);

/// Primes p with lo <= p <= hi (segmented sieve).
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  return primes_in_range(2, n);
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

}  // namespace wief
