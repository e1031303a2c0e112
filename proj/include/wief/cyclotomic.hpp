#pragma once

// Cyclotomic values Phi_n(x) at field elements, the ideals A_n = (x^n - 1) and
// C_n = (Phi_n(x)), and the lemma checks built on their factorizations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wief/primes.hpp"

namespace wief {

struct IdealFactor {
  PrimeIdeal ideal;
  unsigned exponent = 0;
};

/// Prime-ideal factorization of a principal ideal. `residual_norm` is the part
/// of the generator's absolute norm not accounted for by `items`.
struct IdealFactorization {
  std::vector<IdealFactor> items;  // sorted by (p, conj_flag), no duplicates
  bool complete = true;
  Int residual_norm = 1;

  /// prod N(P)^e over items.
  Int known_norm() const;
  unsigned exponent_of(const PrimeIdeal& P) const;
  bool divides_by(const PrimeIdeal& P) const { return exponent_of(P) > 0; }

  friend bool operator==(const IdealFactorization& x, const IdealFactorization& y);
};

struct UVSplit {
  IdealFactorization U;  // exponents == 1
  IdealFactorization V;  // exponents >= 2
  bool complete = true;
};

/// Coefficients of Phi_n, constant term first.
std::vector<Int> cyclotomic_poly(std::uint64_t n);

struct CyclotomicValue {
  FieldElement value;
  Int abs_norm;
};

CyclotomicValue cyclotomic_value(const FieldElement& x, std::uint64_t n);

/// Factorization of (z) from the rational factorization of |N(z)|.
IdealFactorization factor_principal(const FieldElement& z, const FactorBudget& budget = {});

/// A_n = (x^n - 1). Throws NotAdmissible / ZeroIdeal; incompleteness is
/// reported through the flag.
IdealFactorization an_factorization(const FieldElement& x, std::uint64_t n,
                                    const FactorBudget& budget = {});

/// C_n = (Phi_n(x)), with every exponent computed on Phi_n(x) itself.
IdealFactorization cn_factorization(const FieldElement& x, std::uint64_t n,
                                    const FactorBudget& budget = {});

/// Prime-wise sum of exponents.
IdealFactorization ideal_product(const std::vector<IdealFactorization>& parts);

/// gcd(A_m, A_n) for coprime m, n. Throws NotCoprimeIndices or
/// IncompleteFactorization.
IdealFactorization ideal_gcd_an(const FieldElement& x, std::uint64_t m, std::uint64_t n,
                                const FactorBudget& budget = {});

UVSplit uv_split(const FieldElement& x, std::uint64_t n, const FactorBudget& budget = {});

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus s);

/// One (n, P) check. `expected_exact` unset means "actual >= expected_min".
struct CheckRow {
  std::uint64_t n = 0;
  std::uint64_t m = 0;  // second index of a pair check, 0 otherwise
  Int p;
  int conj = 0;
  std::optional<unsigned> expected_exact;
  unsigned expected_min = 0;
  unsigned actual = 0;
  CheckStatus status = CheckStatus::Pass;
};

struct VerificationReport {
  std::vector<CheckRow> rows;
  std::size_t violations() const;
  std::size_t skipped() const;
  /// One JSON object per row: {n, p, conj, expected, actual, status}, plus m
  /// for pair checks.
  std::string to_jsonl() const;
};

/// ord_P(C_n) against the three-case formula for every n <= n_max.
/// P must be odd and unramified with P not dividing x.
VerificationReport verify_valuation_trichotomy(const FieldElement& x, const PrimeIdeal& P,
                                               std::uint64_t n_max,
                                               const FactorBudget& budget = {});

/// Same check for several primes, sharing the Phi_n(x) evaluations.
VerificationReport verify_valuation_trichotomy(const FieldElement& x,
                                               const std::vector<PrimeIdeal>& primes,
                                               std::uint64_t n_max,
                                               const FactorBudget& budget = {});

/// Odd ramified P: ord_P(C_f) = delta, ord_P(C_{p^i f}) >= 2 for i >= 1, else 0.
VerificationReport verify_ramified_inequality(const FieldElement& x, const PrimeIdeal& P,
                                              std::uint64_t n_max,
                                              const FactorBudget& budget = {});

/// Odd unramified P with N(P) <= norm_max, P not dividing x and
/// f_x(P) <= order_max, in (p, conj) order.
std::vector<PrimeIdeal> trichotomy_primes(const FieldElement& x, std::uint64_t norm_max,
                                          std::uint64_t order_max,
                                          const FactorBudget& budget = {});

/// ord_P(A_n) against sum_{d | n} ord_P(C_d) for every P of A_n or of some C_d,
/// n <= n_max; also the norms. One SKIPPED row (p = 0) per n whose pieces are
/// incomplete.
VerificationReport verify_product_identity(const FieldElement& x, std::uint64_t n_max,
                                           const FactorBudget& budget = {});

/// gcd(A_m, A_n) against (x - 1) for coprime 1 <= m < n <= n_max. A pair whose
/// gcd and x - 1 are both the unit ideal yields one row with p = 1.
VerificationReport verify_gcd_lemma(const FieldElement& x, std::uint64_t n_max,
                                    const FactorBudget& budget = {});

/// Every P exactly dividing A_n (n <= n_max) must be non-Wieferich. Rows carry
/// expected 1 and actual 1/2/3 for NON_WIEFERICH/WIEFERICH/SUPER_WIEFERICH.
/// Incomplete A_n adds a SKIPPED row (p = 0) for the unseen residual.
VerificationReport verify_non_wieferich(const FieldElement& x, std::uint64_t n_max,
                                        const FactorBudget& budget = {});

}  // namespace wief
