#pragma once

// Absolute heights, heights of abc triples, ramified supports and the abc
// quality of 1 + (x^n - 1) = x^n. Real values are MPFR enclosures.

#include <cstdint>
#include <string>
#include <vector>

#include "wief/cyclotomic.hpp"
#include "wief/interval.hpp"

namespace wief {

inline constexpr unsigned kDefaultPrecisionBits = 128;

struct HeightValue {
  Interval enclosure;
  unsigned precision_bits = kDefaultPrecisionBits;

  double value() const { return enclosure.mid(); }
  std::string lower_str(int digits = 20) const { return enclosure.lo_str(digits); }
  std::string upper_str(int digits = 20) const { return enclosure.hi_str(digits); }
  std::string value_str(int digits = 20) const { return enclosure.mid_str(digits); }
};

struct SupportValue {
  Int q = 1;
  bool complete = true;
};

enum class Strictness { NotAllEqual, PairwiseDistinct };

std::string to_string(Strictness s);
Strictness strictness_from_string(const std::string& s);

/// Real field: (|s1(x)|, |s2(x)|) enclosed. Imaginary field: N(x) once, which
/// is the normalized absolute value at the single complex place.
std::vector<Interval> archimedean_values(const FieldElement& x, mpfr_prec_t prec);

/// h(x) = (prod_v max(1, ||x||_v))^(1/2). Throws ZeroElement.
HeightValue abs_height(const FieldElement& x, unsigned precision_bits = kDefaultPrecisionBits);

/// H_K(a, b, c) including the finite places. The finite part is 1 whenever an
/// entry is a unit; otherwise it is 1/N(gcd) and needs a factorization.
HeightValue triple_height(const FieldElement& a, const FieldElement& b, const FieldElement& c,
                          unsigned precision_bits = kDefaultPrecisionBits,
                          const FactorBudget& budget = {});

/// prod N(P)^e(P|p) over P whose valuations on (a, b, c) pass the strictness test.
SupportValue ramified_support(const FieldElement& a, const FieldElement& b,
                              const FieldElement& c, const FactorBudget& budget = {},
                              Strictness strictness = Strictness::NotAllEqual);

/// prod N(P)^e(P|p) over the distinct prime divisors of I.
SupportValue support_of_ideal(const IdealFactorization& I);

struct AbcQuality {
  std::uint64_t n = 0;
  HeightValue height;
  Int q_low;   // residual ignored
  Int q_high;  // residual counted as square-free
  Int discriminant;
  Interval quality;
  bool complete = true;

  /// n,H,Q,Delta_K,quality_low,quality_high,complete
  std::string csv_row() const;
  static std::string csv_header();
};

/// Triple (1, x^n - 1, x^n). Throws NotAdmissible and ZeroIdeal.
AbcQuality abc_quality(const FieldElement& x, std::uint64_t n, const FactorBudget& budget = {},
                       unsigned precision_bits = kDefaultPrecisionBits,
                       Strictness strictness = Strictness::NotAllEqual);

struct HeightBoundRow {
  std::uint64_t n = 0;
  CheckStatus status = CheckStatus::Pass;  // Skipped when A_n is incomplete
  bool max_norm_ok = true;          // max N(a,b,c) <= H (lower end)
  bool norm_vs_height_ok = true;    // |N(x^n-1)| <= 2 h^n (1 + 2^-(prec-8))
  bool norm_vs_height_sq_ok = true; // |N(x^n-1)| <= (2 h^n)^2 (1 + 2^-(prec-8))
  bool u_support_ok = true;         // Q(U_n) <= N(U_n)^2
  bool v_support_ok = true;         // Q(V_n)^2 <= A^2 N(V_n)
  Int norm;
  std::string two_h_pow;            // lower end of 2 h^n, for reporting
};

struct HeightBoundReport {
  std::vector<HeightBoundRow> rows;
  Int ramified_constant;  // A = prod_{p | Delta} p^2

  std::size_t skipped() const;
  std::size_t max_norm_violations() const;
  std::size_t norm_vs_height_violations() const;
  std::size_t norm_vs_height_sq_violations() const;
  std::size_t support_violations() const;
  std::string to_jsonl() const;
};

HeightBoundReport verify_height_bounds(const FieldElement& x, std::uint64_t n_max,
                                       const FactorBudget& budget = {},
                                       unsigned precision_bits = kDefaultPrecisionBits);

}  // namespace wief
