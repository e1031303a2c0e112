#pragma once

// Prime ideals of a quadratic order, the residue rings O_K / P^k (k <= 3),
// P-adic valuations, multiplicative orders and the Wieferich classification.

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wief/quadfield.hpp"

namespace wief {

enum class SplitKind { Split, Inert, Ramified };

std::string to_string(SplitKind k);

struct PrimeIdeal {
  Int p;
  SplitKind kind = SplitKind::Inert;
  /// Smaller square root of d mod p for split primes (1 when p = 2).
  std::optional<Int> root;
  /// 0 for sqrt(d) -> root, 1 for the conjugate (sqrt(d) -> p - root).
  int conj_flag = 0;
  unsigned e = 1;
  Int norm;
  /// Image of w in O_K / P for split primes: P = (p, w - omega_root).
  Int omega_root;

  friend bool operator==(const PrimeIdeal& x, const PrimeIdeal& y) {
    return x.p == y.p && x.conj_flag == y.conj_flag;
  }
  friend std::strong_ordering operator<=>(const PrimeIdeal& x, const PrimeIdeal& y) {
    int c = cmp(x.p, y.p);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return x.conj_flag <=> y.conj_flag;
  }

  bool unramified_odd() const { return kind != SplitKind::Ramified && p != 2; }
  std::string label() const;
};

/// Two conjugate split ideals (smaller root first), one inert or one ramified ideal.
std::vector<PrimeIdeal> primes_above(const FieldContext& field, const Int& p);

/// The ideal above p with the given conjugate flag.
PrimeIdeal prime_ideal(const FieldContext& field, const Int& p, int conj_flag = 0);

/// Conjugate ideal (the other split prime; itself otherwise).
PrimeIdeal conjugate_ideal(const FieldContext& field, const PrimeIdeal& P);

inline constexpr unsigned kInfiniteValuation = std::numeric_limits<unsigned>::max();

/// ord_P(x); kInfiniteValuation for x = 0.
unsigned valuation(const FieldElement& x, const PrimeIdeal& P);

/// An element of O_K / P^k in its splitting-type normal form:
///   split:    r0 = image mod p^k under w -> lifted root, r1 = 0
///   inert:    (r0, r1) mod p^k over the basis {1, w}
///   ramified: x = r0 + r1 sqrt(d), r0 mod p^ceil(k/2), r1 mod p^floor(k/2)
///   ramified above 2 (level 1 only): r0 in {0, 1}
class ResidueClass {
 public:
  const PrimeIdeal& ideal() const { return *ideal_; }
  unsigned level() const { return level_; }
  const Int& rep0() const { return r0_; }
  const Int& rep1() const { return r1_; }

  bool is_zero() const { return r0_ == 0 && r1_ == 0; }
  bool is_one() const { return r0_ == 1 && r1_ == 0; }

  friend bool operator==(const ResidueClass& x, const ResidueClass& y) {
    return *x.ideal_ == *y.ideal_ && x.level_ == y.level_ && x.r0_ == y.r0_ && x.r1_ == y.r1_;
  }

 private:
  friend class ResidueRing;
  ResidueClass(const PrimeIdeal* ideal, unsigned level, Int r0, Int r1)
      : ideal_(ideal), level_(level), r0_(std::move(r0)), r1_(std::move(r1)) {}

  const PrimeIdeal* ideal_;
  unsigned level_;
  Int r0_;
  Int r1_;
};

/// O_K / P^k for 1 <= k <= 3. The ring keeps a copy of P; classes it hands out
/// refer to it and must not outlive the ring.
class ResidueRing {
 public:
  /// Throws UnsupportedLevel for k outside 1..3 and EvenRamified for P | 2
  /// ramified with k > 1.
  ResidueRing(const FieldContext& field, const PrimeIdeal& P, unsigned k);

  ResidueRing(const ResidueRing&) = delete;
  ResidueRing& operator=(const ResidueRing&) = delete;

  unsigned level() const { return level_; }
  const PrimeIdeal& ideal() const { return ideal_; }

  ResidueClass reduce(const FieldElement& x) const;
  ResidueClass one() const;
  ResidueClass mul(const ResidueClass& x, const ResidueClass& y) const;
  ResidueClass add(const ResidueClass& x, const ResidueClass& y) const;
  ResidueClass sub(const ResidueClass& x, const ResidueClass& y) const;
  ResidueClass pow(const ResidueClass& x, const Int& e) const;

  /// Image of a level-k class in O_K / P^j, j <= k, expressed as a class of
  /// `target` (which must be a ring for the same ideal at level j).
  ResidueClass reduce_to(const ResidueClass& x, const ResidueRing& target) const;

 private:
  ResidueClass make(Int r0, Int r1) const;

  FieldContext field_;
  PrimeIdeal ideal_;
  unsigned level_;
  Int mod0_;         // modulus of r0
  Int mod1_;         // modulus of r1 (1 when r1 is absent)
  Int omega_image_;  // split: root of the minimal polynomial of w mod p^k
  Int inv2_;         // ramified odd p: 1/2 mod p^k
};

/// Class of x^e in O_K / P^k.
ResidueClass residue_pow(const ResidueRing& ring, const FieldElement& x, const Int& e);

/// f_x(P): order of x in (O_K / P)^*. Throws BaseInIdeal if P | x and
/// IncompleteFactorization if N(P) - 1 cannot be factored within budget.
Int multiplicative_order(const FieldElement& x, const PrimeIdeal& P,
                         const FactorBudget& budget = {});

/// ord_P(x^f - 1) for f = f_x(P). Works modulo p^K with K doubled until the
/// valuation is determined, so large orders never build x^f exactly.
unsigned delta_alpha(const FieldElement& x, const PrimeIdeal& P, const Int& order);
unsigned delta_alpha(const FieldElement& x, const PrimeIdeal& P, const FactorBudget& budget = {});

enum class WieferichClass { NonWieferich, Wieferich, SuperWieferich };

std::string to_string(WieferichClass c);

/// NonWieferich iff x^(N(P)-1) != 1 mod P^2; SuperWieferich iff = 1 mod P^3.
WieferichClass wieferich_class(const FieldElement& x, const PrimeIdeal& P);

}  // namespace wief
