#pragma once

// Exact arithmetic in the maximal order of Q(sqrt d), d squarefree.
//
// Elements are stored in the integral basis {1, w}: w = sqrt(d) when
// d = 2,3 mod 4 and w = (1 + sqrt(d))/2 when d = 1 mod 4. The half-integer
// view (X + Y sqrt(d))/2 is derived on demand.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "wief/ratarith.hpp"

namespace wief {

enum class BasisKind { Omega, Sqrt };

class FieldContext {
 public:
  /// Validates d: throws DegenerateD for d in {0, 1}, NotSquarefree otherwise.
  static FieldContext make(const Int& d);

  const Int& d() const { return data_->d; }
  int delta() const { return data_->delta; }
  const Int& discriminant() const { return data_->discriminant; }
  BasisKind basis() const { return data_->basis; }
  bool is_real() const { return data_->d > 0; }

  /// w is a root of x^2 + c1*x + c0.
  const Int& min_poly_c1() const { return data_->c1; }
  const Int& min_poly_c0() const { return data_->c0; }

  friend bool operator==(const FieldContext& x, const FieldContext& y) {
    return x.data_ == y.data_ || x.data_->d == y.data_->d;
  }

 private:
  struct Data {
    Int d;
    int delta;
    Int discriminant;
    BasisKind basis;
    Int c1, c0;
  };
  explicit FieldContext(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

inline FieldContext make_field(const Int& d) { return FieldContext::make(d); }

class FieldElement {
 public:
  FieldElement(FieldContext field, Int a, Int b = 0)
      : field_(std::move(field)), a_(std::move(a)), b_(std::move(b)) {}

  /// (x + y sqrt d)/2; throws NonIntegral if that is not in the order.
  static FieldElement from_half(const FieldContext& field, const Int& x, const Int& y);

  const FieldContext& field() const { return field_; }
  const Int& a() const { return a_; }
  const Int& b() const { return b_; }

  /// X and Y with element = (X + Y sqrt d)/2.
  Int twice_rational() const;
  Int twice_irrational() const;

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  FieldElement conj() const;
  Int norm() const;
  Int trace() const;
  Int abs_norm() const { return abs(norm()); }

  /// "a+b*w" in integral-basis coordinates.
  std::string to_string() const;

  FieldElement& operator+=(const FieldElement& y);
  FieldElement& operator-=(const FieldElement& y);
  FieldElement& operator*=(const FieldElement& y);
  FieldElement operator-() const { return FieldElement(field_, -a_, -b_); }

  friend FieldElement operator+(FieldElement x, const FieldElement& y) { return x += y; }
  friend FieldElement operator-(FieldElement x, const FieldElement& y) { return x -= y; }
  friend FieldElement operator*(FieldElement x, const FieldElement& y) { return x *= y; }
  friend FieldElement operator+(FieldElement x, long c) { x.a_ += c; return x; }
  friend FieldElement operator-(FieldElement x, long c) { x.a_ -= c; return x; }

  friend bool operator==(const FieldElement& x, const FieldElement& y) {
    return x.field_ == y.field_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  void check_same_field(const FieldElement& y) const;

  FieldContext field_;
  Int a_;
  Int b_;
};

struct NormTrace {
  FieldElement conjugate;
  Int norm;
  Int abs_norm;
  Int trace;
};

NormTrace conj_norm_trace(const FieldElement& x);

FieldElement element_pow(const FieldElement& x, std::uint64_t e);

inline FieldElement element_mul(const FieldElement& x, const FieldElement& y) { return x * y; }

struct UnitData {
  FieldElement epsilon;
  Int t;  // epsilon = (delta/2)(t + u sqrt d)
  Int u;
  int unit_norm;
  std::uint64_t period = 0;  // continued-fraction period length (0 from the oracle)
};

inline constexpr std::uint64_t kDefaultPeriodCap = 10'000'000;

/// Fundamental unit > 1 of a real quadratic field from the continued-fraction
/// expansion of w. Throws ImaginaryField for d < 0 and PeriodOverflow when the
/// period is longer than `cap`.
UnitData fundamental_unit(const FieldContext& field, std::uint64_t cap = kDefaultPeriodCap);

/// Exhaustive search over u <= u_bound for the smallest solution of
/// t^2 - d u^2 = +-4 (delta = 1) or +-1 (delta = 2).
std::optional<UnitData> pell_oracle(const FieldContext& field, std::uint64_t u_bound);

/// False iff x = 0 or x is a root of unity.
bool is_admissible_base(const FieldElement& x);

}  // namespace wief
