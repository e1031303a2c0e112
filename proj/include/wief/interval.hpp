#pragma once

// Closed real intervals [lo, hi] with MPFR endpoints and outward rounding.

#include <string>

#include <mpfr.h>

#include "wief/ratarith.hpp"

namespace wief {

class Interval {
 public:
  Interval() : Interval(mpfr_prec_t{64}) {}
  explicit Interval(mpfr_prec_t prec);
  Interval(const Int& value, mpfr_prec_t prec);
  Interval(long value, mpfr_prec_t prec) : Interval(Int(value), prec) {}
  ~Interval();

  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

  /// Same interval widened to `prec`-bit endpoints.
  Interval rounded(mpfr_prec_t prec) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);

  Interval sqrt() const;
  Interval abs() const;
  Interval log() const;
  Interval pow(unsigned long n) const;
  static Interval max(const Interval& a, const Interval& b);
  /// Smallest interval containing both.
  static Interval hull(const Interval& a, const Interval& b);
  /// Square root of d enclosed at the given precision.
  static Interval sqrt_of(const Int& d, mpfr_prec_t prec);

  bool contains(const Int& v) const;
  /// v <= lo (v is below every point of the interval).
  bool int_le_lower(const Int& v) const;
  /// v <= hi.
  bool int_le_upper(const Int& v) const;
  bool positive() const { return mpfr_sgn(lo_) > 0; }

  double mid() const;
  /// Relative width (hi - lo) / |mid|, rounded up.
  double relative_width() const;
  std::string lo_str(int digits = 20) const;
  std::string hi_str(int digits = 20) const;
  std::string mid_str(int digits = 20) const;

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace wief
