#include "wief/interval.hpp"

#include <algorithm>
#include <cmath>

#include "wief/error.hpp"

namespace wief {

namespace {

std::string fmt(mpfr_srcptr v, int digits, mpfr_rnd_t rnd) {
  char buf[256];
  std::string spec = "%." + std::to_string(digits) + "R" + (rnd == MPFR_RNDD ? "D" : rnd == MPFR_RNDU ? "U" : "N") + "g";
  mpfr_snprintf(buf, sizeof buf, spec.c_str(), v);
  return buf;
}

}  // namespace

Interval::Interval(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Int& value, mpfr_prec_t prec) : Interval(prec) {
  mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

Interval::~Interval() {
  if (lo_->_mpfr_d) mpfr_clear(lo_);
  if (hi_->_mpfr_d) mpfr_clear(hi_);
}

Interval::Interval(const Interval& other) : Interval(other.precision()) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other.precision()) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.precision());
    mpfr_set_prec(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval Interval::rounded(mpfr_prec_t prec) const {
  Interval out(prec);
  mpfr_set(out.lo_, lo_, MPFR_RNDD);
  mpfr_set(out.hi_, hi_, MPFR_RNDU);
  return out;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_add(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return out;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_sub(out.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(out.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return out;
}

Interval operator*(const Interval& a, const Interval& b) {
  const mpfr_prec_t prec = std::max(a.precision(), b.precision());
  Interval out(prec);
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_srcptr as[2] = {a.lo_, a.hi_};
  mpfr_srcptr bs[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return out;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0)
    fail(ErrorKind::InvalidArgument, "interval division by an interval containing zero");
  const mpfr_prec_t prec = std::max(a.precision(), b.precision());
  Interval out(prec);
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_srcptr as[2] = {a.lo_, a.hi_};
  mpfr_srcptr bs[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_div(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return out;
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(hi_) < 0) fail(ErrorKind::InvalidArgument, "sqrt of a negative interval");
  Interval out(precision());
  if (mpfr_sgn(lo_) <= 0)
    mpfr_set_zero(out.lo_, 1);
  else
    mpfr_sqrt(out.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(out.hi_, hi_, MPFR_RNDU);
  return out;
}

Interval Interval::abs() const {
  Interval out(precision());
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) {
    mpfr_neg(out.lo_, hi_, MPFR_RNDD);
    mpfr_neg(out.hi_, lo_, MPFR_RNDU);
    return out;
  }
  mpfr_set_zero(out.lo_, 1);
  mpfr_neg(out.hi_, lo_, MPFR_RNDU);
  if (mpfr_greater_p(hi_, out.hi_)) mpfr_set(out.hi_, hi_, MPFR_RNDU);
  return out;
}

Interval Interval::log() const {
  if (mpfr_sgn(lo_) <= 0) fail(ErrorKind::InvalidArgument, "log of a non-positive interval");
  Interval out(precision());
  mpfr_log(out.lo_, lo_, MPFR_RNDD);
  mpfr_log(out.hi_, hi_, MPFR_RNDU);
  return out;
}

Interval Interval::pow(unsigned long n) const {
  Interval result(Int(1), precision());
  Interval base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Interval Interval::max(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_max(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return out;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval out(std::max(a.precision(), b.precision()));
  mpfr_min(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return out;
}

Interval Interval::sqrt_of(const Int& d, mpfr_prec_t prec) {
  return Interval(d, prec).sqrt();
}

bool Interval::contains(const Int& v) const {
  return mpfr_cmp_z(lo_, v.get_mpz_t()) <= 0 && mpfr_cmp_z(hi_, v.get_mpz_t()) >= 0;
}

bool Interval::int_le_lower(const Int& v) const { return mpfr_cmp_z(lo_, v.get_mpz_t()) >= 0; }

bool Interval::int_le_upper(const Int& v) const { return mpfr_cmp_z(hi_, v.get_mpz_t()) >= 0; }

double Interval::mid() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

double Interval::relative_width() const {
  mpfr_t w;
  mpfr_init2(w, precision());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double width = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  double m = std::abs(mid());
  return m == 0 ? width : width / m;
}

std::string Interval::lo_str(int digits) const { return fmt(lo_, digits, MPFR_RNDD); }
std::string Interval::hi_str(int digits) const { return fmt(hi_, digits, MPFR_RNDU); }

std::string Interval::mid_str(int digits) const {
  mpfr_t m;
  mpfr_init2(m, precision() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  std::string s = fmt(m, digits, MPFR_RNDN);
  mpfr_clear(m);
  return s;
}

}  // namespace wief
