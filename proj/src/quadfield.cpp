#include "wief/quadfield.hpp"

#include <cmath>

#include "wief/error.hpp"

namespace wief {

FieldContext FieldContext::make(const Int& d) {
  if (d == 0 || d == 1) fail(ErrorKind::DegenerateD, "d must not be 0 or 1");
  if (!is_squarefree(d)) fail(ErrorKind::NotSquarefree, "d = " + d.get_str() + " is not squarefree");
  Data data;
  data.d = d;
  if (mod(d, 4) == 1) {
    data.delta = 1;
    data.discriminant = d;
    data.basis = BasisKind::Omega;
    data.c1 = -1;
    data.c0 = -((d - 1) / 4);
  } else {
    data.delta = 2;
    data.discriminant = 4 * d;
    data.basis = BasisKind::Sqrt;
    data.c1 = 0;
    data.c0 = -d;
  }
  return FieldContext(std::make_shared<const Data>(std::move(data)));
}

FieldElement FieldElement::from_half(const FieldContext& field, const Int& x, const Int& y) {
  if (field.delta() == 2) {
    if (mpz_odd_p(x.get_mpz_t()) || mpz_odd_p(y.get_mpz_t()))
      fail(ErrorKind::NonIntegral, "(x + y sqrt d)/2 is not integral");
    return FieldElement(field, x / 2, y / 2);
  }
  Int diff = x - y;
  if (mpz_odd_p(diff.get_mpz_t())) fail(ErrorKind::NonIntegral, "(x + y sqrt d)/2 is not integral");
  return FieldElement(field, diff / 2, y);
}

Int FieldElement::twice_rational() const {
  return field_.delta() == 2 ? Int(2 * a_) : Int(2 * a_ + b_);
}

Int FieldElement::twice_irrational() const {
  return field_.delta() == 2 ? Int(2 * b_) : b_;
}

FieldElement FieldElement::conj() const {
  return FieldElement(field_, a_ - b_ * field_.min_poly_c1(), -b_);
}

Int FieldElement::norm() const {
  return a_ * a_ - field_.min_poly_c1() * a_ * b_ + field_.min_poly_c0() * b_ * b_;
}

Int FieldElement::trace() const { return 2 * a_ - field_.min_poly_c1() * b_; }

std::string FieldElement::to_string() const {
  std::string s = a_.get_str();
  if (b_ >= 0) s += '+';
  s += b_.get_str();
  s += "*w";
  return s;
}

void FieldElement::check_same_field(const FieldElement& y) const {
  if (!(field_ == y.field_)) fail(ErrorKind::FieldMismatch, "elements belong to different fields");
}

FieldElement& FieldElement::operator+=(const FieldElement& y) {
  check_same_field(y);
  a_ += y.a_;
  b_ += y.b_;
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& y) {
  check_same_field(y);
  a_ -= y.a_;
  b_ -= y.b_;
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& y) {
  check_same_field(y);
  // w^2 = -c1 w - c0
  Int be = b_ * y.b_;
  Int na = a_ * y.a_ - be * field_.min_poly_c0();
  Int nb = a_ * y.b_ + b_ * y.a_ - be * field_.min_poly_c1();
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

NormTrace conj_norm_trace(const FieldElement& x) {
  Int n = x.norm();
  return NormTrace{x.conj(), n, abs(n), x.trace()};
}

FieldElement element_pow(const FieldElement& x, std::uint64_t e) {
  FieldElement result(x.field(), 1, 0);
  FieldElement base = x;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

namespace {

UnitData unit_from_tu(const FieldContext& field, const Int& t, const Int& u, std::uint64_t period) {
  FieldElement eps = field.delta() == 1 ? FieldElement(field, (t - u) / 2, u)
                                        : FieldElement(field, t, u);
  int norm = eps.norm() > 0 ? 1 : -1;
  return UnitData{std::move(eps), t, u, norm, period};
}

}  // namespace

UnitData fundamental_unit(const FieldContext& field, std::uint64_t cap) {
  if (!field.is_real()) fail(ErrorKind::ImaginaryField, "fundamental_unit needs d > 1");
  const Int& d = field.d();
  Int root;
  mpz_sqrt(root.get_mpz_t(), d.get_mpz_t());

  // Continued fraction of (P0 + sqrt d)/Q0 with P0/Q0 = 1/2 (w = (1+sqrt d)/2)
  // or 0/1 (w = sqrt d). The period closes at the first i >= 1 with Q_i = Q0,
  // and (G_{i-1}, B_{i-1}) = (t, u).
  const Int q0 = field.delta() == 1 ? 2 : 1;
  Int P = field.delta() == 1 ? 1 : 0;
  Int Q = q0;
  Int g_prev2 = -P, g_prev1 = q0;
  Int b_prev2 = 1, b_prev1 = 0;
  Int a, g, b;
  for (std::uint64_t i = 0; i < cap; ++i) {
    mpz_fdiv_q(a.get_mpz_t(), Int(P + root).get_mpz_t(), Q.get_mpz_t());
    g = a * g_prev1 + g_prev2;
    b = a * b_prev1 + b_prev2;
    g_prev2.swap(g_prev1);
    g_prev1 = g;
    b_prev2.swap(b_prev1);
    b_prev1 = b;
    P = a * Q - P;
    Q = (d - P * P) / Q;
    if (Q == q0) return unit_from_tu(field, g, b, i + 1);
  }
  fail(ErrorKind::PeriodOverflow,
       "continued-fraction period exceeds cap; partial period length " + std::to_string(cap));
}

std::optional<UnitData> pell_oracle(const FieldContext& field, std::uint64_t u_bound) {
  if (!field.is_real()) fail(ErrorKind::ImaginaryField, "pell_oracle needs d > 1");
  const long k = field.delta() == 1 ? 4 : 1;
  std::uint64_t u = 1;
  if (field.d().fits_ulong_p()) {
    // Machine-word path while d u^2 + k < 2^62.
    const std::uint64_t d = field.d().get_ui();
    auto isqrt = [](std::uint64_t n) {
      auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
      while (r * r > n) --r;
      while ((r + 1) * (r + 1) <= n) ++r;
      return r;
    };
    for (; u <= u_bound; ++u) {
      unsigned __int128 du2 = static_cast<unsigned __int128>(d) * u * u;
      if (du2 + 4 >= (static_cast<unsigned __int128>(1) << 62)) break;
      auto v = static_cast<std::uint64_t>(du2);
      for (long sign : {-1L, 1L}) {
        std::uint64_t target = sign < 0 ? v - k : v + k;
        if (sign < 0 && v <= static_cast<std::uint64_t>(k)) continue;
        std::uint64_t r = isqrt(target);
        if (r * r == target)
          return unit_from_tu(field, Int(static_cast<unsigned long>(r)), Int(static_cast<unsigned long>(u)), 0);
      }
    }
  }
  Int t, rem;
  for (; u <= u_bound; ++u) {
    Int du2 = field.d() * Int(static_cast<unsigned long>(u)) * Int(static_cast<unsigned long>(u));
    // Smaller t first: t^2 = d u^2 - k gives the smaller t + u sqrt d.
    for (long sign : {-1L, 1L}) {
      Int target = du2 + sign * k;
      if (target <= 0) continue;
      mpz_sqrtrem(t.get_mpz_t(), rem.get_mpz_t(), target.get_mpz_t());
      if (rem == 0) return unit_from_tu(field, t, Int(static_cast<unsigned long>(u)), 0);
    }
  }
  return std::nullopt;
}

bool is_admissible_base(const FieldElement& x) {
  if (x.is_zero()) return false;
  if (x.field().is_real()) {
    return !(x.b() == 0 && (x.a() == 1 || x.a() == -1));
  }
  // Norm form is positive definite: the norm-one elements are the roots of unity.
  return x.norm() != 1;
}

}  // namespace wief
