#include <doctest.h>

#include "oracles.hpp"
#include "wief/error.hpp"
#include "wief/quadfield.hpp"

using namespace wief;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::IoError;
}

std::vector<long> squarefree_range(long lo, long hi) {
  std::vector<long> out;
  for (long d = lo; d <= hi; ++d)
    if (d != 0 && d != 1 && oracle::squarefree(d)) out.push_back(d);
  return out;
}

}  // namespace

TEST_SUITE("quadfield") {

TEST_CASE("make_field") {
  FieldContext f5 = make_field(5);
  CHECK(f5.delta() == 1);
  CHECK(f5.discriminant() == 5);
  CHECK(f5.basis() == BasisKind::Omega);
  FieldContext f6 = make_field(6);
  CHECK(f6.delta() == 2);
  CHECK(f6.discriminant() == 24);
  CHECK(f6.basis() == BasisKind::Sqrt);
  CHECK(make_field(-3).discriminant() == -3);
  CHECK(make_field(-1).discriminant() == -4);
  CHECK(kind_of([] { make_field(12); }) == ErrorKind::NotSquarefree);
  CHECK(kind_of([] { make_field(0); }) == ErrorKind::DegenerateD);
  CHECK(kind_of([] { make_field(1); }) == ErrorKind::DegenerateD);
}

TEST_CASE("multiplication examples") {
  FieldContext F = make_field(2);
  FieldElement x(F, 1, 1);
  CHECK(x * x == FieldElement(F, 3, 2));
  CHECK(x * FieldElement(F, 1, -1) == FieldElement(F, -1, 0));
  FieldContext G = make_field(5);
  FieldElement w(G, 0, 1);
  CHECK(w * w == FieldElement(G, 1, 1));
  CHECK(kind_of([&] { (void)(x * w); }) == ErrorKind::FieldMismatch);
  CHECK(x + x == FieldElement(F, 2, 2));
  CHECK(x - x == FieldElement(F, 0, 0));
  CHECK(-x == FieldElement(F, -1, -1));
}

TEST_CASE("norm and trace examples") {
  auto nt = conj_norm_trace(FieldElement(make_field(2), 1, 1));
  CHECK(nt.norm == -1);
  CHECK(nt.abs_norm == 1);
  CHECK(nt.trace == 2);
  CHECK(nt.conjugate == FieldElement(make_field(2), 1, -1));
  auto w = conj_norm_trace(FieldElement(make_field(5), 0, 1));
  CHECK(w.norm == -1);
  CHECK(w.trace == 1);
  CHECK(w.conjugate == FieldElement(make_field(5), 1, -1));
  auto s = conj_norm_trace(FieldElement(make_field(7), 3, 1));
  CHECK(s.norm == 2);
  CHECK(s.trace == 6);
}

TEST_CASE("powers") {
  FieldContext F = make_field(2);
  CHECK(element_pow(FieldElement(F, 1, 1), 2) == FieldElement(F, 3, 2));
  FieldContext G = make_field(5);
  CHECK(element_pow(FieldElement(G, 0, 1), 2) == FieldElement(G, 1, 1));
  CHECK(element_pow(FieldElement(G, 7, -3), 0) == FieldElement(G, 1, 0));
}

TEST_CASE("half-integer view") {
  FieldContext G = make_field(5);
  FieldElement w(G, 0, 1);
  CHECK(w.twice_rational() == 1);
  CHECK(w.twice_irrational() == 1);
  CHECK(FieldElement::from_half(G, 3, 1) == FieldElement(G, 1, 1));
  CHECK(kind_of([&] { FieldElement::from_half(G, 1, 0); }) == ErrorKind::NonIntegral);
  FieldContext F = make_field(3);
  CHECK(FieldElement::from_half(F, 4, 2) == FieldElement(F, 2, 1));
  CHECK(kind_of([&] { FieldElement::from_half(F, 1, 1); }) == ErrorKind::NonIntegral);
}

TEST_CASE("random arithmetic against the oracle") {
  for (long d : {2L, 3L, 5L, 13L, 15L, 21L, -1L, -3L, -5L, -7L, 94L, 1001L}) {
    FieldContext F = make_field(d);
    oracle::Field K(d);
    for (int i = 0; i < 200; ++i) {
      FieldElement x(F, oracle::uniform(-1000, 1000), oracle::uniform(-1000, 1000));
      FieldElement y(F, oracle::uniform(-1000, 1000), oracle::uniform(-1000, 1000));
      auto xy = oracle::Field(d).mul(oracle::elt(x), oracle::elt(y));
      FieldElement prod = x * y;
      CHECK(prod.a() == xy.a);
      CHECK(prod.b() == xy.b);
      CHECK(x.norm() == K.norm(oracle::elt(x)));
      CHECK(prod.norm() == x.norm() * y.norm());
      CHECK(x * x.conj() == FieldElement(F, x.norm(), 0));
      CHECK(x.trace() == (x + x.conj()).a());
      // twice-view: X^2 - d Y^2 = 4 N
      Int X = x.twice_rational(), Y = x.twice_irrational();
      CHECK(X * X - F.d() * Y * Y == 4 * x.norm());
    }
  }
}

TEST_CASE("power additivity") {
  for (long d : {2L, 5L, 7L, -3L}) {
    FieldContext F = make_field(d);
    for (int i = 0; i < 40; ++i) {
      FieldElement x(F, oracle::uniform(-9, 9), oracle::uniform(-9, 9));
      std::uint64_t m = oracle::uniform(0, 15), n = oracle::uniform(0, 15);
      CHECK(element_pow(x, m + n) == element_pow(x, m) * element_pow(x, n));
    }
  }
}

TEST_CASE("fundamental unit examples") {
  UnitData u5 = fundamental_unit(make_field(5));
  CHECK(u5.t == 1);
  CHECK(u5.u == 1);
  CHECK(u5.unit_norm == -1);
  CHECK(u5.epsilon == FieldElement(make_field(5), 0, 1));
  UnitData u2 = fundamental_unit(make_field(2));
  CHECK(u2.epsilon == FieldElement(make_field(2), 1, 1));
  CHECK(u2.t == 1);
  CHECK(u2.u == 1);
  CHECK(u2.unit_norm == -1);
  UnitData u7 = fundamental_unit(make_field(7));
  CHECK(u7.epsilon == FieldElement(make_field(7), 8, 3));
  CHECK(u7.t == 8);
  CHECK(u7.u == 3);
  CHECK(u7.unit_norm == 1);
  UnitData u15 = fundamental_unit(make_field(15));
  CHECK(u15.t == 4);
  CHECK(u15.u == 1);
  UnitData u94 = fundamental_unit(make_field(94));
  CHECK(u94.u == 221064);
  CHECK(kind_of([] { fundamental_unit(make_field(-5)); }) == ErrorKind::ImaginaryField);
  CHECK(kind_of([] { fundamental_unit(make_field(94), 2); }) == ErrorKind::PeriodOverflow);
}

TEST_CASE("pell oracle examples") {
  auto o5 = pell_oracle(make_field(5), 10);
  REQUIRE(o5);
  CHECK(o5->t == 1);
  CHECK(o5->u == 1);
  auto o7 = pell_oracle(make_field(7), 10);
  REQUIRE(o7);
  CHECK(o7->t == 8);
  CHECK(o7->u == 3);
  CHECK_FALSE(pell_oracle(make_field(94), 10));
}

TEST_CASE("fundamental unit against brute-force Pell search") {
  for (long d : squarefree_range(2, 300)) {
    FieldContext F = make_field(d);
    UnitData u = fundamental_unit(F);
    const int c = F.delta() == 1 ? 4 : 1;
    CHECK(u.t * u.t - F.d() * u.u * u.u == c * u.unit_norm);
    CHECK(u.epsilon.norm() == u.unit_norm);
    CHECK(u.t > 0);
    CHECK(u.u > 0);
    auto want = oracle::pell(d, 20000);
    if (!want) continue;
    CHECK_MESSAGE(u.t == want->t, "d=", d);
    CHECK_MESSAGE(u.u == want->u, "d=", d);
    CHECK(u.unit_norm == want->norm);
  }
}

TEST_CASE("admissible bases") {
  CHECK_FALSE(is_admissible_base(FieldElement(make_field(2), 1, 0)));
  CHECK_FALSE(is_admissible_base(FieldElement(make_field(2), -1, 0)));
  CHECK_FALSE(is_admissible_base(FieldElement(make_field(2), 0, 0)));
  CHECK_FALSE(is_admissible_base(FieldElement(make_field(-1), 0, 1)));
  CHECK_FALSE(is_admissible_base(FieldElement(make_field(-3), 0, 1)));
  CHECK_FALSE(is_admissible_base(FieldElement(make_field(-3), -1, 1)));
  CHECK(is_admissible_base(FieldElement(make_field(2), 1, 1)));
  CHECK(is_admissible_base(FieldElement(make_field(-1), 1, 1)));
  CHECK(is_admissible_base(FieldElement(make_field(5), 2, 0)));
  // roots of unity are exactly the elements with x^12 = 1
  for (long d : {-1L, -3L, -7L, 2L, 5L}) {
    FieldContext F = make_field(d);
    for (long a = -3; a <= 3; ++a)
      for (long b = -3; b <= 3; ++b) {
        FieldElement x(F, a, b);
        bool root = !x.is_zero() && element_pow(x, 12) == FieldElement(F, 1, 0);
        CHECK(is_admissible_base(x) == (!x.is_zero() && !root));
      }
  }
}

}
