#include <doctest.h>

#include "oracles.hpp"
#include "wief/error.hpp"
#include "wief/primes.hpp"

using namespace wief;

namespace {

const std::vector<long> kFields = {2, 3, 5, 6, 7, 13, 15, -1, -3, -5, -7};

oracle::Lattice oracle_prime(const FieldContext& F, const PrimeIdeal& P) {
  oracle::Field K(F.d());
  switch (P.kind) {
    case SplitKind::Inert:
      return oracle::prime(K, P.p, std::nullopt);
    case SplitKind::Split:
      REQUIRE(oracle::mod(P.omega_root * P.omega_root + K.c1 * P.omega_root + K.c0, P.p) == 0);
      return oracle::prime(K, P.p, P.omega_root);
    case SplitKind::Ramified: {
      auto roots = oracle::min_poly_roots(K, P.p);
      REQUIRE(roots.size() == 1);
      return oracle::prime(K, P.p, roots[0]);
    }
  }
  return {};
}

FieldElement random_element(const FieldContext& F, long span) {
  return FieldElement(F, oracle::uniform(-span, span), oracle::uniform(-span, span));
}

// x^e reduced coefficientwise mod m (m a multiple of a power of P).
oracle::Elt pow_mod(const oracle::Field& K, oracle::Elt x, Int e, const Int& m) {
  oracle::Elt r{1, 0};
  x = {oracle::mod(x.a, m), oracle::mod(x.b, m)};
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) {
      r = K.mul(r, x);
      r = {oracle::mod(r.a, m), oracle::mod(r.b, m)};
    }
    x = K.mul(x, x);
    x = {oracle::mod(x.a, m), oracle::mod(x.b, m)};
    e >>= 1;
  }
  return r;
}

int oracle_class(const FieldContext& F, const PrimeIdeal& P, const FieldElement& x) {
  oracle::Field K(F.d());
  oracle::Lattice L = oracle_prime(F, P);
  Int m = P.p * P.p * P.p;
  oracle::Elt y = pow_mod(K, oracle::elt(x), P.norm - 1, m);
  y.a -= 1;
  if (!oracle::power(K, L, 2).contains(y)) return 0;
  return oracle::power(K, L, 3).contains(y) ? 2 : 1;
}

int class_index(WieferichClass c) {
  return c == WieferichClass::NonWieferich ? 0 : c == WieferichClass::Wieferich ? 1 : 2;
}

}  // namespace

TEST_SUITE("primes") {

TEST_CASE("primes_above examples") {
  FieldContext F = make_field(5);
  auto s = primes_above(F, 11);
  REQUIRE(s.size() == 2);
  CHECK(s[0].kind == SplitKind::Split);
  CHECK(s[0].root == Int(4));
  CHECK(s[1].root == Int(4));
  CHECK(s[0].conj_flag == 0);
  CHECK(s[1].conj_flag == 1);
  CHECK(s[0].norm == 11);
  CHECK(s[1].norm == 11);
  auto r = primes_above(F, 5);
  REQUIRE(r.size() == 1);
  CHECK(r[0].kind == SplitKind::Ramified);
  CHECK(r[0].e == 2);
  CHECK(r[0].norm == 5);
  auto i = primes_above(F, 3);
  REQUIRE(i.size() == 1);
  CHECK(i[0].kind == SplitKind::Inert);
  CHECK(i[0].norm == 9);
}

TEST_CASE("splitting type follows the Kronecker symbol of the discriminant") {
  for (long d : kFields) {
    FieldContext F = make_field(d);
    long disc = F.discriminant().get_si();
    for (std::uint64_t p = 2; p < 400; ++p) {
      if (!oracle::is_prime(p)) continue;
      auto ps = primes_above(F, Int(static_cast<unsigned long>(p)));
      int k = oracle::kronecker(disc, p);
      if (k == 1) {
        REQUIRE(ps.size() == 2);
        CHECK(ps[0].kind == SplitKind::Split);
        CHECK(ps[0].norm == Int(static_cast<unsigned long>(p)));
        CHECK(ps[0].e == 1);
        CHECK(ps[0].omega_root != ps[1].omega_root);
      } else if (k == -1) {
        REQUIRE(ps.size() == 1);
        CHECK(ps[0].kind == SplitKind::Inert);
        CHECK(ps[0].norm == Int(static_cast<unsigned long>(p * p)));
      } else {
        REQUIRE(ps.size() == 1);
        CHECK(ps[0].kind == SplitKind::Ramified);
        CHECK(ps[0].e == 2);
      }
      // index of the oracle lattice is the norm
      for (const auto& P : ps) CHECK(oracle_prime(F, P).index() == P.norm);
    }
  }
}

TEST_CASE("residue_pow examples") {
  FieldContext F = make_field(5);
  PrimeIdeal P11 = prime_ideal(F, 11, 0);
  ResidueRing r11(F, P11, 1);
  FieldElement sqrt5(F, -1, 2);
  CHECK(residue_pow(r11, sqrt5, 1).rep0() == 4);
  PrimeIdeal P5 = prime_ideal(F, 5);
  ResidueRing r5(F, P5, 2);
  CHECK_FALSE(residue_pow(r5, FieldElement(F, 0, 1), 4).is_one());
  // 1 + 5 is 1 mod (sqrt 5)^2
  CHECK(residue_pow(r5, FieldElement(F, 6, 0), 12345).is_one());
  CHECK(residue_pow(ResidueRing(F, P11, 2), FieldElement(F, 1 + 121, 0), 7).is_one());
}

TEST_CASE("unsupported levels") {
  FieldContext F = make_field(2);
  PrimeIdeal P2 = prime_ideal(F, 2);
  CHECK_THROWS_AS(ResidueRing(F, P2, 2), Error);
  try {
    ResidueRing bad(F, P2, 2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EvenRamified);
  }
  try {
    ResidueRing bad(F, prime_ideal(F, 7), 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedLevel);
  }
}

TEST_CASE("residue classes match ideal membership") {
  for (long d : kFields) {
    FieldContext F = make_field(d);
    oracle::Field K(d);
    for (std::uint64_t p = 2; p <= 50; ++p) {
      if (!oracle::is_prime(p)) continue;
      for (const PrimeIdeal& P : primes_above(F, Int(static_cast<unsigned long>(p)))) {
        oracle::Lattice L = oracle_prime(F, P);
        unsigned kmax = (P.kind == SplitKind::Ramified && p == 2) ? 1 : 3;
        oracle::Lattice Pk = L;
        for (unsigned k = 1; k <= kmax; ++k) {
          ResidueRing ring(F, P, k);
          for (int i = 0; i < 20; ++i) {
            FieldElement x = random_element(F, 500);
            FieldElement y = random_element(F, 500);
            if (i % 2 == 0) {
              // force a congruent pair
              auto b = Pk.basis();
              long s = oracle::uniform(-5, 5), t = oracle::uniform(-5, 5);
              y = x + FieldElement(F, s * b[0].a + t * b[1].a, s * b[0].b + t * b[1].b);
            }
            oracle::Elt diff{x.a() - y.a(), x.b() - y.b()};
            bool same = ring.reduce(x) == ring.reduce(y);
            REQUIRE_MESSAGE(same == Pk.contains(diff), "d=", d, " p=", p, " k=", k);
            CHECK(ring.mul(ring.reduce(x), ring.reduce(y)) == ring.reduce(x * y));
            CHECK(ring.add(ring.reduce(x), ring.reduce(y)) == ring.reduce(x + y));
            CHECK(ring.sub(ring.reduce(x), ring.reduce(y)) == ring.reduce(x - y));
            if (k > 1) {
              ResidueRing lower(F, P, k - 1);
              CHECK(ring.reduce_to(ring.reduce(x), lower) == lower.reduce(x));
            }
          }
          Pk = oracle::product(K, Pk, L);
        }
      }
    }
  }
}

TEST_CASE("valuation examples") {
  FieldContext F = make_field(5);
  PrimeIdeal P5 = prime_ideal(F, 5);
  CHECK(valuation(FieldElement(F, 5), P5) == 2);
  CHECK(valuation(FieldElement(F, -1, 2), P5) == 1);
  CHECK(valuation(FieldElement(F, 2, 2), prime_ideal(F, 3)) == 0);
  CHECK(valuation(FieldElement(F, 0), P5) == kInfiniteValuation);
}

TEST_CASE("valuation against repeated ideal containment") {
  for (long d : kFields) {
    FieldContext F = make_field(d);
    oracle::Field K(d);
    for (std::uint64_t p = 2; p <= 50; ++p) {
      if (!oracle::is_prime(p)) continue;
      Int P_(static_cast<unsigned long>(p));
      for (const PrimeIdeal& P : primes_above(F, P_)) {
        oracle::Lattice L = oracle_prime(F, P);
        for (int i = 0; i < 25; ++i) {
          FieldElement x = random_element(F, 60);
          if (x.is_zero()) continue;
          // push some mass into P
          if (i % 3 == 0) x *= FieldElement(F, P_ * P_);
          if (i % 3 == 1 && P.kind != SplitKind::Inert) x *= FieldElement(F, -P.omega_root, 1);
          unsigned v = valuation(x, P);
          REQUIRE_MESSAGE(v == oracle::valuation(K, L, oracle::elt(x)), "d=", d, " p=", p,
                          " x=", x.to_string());
          FieldElement y = random_element(F, 60);
          if (y.is_zero()) continue;
          CHECK(valuation(x * y, P) == v + valuation(y, P));
        }
      }
    }
  }
}

TEST_CASE("multiplicative order") {
  FieldContext F = make_field(5);
  FieldElement two(F, 2);
  CHECK(multiplicative_order(two, prime_ideal(F, 11)) == 10);
  CHECK(multiplicative_order(two, prime_ideal(F, 3)) == 2);
  CHECK(multiplicative_order(FieldElement(F, 12), prime_ideal(F, 11)) == 1);
  CHECK_THROWS_AS(multiplicative_order(FieldElement(F, 22), prime_ideal(F, 11)), Error);

  for (long d : kFields) {
    FieldContext G = make_field(d);
    oracle::Field K(d);
    for (std::uint64_t p = 3; p <= 50; ++p) {
      if (!oracle::is_prime(p)) continue;
      for (const PrimeIdeal& P : primes_above(G, Int(static_cast<unsigned long>(p)))) {
        oracle::Lattice L = oracle_prime(G, P);
        for (int i = 0; i < 5; ++i) {
          FieldElement x = random_element(G, 100);
          if (valuation(x, P) != 0) continue;
          Int f = multiplicative_order(x, P);
          CHECK(oracle::mod(P.norm - 1, f) == 0);
          // brute force: first k with x^k - 1 in P
          oracle::Elt acc = oracle::elt(x);
          Int k = 1;
          while (!L.contains({acc.a - 1, acc.b})) {
            acc = K.mul(acc, oracle::elt(x));
            acc = {oracle::mod(acc.a, P.p), oracle::mod(acc.b, P.p)};
            ++k;
          }
          CHECK(f == k);
        }
      }
    }
  }
}

TEST_CASE("delta_alpha") {
  FieldContext F = make_field(5);
  CHECK(delta_alpha(FieldElement(F, 2), prime_ideal(F, 11)) == 1);
  CHECK(delta_alpha(FieldElement(F, 1, 25), prime_ideal(F, 5)) == 4);
  FieldContext G = make_field(2);
  oracle::Field K(2);
  FieldElement x(G, 1, 1);
  for (const PrimeIdeal& P : primes_above(G, 7)) {
    Int f = multiplicative_order(x, P);
    FieldElement y = element_pow(x, f.get_ui()) - 1;
    CHECK(delta_alpha(x, P) == oracle::valuation(K, oracle_prime(G, P), oracle::elt(y)));
  }
  // 2^1092 - 1 over the inert 1093 carries the prime twice
  CHECK(delta_alpha(FieldElement(F, 2), prime_ideal(F, 1093)) >= 2);
}

TEST_CASE("wieferich class examples") {
  FieldContext F = make_field(5);
  WieferichClass c = wieferich_class(FieldElement(F, 2), prime_ideal(F, 1093));
  CHECK(c != WieferichClass::NonWieferich);
  CHECK(wieferich_class(FieldElement(F, 0, 1), prime_ideal(F, 5)) == WieferichClass::NonWieferich);
  // 1 + 11^3 is 1 mod P^3
  CHECK(wieferich_class(FieldElement(F, 1 + 1331), prime_ideal(F, 11)) ==
        WieferichClass::SuperWieferich);
  CHECK(wieferich_class(FieldElement(F, 1 + 121), prime_ideal(F, 11)) != WieferichClass::NonWieferich);
  CHECK(wieferich_class(FieldElement(F, 2), prime_ideal(F, 3511, 0)) != WieferichClass::NonWieferich);
  CHECK(wieferich_class(FieldElement(F, 2), prime_ideal(F, 3511, 1)) != WieferichClass::NonWieferich);
  CHECK_THROWS_AS(wieferich_class(FieldElement(F, 22), prime_ideal(F, 11)), Error);
}

TEST_CASE("wieferich class against brute-force powers") {
  for (long d : kFields) {
    FieldContext F = make_field(d);
    for (std::uint64_t p = 2; p <= 50; ++p) {
      if (!oracle::is_prime(p)) continue;
      for (const PrimeIdeal& P : primes_above(F, Int(static_cast<unsigned long>(p)))) {
        for (int i = 0; i < 8; ++i) {
          FieldElement x = random_element(F, 100);
          if (i == 0) x = FieldElement(F, 1 + P.p * P.p * P.p, 0);
          if (i == 1) x = FieldElement(F, 1 + P.p * P.p, 0);
          if (valuation(x, P) != 0 || !is_admissible_base(x)) continue;
          CHECK_MESSAGE(class_index(wieferich_class(x, P)) == oracle_class(F, P, x), "d=", d,
                        " p=", p, " x=", x.to_string());
        }
      }
    }
  }
}

TEST_CASE("wieferich class is conjugation equivariant") {
  for (long d : {2L, 5L, 7L, -7L}) {
    FieldContext F = make_field(d);
    for (std::uint64_t p = 3; p < 200; ++p) {
      if (!oracle::is_prime(p)) continue;
      auto ps = primes_above(F, Int(static_cast<unsigned long>(p)));
      if (ps.size() != 2) continue;
      CHECK(conjugate_ideal(F, ps[0]) == ps[1]);
      for (int i = 0; i < 4; ++i) {
        FieldElement x = random_element(F, 1000);
        if (valuation(x, ps[0]) != 0 || valuation(x.conj(), ps[1]) != 0) continue;
        CHECK(wieferich_class(x, ps[0]) == wieferich_class(x.conj(), ps[1]));
        CHECK(valuation(x, ps[1]) == valuation(x.conj(), ps[0]));
      }
    }
  }
}

}
