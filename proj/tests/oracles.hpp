#pragma once

// Slow, independent reference implementations used only by the tests.
// None of them call into the library except for FieldContext/FieldElement
// as plain containers.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "wief/quadfield.hpp"

namespace oracle {

using wief::Int;

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int mod(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

inline std::map<std::uint64_t, unsigned> factor(std::uint64_t n) {
  std::map<std::uint64_t, unsigned> out;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    while (n % q == 0) {
      ++out[q];
      n /= q;
    }
  if (n > 1) ++out[n];
  return out;
}

inline int mobius(std::uint64_t n) {
  int mu = 1;
  for (auto [p, e] : factor(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

inline bool squarefree(std::int64_t n) {
  if (n == 0) return false;
  std::uint64_t m = n < 0 ? -n : n;
  for (auto [p, e] : factor(m))
    if (e > 1) return false;
  return true;
}

// Legendre symbol by listing the squares mod p.
inline int residue_scan(std::int64_t a, std::uint64_t p) {
  std::int64_t r = ((a % static_cast<std::int64_t>(p)) + p) % p;
  if (r == 0) return 0;
  for (std::uint64_t x = 1; x < p; ++x)
    if ((x * x) % p == static_cast<std::uint64_t>(r)) return 1;
  return -1;
}

// Kronecker symbol through the factorization of n and residue scans.
inline int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int sign = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) sign = -1;
  }
  for (auto [p, e] : factor(static_cast<std::uint64_t>(n))) {
    int s;
    if (p == 2) {
      std::int64_t r = ((a % 8) + 8) % 8;
      s = (r % 2 == 0) ? 0 : (r == 1 || r == 7) ? 1 : -1;
    } else {
      s = residue_scan(a, p);
    }
    for (unsigned i = 0; i < e; ++i) sign *= s;
  }
  return sign;
}

// ---------------------------------------------------------------------------
// Integer polynomials, constant term first.

using Poly = std::vector<Int>;

inline void trim(Poly& f) {
  while (f.size() > 1 && f.back() == 0) f.pop_back();
}

inline Poly mul(const Poly& f, const Poly& g) {
  Poly out(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) out[i + j] += f[i] * g[j];
  trim(out);
  return out;
}

// Exact division by a monic polynomial; returns nullopt if it leaves a remainder.
inline std::optional<Poly> divide_exact(Poly f, const Poly& g) {
  if (f.size() < g.size()) return std::nullopt;
  Poly q(f.size() - g.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    Int c = f[k + g.size() - 1];
    q[k] = c;
    for (std::size_t j = 0; j < g.size(); ++j) f[k + j] -= c * g[j];
  }
  for (const Int& c : f)
    if (c != 0) return std::nullopt;
  trim(q);
  return q;
}

inline Poly x_pow_minus_one(std::uint64_t d) {
  Poly f(d + 1, 0);
  f[0] = -1;
  f[d] = 1;
  return f;
}

// Phi_n = prod_{d | n} (x^d - 1)^mu(n/d).
inline Poly cyclotomic_mobius(std::uint64_t n) {
  Poly num{1}, den{1};
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    int mu = mobius(n / d);
    if (mu == 1) num = mul(num, x_pow_minus_one(d));
    if (mu == -1) den = mul(den, x_pow_minus_one(d));
  }
  // den is monic up to sign: every factor x^d - 1 is monic.
  return *divide_exact(num, den);
}

inline Int euler_phi(std::uint64_t n) {
  Int out = 1;
  for (auto [p, e] : factor(n)) {
    out *= Int(static_cast<unsigned long>(p - 1));
    for (unsigned i = 1; i < e; ++i) out *= Int(static_cast<unsigned long>(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Elements as plain (a, b) pairs over {1, w}, w^2 = -c1 w - c0.

struct Elt {
  Int a, b;
};

struct Field {
  Int d, c1, c0;  // w^2 + c1 w + c0 = 0
  explicit Field(const Int& dd) : d(dd) {
    if (mod(d, Int(4)) == 1) {
      c1 = -1;
      c0 = (1 - d) / 4;
    } else {
      c1 = 0;
      c0 = -d;
    }
  }
  Elt mul(const Elt& x, const Elt& y) const {
    // (a + b w)(c + e w) = ac + (ae + bc) w + be w^2
    Int be = x.b * y.b;
    return {x.a * y.a - be * c0, x.a * y.b + x.b * y.a - be * c1};
  }
  // x * conj(x) with conj(w) = -c1 - w.
  Int norm(const Elt& x) const { return x.a * x.a - c1 * x.a * x.b + c0 * x.b * x.b; }
};

inline Elt elt(const wief::FieldElement& x) { return {x.a(), x.b()}; }

// ---------------------------------------------------------------------------
// Full-rank sublattices of Z^2 (coordinates over {1, w}) in Hermite form:
// L = Z (n1, 0) + Z (c, n2), 0 <= c < n1.

struct Lattice {
  Int n1, c, n2;

  bool contains(const Elt& x) const {
    if (mod(x.b, n2) != 0) return false;
    Int k = x.b / n2;
    return mod(x.a - k * c, n1) == 0;
  }
  Int index() const { return n1 * n2; }
  std::vector<Elt> basis() const { return {{n1, 0}, {c, n2}}; }
};

inline Lattice hnf(std::vector<Elt> v) {
  for (;;) {
    std::size_t piv = v.size();
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].b == 0) continue;
      ++nonzero;
      if (piv == v.size() || abs(v[i].b) < abs(v[piv].b)) piv = i;
    }
    if (nonzero <= 1) break;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i == piv || v[i].b == 0) continue;
      Int q = floor_div(v[i].b, v[piv].b);
      v[i].a -= q * v[piv].a;
      v[i].b -= q * v[piv].b;
    }
  }
  Elt pivot{0, 0};
  Int n1 = 0;
  for (const Elt& e : v) {
    if (e.b != 0) {
      pivot = e;
    } else {
      mpz_gcd(n1.get_mpz_t(), n1.get_mpz_t(), e.a.get_mpz_t());
    }
  }
  if (pivot.b < 0) {
    pivot.a = -pivot.a;
    pivot.b = -pivot.b;
  }
  return {n1, n1 == 0 ? Int(0) : mod(pivot.a, n1), pivot.b};
}

// Ideal generated (as an O_K-module) by the given elements.
inline Lattice ideal(const Field& K, const std::vector<Elt>& gens) {
  std::vector<Elt> v;
  for (const Elt& g : gens) {
    v.push_back(g);
    v.push_back(K.mul(g, {0, 1}));
  }
  return hnf(v);
}

inline Lattice product(const Field& K, const Lattice& I, const Lattice& J) {
  std::vector<Elt> v;
  for (const Elt& x : I.basis())
    for (const Elt& y : J.basis()) v.push_back(K.mul(x, y));
  return hnf(v);
}

// The prime above p: (p) when inert, otherwise (p, w - r) for a root r of the
// minimal polynomial of w mod p.
inline Lattice prime(const Field& K, const Int& p, std::optional<Int> root) {
  if (!root) return ideal(K, {{p, 0}});
  return ideal(K, {{p, 0}, {-*root, 1}});
}

inline std::vector<Int> min_poly_roots(const Field& K, const Int& p) {
  std::vector<Int> out;
  for (Int r = 0; r < p; ++r)
    if (mod(r * r + K.c1 * r + K.c0, p) == 0) out.push_back(r);
  return out;
}

inline Lattice power(const Field& K, const Lattice& P, unsigned k) {
  Lattice out = ideal(K, {{1, 0}});
  for (unsigned i = 0; i < k; ++i) out = product(K, out, P);
  return out;
}

// ord_P(x) by testing x in P, P^2, ... (x != 0).
inline unsigned valuation(const Field& K, const Lattice& P, const Elt& x) {
  unsigned k = 0;
  Lattice Pk = P;
  while (Pk.contains(x)) {
    ++k;
    Pk = product(K, Pk, P);
  }
  return k;
}

// ---------------------------------------------------------------------------
// Pell search: smallest u >= 1 with t^2 - d u^2 = +-4 (d = 1 mod 4) or +-1.

struct PellSolution {
  Int t, u;
  int norm;
};

inline std::optional<PellSolution> pell(const Int& d, std::uint64_t u_bound) {
  const long c = mod(d, Int(4)) == 1 ? 4 : 1;
  for (std::uint64_t uu = 1; uu <= u_bound; ++uu) {
    Int u(static_cast<unsigned long>(uu));
    Int du2 = d * u * u;
    for (int s : {-1, 1}) {
      Int t2 = du2 + s * c;
      if (t2 <= 0) continue;
      Int t;
      mpz_sqrt(t.get_mpz_t(), t2.get_mpz_t());
      if (t * t == t2) return PellSolution{t, u, s};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Heights from the two real conjugates at high precision. Returns mpfr value
// of h(x) = sqrt(max(1,|s1|) max(1,|s2|)) for a real field.

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t prec = 512) { mpfr_init2(v, prec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  double get() const { return mpfr_get_d(v, MPFR_RNDN); }
};

inline void conjugates(const wief::FieldElement& x, Mpfr& s1, Mpfr& s2) {
  Mpfr r;
  mpfr_set_z(r.v, x.field().d().get_mpz_t(), MPFR_RNDN);
  mpfr_sqrt(r.v, r.v, MPFR_RNDN);
  Mpfr w1, w2;
  if (x.field().delta() == 1) {
    mpfr_add_ui(w1.v, r.v, 1, MPFR_RNDN);
    mpfr_div_ui(w1.v, w1.v, 2, MPFR_RNDN);
    mpfr_ui_sub(w2.v, 1, r.v, MPFR_RNDN);
    mpfr_div_ui(w2.v, w2.v, 2, MPFR_RNDN);
  } else {
    mpfr_set(w1.v, r.v, MPFR_RNDN);
    mpfr_neg(w2.v, r.v, MPFR_RNDN);
  }
  Mpfr a, b;
  mpfr_set_z(a.v, x.a().get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(b.v, x.b().get_mpz_t(), MPFR_RNDN);
  mpfr_fma(s1.v, b.v, w1.v, a.v, MPFR_RNDN);
  mpfr_fma(s2.v, b.v, w2.v, a.v, MPFR_RNDN);
}

inline double height(const wief::FieldElement& x) {
  Mpfr s1, s2, out;
  conjugates(x, s1, s2);
  mpfr_abs(s1.v, s1.v, MPFR_RNDN);
  mpfr_abs(s2.v, s2.v, MPFR_RNDN);
  if (mpfr_cmp_ui(s1.v, 1) < 0) mpfr_set_ui(s1.v, 1, MPFR_RNDN);
  if (mpfr_cmp_ui(s2.v, 1) < 0) mpfr_set_ui(s2.v, 1, MPFR_RNDN);
  mpfr_mul(out.v, s1.v, s2.v, MPFR_RNDN);
  mpfr_sqrt(out.v, out.v, MPFR_RNDN);
  return out.get();
}

// ---------------------------------------------------------------------------

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x7e57'0001ULL);
  return gen;
}

inline long uniform(long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng());
}

}  // namespace oracle
