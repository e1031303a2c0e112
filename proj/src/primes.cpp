#include "wief/primes.hpp"

#include <algorithm>

#include "wief/error.hpp"

namespace wief {

std::string to_string(SplitKind k) {
  switch (k) {
    case SplitKind::Split: return "SPLIT";
    case SplitKind::Inert: return "INERT";
    case SplitKind::Ramified: return "RAMIFIED";
  }
  return "?";
}

std::string to_string(WieferichClass c) {
  switch (c) {
    case WieferichClass::NonWieferich: return "NON_WIEFERICH";
    case WieferichClass::Wieferich: return "WIEFERICH";
    case WieferichClass::SuperWieferich: return "SUPER_WIEFERICH";
  }
  return "?";
}

std::string PrimeIdeal::label() const {
  std::string s = "P(" + p.get_str();
  if (kind == SplitKind::Split) s += "," + std::to_string(conj_flag);
  return s + ")";
}

namespace {

unsigned ord_or(const Int& v, const Int& p, unsigned cap) {
  return v == 0 ? cap : ord_p(v, p);
}

SplitKind splitting_type(const FieldContext& field, const Int& p) {
  const Int& disc = field.discriminant();
  if (p == 2) {
    if (mpz_even_p(disc.get_mpz_t())) return SplitKind::Ramified;
    return mod(disc, 8) == 1 ? SplitKind::Split : SplitKind::Inert;
  }
  int k = kronecker(disc, p);
  if (k == 0) return SplitKind::Ramified;
  return k > 0 ? SplitKind::Split : SplitKind::Inert;
}

// Valuation at P of an element known only through coordinates (a, b) mod p^K.
std::optional<unsigned> valuation_from_residue(const FieldContext& field, const PrimeIdeal& P,
                                               const Int& a, const Int& b, unsigned K) {
  if (a == 0 && b == 0) return std::nullopt;
  const Int& p = P.p;
  const Int M = pow_ui(p, K);
  switch (P.kind) {
    case SplitKind::Inert:
      return std::min(ord_or(a, p, K), ord_or(b, p, K));
    case SplitKind::Split: {
      unsigned c = std::min(ord_or(a, p, K), ord_or(b, p, K));
      Int pc = pow_ui(p, c);
      Int a1 = a / pc, b1 = b / pc;
      if (mod(a1 + b1 * P.omega_root, p) != 0) return c;
      Int Mc = M / pc;
      FieldElement y(field, a1, b1);
      Int n = mod(y.norm(), Mc);
      if (n == 0) return std::nullopt;
      return c + ord_p(n, p);
    }
    case SplitKind::Ramified: {
      if (p == 2) {
        Int n = mod(FieldElement(field, a, b).norm(), M);
        if (n == 0) return std::nullopt;
        return ord_p(n, p);
      }
      FieldElement z(field, a, b);
      Int X = mod(z.twice_rational(), M), Y = mod(z.twice_irrational(), M);
      unsigned ox = ord_or(X, p, K), oy = ord_or(Y, p, K);
      return std::min(2 * ox, 2 * oy + 1);
    }
  }
  return std::nullopt;
}

// (a, b) * (c, e) in O_K / M O_K over the basis {1, w}.
std::pair<Int, Int> mul_mod(const FieldContext& field, const std::pair<Int, Int>& x,
                            const std::pair<Int, Int>& y, const Int& M) {
  Int be = x.second * y.second;
  Int na = x.first * y.first - be * field.min_poly_c0();
  Int nb = x.first * y.second + x.second * y.first - be * field.min_poly_c1();
  return {mod(na, M), mod(nb, M)};
}

std::pair<Int, Int> pow_mod(const FieldContext& field, std::pair<Int, Int> base, const Int& e,
                            const Int& M) {
  std::pair<Int, Int> result{mod(Int(1), M), 0};
  std::size_t bits = e == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mul_mod(field, result, result, M);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mul_mod(field, result, base, M);
  }
  return result;
}

}  // namespace

std::vector<PrimeIdeal> primes_above(const FieldContext& field, const Int& p) {
  std::vector<PrimeIdeal> out;
  SplitKind kind = splitting_type(field, p);
  if (kind == SplitKind::Inert) {
    PrimeIdeal P;
    P.p = p;
    P.kind = kind;
    P.e = 1;
    P.norm = p * p;
    out.push_back(std::move(P));
    return out;
  }
  if (kind == SplitKind::Ramified) {
    PrimeIdeal P;
    P.p = p;
    P.kind = kind;
    P.e = 2;
    P.norm = p;
    out.push_back(std::move(P));
    return out;
  }
  Int r = p == 2 ? Int(1) : hensel_sqrt(field.d(), p, 1);
  for (int flag : {0, 1}) {
    PrimeIdeal P;
    P.p = p;
    P.kind = kind;
    P.e = 1;
    P.norm = p;
    P.root = r;
    P.conj_flag = flag;
    if (p == 2) {
      P.omega_root = flag;  // roots of x^2 - x - (d-1)/4 mod 2 are 0 and 1
    } else {
      Int s = flag == 0 ? r : Int(p - r);
      P.omega_root = field.delta() == 2 ? s : mod((1 + s) * inverse_mod(2, p), p);
    }
    out.push_back(std::move(P));
  }
  return out;
}

PrimeIdeal prime_ideal(const FieldContext& field, const Int& p, int conj_flag) {
  auto all = primes_above(field, p);
  for (auto& P : all)
    if (P.conj_flag == conj_flag) return P;
  fail(ErrorKind::InvalidArgument, "no prime ideal above " + p.get_str() + " with that conjugate flag");
}

PrimeIdeal conjugate_ideal(const FieldContext& field, const PrimeIdeal& P) {
  if (P.kind != SplitKind::Split) return P;
  return prime_ideal(field, P.p, 1 - P.conj_flag);
}

unsigned valuation(const FieldElement& x, const PrimeIdeal& P) {
  if (x.is_zero()) return kInfiniteValuation;
  const Int& p = P.p;
  switch (P.kind) {
    case SplitKind::Inert:
      return ord_p(x.norm(), p) / 2;
    case SplitKind::Ramified: {
      if (p == 2) return ord_p(x.norm(), p);  // the only prime above 2, N(P) = 2
      unsigned ox = ord_or(x.twice_rational(), p, kInfiniteValuation / 4);
      unsigned oy = ord_or(x.twice_irrational(), p, kInfiniteValuation / 4);
      return std::min(2 * ox, 2 * oy + 1);
    }
    case SplitKind::Split: {
      Int g;
      mpz_gcd(g.get_mpz_t(), x.a().get_mpz_t(), x.b().get_mpz_t());
      unsigned c = ord_p(g, p);
      Int pc = pow_ui(p, c);
      FieldElement y(x.field(), x.a() / pc, x.b() / pc);
      if (mod(y.a() + y.b() * P.omega_root, p) != 0) return c;
      // y lies in P but not in (p), so the conjugate prime does not divide it.
      return c + ord_p(y.norm(), p);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// ResidueRing

ResidueRing::ResidueRing(const FieldContext& field, const PrimeIdeal& P, unsigned k)
    : field_(field), ideal_(P), level_(k) {
  if (k < 1 || k > 3) fail(ErrorKind::UnsupportedLevel, "residue level must be 1..3");
  const Int& p = P.p;
  switch (P.kind) {
    case SplitKind::Split:
      mod0_ = pow_ui(p, k);
      mod1_ = 1;
      omega_image_ = hensel_lift_quadratic(field.min_poly_c1(), field.min_poly_c0(), p, k, P.omega_root);
      break;
    case SplitKind::Inert:
      mod0_ = pow_ui(p, k);
      mod1_ = mod0_;
      break;
    case SplitKind::Ramified:
      if (p == 2) {
        if (k > 1) fail(ErrorKind::EvenRamified, "ramified prime above 2 supports level 1 only");
        mod0_ = 2;
        mod1_ = 1;
        omega_image_ = mod(field.d(), 2);
      } else {
        mod0_ = pow_ui(p, (k + 1) / 2);
        mod1_ = pow_ui(p, k / 2);
        inv2_ = inverse_mod(2, pow_ui(p, k));
      }
      break;
  }
}

ResidueClass ResidueRing::make(Int r0, Int r1) const {
  return ResidueClass(&ideal_, level_, mod(r0, mod0_), mod(r1, mod1_));
}

ResidueClass ResidueRing::reduce(const FieldElement& x) const {
  if (!(x.field() == field_)) fail(ErrorKind::FieldMismatch, "element from another field");
  bool odd_ramified = ideal_.kind == SplitKind::Ramified && ideal_.p != 2;
  if (ideal_.kind == SplitKind::Inert) return make(x.a(), x.b());
  if (!odd_ramified) return make(x.a() + x.b() * omega_image_, 0);
  // a + b w = (a + b/2) + (b/2) sqrt d when w = (1 + sqrt d)/2.
  if (field_.delta() == 2) return make(x.a(), x.b());
  return make(x.a() + x.b() * inv2_, x.b() * inv2_);
}

ResidueClass ResidueRing::one() const { return make(1, 0); }

ResidueClass ResidueRing::add(const ResidueClass& x, const ResidueClass& y) const {
  return make(x.r0_ + y.r0_, x.r1_ + y.r1_);
}

ResidueClass ResidueRing::sub(const ResidueClass& x, const ResidueClass& y) const {
  return make(x.r0_ - y.r0_, x.r1_ - y.r1_);
}

ResidueClass ResidueRing::mul(const ResidueClass& x, const ResidueClass& y) const {
  switch (ideal_.kind) {
    case SplitKind::Split:
      return make(x.r0_ * y.r0_, 0);
    case SplitKind::Inert: {
      Int be = x.r1_ * y.r1_;
      return make(x.r0_ * y.r0_ - be * field_.min_poly_c0(),
                  x.r0_ * y.r1_ + x.r1_ * y.r0_ - be * field_.min_poly_c1());
    }
    case SplitKind::Ramified:
      if (ideal_.p == 2) return make(x.r0_ * y.r0_, 0);
      return make(x.r0_ * y.r0_ + field_.d() * x.r1_ * y.r1_, x.r0_ * y.r1_ + x.r1_ * y.r0_);
  }
  return one();
}

ResidueClass ResidueRing::pow(const ResidueClass& x, const Int& e) const {
  if (e < 0) fail(ErrorKind::InvalidArgument, "negative exponent");
  ResidueClass result = one();
  std::size_t bits = e == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mul(result, result);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mul(result, x);
  }
  return result;
}

ResidueClass ResidueRing::reduce_to(const ResidueClass& x, const ResidueRing& target) const {
  if (!(target.ideal_ == ideal_) || target.level_ > level_)
    fail(ErrorKind::InvalidArgument, "reduce_to needs the same ideal at a lower level");
  return target.make(x.r0_, x.r1_);
}

ResidueClass residue_pow(const ResidueRing& ring, const FieldElement& x, const Int& e) {
  return ring.pow(ring.reduce(x), e);
}

// ---------------------------------------------------------------------------

Int multiplicative_order(const FieldElement& x, const PrimeIdeal& P, const FactorBudget& budget) {
  ResidueRing ring(x.field(), P, 1);
  ResidueClass xr = ring.reduce(x);
  if (xr.is_zero()) fail(ErrorKind::BaseInIdeal, "base lies in " + P.label());
  Int group = P.norm - 1;
  FactorMap fm = factor_integer(group, budget);
  if (!fm.complete)
    fail(ErrorKind::IncompleteFactorization, "could not factor N(P) - 1 = " + group.get_str());
  Int order = group;
  for (const auto& [q, e] : fm.factors) {
    for (unsigned i = 0; i < e; ++i) {
      Int trial = order / q;
      if (!ring.pow(xr, trial).is_one()) break;
      order = trial;
    }
  }
  return order;
}

unsigned delta_alpha(const FieldElement& x, const PrimeIdeal& P, const Int& order) {
  if (valuation(x, P) != 0) fail(ErrorKind::BaseInIdeal, "base lies in " + P.label());
  const FieldContext& field = x.field();
  for (unsigned K = 4;; K *= 2) {
    Int M = pow_ui(P.p, K);
    auto y = pow_mod(field, {mod(x.a(), M), mod(x.b(), M)}, order, M);
    auto v = valuation_from_residue(field, P, mod(y.first - 1, M), y.second, K);
    if (v) return *v;
  }
}

unsigned delta_alpha(const FieldElement& x, const PrimeIdeal& P, const FactorBudget& budget) {
  return delta_alpha(x, P, multiplicative_order(x, P, budget));
}

WieferichClass wieferich_class(const FieldElement& x, const PrimeIdeal& P) {
  if (valuation(x, P) != 0) fail(ErrorKind::BaseInIdeal, "base lies in " + P.label());
  if (P.kind == SplitKind::Ramified && P.p == 2) {
    // N(P) = 2: decide directly on x^1 - 1 instead of a level-3 ring.
    unsigned v = valuation(x - 1, P);
    if (v >= 3) return WieferichClass::SuperWieferich;
    return v == 2 ? WieferichClass::Wieferich : WieferichClass::NonWieferich;
  }
  ResidueRing level3(x.field(), P, 3);
  ResidueRing level2(x.field(), P, 2);
  ResidueClass r3 = residue_pow(level3, x, P.norm - 1);
  if (r3.is_one()) return WieferichClass::SuperWieferich;
  if (level3.reduce_to(r3, level2).is_one()) return WieferichClass::Wieferich;
  return WieferichClass::NonWieferich;
}

}  // namespace wief
