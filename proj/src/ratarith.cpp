#include "wief/ratarith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "wief/error.hpp"

namespace wief {

namespace {

const std::vector<std::uint64_t>& small_primes() {
  static const std::vector<std::uint64_t> table = primes_up_to(kTrialDivisionBound);
  return table;
}

// Valid for n < 3317044064679887385961981 (first 13 prime bases).
const Int& deterministic_mr_limit() {
  static const Int limit("3317044064679887385961981");
  return limit;
}

bool mr_witness_passes(const Int& n, const Int& d, unsigned s, const Int& a) {
  Int x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  Int nm1 = n - 1;
  if (x == 1 || x == nm1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == nm1) return true;
    if (x == 1) return false;
  }
  return false;
}

struct RhoResult {
  Int factor;  // 0 when the budget ran out
};

// Brent's variant of Pollard rho. Charges every map evaluation to `spent`.
RhoResult brent_rho(const Int& n, std::uint64_t& spent, std::uint64_t limit,
                    std::mt19937_64& rng) {
  constexpr std::uint64_t kBatch = 128;
  while (spent < limit) {
    Int c = Int(static_cast<unsigned long>(rng() % 1'000'000 + 1));
    Int y = Int(static_cast<unsigned long>(rng() % 1'000'000 + 2));
    Int x, ys, q = 1, g = 1;
    std::uint64_t r = 1;
    auto step = [&](Int& v) {
      v = v * v + c;
      v %= n;
      ++spent;
    };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        std::uint64_t lim = std::min(kBatch, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          step(y);
          Int diff = x - y;
          q = q * abs(diff) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += kBatch;
        if (spent >= limit) break;
      }
      r *= 2;
    } while (g == 1 && spent < limit);
    if (g == n) {
      // Backtrack one step at a time from the last saved position.
      do {
        step(ys);
        Int diff = x - ys;
        diff = abs(diff);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1 && spent < limit);
    }
    if (g != 1 && g != n) return {g};
    // g == n: unlucky constant, try another.
  }
  return {Int(0)};
}

// Returns (root, k) with n = root^k and k maximal, or k = 1.
std::pair<Int, unsigned> perfect_power(const Int& n) {
  if (mpz_perfect_power_p(n.get_mpz_t()) == 0) return {n, 1};
  std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (unsigned k = static_cast<unsigned>(bits); k >= 2; --k) {
    Int root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) return {root, k};
  }
  return {n, 1};
}

}  // namespace

Int FactorMap::product() const {
  Int out = cofactor;
  for (const auto& [p, e] : factors) out *= pow_ui(p, e);
  return out;
}

int kronecker(const Int& a, const Int& n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "kronecker: n must be nonzero");
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

bool is_probable_prime(const Int& n, std::uint64_t seed) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u}) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  Int d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  if (n < deterministic_mr_limit()) {
    for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul, 41ul}) {
      if (!mr_witness_passes(n, d, s, Int(a))) return false;
    }
    return true;
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(static_cast<unsigned long>(seed));
  Int span = n - 3;
  for (int i = 0; i < 64; ++i) {
    Int a = rng.get_z_range(span) + 2;
    if (!mr_witness_passes(n, d, s, a)) return false;
  }
  return true;
}

FactorMap factor_integer(const Int& n, const FactorBudget& budget) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "factor_integer: n must be >= 1");
  FactorMap out;
  Int m = n;
  for (std::uint64_t p : small_primes()) {
    if (m == 1) break;
    if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    out.factors[Int(static_cast<unsigned long>(p))] += e;
  }
  if (m == 1) return out;

  const Int trial_sq = Int(kTrialDivisionBound) * Int(kTrialDivisionBound);
  std::mt19937_64 rng(budget.seed);
  std::uint64_t spent = 0;
  // (value, multiplicity) pairs still to be split.
  std::vector<std::pair<Int, unsigned>> work{{m, 1}};
  while (!work.empty()) {
    auto [w, mult] = work.back();
    work.pop_back();
    if (w == 1) continue;
    if (w < trial_sq || is_probable_prime(w, budget.seed)) {
      out.factors[w] += mult;
      continue;
    }
    auto [root, k] = perfect_power(w);
    if (k > 1) {
      work.emplace_back(root, mult * k);
      continue;
    }
    RhoResult r = brent_rho(w, spent, budget.iterations, rng);
    if (r.factor == 0) {
      out.cofactor *= pow_ui(w, mult);
      out.complete = false;
      continue;
    }
    Int other = w / r.factor;
    work.emplace_back(r.factor, mult);
    work.emplace_back(other, mult);
  }
  // Cofactors can share primes with found factors only if the budget ran out;
  // pull any such primes out so the map stays canonical.
  if (!out.complete) {
    for (auto& [p, e] : out.factors) {
      while (mpz_divisible_p(out.cofactor.get_mpz_t(), p.get_mpz_t())) {
        out.cofactor /= p;
        ++e;
      }
    }
    out.complete = (out.cofactor == 1);
  }
  return out;
}

Int mod(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int inverse_mod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    fail(ErrorKind::InvalidArgument, "inverse_mod: not invertible");
  return r;
}

Int pow_ui(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

unsigned ord_p(const Int& n, const Int& p) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "ord_p of zero");
  Int m = abs(n);
  return static_cast<unsigned>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
}

Int sqrt_mod_prime(const Int& a_in, const Int& p) {
  Int a = mod(a_in, p);
  if (a == 0) return 0;
  if (p == 2) return a;
  if (kronecker(a, p) != 1) fail(ErrorKind::NonResidue, "sqrt_mod_prime: non-residue");
  Int q = p - 1;
  unsigned s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q >>= 1;
    ++s;
  }
  auto powm = [&](const Int& b, const Int& e) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  };
  if (s == 1) return powm(a, (p + 1) / 4);
  Int z = 2;
  while (kronecker(z, p) != -1) ++z;
  Int c = powm(z, q);
  Int r = powm(a, (q + 1) / 2);
  Int t = powm(a, q);
  unsigned m = s;
  while (t != 1) {
    unsigned i = 0;
    Int t2 = t;
    while (t2 != 1) {
      t2 = t2 * t2 % p;
      ++i;
    }
    Int b = c;
    for (unsigned j = 0; j + 1 < m - i; ++j) b = b * b % p;
    r = r * b % p;
    c = b * b % p;
    t = t * c % p;
    m = i;
  }
  return r;
}

Int hensel_lift_quadratic(const Int& c1, const Int& c0, const Int& p, unsigned k,
                          const Int& r0) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "hensel lift: level must be positive");
  Int pk = pow_ui(p, k);
  Int r = mod(r0, p);
  // Newton iteration doubles the number of correct p-adic digits per step.
  for (unsigned correct = 1; correct < k; correct *= 2) {
    Int f = mod(r * r + c1 * r + c0, pk);
    Int fp = mod(2 * r + c1, pk);
    r = mod(r - f * inverse_mod(fp, pk), pk);
  }
  return r;
}

Int hensel_sqrt(const Int& d, const Int& p, unsigned k) {
  if (p == 2 || p < 2) fail(ErrorKind::InvalidArgument, "hensel_sqrt: p must be an odd prime");
  if (k == 0) fail(ErrorKind::InvalidArgument, "hensel_sqrt: k must be positive");
  if (kronecker(d, p) != 1) fail(ErrorKind::NonResidue, "hensel_sqrt: d is not a nonzero square mod p");
  Int r = sqrt_mod_prime(d, p);
  if (p - r < r) r = p - r;
  return hensel_lift_quadratic(0, -d, p, k, r);
}

bool is_squarefree(const Int& n_in) {
  Int n = abs(n_in);
  if (n == 0) return false;
  FactorMap f = factor_integer(n, FactorBudget{1'000'000'000ULL, FactorBudget{}.seed});
  for (const auto& [p, e] : f.factors)
    if (e > 1) return false;
  return true;
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  lo = std::max<std::uint64_t>(lo, 2);
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi)));
  while (root * root > hi) --root;
  while ((root + 1) * (root + 1) <= hi) ++root;
  std::vector<char> base(root + 1, 1);
  std::vector<std::uint64_t> base_primes;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!base[i]) continue;
    base_primes.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) base[j] = 0;
  }
  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<char> seg;
  for (std::uint64_t start = lo; start <= hi; start += kSegment) {
    std::uint64_t end = std::min(hi, start + kSegment - 1);
    seg.assign(end - start + 1, 1);
    for (std::uint64_t p : base_primes) {
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      for (std::uint64_t j = first; j <= end; j += p) seg[j - start] = 0;
    }
    for (std::uint64_t i = start; i <= end; ++i)
      if (seg[i - start]) out.push_back(i);
    if (end == hi) break;
  }
  return out;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

}  // namespace wief
