#include "wief/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "wief/error.hpp"

namespace wief {

namespace {

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t i = 1; i * i <= n; ++i) {
    if (n % i) continue;
    small.push_back(i);
    if (i != n / i) large.push_back(n / i);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

// Rational factorizations are memoized: lemma checks factor the same cyclotomic
// norms many times over.
FactorMap cached_factor(const Int& n, const FactorBudget& budget) {
  static std::mutex mu;
  static std::unordered_map<std::string, FactorMap> cache;
  std::string key = n.get_str(16) + '/' + std::to_string(budget.iterations) + '/' +
                    std::to_string(budget.seed);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  FactorMap fm = factor_integer(n, budget);
  std::lock_guard lock(mu);
  cache.emplace(std::move(key), fm);
  return fm;
}

// Exponents come from valuations of z itself; the rational primes only
// propose candidates. residual_norm absorbs whatever the candidates miss.
IdealFactorization assemble(const FieldElement& z, const std::vector<Int>& rational_primes) {
  IdealFactorization out;
  Int known = 1;
  for (const Int& p : rational_primes) {
    for (PrimeIdeal& P : primes_above(z.field(), p)) {
      unsigned v = valuation(z, P);
      if (v == 0) continue;
      known *= pow_ui(P.norm, v);
      out.items.push_back({std::move(P), v});
    }
  }
  std::sort(out.items.begin(), out.items.end(),
            [](const IdealFactor& a, const IdealFactor& b) { return a.ideal < b.ideal; });
  out.residual_norm = z.abs_norm() / known;
  out.complete = out.residual_norm == 1;
  return out;
}

std::vector<Int> prime_keys(const std::vector<FactorMap>& maps) {
  std::vector<Int> primes;
  for (const auto& fm : maps)
    for (const auto& [p, e] : fm.factors) primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

void require_admissible(const FieldElement& x) {
  if (!is_admissible_base(x))
    fail(ErrorKind::NotAdmissible, "base " + x.to_string() + " is zero or a root of unity");
}

bool is_power_of(std::uint64_t m, std::uint64_t p) {
  if (m < 1) return false;
  while (m % p == 0) m /= p;
  return m == 1;
}

}  // namespace

Int IdealFactorization::known_norm() const {
  Int n = 1;
  for (const auto& f : items) n *= pow_ui(f.ideal.norm, f.exponent);
  return n;
}

unsigned IdealFactorization::exponent_of(const PrimeIdeal& P) const {
  for (const auto& f : items)
    if (f.ideal == P) return f.exponent;
  return 0;
}

bool operator==(const IdealFactorization& x, const IdealFactorization& y) {
  if (x.complete != y.complete || x.residual_norm != y.residual_norm) return false;
  if (x.items.size() != y.items.size()) return false;
  for (std::size_t i = 0; i < x.items.size(); ++i) {
    if (!(x.items[i].ideal == y.items[i].ideal) || x.items[i].exponent != y.items[i].exponent)
      return false;
  }
  return true;
}

std::vector<Int> cyclotomic_poly(std::uint64_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "cyclotomic_poly: n must be positive");
  static std::mutex mu;
  static std::map<std::uint64_t, std::vector<Int>> memo;
  {
    std::lock_guard lock(mu);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
  }
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<Int> num(n + 1, Int(0));
  num[0] = -1;
  num[n] = 1;
  for (std::uint64_t d : divisors(n)) {
    if (d == n) continue;
    std::vector<Int> den = cyclotomic_poly(d);
    std::size_t dn = den.size() - 1;
    std::size_t nn = num.size() - 1;
    std::vector<Int> quot(nn - dn + 1, Int(0));
    for (std::size_t i = nn - dn + 1; i-- > 0;) {
      Int c = num[i + dn];  // den is monic
      quot[i] = c;
      if (c != 0)
        for (std::size_t j = 0; j <= dn; ++j) num[i + j] -= c * den[j];
    }
    num = std::move(quot);
  }
  std::lock_guard lock(mu);
  memo.emplace(n, num);
  return num;
}

CyclotomicValue cyclotomic_value(const FieldElement& x, std::uint64_t n) {
  std::vector<Int> coeffs = cyclotomic_poly(n);
  FieldElement acc(x.field(), 0, 0);
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc *= x;
    acc = acc + FieldElement(x.field(), coeffs[i], 0);
  }
  Int nrm = acc.abs_norm();
  return {std::move(acc), std::move(nrm)};
}

IdealFactorization factor_principal(const FieldElement& z, const FactorBudget& budget) {
  if (z.is_zero()) fail(ErrorKind::ZeroIdeal, "the zero ideal has no factorization");
  FactorMap fm = cached_factor(z.abs_norm(), budget);
  return assemble(z, prime_keys({fm}));
}

IdealFactorization an_factorization(const FieldElement& x, std::uint64_t n,
                                    const FactorBudget& budget) {
  require_admissible(x);
  if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  FieldElement z = element_pow(x, n) - 1;
  if (z.is_zero()) fail(ErrorKind::ZeroIdeal, "x^n = 1");
  // |N(x^n - 1)| = prod_{d | n} |N(Phi_d(x))|: factor the pieces.
  std::vector<FactorMap> pieces;
  for (std::uint64_t d : divisors(n))
    pieces.push_back(cached_factor(cyclotomic_value(x, d).abs_norm, budget));
  return assemble(z, prime_keys(pieces));
}

IdealFactorization cn_factorization(const FieldElement& x, std::uint64_t n,
                                    const FactorBudget& budget) {
  require_admissible(x);
  CyclotomicValue cv = cyclotomic_value(x, n);
  if (cv.value.is_zero()) fail(ErrorKind::ZeroIdeal, "Phi_n(x) = 0");
  FactorMap fm = cached_factor(cv.abs_norm, budget);
  return assemble(cv.value, prime_keys({fm}));
}

IdealFactorization ideal_product(const std::vector<IdealFactorization>& parts) {
  IdealFactorization out;
  std::map<PrimeIdeal, unsigned> acc;
  for (const auto& part : parts) {
    for (const auto& f : part.items) acc[f.ideal] += f.exponent;
    out.residual_norm *= part.residual_norm;
    out.complete = out.complete && part.complete;
  }
  for (auto& [P, e] : acc) out.items.push_back({P, e});
  return out;
}

IdealFactorization ideal_gcd_an(const FieldElement& x, std::uint64_t m, std::uint64_t n,
                                const FactorBudget& budget) {
  if (std::gcd(m, n) != 1) fail(ErrorKind::NotCoprimeIndices, "gcd(m, n) must be 1");
  IdealFactorization am = an_factorization(x, m, budget);
  IdealFactorization an = an_factorization(x, n, budget);
  if (!am.complete || !an.complete)
    fail(ErrorKind::IncompleteFactorization, "A_m or A_n could not be fully factored");
  IdealFactorization out;
  for (const auto& f : am.items) {
    unsigned e = std::min(f.exponent, an.exponent_of(f.ideal));
    if (e > 0) out.items.push_back({f.ideal, e});
  }
  return out;
}

UVSplit uv_split(const FieldElement& x, std::uint64_t n, const FactorBudget& budget) {
  IdealFactorization a = an_factorization(x, n, budget);
  UVSplit out;
  for (const auto& f : a.items) (f.exponent == 1 ? out.U : out.V).items.push_back(f);
  out.complete = a.complete;
  out.U.complete = out.V.complete = a.complete;
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

std::size_t VerificationReport::violations() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) {
    return r.status == CheckStatus::Fail;
  }));
}

std::size_t VerificationReport::skipped() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) {
    return r.status == CheckStatus::Skipped;
  }));
}

std::string VerificationReport::to_jsonl() const {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    if (r.m) j["m"] = r.m;
    j["p"] = r.p.get_str();
    j["conj"] = r.conj;
    if (r.expected_exact)
      j["expected"] = *r.expected_exact;
    else
      j["expected"] = ">=" + std::to_string(r.expected_min);
    j["actual"] = r.actual;
    j["status"] = to_string(r.status);
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

CheckRow make_row(std::uint64_t n, const PrimeIdeal& P, std::optional<unsigned> exact,
                  unsigned at_least, unsigned actual) {
  CheckRow row;
  row.n = n;
  row.p = P.p;
  row.conj = P.conj_flag;
  row.expected_exact = exact;
  row.expected_min = at_least;
  row.actual = actual;
  bool ok = exact ? actual == *exact : actual >= at_least;
  row.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return row;
}

}  // namespace

VerificationReport verify_valuation_trichotomy(const FieldElement& x,
                                               const std::vector<PrimeIdeal>& primes,
                                               std::uint64_t n_max, const FactorBudget& budget) {
  require_admissible(x);
  struct Target {
    const PrimeIdeal* P;
    std::uint64_t f;
    unsigned delta;
  };
  std::vector<Target> targets;
  for (const PrimeIdeal& P : primes) {
    if (!P.unramified_odd())
      fail(ErrorKind::InvalidArgument, "trichotomy needs an odd unramified prime, got " + P.label());
    Int f = multiplicative_order(x, P, budget);
    if (!f.fits_ulong_p()) fail(ErrorKind::InvalidArgument, "order too large");
    targets.push_back({&P, f.get_ui(), delta_alpha(x, P, f)});
  }
  VerificationReport report;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    FieldElement phi = cyclotomic_value(x, n).value;
    for (const Target& t : targets) {
      const std::uint64_t p = t.P->p.fits_ulong_p() ? t.P->p.get_ui() : 0;
      unsigned expected = 0;
      if (n == t.f)
        expected = t.delta;
      else if (p != 0 && n % t.f == 0 && n / t.f > 1 && is_power_of(n / t.f, p))
        expected = 1;
      report.rows.push_back(make_row(n, *t.P, expected, expected, valuation(phi, *t.P)));
    }
  }
  return report;
}

VerificationReport verify_valuation_trichotomy(const FieldElement& x, const PrimeIdeal& P,
                                               std::uint64_t n_max, const FactorBudget& budget) {
  return verify_valuation_trichotomy(x, std::vector<PrimeIdeal>{P}, n_max, budget);
}

VerificationReport verify_ramified_inequality(const FieldElement& x, const PrimeIdeal& P,
                                              std::uint64_t n_max, const FactorBudget& budget) {
  require_admissible(x);
  if (P.kind != SplitKind::Ramified || P.p == 2)
    fail(ErrorKind::InvalidArgument, "needs an odd ramified prime, got " + P.label());
  Int fz = multiplicative_order(x, P, budget);
  if (!fz.fits_ulong_p()) fail(ErrorKind::InvalidArgument, "order too large");
  const std::uint64_t f = fz.get_ui();
  const unsigned delta = delta_alpha(x, P, fz);
  const std::uint64_t p = P.p.fits_ulong_p() ? P.p.get_ui() : 0;
  VerificationReport report;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    unsigned actual = valuation(cyclotomic_value(x, n).value, P);
    if (n == f)
      report.rows.push_back(make_row(n, P, delta, delta, actual));
    else if (p != 0 && n % f == 0 && is_power_of(n / f, p))
      report.rows.push_back(make_row(n, P, std::nullopt, 2, actual));
    else
      report.rows.push_back(make_row(n, P, 0u, 0, actual));
  }
  return report;
}

std::vector<PrimeIdeal> trichotomy_primes(const FieldElement& x, std::uint64_t norm_max,
                                          std::uint64_t order_max, const FactorBudget& budget) {
  require_admissible(x);
  std::vector<PrimeIdeal> out;
  const Int bound(std::to_string(norm_max));
  for (std::uint64_t p : primes_up_to(norm_max)) {
    if (p == 2) continue;
    for (PrimeIdeal& P : primes_above(x.field(), Int(std::to_string(p)))) {
      if (!P.unramified_odd() || P.norm > bound || valuation(x, P) != 0) continue;
      Int f = multiplicative_order(x, P, budget);
      if (f <= Int(std::to_string(order_max))) out.push_back(std::move(P));
    }
  }
  return out;
}

namespace {

CheckRow skipped_row(std::uint64_t n) {
  CheckRow row;
  row.n = n;
  row.p = 0;
  row.status = CheckStatus::Skipped;
  return row;
}

}  // namespace

VerificationReport verify_product_identity(const FieldElement& x, std::uint64_t n_max,
                                           const FactorBudget& budget) {
  require_admissible(x);
  VerificationReport report;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    IdealFactorization a = an_factorization(x, n, budget);
    std::vector<IdealFactorization> pieces;
    bool complete = a.complete;
    for (std::uint64_t d : divisors(n)) {
      pieces.push_back(cn_factorization(x, d, budget));
      complete = complete && pieces.back().complete;
    }
    if (!complete) {
      report.rows.push_back(skipped_row(n));
      continue;
    }
    IdealFactorization prod = ideal_product(pieces);
    std::map<PrimeIdeal, std::pair<unsigned, unsigned>> cmp;  // (expected, actual)
    for (const auto& f : prod.items) cmp[f.ideal].first = f.exponent;
    for (const auto& f : a.items) cmp[f.ideal].second = f.exponent;
    for (const auto& [P, ea] : cmp) report.rows.push_back(make_row(n, P, ea.first, ea.first, ea.second));
  }
  return report;
}

VerificationReport verify_gcd_lemma(const FieldElement& x, std::uint64_t n_max,
                                    const FactorBudget& budget) {
  require_admissible(x);
  IdealFactorization base = factor_principal(x - 1, budget);
  VerificationReport report;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    for (std::uint64_t m = 1; m < n; ++m) {
      if (std::gcd(m, n) != 1) continue;
      std::optional<IdealFactorization> g;
      try {
        g = ideal_gcd_an(x, m, n, budget);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::IncompleteFactorization) throw;
      }
      if (!g || !base.complete) {
        CheckRow row = skipped_row(n);
        row.m = m;
        report.rows.push_back(row);
        continue;
      }
      std::map<PrimeIdeal, std::pair<unsigned, unsigned>> cmp;
      for (const auto& f : base.items) cmp[f.ideal].first = f.exponent;
      for (const auto& f : g->items) cmp[f.ideal].second = f.exponent;
      if (cmp.empty()) {
        CheckRow row;
        row.n = n;
        row.p = 1;
        row.m = m;
        row.expected_exact = 0;
        row.status = CheckStatus::Pass;
        report.rows.push_back(row);
      }
      for (const auto& [P, ea] : cmp) {
        report.rows.push_back(make_row(n, P, ea.first, ea.first, ea.second));
        report.rows.back().m = m;
      }
    }
  }
  return report;
}

VerificationReport verify_non_wieferich(const FieldElement& x, std::uint64_t n_max,
                                        const FactorBudget& budget) {
  require_admissible(x);
  VerificationReport report;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    UVSplit uv = uv_split(x, n, budget);
    for (const auto& f : uv.U.items) {
      unsigned level = 1;
      switch (wieferich_class(x, f.ideal)) {
        case WieferichClass::NonWieferich: level = 1; break;
        case WieferichClass::Wieferich: level = 2; break;
        case WieferichClass::SuperWieferich: level = 3; break;
      }
      report.rows.push_back(make_row(n, f.ideal, 1u, 1, level));
    }
    if (!uv.complete) report.rows.push_back(skipped_row(n));
  }
  return report;
}

}  // namespace wief
