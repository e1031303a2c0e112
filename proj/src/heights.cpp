#include "wief/heights.hpp"

#include <algorithm>

#include <json.hpp>

#include "wief/error.hpp"

namespace wief {

namespace {

constexpr mpfr_prec_t kGuardBits = 32;

void require_nonzero(const FieldElement& x) {
  if (x.is_zero()) fail(ErrorKind::ZeroElement, "height of the zero element");
}

bool is_unit(const FieldElement& x) { return x.abs_norm() == 1; }

std::vector<Int> rational_primes_of(const std::vector<const FieldElement*>& elems,
                                    const FactorBudget& budget) {
  std::vector<Int> primes;
  for (const FieldElement* e : elems) {
    FactorMap fm = factor_integer(e->abs_norm(), budget);
    if (!fm.complete)
      fail(ErrorKind::IncompleteFactorization, "norm of " + e->to_string() + " not fully factored");
    for (const auto& [p, k] : fm.factors) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

bool passes(unsigned va, unsigned vb, unsigned vc, Strictness s) {
  if (s == Strictness::NotAllEqual) return !(va == vb && vb == vc);
  return va != vb && vb != vc && va != vc;
}

Int support_over(const std::vector<Int>& primes, const FieldElement& a, const FieldElement& b,
                 const FieldElement& c, Strictness strictness) {
  Int q = 1;
  for (const Int& p : primes) {
    for (const PrimeIdeal& P : primes_above(a.field(), p)) {
      if (passes(valuation(a, P), valuation(b, P), valuation(c, P), strictness))
        q *= pow_ui(P.norm, P.e);
    }
  }
  return q;
}

std::vector<Int> primes_of(const IdealFactorization& I) {
  std::vector<Int> out;
  for (const auto& f : I.items)
    if (out.empty() || out.back() != f.ideal.p) out.push_back(f.ideal.p);
  return out;
}

// Product over the archimedean places of max(||a||, ||b||, ||c||).
Interval infinite_part(const FieldElement& a, const FieldElement& b, const FieldElement& c,
                       mpfr_prec_t wp) {
  auto va = archimedean_values(a, wp);
  auto vb = archimedean_values(b, wp);
  auto vc = archimedean_values(c, wp);
  Interval prod(Int(1), wp);
  for (std::size_t i = 0; i < va.size(); ++i)
    prod = prod * Interval::max(Interval::max(va[i], vb[i]), vc[i]);
  return prod;
}

}  // namespace

std::string to_string(Strictness s) {
  return s == Strictness::NotAllEqual ? "NOT_ALL_EQUAL" : "PAIRWISE_DISTINCT";
}

Strictness strictness_from_string(const std::string& s) {
  if (s == "NOT_ALL_EQUAL") return Strictness::NotAllEqual;
  if (s == "PAIRWISE_DISTINCT") return Strictness::PairwiseDistinct;
  fail(ErrorKind::InvalidArgument, "unknown strictness '" + s + "'");
}

std::vector<Interval> archimedean_values(const FieldElement& x, mpfr_prec_t prec) {
  const FieldContext& F = x.field();
  if (!F.is_real()) return {Interval(x.abs_norm(), prec)};
  Int X = x.twice_rational();
  Int Y = x.twice_irrational();
  Interval two(Int(2), prec);
  if (Y == 0) {
    Interval v = Interval(Int(abs(X)), prec) / two;
    return {v, v};
  }
  // The conjugate without cancellation is computed directly; the other one
  // comes from the exact norm.
  Interval big = (Interval(Int(abs(X)), prec) +
                  Interval(Int(abs(Y)), prec) * Interval::sqrt_of(F.d(), prec)) / two;
  Interval small = Interval(x.abs_norm(), prec) / big;
  bool first_is_big = sgn(X) * sgn(Y) >= 0;
  if (first_is_big) return {big, small};
  return {small, big};
}

HeightValue abs_height(const FieldElement& x, unsigned precision_bits) {
  require_nonzero(x);
  const mpfr_prec_t wp = precision_bits + kGuardBits;
  Interval one(Int(1), wp);
  Interval prod = one;
  for (const Interval& v : archimedean_values(x, wp)) prod = prod * Interval::max(one, v);
  return {prod.sqrt().rounded(precision_bits), precision_bits};
}

HeightValue triple_height(const FieldElement& a, const FieldElement& b, const FieldElement& c,
                          unsigned precision_bits, const FactorBudget& budget) {
  require_nonzero(a);
  require_nonzero(b);
  require_nonzero(c);
  const mpfr_prec_t wp = precision_bits + kGuardBits;
  Interval h = infinite_part(a, b, c, wp);
  if (!(is_unit(a) || is_unit(b) || is_unit(c))) {
    // Finite places contribute 1/N(gcd(a, b, c)).
    const FieldElement* smallest = &a;
    for (const FieldElement* e : {&b, &c})
      if (e->abs_norm() < smallest->abs_norm()) smallest = e;
    IdealFactorization fz = factor_principal(*smallest, budget);
    if (!fz.complete)
      fail(ErrorKind::IncompleteFactorization, "finite part of the triple height");
    Int g = 1;
    for (const auto& f : fz.items) {
      unsigned m = std::min({valuation(a, f.ideal), valuation(b, f.ideal), valuation(c, f.ideal)});
      g *= pow_ui(f.ideal.norm, m);
    }
    if (g != 1) h = h / Interval(g, wp);
  }
  return {h.rounded(precision_bits), precision_bits};
}

SupportValue ramified_support(const FieldElement& a, const FieldElement& b,
                              const FieldElement& c, const FactorBudget& budget,
                              Strictness strictness) {
  if (a.is_zero() || b.is_zero() || c.is_zero())
    fail(ErrorKind::ZeroElement, "ramified support of a triple with a zero entry");
  std::vector<Int> primes = rational_primes_of({&a, &b, &c}, budget);
  return {support_over(primes, a, b, c, strictness), true};
}

SupportValue support_of_ideal(const IdealFactorization& I) {
  SupportValue out;
  for (const auto& f : I.items) out.q *= pow_ui(f.ideal.norm, f.ideal.e);
  out.complete = I.complete;
  return out;
}

std::string AbcQuality::csv_header() { return "n,H,Q,Delta_K,quality_low,quality_high,complete"; }

std::string AbcQuality::csv_row() const {
  return std::to_string(n) + ',' + height.value_str(20) + ',' + q_low.get_str() + ',' +
         discriminant.get_str() + ',' + quality.lo_str(12) + ',' + quality.hi_str(12) + ',' +
         (complete ? "true" : "false");
}

AbcQuality abc_quality(const FieldElement& x, std::uint64_t n, const FactorBudget& budget,
                       unsigned precision_bits, Strictness strictness) {
  if (!is_admissible_base(x))
    fail(ErrorKind::NotAdmissible, "base " + x.to_string() + " is zero or a root of unity");
  if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  const FieldContext& F = x.field();
  FieldElement c = element_pow(x, n);
  FieldElement b = c - 1;
  if (b.is_zero()) fail(ErrorKind::ZeroIdeal, "x^n = 1");
  FieldElement one(F, 1, 0);

  AbcQuality out;
  out.n = n;
  out.height = triple_height(one, b, c, precision_bits, budget);
  out.discriminant = F.discriminant();

  // Every prime of the triple divides x or x^n - 1.
  IdealFactorization fx = factor_principal(x, budget);
  IdealFactorization fb = an_factorization(x, n, budget);
  std::vector<Int> primes = primes_of(fx);
  for (const Int& p : primes_of(fb)) primes.push_back(p);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  out.q_low = support_over(primes, one, b, c, strictness);
  out.q_high = out.q_low * fb.residual_norm * fx.residual_norm;
  out.complete = fx.complete && fb.complete;

  const mpfr_prec_t wp = precision_bits + kGuardBits;
  Interval num = out.height.enclosure.rounded(wp).log();
  Int absdisc = abs(out.discriminant);
  Interval den = Interval::hull(Interval(Int(absdisc * out.q_low), wp).log(),
                                Interval(Int(absdisc * out.q_high), wp).log());
  out.quality = (num / den).rounded(precision_bits);
  return out;
}

std::size_t HeightBoundReport::skipped() const {
  return std::count_if(rows.begin(), rows.end(),
                       [](const HeightBoundRow& r) { return r.status == CheckStatus::Skipped; });
}

namespace {

template <class Pred>
std::size_t count_failed(const std::vector<HeightBoundRow>& rows, Pred pred) {
  return std::count_if(rows.begin(), rows.end(), [&](const HeightBoundRow& r) {
    return r.status != CheckStatus::Skipped && !pred(r);
  });
}

}  // namespace

std::size_t HeightBoundReport::max_norm_violations() const {
  return count_failed(rows, [](const HeightBoundRow& r) { return r.max_norm_ok; });
}

std::size_t HeightBoundReport::norm_vs_height_violations() const {
  return count_failed(rows, [](const HeightBoundRow& r) { return r.norm_vs_height_ok; });
}

std::size_t HeightBoundReport::norm_vs_height_sq_violations() const {
  return count_failed(rows, [](const HeightBoundRow& r) { return r.norm_vs_height_sq_ok; });
}

std::size_t HeightBoundReport::support_violations() const {
  return count_failed(rows, [](const HeightBoundRow& r) { return r.u_support_ok && r.v_support_ok; });
}

std::string HeightBoundReport::to_jsonl() const {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["status"] = to_string(r.status);
    if (r.status != CheckStatus::Skipped) {
      j["max_norm_ok"] = r.max_norm_ok;
      j["norm_vs_height_ok"] = r.norm_vs_height_ok;
      j["norm_vs_height_sq_ok"] = r.norm_vs_height_sq_ok;
      j["u_support_ok"] = r.u_support_ok;
      j["v_support_ok"] = r.v_support_ok;
      j["norm"] = r.norm.get_str();
      j["two_h_pow"] = r.two_h_pow;
    }
    out += j.dump() + '\n';
  }
  return out;
}

HeightBoundReport verify_height_bounds(const FieldElement& x, std::uint64_t n_max,
                                       const FactorBudget& budget, unsigned precision_bits) {
  if (!is_admissible_base(x))
    fail(ErrorKind::NotAdmissible, "base " + x.to_string() + " is zero or a root of unity");
  const FieldContext& F = x.field();
  const mpfr_prec_t wp = precision_bits + kGuardBits;

  HeightBoundReport report;
  report.ramified_constant = 1;
  FactorMap disc = factor_integer(abs(F.discriminant()), budget);
  for (const auto& [p, e] : disc.factors) report.ramified_constant *= p * p;

  Interval h = abs_height(x, precision_bits).enclosure.rounded(wp);
  // 1 + 2^-(prec - 8)
  Interval tol(Int(1), wp);
  {
    Int scale = Int(1) << (precision_bits - 8);
    tol = (Interval(Int(scale + 1), wp)) / Interval(scale, wp);
  }
  FieldElement one(F, 1, 0);
  const Int A = report.ramified_constant;

  for (std::uint64_t n = 1; n <= n_max; ++n) {
    HeightBoundRow row;
    row.n = n;
    FieldElement c = element_pow(x, n);
    FieldElement b = c - 1;
    if (b.is_zero()) continue;
    IdealFactorization an = an_factorization(x, n, budget);
    if (!an.complete) {
      row.status = CheckStatus::Skipped;
      report.rows.push_back(std::move(row));
      continue;
    }
    row.norm = b.abs_norm();

    HeightValue H = triple_height(one, b, c, precision_bits, budget);
    Int max_norm = std::max({Int(1), row.norm, c.abs_norm()});
    row.max_norm_ok = H.enclosure.int_le_lower(max_norm);

    Interval bound = Interval(Int(2), wp) * h.pow(n);
    row.two_h_pow = bound.lo_str(20);
    row.norm_vs_height_ok = (bound * tol).int_le_lower(row.norm);
    row.norm_vs_height_sq_ok = (bound.pow(2) * tol).int_le_lower(row.norm);

    Int nu = 1, qu = 1, nv = 1, qv = 1;
    for (const auto& f : an.items) {
      Int q = pow_ui(f.ideal.norm, f.ideal.e);
      if (f.exponent == 1) {
        nu *= f.ideal.norm;
        qu *= q;
      } else {
        nv *= pow_ui(f.ideal.norm, f.exponent);
        qv *= q;
      }
    }
    row.u_support_ok = qu <= nu * nu;
    row.v_support_ok = qv * qv <= A * A * nv;

    bool ok = row.max_norm_ok && row.norm_vs_height_ok && row.u_support_ok && row.v_support_ok;
    row.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace wief
