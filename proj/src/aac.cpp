#include "wief/aac.hpp"

#include <json.hpp>

#include "wief/error.hpp"
#include "wief/parallel.hpp"

namespace wief {

namespace {

std::vector<Int> odd_prime_divisors(const Int& d) {
  FactorMap fm = factor_integer(abs(d), FactorBudget{1'000'000'000, FactorBudget{}.seed});
  if (!fm.complete) fail(ErrorKind::IncompleteFactorization, "could not factor d = " + d.get_str());
  std::vector<Int> out;
  for (const auto& [p, e] : fm.factors)
    if (p != 2) out.push_back(p);
  return out;
}

std::string digits(const Int& v) { return std::to_string(Int(abs(v)).get_str().size()); }

bool selected(const Int& d, AacMode mode) {
  switch (mode) {
    case AacMode::Primes1Mod4:
      return mod(d, 4) == 1 && is_probable_prime(d);
    case AacMode::Primes3Mod4:
      return mod(d, 4) == 3 && is_probable_prime(d);
    case AacMode::AllSquarefree:
      return is_squarefree(d);
  }
  return false;
}

// (x + y sqrt d)^e over Z/p.
std::pair<Int, Int> pow_mod_p(Int x, Int y, const Int& d, Int e, const Int& p) {
  Int rx = 1, ry = 0;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) {
      Int nx = mod(rx * x + d * ry * y, p);
      ry = mod(rx * y + ry * x, p);
      rx = nx;
    }
    e >>= 1;
    if (e > 0) {
      Int nx = mod(x * x + d * y * y, p);
      y = mod(2 * x * y, p);
      x = nx;
    }
  }
  return {rx, ry};
}

}  // namespace

std::string to_string(AacStatus s) {
  switch (s) {
    case AacStatus::Holds: return "HOLDS";
    case AacStatus::Counterexample: return "COUNTEREXAMPLE";
    case AacStatus::UnitUnavailable: return "UNIT_UNAVAILABLE";
  }
  return "?";
}

std::string to_string(AacMode m) {
  switch (m) {
    case AacMode::Primes1Mod4: return "PRIMES_1MOD4";
    case AacMode::Primes3Mod4: return "PRIMES_3MOD4";
    case AacMode::AllSquarefree: return "ALL_SQUAREFREE";
  }
  return "?";
}

AacMode aac_mode_from_string(const std::string& s) {
  if (s == "PRIMES_1MOD4") return AacMode::Primes1Mod4;
  if (s == "PRIMES_3MOD4") return AacMode::Primes3Mod4;
  if (s == "ALL_SQUAREFREE") return AacMode::AllSquarefree;
  fail(ErrorKind::InvalidArgument, "unknown scan mode '" + s + "'");
}

std::string AacRecord::csv_header(bool full) {
  return full ? "d,delta,t,u,p,u_mod_p,dual,consistent,status"
              : "d,delta,t_digits,u_digits,p,u_mod_p,dual,consistent,status";
}

std::string AacRecord::csv_rows(bool full) const {
  std::string out;
  for (const auto& row : per_prime) {
    out += d.get_str() + ',' + std::to_string(delta) + ',';
    if (unit)
      out += (full ? unit->t.get_str() : digits(unit->t)) + ',' +
             (full ? unit->u.get_str() : digits(unit->u)) + ',';
    else
      out += ",,";
    out += row.p.get_str() + ',';
    if (row.u_mod_p)
      out += row.u_mod_p->get_str() + ',' + (row.wieferich_dual ? "true" : "false") + ',' +
             (row.consistent ? "true" : "false") + ',';
    else
      out += ",,,";
    out += to_string(status) + '\n';
  }
  return out;
}

AacRecord aac_check(const Int& d, std::uint64_t period_cap) {
  if (d <= 2) fail(ErrorKind::InvalidArgument, "d must exceed 2");
  FieldContext F = make_field(d);
  AacRecord rec;
  rec.d = d;
  rec.delta = F.delta();
  std::vector<Int> primes = odd_prime_divisors(d);
  try {
    rec.unit = fundamental_unit(F, period_cap);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PeriodOverflow) throw;
  }
  if (!rec.unit) {
    rec.status = AacStatus::UnitUnavailable;
    for (const Int& p : primes) rec.per_prime.push_back({p, std::nullopt, false, true});
    return rec;
  }
  bool counterexample = false;
  for (const Int& p : primes) {
    AacPrimeRow row;
    row.p = p;
    row.u_mod_p = mod(rec.unit->u, p);
    PrimeIdeal P = primes_above(F, p).front();
    ResidueRing ring(F, P, 2);
    row.wieferich_dual = residue_pow(ring, rec.unit->epsilon, p - 1).is_one();
    row.consistent = (*row.u_mod_p == 0) == row.wieferich_dual;
    counterexample = counterexample || *row.u_mod_p == 0;
    rec.per_prime.push_back(std::move(row));
  }
  rec.status = counterexample ? AacStatus::Counterexample : AacStatus::Holds;
  return rec;
}

std::string AacSummary::to_json() const {
  nlohmann::ordered_json j;
  j["records"] = records;
  j["holds"] = holds;
  j["counterexamples"] = counterexamples;
  j["unit_unavailable"] = unavailable;
  j["inconsistent"] = inconsistent;
  j["heuristic_expected"] = heuristic_expected;
  return j.dump();
}

AacSummary aac_scan(const Int& d_min, const Int& d_max, AacMode mode, unsigned jobs,
                    const std::function<void(const AacRecord&)>& sink,
                    std::uint64_t period_cap) {
  if (d_min <= 2 || d_min > d_max)
    fail(ErrorKind::InvalidArgument, "need 2 < d_min <= d_max");
  AacSummary summary;
  constexpr std::size_t kBlock = 256;
  Int d = d_min;
  while (d <= d_max) {
    std::vector<Int> block;
    while (block.size() < kBlock && d <= d_max) {
      if (selected(d, mode)) block.push_back(d);
      ++d;
    }
    auto records = parallel_map<AacRecord>(block.size(), jobs, [&](std::size_t i) {
      return aac_check(block[i], period_cap);
    });
    for (const AacRecord& rec : records) {
      ++summary.records;
      switch (rec.status) {
        case AacStatus::Holds: ++summary.holds; break;
        case AacStatus::Counterexample: ++summary.counterexamples; break;
        case AacStatus::UnitUnavailable: ++summary.unavailable; break;
      }
      for (const auto& row : rec.per_prime) {
        if (!row.consistent) ++summary.inconsistent;
        if (rec.unit) summary.heuristic_expected += 1.0 / row.p.get_d();
      }
      sink(rec);
    }
  }
  return summary;
}

std::size_t CongruenceReport::violations() const {
  std::size_t bad = endpoint_ok ? 0 : 1;
  for (const auto& r : rows) bad += r.ok ? 0 : 1;
  return bad;
}

std::string CongruenceReport::to_jsonl() const {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["t_n"] = r.t_n.get_str();
    j["u_n"] = r.u_n.get_str();
    j["t_pred"] = r.t_pred.get_str();
    j["u_pred"] = r.u_pred.get_str();
    j["ok"] = r.ok;
    out += j.dump() + '\n';
  }
  nlohmann::ordered_json j;
  j["d"] = d.get_str();
  j["p"] = p.get_str();
  j["endpoint_ok"] = endpoint_ok;
  j["p_divides_u"] = u_divisible;
  out += j.dump() + '\n';
  return out;
}

CongruenceReport epsilon_congruences(const Int& d, const Int& p, std::uint64_t n_max,
                                     std::uint64_t period_cap) {
  if (d <= 2) fail(ErrorKind::InvalidArgument, "d must exceed 2");
  FieldContext F = make_field(d);
  if (p == 2 || !is_probable_prime(p) || d % p != 0)
    fail(ErrorKind::InvalidArgument, "p must be an odd prime dividing d");
  UnitData unit = fundamental_unit(F, period_cap);

  CongruenceReport rep;
  rep.d = d;
  rep.p = p;
  const Int inv2 = inverse_mod(2, p);
  const FieldElement& eps = unit.epsilon;
  // delta t / 2 is half the doubled rational part.
  const Int half_t = mod(eps.twice_rational() * inv2, p);
  const Int t_inv = inverse_mod(unit.t, p);
  const Int u_over_t = mod(unit.u * t_inv, p);

  FieldElement power = eps;
  Int pred = half_t;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (n > 1) {
      power *= eps;
      pred = mod(pred * half_t, p);
    }
    CongruenceRow row;
    row.n = n;
    row.t_n = mod(power.twice_rational() * inv2, p);
    row.u_n = mod(power.twice_irrational() * inv2, p);
    row.t_pred = pred;
    row.u_pred = mod(Int(std::to_string(n)) * pred * u_over_t, p);
    row.ok = row.t_n == row.t_pred && row.u_n == row.u_pred;
    rep.rows.push_back(std::move(row));
  }

  auto [t_end, u_end] = pow_mod_p(half_t, mod(eps.twice_irrational() * inv2, p), d, p - 1, p);
  rep.u_divisible = mod(unit.u, p) == 0;
  rep.endpoint_ok = t_end == 1 && u_end == mod(-u_over_t, p) &&
                    (u_end == 0) == rep.u_divisible;
  return rep;
}

}  // namespace wief
