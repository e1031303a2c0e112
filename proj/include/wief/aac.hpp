#pragma once

// Ankeny-Artin-Chowla / Mordell checks: p | u for the fundamental unit against
// the independent test eps^(p-1) = 1 mod P^2, scans over d, and the binomial
// congruences for eps^n mod p.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wief/primes.hpp"

namespace wief {

enum class AacStatus { Holds, Counterexample, UnitUnavailable };

std::string to_string(AacStatus s);

struct AacPrimeRow {
  Int p;
  std::optional<Int> u_mod_p;  // unset when the unit is unavailable
  bool wieferich_dual = false; // eps^(p-1) = 1 mod P^2
  bool consistent = true;
};

struct AacRecord {
  Int d;
  int delta = 0;
  std::optional<UnitData> unit;
  std::vector<AacPrimeRow> per_prime;
  AacStatus status = AacStatus::Holds;

  static std::string csv_header(bool full);
  /// One line per odd prime divisor of d, each ending in '\n'.
  std::string csv_rows(bool full) const;
};

/// d squarefree, d > 2. Throws NotSquarefree / InvalidArgument; a period
/// overflow gives status UnitUnavailable.
AacRecord aac_check(const Int& d, std::uint64_t period_cap = kDefaultPeriodCap);

enum class AacMode { Primes1Mod4, Primes3Mod4, AllSquarefree };

std::string to_string(AacMode m);
AacMode aac_mode_from_string(const std::string& s);

struct AacSummary {
  std::uint64_t records = 0;
  std::uint64_t holds = 0;
  std::uint64_t counterexamples = 0;
  std::uint64_t unavailable = 0;
  std::uint64_t inconsistent = 0;  // per-prime rows where the two sides disagree
  double heuristic_expected = 0;   // sum over checked (d, p) of 1/p

  std::string to_json() const;
};

/// Records for every d in [d_min, d_max] selected by `mode`, handed to `sink`
/// in increasing d regardless of `jobs`.
AacSummary aac_scan(const Int& d_min, const Int& d_max, AacMode mode, unsigned jobs,
                    const std::function<void(const AacRecord&)>& sink,
                    std::uint64_t period_cap = kDefaultPeriodCap);

struct CongruenceRow {
  std::uint64_t n = 0;
  Int t_n, u_n;              // eps^n = t_n + u_n sqrt(d), reduced mod p
  Int t_pred, u_pred;        // (dt/2)^n and n (dt/2)^n u / t mod p
  bool ok = true;
};

struct CongruenceReport {
  Int d, p;
  std::vector<CongruenceRow> rows;
  // n = p - 1: t_{p-1} = 1, u_{p-1} = -u/t, and u_{p-1} = 0 iff p | u.
  bool endpoint_ok = true;
  bool u_divisible = false;

  std::size_t violations() const;
  std::string to_jsonl() const;
};

/// Rows for n = 1..n_max. Throws InvalidArgument unless p is an odd prime
/// dividing d; PeriodOverflow propagates.
CongruenceReport epsilon_congruences(const Int& d, const Int& p, std::uint64_t n_max,
                                     std::uint64_t period_cap = kDefaultPeriodCap);

}  // namespace wief
