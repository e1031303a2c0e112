#pragma once

// Streaming Wieferich census for a fixed base: one record per prime ideal,
// counts at decade checkpoints, resumable CSV output, and the constructive
// set of non-Wieferich primes taken from square-free parts of x^q - 1.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wief/cyclotomic.hpp"

namespace wief {

enum CensusFlag : unsigned {
  kFlagNone = 0,
  kFlagBaseInIdeal = 1u << 0,
  kFlagUnsupportedLevel = 1u << 1,
  kFlagIncompleteOrder = 1u << 2,
};

std::string census_flags_to_string(unsigned flags);

struct CensusRecord {
  Int p;
  int conj = 0;
  SplitKind kind = SplitKind::Inert;
  Int norm;
  std::optional<WieferichClass> cls;
  std::optional<Int> f_alpha;
  std::optional<unsigned> delta_alpha;
  unsigned flags = kFlagNone;

  static std::string csv_header();  // p,conj,kind,norm,class,f_alpha,delta_alpha,flags
  std::string csv_row() const;      // with trailing '\n'
};

/// Norm: ideals with N(P) <= x (inert p only while p^2 <= x).
/// Prime: every ideal above every rational prime p <= x.
enum class BoundKind { Norm, Prime };

std::string to_string(BoundKind b);
BoundKind bound_kind_from_string(const std::string& s);

struct ClassCounts {
  std::uint64_t non_wieferich = 0;
  std::uint64_t wieferich = 0;
  std::uint64_t super_wieferich = 0;
  std::uint64_t flagged = 0;

  std::uint64_t wieferich_or_stronger() const { return wieferich + super_wieferich; }
  std::uint64_t total() const { return non_wieferich + wieferich + super_wieferich + flagged; }
  void add(const CensusRecord& r);
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct CensusOptions {
  BoundKind bound = BoundKind::Norm;
  unsigned jobs = 1;
  bool with_order = true;  // f_alpha and delta_alpha columns
  FactorBudget budget;
  std::uint64_t checkpoint_every = 10'000;  // rational primes per batch
  std::string csv_path;         // empty: no CSV file
  std::string checkpoint_path;  // empty: no checkpoint file
  bool resume = false;
  /// Stop (resumably) after this many rational primes in this run; 0 = never.
  std::uint64_t stop_after = 0;
};

struct CensusResult {
  ClassCounts counts;
  /// (x, counts of records with bound key <= x) for x in {10^3, 10^4, ...} <= bound.
  std::vector<std::pair<std::uint64_t, ClassCounts>> checkpoints;
  std::uint64_t last_p = 0;
  std::uint64_t primes_done = 0;
  bool interrupted = false;
};

/// Classification of the ideals above one rational prime that fall under the bound.
std::vector<CensusRecord> census_prime(const FieldElement& base, std::uint64_t p, std::uint64_t x,
                                       const CensusOptions& opts);

/// Scans rational primes p <= x in batches; records reach `sink` (if any) and
/// the CSV in (p, conj) order. With a checkpoint path, state is written after
/// every batch; `resume` restarts from it, truncating the CSV to the last
/// checkpointed byte. Throws IoError on checkpoint or CSV failures.
CensusResult census_scan(const FieldElement& base, std::uint64_t x, const CensusOptions& opts,
                         const std::function<void(const CensusRecord&)>& sink = {});

/// Asks a running scan to stop at the next batch boundary (signal-safe).
void request_census_stop();
void clear_census_stop();

struct S2Row {
  std::uint64_t q = 0;
  CheckStatus status = CheckStatus::Pass;
  Int u_norm;                        // N(U_q)
  bool above_threshold = false;      // N(U_q) > N(base - 1)
  std::optional<PrimeIdeal> chosen;  // smallest prime of U_q not dividing base - 1
  bool avoids_base_minus_one = true;
  bool unique_to_q = true;           // divides no A_l for other primes l <= q_max
  bool distinct = true;              // differs from every other chosen ideal
  bool non_wieferich = true;
};

struct S2Report {
  std::vector<S2Row> rows;
  Int base_minus_one_norm;
  /// Least q with N(U_l) > N(base - 1) for all complete l >= q; unset if none.
  std::optional<std::uint64_t> threshold;

  std::size_t violations() const;
  std::size_t skipped() const;
  std::string to_jsonl() const;
};

S2Report s2_construction(const FieldElement& base, std::uint64_t q_max,
                         const FactorBudget& budget = {});

struct CountingRow {
  std::uint64_t x = 0;
  ClassCounts counts;
  double log_over_loglog = 0;
  double loglog = 0;
};

struct CountingReport {
  std::vector<CountingRow> checkpoints;
  std::uint64_t x = 0;
  std::uint64_t s1_count = 0;
  std::uint64_t s2_count = 0;
  std::uint64_t usable_q = 0;         // primes q <= log(x/2) / log h(base)
  std::uint64_t usable_q_degree = 0;  // primes q with (2 h^q)^2 <= x
  std::uint64_t q_allowance = 0;      // usable q below the threshold or skipped
  bool s1_ge_s2 = true;
  bool s2_ge_usable = true;

  std::string to_json() const;
  std::string curves_csv() const;  // x,non_wieferich,wieferich,super_wieferich,log_x_over_loglog_x,loglog_x
};

/// `records` must cover every ideal of norm <= x; the S2 rows with a chosen
/// ideal of norm <= x make up s2_count. The lower bound on s2_count uses
/// usable_q_degree, since N(x^q - 1) <= (2 h^q)^2 is what holds in degree 2.
CountingReport counting_report(const std::vector<CensusRecord>& records, std::uint64_t x,
                               const FieldElement& base, const S2Report& s2);

}  // namespace wief
