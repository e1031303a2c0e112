#include "wief/census.hpp"

#include <atomic>
#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "wief/error.hpp"
#include "wief/heights.hpp"
#include "wief/parallel.hpp"

namespace wief {

namespace {

std::atomic<bool> g_stop{false};

constexpr int kCheckpointVersion = 1;

using json = nlohmann::ordered_json;

std::vector<std::uint64_t> decades_up_to(std::uint64_t x) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 1000; c <= x; c *= 10) {
    out.push_back(c);
    if (c > UINT64_MAX / 10) break;
  }
  return out;
}

json counts_json(const ClassCounts& c) {
  json j;
  j["NON_WIEFERICH"] = c.non_wieferich;
  j["WIEFERICH"] = c.wieferich;
  j["SUPER_WIEFERICH"] = c.super_wieferich;
  j["FLAGGED"] = c.flagged;
  return j;
}

ClassCounts counts_from_json(const json& j) {
  ClassCounts c;
  c.non_wieferich = j.at("NON_WIEFERICH").get<std::uint64_t>();
  c.wieferich = j.at("WIEFERICH").get<std::uint64_t>();
  c.super_wieferich = j.at("SUPER_WIEFERICH").get<std::uint64_t>();
  c.flagged = j.at("FLAGGED").get<std::uint64_t>();
  return c;
}

struct ScanState {
  ClassCounts counts;
  std::vector<std::pair<std::uint64_t, ClassCounts>> decades;
  std::uint64_t last_p = 0;
  std::uint64_t primes_done = 0;
  std::uint64_t csv_offset = 0;
  bool complete = false;
};

json state_json(const FieldElement& base, std::uint64_t x, const CensusOptions& opts,
                const ScanState& st) {
  json j;
  j["version"] = kCheckpointVersion;
  j["field"] = base.field().d().get_str();
  j["base"] = base.to_string();
  j["bound"] = to_string(opts.bound);
  j["x"] = x;
  j["with_order"] = opts.with_order;
  j["last_p"] = st.last_p;
  j["primes_done"] = st.primes_done;
  j["csv_offset"] = st.csv_offset;
  j["complete"] = st.complete;
  j["counts"] = counts_json(st.counts);
  json cps = json::array();
  for (const auto& [c, cnt] : st.decades) cps.push_back({{"x", c}, {"counts", counts_json(cnt)}});
  j["checkpoints"] = cps;
  return j;
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::IoError, "cannot write " + tmp);
    out << text;
    out.flush();
    if (!out) fail(ErrorKind::IoError, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::IoError, "cannot rename " + tmp + ": " + ec.message());
}

ScanState load_state(const FieldElement& base, std::uint64_t x, const CensusOptions& opts) {
  std::ifstream in(opts.checkpoint_path);
  if (!in) fail(ErrorKind::IoError, "cannot read checkpoint " + opts.checkpoint_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorKind::IoError, std::string("malformed checkpoint: ") + e.what());
  }
  json expect = state_json(base, x, opts, ScanState{});
  for (const char* key : {"version", "field", "base", "bound", "x", "with_order"}) {
    if (j.value(key, json()) != expect[key])
      fail(ErrorKind::InvalidArgument, std::string("checkpoint does not match this run: ") + key);
  }
  ScanState st;
  st.last_p = j.at("last_p").get<std::uint64_t>();
  st.primes_done = j.at("primes_done").get<std::uint64_t>();
  st.csv_offset = j.at("csv_offset").get<std::uint64_t>();
  st.complete = j.at("complete").get<bool>();
  st.counts = counts_from_json(j.at("counts"));
  for (const auto& cp : j.at("checkpoints"))
    st.decades.emplace_back(cp.at("x").get<std::uint64_t>(), counts_from_json(cp.at("counts")));
  return st;
}

}  // namespace

std::string census_flags_to_string(unsigned flags) {
  std::string out;
  auto add = [&](unsigned bit, const char* name) {
    if (!(flags & bit)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(kFlagBaseInIdeal, "BASE_IN_IDEAL");
  add(kFlagUnsupportedLevel, "UNSUPPORTED_LEVEL");
  add(kFlagIncompleteOrder, "INCOMPLETE_ORDER");
  return out;
}

std::string CensusRecord::csv_header() {
  return "p,conj,kind,norm,class,f_alpha,delta_alpha,flags";
}

std::string CensusRecord::csv_row() const {
  std::string out = p.get_str() + ',' + std::to_string(conj) + ',' + to_string(kind) + ',' +
                    norm.get_str() + ',';
  if (cls) out += to_string(*cls);
  out += ',';
  if (f_alpha) out += f_alpha->get_str();
  out += ',';
  if (delta_alpha) out += std::to_string(*delta_alpha);
  out += ',' + census_flags_to_string(flags) + '\n';
  return out;
}

std::string to_string(BoundKind b) { return b == BoundKind::Norm ? "NORM" : "PRIME"; }

BoundKind bound_kind_from_string(const std::string& s) {
  if (s == "NORM") return BoundKind::Norm;
  if (s == "PRIME") return BoundKind::Prime;
  fail(ErrorKind::InvalidArgument, "unknown bound kind '" + s + "'");
}

void ClassCounts::add(const CensusRecord& r) {
  if (!r.cls) {
    ++flagged;
    return;
  }
  switch (*r.cls) {
    case WieferichClass::NonWieferich: ++non_wieferich; break;
    case WieferichClass::Wieferich: ++wieferich; break;
    case WieferichClass::SuperWieferich: ++super_wieferich; break;
  }
}

std::vector<CensusRecord> census_prime(const FieldElement& base, std::uint64_t p, std::uint64_t x,
                                       const CensusOptions& opts) {
  std::vector<CensusRecord> out;
  const Int P_int(std::to_string(p));
  for (const PrimeIdeal& P : primes_above(base.field(), P_int)) {
    const Int key = opts.bound == BoundKind::Norm ? P.norm : P.p;
    if (key > Int(std::to_string(x))) continue;
    CensusRecord r;
    r.p = P.p;
    r.conj = P.conj_flag;
    r.kind = P.kind;
    r.norm = P.norm;
    if (valuation(base, P) != 0) {
      r.flags |= kFlagBaseInIdeal;
      out.push_back(std::move(r));
      continue;
    }
    try {
      r.cls = wieferich_class(base, P);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EvenRamified && e.kind() != ErrorKind::UnsupportedLevel) throw;
      r.flags |= kFlagUnsupportedLevel;
    }
    if (opts.with_order) {
      try {
        r.f_alpha = multiplicative_order(base, P, opts.budget);
        r.delta_alpha = delta_alpha(base, P, *r.f_alpha);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::IncompleteFactorization) throw;
        r.f_alpha.reset();
        r.flags |= kFlagIncompleteOrder;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

void request_census_stop() { g_stop.store(true); }
void clear_census_stop() { g_stop.store(false); }

CensusResult census_scan(const FieldElement& base, std::uint64_t x, const CensusOptions& opts,
                         const std::function<void(const CensusRecord&)>& sink) {
  if (!is_admissible_base(base))
    fail(ErrorKind::NotAdmissible, "base " + base.to_string() + " is zero or a root of unity");
  if (opts.resume && opts.checkpoint_path.empty())
    fail(ErrorKind::InvalidArgument, "resume needs a checkpoint path");

  ScanState st;
  const std::vector<std::uint64_t> decades = decades_up_to(x);
  std::ofstream csv;
  if (opts.resume) {
    st = load_state(base, x, opts);
    if (!opts.csv_path.empty()) {
      std::error_code ec;
      std::filesystem::resize_file(opts.csv_path, st.csv_offset, ec);
      if (ec) fail(ErrorKind::IoError, "cannot truncate " + opts.csv_path + ": " + ec.message());
      csv.open(opts.csv_path, std::ios::binary | std::ios::app);
    }
  } else {
    for (std::uint64_t c : decades) st.decades.emplace_back(c, ClassCounts{});
    if (!opts.csv_path.empty()) {
      csv.open(opts.csv_path, std::ios::binary | std::ios::trunc);
      csv << CensusRecord::csv_header() << '\n';
      st.csv_offset = CensusRecord::csv_header().size() + 1;
    }
  }
  if (!opts.csv_path.empty() && !csv) fail(ErrorKind::IoError, "cannot open " + opts.csv_path);

  auto save = [&] {
    if (!opts.checkpoint_path.empty())
      write_atomically(opts.checkpoint_path, state_json(base, x, opts, st).dump(2) + '\n');
  };

  const std::uint64_t batch_size = std::max<std::uint64_t>(1, opts.checkpoint_every);
  constexpr std::uint64_t kSieveSpan = 1 << 20;
  std::uint64_t run_done = 0;
  bool interrupted = false;
  std::vector<std::uint64_t> pending;
  std::uint64_t sieved_to = st.last_p;

  while (!st.complete) {
    // Refill the queue of rational primes still to do.
    while (pending.size() < batch_size && sieved_to < x) {
      std::uint64_t hi = std::min(x, sieved_to + kSieveSpan);
      for (std::uint64_t p : primes_in_range(sieved_to + 1, hi)) pending.push_back(p);
      sieved_to = hi;
    }
    if (pending.empty()) {
      st.complete = true;
      save();
      break;
    }
    std::uint64_t take = std::min<std::uint64_t>(batch_size, pending.size());
    if (opts.stop_after) take = std::min(take, opts.stop_after - run_done);
    std::vector<std::uint64_t> batch(pending.begin(), pending.begin() + take);
    pending.erase(pending.begin(), pending.begin() + take);

    auto results = parallel_map<std::vector<CensusRecord>>(
        batch.size(), opts.jobs, [&](std::size_t i) { return census_prime(base, batch[i], x, opts); });

    std::string chunk;
    for (const auto& recs : results) {
      for (const CensusRecord& r : recs) {
        st.counts.add(r);
        const Int& key = opts.bound == BoundKind::Norm ? r.norm : r.p;
        for (auto& [c, cnt] : st.decades)
          if (key <= Int(std::to_string(c))) cnt.add(r);
        chunk += r.csv_row();
        if (sink) sink(r);
      }
    }
    if (csv.is_open()) {
      csv << chunk;
      csv.flush();
      if (!csv) fail(ErrorKind::IoError, "write to " + opts.csv_path + " failed");
      st.csv_offset += chunk.size();
    }
    st.last_p = batch.back();
    st.primes_done += batch.size();
    run_done += batch.size();
    if (pending.empty() && sieved_to >= x) st.complete = true;
    save();
    if (st.complete) break;
    if (g_stop.load() || (opts.stop_after && run_done >= opts.stop_after)) {
      interrupted = true;
      break;
    }
  }

  CensusResult res;
  res.counts = st.counts;
  res.checkpoints = st.decades;
  res.last_p = st.last_p;
  res.primes_done = st.primes_done;
  res.interrupted = interrupted;
  return res;
}

// ---------------------------------------------------------------------------

std::size_t S2Report::violations() const {
  return std::count_if(rows.begin(), rows.end(),
                       [](const S2Row& r) { return r.status == CheckStatus::Fail; });
}

std::size_t S2Report::skipped() const {
  return std::count_if(rows.begin(), rows.end(),
                       [](const S2Row& r) { return r.status == CheckStatus::Skipped; });
}

std::string S2Report::to_jsonl() const {
  std::string out;
  for (const auto& r : rows) {
    json j;
    j["q"] = r.q;
    j["status"] = to_string(r.status);
    if (r.status != CheckStatus::Skipped) {
      j["u_norm"] = r.u_norm.get_str();
      j["above_threshold"] = r.above_threshold;
      if (r.chosen) {
        j["p"] = r.chosen->p.get_str();
        j["conj"] = r.chosen->conj_flag;
        j["norm"] = r.chosen->norm.get_str();
      } else {
        j["p"] = nullptr;
      }
      j["avoids_base_minus_one"] = r.avoids_base_minus_one;
      j["unique_to_q"] = r.unique_to_q;
      j["distinct"] = r.distinct;
      j["non_wieferich"] = r.non_wieferich;
    }
    out += j.dump() + '\n';
  }
  json s;
  s["base_minus_one_norm"] = base_minus_one_norm.get_str();
  if (threshold)
    s["threshold"] = *threshold;
  else
    s["threshold"] = nullptr;
  out += s.dump() + '\n';
  return out;
}

S2Report s2_construction(const FieldElement& base, std::uint64_t q_max,
                         const FactorBudget& budget) {
  if (!is_admissible_base(base))
    fail(ErrorKind::NotAdmissible, "base " + base.to_string() + " is zero or a root of unity");
  const FieldContext& F = base.field();
  const FieldElement bm1 = base - 1;
  S2Report rep;
  rep.base_minus_one_norm = bm1.abs_norm();
  const std::vector<std::uint64_t> qs = primes_up_to(q_max);

  for (std::uint64_t q : qs) {
    S2Row row;
    row.q = q;
    IdealFactorization an = an_factorization(base, q, budget);
    if (!an.complete) {
      row.status = CheckStatus::Skipped;
      rep.rows.push_back(std::move(row));
      continue;
    }
    row.u_norm = 1;
    for (const auto& f : an.items)
      if (f.exponent == 1) row.u_norm *= f.ideal.norm;
    row.above_threshold = row.u_norm > rep.base_minus_one_norm;
    for (const auto& f : an.items) {
      if (f.exponent == 1 && valuation(bm1, f.ideal) == 0) {
        row.chosen = f.ideal;
        break;
      }
    }
    if (!row.chosen) {
      row.avoids_base_minus_one = !row.above_threshold;
    } else {
      const PrimeIdeal& P = *row.chosen;
      ResidueRing ring(F, P, 1);
      auto xr = ring.reduce(base);
      for (std::uint64_t l : qs) {
        if (l == q) continue;
        if (ring.pow(xr, Int(std::to_string(l))).is_one()) {
          row.unique_to_q = false;
          break;
        }
      }
      row.non_wieferich = wieferich_class(base, P) == WieferichClass::NonWieferich;
    }
    rep.rows.push_back(std::move(row));
  }

  std::map<PrimeIdeal, int> seen;
  for (const auto& r : rep.rows)
    if (r.chosen) ++seen[*r.chosen];
  for (auto& r : rep.rows) {
    if (r.chosen) r.distinct = seen[*r.chosen] == 1;
    if (r.status == CheckStatus::Skipped) continue;
    bool ok = r.avoids_base_minus_one && r.unique_to_q && r.distinct && r.non_wieferich;
    r.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  }

  for (auto it = rep.rows.rbegin(); it != rep.rows.rend(); ++it) {
    if (it->status == CheckStatus::Skipped) continue;
    if (!it->above_threshold) break;
    rep.threshold = it->q;
  }
  return rep;
}

std::string CountingReport::to_json() const {
  json j;
  j["x"] = x;
  j["s1_count"] = s1_count;
  j["s2_count"] = s2_count;
  j["usable_q"] = usable_q;
  j["usable_q_degree"] = usable_q_degree;
  j["q_allowance"] = q_allowance;
  j["s1_ge_s2"] = s1_ge_s2;
  j["s2_ge_usable"] = s2_ge_usable;
  json cps = json::array();
  for (const auto& c : checkpoints) {
    json r;
    r["x"] = c.x;
    r["counts"] = counts_json(c.counts);
    r["log_x_over_loglog_x"] = c.log_over_loglog;
    r["loglog_x"] = c.loglog;
    cps.push_back(r);
  }
  j["checkpoints"] = cps;
  return j.dump();
}

std::string CountingReport::curves_csv() const {
  std::ostringstream out;
  out << "x,non_wieferich,wieferich,super_wieferich,log_x_over_loglog_x,loglog_x\n";
  out.precision(10);
  for (const auto& c : checkpoints)
    out << c.x << ',' << c.counts.non_wieferich << ',' << c.counts.wieferich << ','
        << c.counts.super_wieferich << ',' << c.log_over_loglog << ',' << c.loglog << '\n';
  return out.str();
}

CountingReport counting_report(const std::vector<CensusRecord>& records, std::uint64_t x,
                               const FieldElement& base, const S2Report& s2) {
  CountingReport rep;
  rep.x = x;
  std::vector<std::uint64_t> xs = decades_up_to(x);
  if (xs.empty() || xs.back() != x) xs.push_back(x);
  for (std::uint64_t c : xs) {
    CountingRow row;
    row.x = c;
    const Int bound(std::to_string(c));
    for (const auto& r : records)
      if (r.norm <= bound) row.counts.add(r);
    double lx = std::log(static_cast<double>(c));
    if (c > 2) {
      row.loglog = std::log(lx);
      row.log_over_loglog = row.loglog > 0 ? lx / row.loglog : 0;
    }
    rep.checkpoints.push_back(row);
  }
  rep.s1_count = rep.checkpoints.back().counts.non_wieferich;

  const Int X(std::to_string(x));
  for (const auto& r : s2.rows)
    if (r.status == CheckStatus::Pass && r.chosen && r.chosen->norm <= X) ++rep.s2_count;

  double log_h = std::log(abs_height(base).value());
  if (log_h > 0 && x > 2) {
    double lim = std::log(x / 2.0) / log_h;
    double lim_degree = std::log(std::sqrt(static_cast<double>(x)) / 2.0) / log_h;
    for (const auto& r : s2.rows) {
      double q = static_cast<double>(r.q);
      if (q <= lim) ++rep.usable_q;
      if (q <= lim_degree) {
        ++rep.usable_q_degree;
        bool below = !s2.threshold || r.q < *s2.threshold;
        if (below || r.status == CheckStatus::Skipped) ++rep.q_allowance;
      }
    }
  }
  rep.s1_ge_s2 = rep.s1_count >= rep.s2_count;
  rep.s2_ge_usable = rep.s2_count + rep.q_allowance >= rep.usable_q_degree;
  return rep;
}

}  // namespace wief
