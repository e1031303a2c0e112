#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wief/aac.hpp"
#include "wief/census.hpp"
#include "wief/error.hpp"
#include "wief/heights.hpp"

namespace wief::cli {

namespace {

using json = nlohmann::ordered_json;

class Cursor {
 public:
  explicit Cursor(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip_ws();
    return i_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::ParseError, "position " + std::to_string(i_) + ": " + what + " in '" + s_ + "'");
  }
  void expect(char c) {
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++i_;
  }
  Int integer(bool allow_sign) {
    skip_ws();
    std::string digits;
    if (allow_sign && i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) {
      if (s_[i_] == '-') digits += '-';
      ++i_;
      skip_ws();
    }
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) digits += s_[i_++];
    if (i_ == start) error("expected an integer");
    return Int(digits);
  }
  char take() {
    skip_ws();
    return i_ < s_.size() ? s_[i_++] : '\0';
  }
  std::size_t pos() const { return i_; }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

FactorBudget budget_of(const RunConfig& cfg) { return FactorBudget{cfg.iterations, cfg.seed}; }

Int parse_int(const std::string& key, const std::string& text) {
  Int v;
  if (text.empty() || v.set_str(text, 10) != 0)
    fail(ErrorKind::ParseError, key + ": expected an integer, got '" + text + "'");
  return v;
}

struct Output {
  std::ofstream file;
  std::ostream* stream;
  bool to_file;

  Output(const std::string& path, std::ostream& fallback) : stream(&fallback), to_file(!path.empty()) {
    if (to_file) {
      file.open(path, std::ios::binary | std::ios::trunc);
      if (!file) fail(ErrorKind::IoError, "cannot open " + path);
      stream = &file;
    }
  }
  std::ostream& operator*() { return *stream; }
};

// Summaries go to stdout when the stream itself went to a file.
std::ostream& summary_stream(const Output& o, std::ostream& out, std::ostream& err) {
  return o.to_file ? out : err;
}

json counts_json(const ClassCounts& c) {
  return {{"NON_WIEFERICH", c.non_wieferich},
          {"WIEFERICH", c.wieferich},
          {"SUPER_WIEFERICH", c.super_wieferich},
          {"FLAGGED", c.flagged}};
}

// ---------------------------------------------------------------------------

int run_unit(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  FieldContext F = make_field(parse_int("field.d", cfg.d));
  UnitData u = fundamental_unit(F, cfg.period_cap);
  json j;
  j["d"] = F.d().get_str();
  j["t"] = u.t.get_str();
  j["u"] = u.u.get_str();
  j["norm"] = u.unit_norm;
  j["period"] = u.period;
  j["epsilon"] = u.epsilon.to_string();
  out << j.dump() << '\n';
  return 0;
}

int run_aac_check(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  Int d = parse_int("field.d", cfg.d);
  AacRecord rec = aac_check(d, cfg.period_cap);
  json j;
  j["d"] = rec.d.get_str();
  j["delta"] = rec.delta;
  if (rec.unit) {
    j["t"] = rec.unit->t.get_str();
    j["u"] = rec.unit->u.get_str();
  } else {
    j["t"] = nullptr;
    j["u"] = nullptr;
  }
  j["status"] = to_string(rec.status);
  json rows = json::array();
  for (const auto& r : rec.per_prime) {
    json row;
    row["p"] = r.p.get_str();
    row["u_mod_p"] = r.u_mod_p ? json(r.u_mod_p->get_str()) : json(nullptr);
    row["dual"] = r.wieferich_dual;
    row["consistent"] = r.consistent;
    rows.push_back(row);
  }
  j["per_prime"] = rows;
  if (cfg.congruence_n > 0 && rec.unit) {
    json cong = json::array();
    for (const auto& r : rec.per_prime) {
      CongruenceReport rep = epsilon_congruences(d, r.p, cfg.congruence_n, cfg.period_cap);
      cong.push_back({{"p", r.p.get_str()},
                      {"rows", rep.rows.size()},
                      {"violations", rep.violations()},
                      {"endpoint_ok", rep.endpoint_ok},
                      {"p_divides_u", rep.u_divisible}});
    }
    j["congruences"] = cong;
  }
  out << j.dump() << '\n';
  return 0;
}

int run_aac_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Output o(cfg.out, out);
  *o << AacRecord::csv_header(cfg.full) << '\n';
  AacSummary s = aac_scan(parse_int("scan.d_min", cfg.d_min), parse_int("scan.d_max", cfg.d_max),
                          aac_mode_from_string(cfg.mode), static_cast<unsigned>(cfg.jobs),
                          [&](const AacRecord& r) { *o << r.csv_rows(cfg.full); }, cfg.period_cap);
  o.stream->flush();
  summary_stream(o, out, err) << s.to_json() << '\n';
  return 0;
}

int run_wieferich_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  FieldContext F = make_field(parse_int("field.d", cfg.d));
  FieldElement base = parse_element(cfg.literal, F);
  if (!cfg.checkpoint.empty() && cfg.out.empty())
    fail(ErrorKind::InvalidArgument, "a checkpoint needs a CSV file (--out)");
  if (cfg.counting && cfg.resume)
    fail(ErrorKind::InvalidArgument, "--counting needs the full record stream and cannot resume");

  CensusOptions opts;
  opts.bound = bound_kind_from_string(cfg.bound);
  opts.jobs = static_cast<unsigned>(cfg.jobs);
  opts.with_order = cfg.with_order;
  opts.budget = budget_of(cfg);
  opts.checkpoint_every = cfg.checkpoint_every;
  opts.checkpoint_path = cfg.checkpoint;
  opts.resume = cfg.resume;
  opts.stop_after = cfg.stop_after;

  std::vector<CensusRecord> records;
  std::function<void(const CensusRecord&)> sink;
  if (cfg.counting) sink = [&](const CensusRecord& r) { records.push_back(r); };

  CensusResult res;
  if (cfg.out.empty()) {
    out << CensusRecord::csv_header() << '\n';
    res = census_scan(base, cfg.limit, opts, [&](const CensusRecord& r) {
      out << r.csv_row();
      if (sink) sink(r);
    });
  } else {
    opts.csv_path = cfg.out;
    res = census_scan(base, cfg.limit, opts, sink);
  }

  json j;
  j["field"] = F.d().get_str();
  j["base"] = base.to_string();
  j["x"] = cfg.limit;
  j["bound"] = cfg.bound;
  j["counts"] = counts_json(res.counts);
  json cps = json::array();
  for (const auto& [x, c] : res.checkpoints) cps.push_back({{"x", x}, {"counts", counts_json(c)}});
  j["checkpoints"] = cps;
  j["last_p"] = res.last_p;
  j["primes_done"] = res.primes_done;
  j["complete"] = !res.interrupted;
  if (cfg.counting && !res.interrupted) {
    double log_h = std::log(abs_height(base).value());
    std::uint64_t q_lim = cfg.q_max;
    if (log_h > 0 && cfg.limit > 2)
      q_lim = std::min<std::uint64_t>(q_lim, static_cast<std::uint64_t>(std::log(cfg.limit / 2.0) / log_h));
    S2Report s2 = s2_construction(base, q_lim, budget_of(cfg));
    CountingReport rep = counting_report(records, cfg.limit, base, s2);
    j["counting"] = json::parse(rep.to_json());
  }
  (cfg.out.empty() ? err : out) << j.dump() << '\n';
  return res.interrupted ? 3 : 0;
}

int run_cyclo_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  FieldContext F = make_field(parse_int("field.d", cfg.d));
  FieldElement x = parse_element(cfg.literal, F);
  FactorBudget budget = budget_of(cfg);
  VerificationReport rep;
  if (cfg.check == "trichotomy") {
    rep = verify_valuation_trichotomy(x, trichotomy_primes(x, cfg.norm_max, cfg.order_max, budget),
                                      cfg.n_max, budget);
  } else if (cfg.check == "ramified") {
    FactorMap disc = factor_integer(abs(F.discriminant()), budget);
    for (const auto& [p, e] : disc.factors) {
      if (p == 2) continue;
      PrimeIdeal P = primes_above(F, p).front();
      if (valuation(x, P) != 0) continue;
      VerificationReport part = verify_ramified_inequality(x, P, cfg.n_max, budget);
      rep.rows.insert(rep.rows.end(), part.rows.begin(), part.rows.end());
    }
  } else if (cfg.check == "product") {
    rep = verify_product_identity(x, cfg.n_max, budget);
  } else if (cfg.check == "gcd") {
    rep = verify_gcd_lemma(x, cfg.n_max, budget);
  } else if (cfg.check == "nonwieferich") {
    rep = verify_non_wieferich(x, cfg.n_max, budget);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown check '" + cfg.check + "'");
  }
  Output o(cfg.out, out);
  *o << rep.to_jsonl();
  o.stream->flush();
  json s = {{"check", cfg.check},
            {"rows", rep.rows.size()},
            {"violations", rep.violations()},
            {"skipped", rep.skipped()}};
  summary_stream(o, out, err) << s.dump() << '\n';
  return 0;
}

int run_height(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  FieldContext F = make_field(parse_int("field.d", cfg.d));
  FieldElement x = parse_element(cfg.literal, F);
  const unsigned prec = static_cast<unsigned>(cfg.precision);
  HeightValue h = abs_height(x, prec);
  json j;
  j["base"] = x.to_string();
  j["h"] = h.value_str(30);
  j["lower"] = h.lower_str(30);
  j["upper"] = h.upper_str(30);
  j["precision_bits"] = prec;
  if (!cfg.bounds_out.empty()) {
    HeightBoundReport rep = verify_height_bounds(x, cfg.n_max, budget_of(cfg), prec);
    std::ofstream f(cfg.bounds_out, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::IoError, "cannot open " + cfg.bounds_out);
    f << rep.to_jsonl();
    j["bounds"] = {{"rows", rep.rows.size()},
                   {"skipped", rep.skipped()},
                   {"ramified_constant", rep.ramified_constant.get_str()},
                   {"max_norm_violations", rep.max_norm_violations()},
                   {"norm_vs_height_violations", rep.norm_vs_height_violations()},
                   {"norm_vs_height_sq_violations", rep.norm_vs_height_sq_violations()},
                   {"support_violations", rep.support_violations()}};
  }
  out << j.dump() << '\n';
  return 0;
}

int run_abc_quality(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  FieldContext F = make_field(parse_int("field.d", cfg.d));
  FieldElement x = parse_element(cfg.literal, F);
  Strictness strict = strictness_from_string(cfg.strictness);
  Output o(cfg.out, out);
  *o << AbcQuality::csv_header() << '\n';
  for (std::uint64_t n = 1; n <= cfg.n_max; ++n)
    *o << abc_quality(x, n, budget_of(cfg), static_cast<unsigned>(cfg.precision), strict).csv_row()
       << '\n';
  return 0;
}

int run_s2_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  FieldContext F = make_field(parse_int("field.d", cfg.d));
  FieldElement x = parse_element(cfg.literal, F);
  S2Report rep = s2_construction(x, cfg.q_max, budget_of(cfg));
  Output o(cfg.out, out);
  *o << rep.to_jsonl();
  o.stream->flush();
  json s = {{"rows", rep.rows.size()}, {"violations", rep.violations()}, {"skipped", rep.skipped()}};
  s["threshold"] = rep.threshold ? json(*rep.threshold) : json(nullptr);
  summary_stream(o, out, err) << s.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct Command {
  const char* name;
  const char* help;
  std::vector<const char*> keys;
  int (*run)(const RunConfig&, std::ostream&, std::ostream&);
};

struct FlagSpec {
  const char* key;
  const char* flag;
  const char* help;
  bool is_switch;  // presence sets the value; for with_order it clears it
};

const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> specs = {
      {"field.d", "--d", "Squarefree d of the field Q(sqrt d)", false},
      {"base.literal", "--base", "Base element, e.g. \"2\", \"1+1*s\", \"0+1*w\"", false},
      {"scan.d_min", "--d-min", "Smallest d scanned", false},
      {"scan.d_max", "--d-max", "Largest d scanned", false},
      {"scan.mode", "--mode", "PRIMES_1MOD4, PRIMES_3MOD4 or ALL_SQUAREFREE", false},
      {"scan.limit", "--limit", "Census bound x", false},
      {"scan.bound", "--bound", "NORM (N(P) <= x) or PRIME (p <= x)", false},
      {"scan.check", "--check", "trichotomy, ramified, product, gcd or nonwieferich", false},
      {"scan.n_max", "--n-max", "Largest exponent n", false},
      {"scan.q_max", "--q-max", "Largest prime q", false},
      {"scan.norm_max", "--norm-max", "Largest N(P) for the trichotomy check", false},
      {"scan.order_max", "--order-max", "Largest multiplicative order for the trichotomy check", false},
      {"scan.congruence_n", "--congruence-n", "Also check eps^n mod p for n up to this value", false},
      {"scan.jobs", "--jobs", "Worker threads", false},
      {"scan.seed", "--seed", "Seed for randomized factoring and primality tests", false},
      {"scan.iterations", "--iterations", "Pollard rho iteration budget per integer", false},
      {"scan.precision", "--precision", "Bits of precision for real enclosures", false},
      {"scan.strictness", "--strictness", "NOT_ALL_EQUAL or PAIRWISE_DISTINCT", false},
      {"scan.period_cap", "--period-cap", "Longest continued-fraction period tried", false},
      {"scan.checkpoint_every", "--checkpoint-every", "Rational primes per checkpoint", false},
      {"scan.stop_after", "--stop-after", "Stop resumably after this many rational primes", false},
      {"scan.with_order", "--no-order", "Skip the f_alpha and delta_alpha columns", true},
      {"scan.full", "--full", "Print t and u in full instead of digit counts", true},
      {"scan.counting", "--counting", "Add the S_1/S_2 counting report to the summary", true},
      {"output.out", "--out", "Output file (default: standard output)", false},
      {"output.checkpoint", "--checkpoint", "Checkpoint file", false},
      {"output.bounds_out", "--bounds-out", "Write height-bound checks (JSON lines) here", false},
      {"output.resume", "--resume", "Resume from the checkpoint", true},
  };
  return specs;
}

const FlagSpec& spec_for(const std::string& key) {
  for (const auto& s : flag_specs())
    if (key == s.key) return s;
  throw std::logic_error("no flag for " + key);
}

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = {
      {"unit", "Fundamental unit of Q(sqrt d) as JSON", {"field.d", "scan.period_cap"}, run_unit},
      {"aac-check",
       "Unit divisibility p | u against eps^(p-1) = 1 mod P^2 for each odd p | d",
       {"field.d", "scan.period_cap", "scan.congruence_n"},
       run_aac_check},
      {"aac-scan",
       "Scan d in a range; CSV rows per (d, p)",
       {"scan.d_min", "scan.d_max", "scan.mode", "scan.jobs", "scan.period_cap", "scan.full",
        "output.out"},
       run_aac_scan},
      {"wieferich-scan",
       "Classify every prime ideal under a bound for a fixed base; CSV rows per ideal",
       {"field.d", "base.literal", "scan.limit", "scan.bound", "scan.jobs", "scan.seed",
        "scan.iterations", "scan.checkpoint_every", "scan.stop_after", "scan.with_order",
        "scan.counting", "scan.q_max", "output.out", "output.checkpoint", "output.resume"},
       run_wieferich_scan},
      {"cyclo-verify",
       "Check valuations of cyclotomic ideals; JSON lines per (n, P)",
       {"field.d", "base.literal", "scan.check", "scan.n_max", "scan.norm_max", "scan.order_max",
        "scan.seed", "scan.iterations", "output.out"},
       run_cyclo_verify},
      {"height",
       "Absolute height of the base, optionally with the height and support bounds",
       {"field.d", "base.literal", "scan.precision", "scan.n_max", "scan.seed", "scan.iterations",
        "output.bounds_out"},
       run_height},
      {"abc-quality",
       "Quality of 1 + (x^n - 1) = x^n for n up to n-max; CSV",
       {"field.d", "base.literal", "scan.n_max", "scan.precision", "scan.strictness", "scan.seed",
        "scan.iterations", "output.out"},
       run_abc_quality},
      {"s2-verify",
       "Non-Wieferich primes drawn from square-free parts of x^q - 1; JSON lines per q",
       {"field.d", "base.literal", "scan.q_max", "scan.seed", "scan.iterations", "output.out"},
       run_s2_verify},
  };
  return cmds;
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  json j = {{"error", kind}, {"message", message}};
  err << j.dump() << '\n';
}

}  // namespace

FieldElement parse_element(const std::string& text, const FieldContext& field) {
  Cursor c(text);
  Int a = c.integer(true);
  if (c.done()) return FieldElement(field, a, 0);
  char op = c.take();
  if (op != '+' && op != '-') c.error("expected '+' or '-'");
  Int b = c.integer(false);
  if (op == '-') b = -b;
  c.expect('*');
  std::size_t at = c.pos();
  char sym = c.take();
  if (!c.done()) c.error("trailing characters");
  if (sym == 'w') return FieldElement(field, a, b);
  if (sym != 's')
    fail(ErrorKind::ParseError, "position " + std::to_string(at) + ": expected 'w' or 's' in '" + text + "'");
  if (field.delta() == 2) return FieldElement(field, a, b);
  // sqrt(d) = 2w - 1
  return FieldElement::from_half(field, 2 * a, 2 * b);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const std::map<std::string, std::string>& env) {
  CLI::App app{"Wieferich primes, fundamental units and cyclotomic ideals in quadratic fields",
               "wief"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::map<std::string, std::string> given;
  std::map<std::string, bool> switched;
  std::string config_path;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  std::vector<std::pair<std::string, CLI::Option*>> bound;

  for (const Command& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path, "TOML configuration file (flags override it)");
    for (const char* key : cmd.keys) {
      const FlagSpec& spec = spec_for(key);
      CLI::Option* opt = spec.is_switch ? sub->add_flag(spec.flag, switched[key], spec.help)
                                        : sub->add_option(spec.flag, given[key], spec.help);
      bound.emplace_back(key, opt);
    }
    subs.emplace_back(sub, &cmd);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) fail(ErrorKind::IoError, "cannot read config " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg.merge_toml(ss.str());
    }
    cfg.merge_env(env);
    for (const auto& [key, opt] : bound) {
      if (opt->count() == 0) continue;
      const FlagSpec& spec = spec_for(key);
      if (!spec.is_switch)
        cfg.set(key, given[key]);
      else
        cfg.set(key, std::string(key) == "scan.with_order" ? "false" : "true");
    }
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  }

  for (const auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    try {
      return cmd->run(cfg, out, err);
    } catch (const Error& e) {
      print_error(err, std::string(to_string(e.kind())), e.what());
      return 1;
    } catch (const std::exception& e) {
      print_error(err, "Internal", e.what());
      return 1;
    }
  }
  return 2;
}

}  // namespace wief::cli
