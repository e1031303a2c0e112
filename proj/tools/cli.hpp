#pragma once

// Front end: element literals, the run configuration and subcommand dispatch.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wief/quadfield.hpp"

namespace wief::cli {

/// INT | INT (+|-) INT * (w|s), whitespace ignored. `s` is sqrt(d) and is
/// converted to the {1, w} basis. Throws ParseError with the offending column.
FieldElement parse_element(const std::string& text, const FieldContext& field);

inline constexpr const char* kEnvPrefix = "WIEF_";

/// Every setting a run can depend on. Keys are "section.name".
struct RunConfig {
  // [field]
  std::string d = "5";
  // [base]
  std::string literal = "2";
  // [scan]
  std::string d_min = "3";
  std::string d_max = "100";
  std::string mode = "PRIMES_1MOD4";
  std::uint64_t limit = 10000;
  std::string bound = "NORM";
  std::string check = "trichotomy";
  std::uint64_t n_max = 60;
  std::uint64_t q_max = 50;
  std::uint64_t norm_max = 2000;
  std::uint64_t order_max = 60;
  std::uint64_t congruence_n = 0;
  std::uint64_t jobs = 1;
  std::uint64_t seed = 0x5eed'2024'0001ULL;
  std::uint64_t iterations = 2'000'000;
  std::uint64_t precision = 128;
  std::string strictness = "NOT_ALL_EQUAL";
  std::uint64_t period_cap = 10'000'000;
  std::uint64_t checkpoint_every = 10'000;
  std::uint64_t stop_after = 0;
  bool with_order = true;
  bool full = false;
  bool counting = false;
  // [output]
  std::string out;
  std::string checkpoint;
  std::string bounds_out;
  bool resume = false;

  /// All keys in file order.
  static std::vector<std::string> keys();
  std::string get(const std::string& key) const;
  /// Throws ParseError on a malformed value and InvalidArgument on an unknown key.
  void set(const std::string& key, const std::string& value);

  std::string to_toml() const;
  /// Applies every key found in `text`; unknown keys and bad syntax throw ParseError.
  void merge_toml(const std::string& text);
  /// Applies WIEF_<SECTION>_<NAME> variables found in `env`.
  void merge_env(const std::map<std::string, std::string>& env);

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Environment variables carrying the prefix, read from the process.
std::map<std::string, std::string> process_env();

/// Runs one command line. Returns 0 on success, 1 on domain errors (JSON
/// object on `err`), 2 on usage errors and 3 when a census stops resumably.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const std::map<std::string, std::string>& env = {});

}  // namespace wief::cli
