#include <cctype>
#include <charconv>
#include <sstream>
#include <variant>

#include "cli.hpp"
#include "wief/error.hpp"

extern char** environ;

namespace wief::cli {

namespace {

using Member = std::variant<std::string RunConfig::*, std::uint64_t RunConfig::*, bool RunConfig::*>;

struct Entry {
  const char* key;
  Member member;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"field.d", &RunConfig::d},
      {"base.literal", &RunConfig::literal},
      {"scan.d_min", &RunConfig::d_min},
      {"scan.d_max", &RunConfig::d_max},
      {"scan.mode", &RunConfig::mode},
      {"scan.limit", &RunConfig::limit},
      {"scan.bound", &RunConfig::bound},
      {"scan.check", &RunConfig::check},
      {"scan.n_max", &RunConfig::n_max},
      {"scan.q_max", &RunConfig::q_max},
      {"scan.norm_max", &RunConfig::norm_max},
      {"scan.order_max", &RunConfig::order_max},
      {"scan.congruence_n", &RunConfig::congruence_n},
      {"scan.jobs", &RunConfig::jobs},
      {"scan.seed", &RunConfig::seed},
      {"scan.iterations", &RunConfig::iterations},
      {"scan.precision", &RunConfig::precision},
      {"scan.strictness", &RunConfig::strictness},
      {"scan.period_cap", &RunConfig::period_cap},
      {"scan.checkpoint_every", &RunConfig::checkpoint_every},
      {"scan.stop_after", &RunConfig::stop_after},
      {"scan.with_order", &RunConfig::with_order},
      {"scan.full", &RunConfig::full},
      {"scan.counting", &RunConfig::counting},
      {"output.out", &RunConfig::out},
      {"output.checkpoint", &RunConfig::checkpoint},
      {"output.bounds_out", &RunConfig::bounds_out},
      {"output.resume", &RunConfig::resume},
  };
  return table;
}

const Entry& find(const std::string& key) {
  for (const auto& e : entries())
    if (key == e.key) return e;
  fail(ErrorKind::InvalidArgument, "unknown configuration key '" + key + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    fail(ErrorKind::ParseError, key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(ErrorKind::ParseError, key + ": expected true or false, got '" + v + "'");
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
    } else if (c == '\t') {
      out += "\\t";
    } else {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
  }
  return out + '"';
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Value part of a `key = value` line: a basic string, an integer or a boolean,
// optionally followed by a comment.
std::string parse_value(const std::string& raw, int line) {
  auto err = [&](const std::string& what) {
    fail(ErrorKind::ParseError, "config line " + std::to_string(line) + ": " + what);
  };
  std::string v = trim(raw);
  if (v.empty()) err("missing value");
  if (v[0] == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < v.size() && v[i] != '"'; ++i) {
      if (v[i] == '\\') {
        if (++i >= v.size()) err("unterminated escape");
        switch (v[i]) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: err(std::string("unsupported escape \\") + v[i]);
        }
      } else {
        out += v[i];
      }
    }
    if (i >= v.size()) err("unterminated string");
    std::string rest = trim(v.substr(i + 1));
    if (!rest.empty() && rest[0] != '#') err("trailing characters after string");
    return out;
  }
  std::size_t hash = v.find('#');
  if (hash != std::string::npos) v = trim(v.substr(0, hash));
  std::string digits;
  for (char c : v)
    if (c != '_') digits += c;
  return digits;
}

}  // namespace

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& e : entries()) out.push_back(e.key);
  return out;
}

std::string RunConfig::get(const std::string& key) const {
  const Entry& e = find(key);
  return std::visit(
      [&](auto m) -> std::string {
        const auto& v = this->*m;
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>)
          return v;
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else
          return std::to_string(v);
      },
      e.member);
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const Entry& e = find(key);
  std::visit(
      [&](auto m) {
        auto& v = this->*m;
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>)
          v = value;
        else if constexpr (std::is_same_v<T, bool>)
          v = parse_bool(key, value);
        else
          v = parse_u64(key, value);
      },
      e.member);
}

std::string RunConfig::to_toml() const {
  std::ostringstream out;
  std::string section;
  for (const auto& e : entries()) {
    std::string key = e.key;
    std::string sec = key.substr(0, key.find('.'));
    std::string name = key.substr(key.find('.') + 1);
    if (sec != section) {
      if (!section.empty()) out << '\n';
      out << '[' << sec << "]\n";
      section = sec;
    }
    out << name << " = ";
    if (std::holds_alternative<std::string RunConfig::*>(e.member))
      out << quote(get(key));
    else
      out << get(key);
    out << '\n';
  }
  return out.str();
}

void RunConfig::merge_toml(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t[0] == '[') {
      std::size_t close = t.find(']');
      if (close == std::string::npos)
        fail(ErrorKind::ParseError, "config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(t.substr(1, close - 1));
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::ParseError, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string name = trim(t.substr(0, eq));
    std::string key = section + '.' + name;
    bool known = false;
    for (const auto& e : entries()) known = known || key == e.key;
    if (!known)
      fail(ErrorKind::ParseError, "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    set(key, parse_value(t.substr(eq + 1), lineno));
  }
}

void RunConfig::merge_env(const std::map<std::string, std::string>& env) {
  for (const auto& e : entries()) {
    std::string var = kEnvPrefix;
    for (const char* c = e.key; *c; ++c)
      var += *c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
    auto it = env.find(var);
    if (it != env.end()) set(e.key, it->second);
  }
}

std::map<std::string, std::string> process_env() {
  std::map<std::string, std::string> out;
  const std::string prefix = kEnvPrefix;
  for (char** e = environ; e && *e; ++e) {
    std::string kv = *e;
    if (kv.rfind(prefix, 0) != 0) continue;
    std::size_t eq = kv.find('=');
    if (eq != std::string::npos) out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

}  // namespace wief::cli
