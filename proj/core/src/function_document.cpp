#include "ramcong/function_document.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "ramcong/arith.hpp"
#include "ramcong/errors.hpp"
#include "ramcong/keyvalue.hpp"
#include "ramcong/tau.hpp"

namespace ramcong {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<KeyValueEntry> parse_key_values(std::string_view text) {
  std::vector<KeyValueEntry> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected 'key = value'");
    KeyValueEntry entry{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                        lineno};
    if (entry.key.empty()) throw ParseError(lineno, "empty key");
    out.push_back(std::move(entry));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t parse_u64(const KeyValueEntry& entry) {
  std::uint64_t v = 0;
  const auto& s = entry.value;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(entry.line, "'" + entry.key + "' expects a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool parse_bool(const KeyValueEntry& entry) {
  if (entry.value == "true") return true;
  if (entry.value == "false") return false;
  throw ParseError(entry.line, "'" + entry.key + "' expects true or false, got '" + entry.value + "'");
}

FunctionDocument parse_function_document(std::string_view text) {
  FunctionDocument doc;
  std::set<std::string> seen;
  std::size_t family_line = 0;
  for (const auto& entry : parse_key_values(text)) {
    if (entry.key != "table" && !seen.insert(entry.key).second) {
      throw ParseError(entry.line, "duplicate key '" + entry.key + "'");
    }
    if (entry.key == "family") {
      if (entry.value != "sigma" && entry.value != "phi" && entry.value != "tau" &&
          entry.value != "table") {
        throw ParseError(entry.line, "unknown family '" + entry.value + "'");
      }
      doc.family = entry.value;
      family_line = entry.line;
    } else if (entry.key == "k") {
      doc.k = parse_u64(entry);
    } else if (entry.key == "horizon") {
      doc.horizon = parse_u64(entry);
      if (*doc.horizon == 0) throw ParseError(entry.line, "horizon must be >= 1");
    } else if (entry.key == "name") {
      doc.name = entry.value;
    } else if (entry.key == "table") {
      std::istringstream is(entry.value);
      std::uint64_t q = 0, e = 0;
      std::string v;
      std::string extra;
      if (!(is >> q >> e >> v) || (is >> extra)) {
        throw ParseError(entry.line, "table entry must be 'q e value'");
      }
      if (!is_prime(q)) throw ParseError(entry.line, std::to_string(q) + " is not prime");
      BigInt value;
      if (value.set_str(v, 10) != 0) throw ParseError(entry.line, "not an integer: '" + v + "'");
      if (e == 0 && value != 1) throw ParseError(entry.line, "f(q^0) must be 1");
      if (!doc.table.emplace(std::pair{q, e}, value).second) {
        throw ParseError(entry.line, "duplicate table entry for (" + std::to_string(q) + ", " +
                                         std::to_string(e) + ")");
      }
    } else {
      throw ParseError(entry.line, "unknown key '" + entry.key + "'");
    }
  }
  if (doc.family.empty()) throw ParseError(0, "missing 'family'");
  if (doc.family == "sigma" && !doc.k) throw ParseError(family_line, "family sigma needs 'k'");
  if (doc.family != "sigma" && doc.k) throw ParseError(family_line, "'k' only applies to sigma");
  if (doc.family != "tau" && doc.horizon) throw ParseError(family_line, "'horizon' only applies to tau");
  if (doc.family != "table" && !doc.table.empty()) {
    throw ParseError(family_line, "'table' entries only apply to family table");
  }
  return doc;
}

FunctionDocument read_function_document(const std::filesystem::path& path) {
  try {
    return parse_function_document(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

FnDescriptor named_function(const std::string& family, std::optional<std::uint64_t> k,
                            std::uint64_t tau_horizon,
                            const std::optional<std::filesystem::path>& tau_cache) {
  if (family == "sigma") {
    if (!k) throw DomainError("sigma needs k");
    return sigma_function(*k);
  }
  if (family == "phi") return phi_function();
  if (family == "tau") return tau_function(load_or_build_tau_table(tau_horizon, tau_cache));
  throw DomainError("unknown function family '" + family + "'");
}

FnDescriptor load_custom(const FunctionDocument& doc,
                         const std::optional<std::filesystem::path>& tau_cache) {
  if (doc.family == "table") {
    PrimePowerTable table = doc.table;
    return table_function(doc.name.empty() ? "table" : doc.name, std::move(table));
  }
  return named_function(doc.family, doc.k, doc.horizon.value_or(kDefaultTauDocumentHorizon),
                        tau_cache);
}

}  // namespace ramcong
