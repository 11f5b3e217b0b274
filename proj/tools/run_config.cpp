#include "run_config.hpp"

#include <set>

#include "ramcong/errors.hpp"
#include "ramcong/keyvalue.hpp"

namespace ramcong::cli {

namespace {

std::uint64_t to_u64(const std::string& key, const std::string& value, std::size_t line) {
  return parse_u64(KeyValueEntry{key, value, line});
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& value,
                   std::size_t line) {
  auto u = [&] { return to_u64(key, value, line); };
  if (key == "fn") {
    c.fn = value;
  } else if (key == "k-param") {
    c.k_param = u();
  } else if (key == "fn-file") {
    c.fn_file = value;
  } else if (key == "p") {
    c.p = u();
  } else if (key == "pow") {
    c.pow = u();
  } else if (key == "A") {
    c.A = u();
  } else if (key == "B") {
    c.B = u();
  } else if (key == "A-max") {
    c.A_max = u();
  } else if (key == "n") {
    c.n = u();
  } else if (key == "mod") {
    c.mod = u();
  } else if (key == "N") {
    c.N = u();
  } else if (key == "horizon") {
    c.engine.n_horizon = u();
  } else if (key == "exp-horizon") {
    c.engine.exponent_horizon = u();
  } else if (key == "witness-budget") {
    c.engine.witness_budget = u();
  } else if (key == "candidate-bound") {
    c.engine.candidate_bound = u();
  } else if (key == "parallel") {
    const std::uint64_t v = u();
    if (v > 1024) throw ParseError(line, "parallel: at most 1024 workers");
    c.engine.parallelism = static_cast<unsigned>(v);
  } else if (key == "format") {
    c.format = value;
  } else if (key == "out") {
    c.out = value;
  } else if (key == "cache") {
    c.cache = value;
  } else if (key == "tau-horizon") {
    c.tau_horizon = u();
  } else if (key == "which") {
    c.which = value;
  } else {
    throw ParseError(line, "unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string> seen;
  for (const KeyValueEntry& e : parse_key_values(text)) {
    if (!seen.insert(e.key).second) throw ParseError(e.line, "duplicate key '" + e.key + "'");
    apply_setting(c, e.key, e.value, e.line);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

void validate(const RunConfig& c) {
  auto positive = [](const char* name, std::uint64_t v) {
    if (v == 0) throw ParseError(0, std::string(name) + " must be >= 1");
  };
  positive("horizon", c.engine.n_horizon);
  positive("exp-horizon", c.engine.exponent_horizon);
  positive("witness-budget", c.engine.witness_budget);
  positive("candidate-bound", c.engine.candidate_bound);
  positive("parallel", c.engine.parallelism);
  positive("tau-horizon", c.tau_horizon);
  if (c.format != "json" && c.format != "csv") {
    throw ParseError(0, "format must be json or csv, got '" + c.format + "'");
  }
}

}  // namespace ramcong::cli
