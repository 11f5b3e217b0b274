#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <map>
#include <ostream>

#include "ramcong/classifier.hpp"
#include "ramcong/errors.hpp"
#include "ramcong/function_document.hpp"
#include "ramcong/report.hpp"
#include "ramcong/tau.hpp"
#include "run_config.hpp"

namespace ramcong::cli {

namespace {

using Json = nlohmann::ordered_json;

// Single queries sieve a dense table only when it is small.
constexpr std::uint64_t kSingleQueryDenseBound = std::uint64_t{1} << 24;

struct Flag {
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"fn", "function family: sigma | phi | tau"},
    {"k-param", "k in sigma_k"},
    {"fn-file", "custom function document"},
    {"p", "prime p"},
    {"pow", "exponent k of the modulus p^k"},
    {"A", "progression modulus A"},
    {"B", "progression offset B"},
    {"A-max", "largest A in a grid"},
    {"n", "argument for eval"},
    {"mod", "reduce eval output modulo this"},
    {"N", "bound for tau-verify / two-squares"},
    {"horizon", "n-scan horizon (default 100000)"},
    {"exp-horizon", "exponent horizon (default 64)"},
    {"witness-budget", "Dirichlet witness budget (default 25)"},
    {"candidate-bound", "Dirichlet candidate bound (default 1000000)"},
    {"parallel", "worker threads (default 1)"},
    {"format", "json | csv"},
    {"out", "write the report here (atomically)"},
    {"cache", "tau table cache file"},
    {"tau-horizon", "tau table size for --fn tau (default 10000)"},
    {"which", "suite: corollary5 | two-squares | phi-closed-form | consistency | corollary3; "
              "conjecture: 1 | 8"},
};

std::uint64_t need(const std::optional<std::uint64_t>& v, const char* flag) {
  if (!v) throw ParseError(0, std::string("missing --") + flag);
  return *v;
}

std::optional<std::filesystem::path> cache_path(const RunConfig& c) {
  if (c.cache) return std::filesystem::path(*c.cache);
  return std::nullopt;
}

FnDescriptor function_of(const RunConfig& c) {
  if (c.fn_file) return load_custom(read_function_document(*c.fn_file), cache_path(c));
  if (c.fn == "sigma" && !c.k_param) throw ParseError(0, "--fn sigma needs --k-param");
  if (c.fn != "sigma" && c.k_param) throw ParseError(0, "--k-param only applies to --fn sigma");
  if (c.fn != "sigma" && c.fn != "phi" && c.fn != "tau") {
    throw ParseError(0, "--fn must be sigma, phi or tau, got '" + c.fn + "'");
  }
  return named_function(c.fn, c.k_param, c.tau_horizon, cache_path(c));
}

ValuationOracle single_oracle(const FnDescriptor& f, std::uint64_t p, std::uint64_t A,
                              std::uint64_t B, std::uint64_t horizon) {
  const u128 bound = u128(A) * horizon + B;
  return ValuationOracle(f, p, bound <= kSingleQueryDenseBound ? static_cast<std::uint64_t>(bound) : 0);
}

struct Outcome {
  std::string kind;
  std::string body;
  std::optional<std::string> csv;  // full CSV document when the command supports it
  int status = kExitOk;
  std::string summary;
};

std::vector<std::pair<std::string, std::string>> parameters(const std::map<std::string, std::string>& given) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : given) {
    if (k != "out" && k != "format" && k != "parallel") out.emplace_back(k, v);
  }
  return out;
}

std::string merge_bodies(std::initializer_list<std::pair<const char*, std::string>> parts) {
  Json j;
  for (const auto& [key, body] : parts) j[key] = Json::parse(body);
  return j.dump(2);
}

Outcome run_eval(const RunConfig& c) {
  const FnDescriptor f = function_of(c);
  const std::uint64_t n = need(c.n, "n");
  Json j;
  j["function"] = f.name();
  j["n"] = n;
  j["value"] = eval(f, n).get_str();
  if (c.mod) {
    if (*c.mod < 2) throw ParseError(0, "--mod must be >= 2");
    j["mod"] = *c.mod;
    j["value_mod"] = eval_mod(f, n, *c.mod);
  }
  if (c.p) {
    j["p"] = *c.p;
    const ExtendedNat v = eval_valuation(f, *c.p, n);
    j["valuation"] = v.is_finite() ? Json(v.value()) : Json("inf");
  }
  return {"eval", j.dump(2), std::nullopt, kExitOk, f.name() + "(" + std::to_string(n) + ")"};
}

Outcome run_valuation(const RunConfig& c) {
  const FnDescriptor f = function_of(c);
  const std::uint64_t p = need(c.p, "p"), A = need(c.A, "A"), B = need(c.B, "B");
  const ValuationOracle oracle = single_oracle(f, p, A, B, c.engine.n_horizon);
  const CertainNat scan = scan_valuation(oracle, A, B, c.engine.n_horizon, c.engine.parallelism);
  const Decomposition d = theorem_decomposition(oracle, A, B, c.engine, &scan);
  return {"valuation", body_json(f.name(), p, d, scan), std::nullopt, kExitOk,
          "V = " + scan.value.to_string() + " (scan), decomposition " + d.rhs_total.value.to_string()};
}

Outcome run_certify(const RunConfig& c, const ReportMeta& meta) {
  const FnDescriptor f = function_of(c);
  const std::uint64_t p = need(c.p, "p"), k = need(c.pow, "pow");
  const std::uint64_t A = need(c.A, "A"), B = need(c.B, "B");
  const Certificate cert =
      certify_congruence(single_oracle(f, p, A, B, c.engine.n_horizon), k, A, B, c.engine);
  const int status = cert.status == CertificateStatus::Refuted ? kExitFailed : kExitOk;
  std::string summary = to_string(cert.status) + ", scan value " + cert.scan_V.value.to_string();
  if (cert.refutation_witness) summary += ", witness n = " + std::to_string(*cert.refutation_witness);
  return {"certificate", body_json(cert), csv_report(cert, meta), status, summary};
}

Outcome run_search(const RunConfig& c, const ReportMeta& meta) {
  const FnDescriptor f = function_of(c);
  const std::uint64_t p = need(c.p, "p"), k = need(c.pow, "pow"), A_max = need(c.A_max, "A-max");
  const SearchResult r = search_congruences(f, p, k, A_max, c.engine);
  const bool bad = !r.failures.empty() || r.structure_failures() > 0;
  return {"search", body_json(r), csv_report(r, meta), bad ? kExitFailed : kExitOk,
          std::to_string(r.hits.size()) + " hit(s), " + std::to_string(r.refuted) + " refuted, " +
              std::to_string(r.failures.size()) + " failure(s)"};
}

Outcome run_tau_verify(const RunConfig& c) {
  const std::uint64_t N = c.N.value_or(2000);
  const std::optional<std::filesystem::path> cache =
      c.cache ? std::filesystem::path(*c.cache) : default_cache_dir() / "tau-table.txt";
  const auto table = load_or_build_tau_table(std::max(N, sd_required_horizon(N)), cache);
  const TauAudit audit = audit_tau_table(*table, N, c.engine.parallelism);
  const SdReport sd = verify_sd_congruences(*table, N, c.engine.parallelism);
  const bool ok = audit.ok() && sd.all_passed();
  return {"tau-verify",
          merge_bodies({{"audit", body_json(audit)}, {"swinnerton_dyer", body_json(sd)}}),
          std::nullopt, ok ? kExitOk : kExitFailed,
          ok ? "all tau checks passed" : "tau checks FAILED"};
}

Outcome run_suite(const RunConfig& c) {
  const std::string which = c.which.empty() ? "corollary5" : c.which;
  if (which == "corollary5") {
    const SuiteReport r = corollary_suite(c.engine);
    return {"suite/corollary5", body_json(r), std::nullopt, r.failures() ? kExitFailed : kExitOk,
            std::to_string(r.failures()) + " failed row(s)"};
  }
  if (which == "two-squares") {
    const TwoSquaresReport r = two_squares_audit(c.N.value_or(10'000), {1, 2, 3}, c.engine.parallelism);
    return {"suite/two-squares", body_json(r), std::nullopt, r.all_passed() ? kExitOk : kExitFailed,
            r.all_passed() ? "passed" : "FAILED"};
  }
  if (which == "phi-closed-form") {
    const PhiAgreementReport r = phi_closed_form_audit(c.A_max.value_or(60), {2, 3, 5}, c.engine);
    return {"suite/phi-closed-form", body_json(r), std::nullopt,
            r.mismatches() ? kExitFailed : kExitOk, std::to_string(r.mismatches()) + " mismatch(es)"};
  }
  if (which == "consistency") {
    const ConsistencyReport r = theorem_consistency_audit(
        {sigma_function(0), sigma_function(1), sigma_function(2), sigma_function(3), phi_function()},
        {2, 3, 5, 7}, c.A_max.value_or(60), c.engine);
    return {"suite/consistency", body_json(r), std::nullopt, r.violations() ? kExitFailed : kExitOk,
            std::to_string(r.violations()) + " violation(s)"};
  }
  if (which == "corollary3") {
    const Corollary3Report r = corollary3_audit(c.A_max.value_or(400), c.engine);
    return {"suite/corollary3", body_json(r), std::nullopt, r.violations() ? kExitFailed : kExitOk,
            std::to_string(r.violations()) + " violation(s)"};
  }
  throw ParseError(0, "unknown suite '" + which + "'");
}

Outcome run_conjecture(const RunConfig& c, std::ostream& err) {
  const std::string which = c.which.empty() ? "1" : c.which;
  if (which == "1") {
    std::vector<std::uint64_t> ks{2, 3};
    if (c.pow) ks = {*c.pow};
    const Conjecture1Report r = conjecture1_audit(ks, c.A_max.value_or(400), c.engine);
    return {"conjecture/1", body_json(r), std::nullopt, r.failures() ? kExitFailed : kExitOk,
            std::to_string(r.failures()) + " structure failure(s)"};
  }
  if (which == "8") {
    const Conjecture8Report r = conjecture8_evidence({3, 5, 7}, c.A_max.value_or(200), c.engine);
    if (r.hits()) err << "NOTE: " << r.hits() << " coprime progression(s) with phi = 0 (mod p) to the horizon\n";
    return {"conjecture/8", body_json(r), std::nullopt, kExitOk,
            std::to_string(r.hits()) + " hit(s)"};
  }
  throw ParseError(0, "unknown conjecture '" + which + "' (expected 1 or 8)");
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ramanujan-type congruences for multiplicative functions", "ramcong"};
  app.require_subcommand(1, 1);
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
  app.add_option("--config", config_file, "key-value config file (flags override it)");
  for (const Flag& f : kFlags) options[f.key] = app.add_option(std::string("--") + f.key, raw[f.key], f.help);

  const char* const commands[][2] = {
      {"eval", "evaluate f(n), optionally mod M and its p-adic valuation"},
      {"valuation", "scan V_p(A,B;f) and the decomposition"},
      {"certify", "certificate for f(An+B) = 0 (mod p^k)"},
      {"search", "all congruences with A <= A-max"},
      {"tau-verify", "tau table audit and the Swinnerton-Dyer congruences"},
      {"suite", "reproduction suites (see --which)"},
      {"conjecture", "conjecture audits (see --which)"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::map<std::string, std::string> given;
  RunConfig config;
  try {
    if (!config_file.empty()) config = load_config(config_file);
    for (const Flag& f : kFlags) {
      if (options[f.key]->count() == 0) continue;
      apply_setting(config, f.key, raw[f.key]);
      given[f.key] = raw[f.key];
    }
    validate(config);
    const bool csv_ok = command == "certify" || command == "search";
    if (config.format == "csv" && !csv_ok) throw ParseError(0, "--format csv is not available for " + command);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  const ReportMeta meta = make_meta(config.engine.parallelism, parameters(given));
  Outcome outcome;
  try {
    if (command == "eval") {
      outcome = run_eval(config);
    } else if (command == "valuation") {
      outcome = run_valuation(config);
    } else if (command == "certify") {
      outcome = run_certify(config, meta);
    } else if (command == "search") {
      outcome = run_search(config, meta);
    } else if (command == "tau-verify") {
      outcome = run_tau_verify(config);
    } else if (command == "suite") {
      outcome = run_suite(config);
    } else {
      outcome = run_conjecture(config, err);
    }
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CoverageError& e) {
    err << "coverage error (q = " << e.prime() << ", e = " << e.exponent() << "): " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string document = config.format == "csv" ? *outcome.csv
                                                      : json_report(outcome.kind, meta, outcome.body);
  if (config.out) {
    try {
      write_text_atomic(*config.out, document);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    out << outcome.kind << ": " << outcome.summary << " -> " << *config.out << "\n";
  } else {
    out << document;
  }
  return outcome.status;
}

}  // namespace ramcong::cli
