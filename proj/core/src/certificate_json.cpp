#include "json_util.hpp"
#include "ramcong/engine.hpp"
#include "ramcong/errors.hpp"

namespace ramcong {

namespace {

using detail::certain_to_json;
using detail::Json;
using detail::nat_to_json;
using detail::optional_to_json;

ExtendedNat nat_from_json(const Json& j) {
  if (j.is_string()) return ExtendedNat::parse(j.get<std::string>());
  if (j.is_number_unsigned()) return ExtendedNat(j.get<std::uint64_t>());
  throw ParseError(0, "expected a valuation (non-negative integer or \"inf\")");
}

std::optional<std::uint64_t> optional_u64(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::uint64_t>();
}

CertainNat certain_from_json(const Json& j) {
  CertainNat c;
  c.value = nat_from_json(j.at("value"));
  c.certainty = parse_certainty(j.at("certainty").get<std::string>());
  c.witness_n = optional_u64(j.at("witness_n"));
  if (const Json& w = j.at("witness_exponent"); !w.is_null()) {
    c.witness_exponent = ExponentWitness{w.at("q").get<std::uint64_t>(), w.at("e").get<std::uint64_t>()};
  }
  c.horizon = j.at("horizon").get<std::uint64_t>();
  c.justification = j.at("justification").get<std::string>();
  return c;
}

}  // namespace

std::string certificate_to_json(const Certificate& cert, int indent) {
  Json j;
  j["schema"] = "ramcong-certificate";
  j["schema_version"] = 1;
  j["function"] = cert.function;
  j["p"] = cert.p;
  j["k"] = cert.k;
  const Progression& pr = cert.progression;
  j["progression"] = Json{{"A", pr.A},       {"B", pr.B},       {"G", pr.G},
                          {"A_prime", pr.A_prime}, {"B_prime", pr.B_prime}, {"G_prime", pr.G_prime}};
  j["term_fixed"] = nat_to_json(cert.term_fixed);
  j["terms_U"] = detail::u_terms_to_json(cert.terms_U);
  j["term_M"] = certain_to_json(cert.term_M);
  j["rhs_total"] = certain_to_json(cert.rhs_total);
  j["scan_V"] = certain_to_json(cert.scan_V);
  j["status"] = to_string(cert.status);
  j["refutation_witness"] = optional_to_json(cert.refutation_witness);
  j["rhs_attained"] = cert.rhs_attained;
  j["config"] = Json{{"n_horizon", cert.config.n_horizon},
                     {"exponent_horizon", cert.config.exponent_horizon},
                     {"witness_budget", cert.config.witness_budget},
                     {"candidate_bound", cert.config.candidate_bound}};
  j["notes"] = cert.notes;
  return j.dump(indent);
}

Certificate certificate_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(0, std::string("certificate JSON: ") + e.what());
  }
  try {
    if (j.at("schema") != "ramcong-certificate" || j.at("schema_version") != 1) {
      throw ParseError(0, "certificate JSON: unsupported schema");
    }
    Certificate cert;
    cert.function = j.at("function").get<std::string>();
    cert.p = j.at("p").get<std::uint64_t>();
    cert.k = j.at("k").get<std::uint64_t>();
    const Json& pj = j.at("progression");
    cert.progression = decompose_progression(pj.at("A").get<std::uint64_t>(),
                                             pj.at("B").get<std::uint64_t>());
    // Keep the stored derived fields so reverification can compare them.
    cert.progression.G = pj.at("G").get<std::uint64_t>();
    cert.progression.A_prime = pj.at("A_prime").get<std::uint64_t>();
    cert.progression.B_prime = pj.at("B_prime").get<std::uint64_t>();
    cert.progression.G_prime = pj.at("G_prime").get<std::uint64_t>();
    cert.term_fixed = nat_from_json(j.at("term_fixed"));
    for (const Json& u : j.at("terms_U")) {
      cert.terms_U.push_back(UTerm{u.at("q").get<std::uint64_t>(), u.at("a").get<std::uint64_t>(),
                                   certain_from_json(u.at("value"))});
    }
    cert.term_M = certain_from_json(j.at("term_M"));
    cert.rhs_total = certain_from_json(j.at("rhs_total"));
    cert.scan_V = certain_from_json(j.at("scan_V"));
    cert.status = parse_status(j.at("status").get<std::string>());
    cert.refutation_witness = optional_u64(j.at("refutation_witness"));
    cert.rhs_attained = j.at("rhs_attained").get<bool>();
    const Json& c = j.at("config");
    cert.config.n_horizon = c.at("n_horizon").get<std::uint64_t>();
    cert.config.exponent_horizon = c.at("exponent_horizon").get<std::uint64_t>();
    cert.config.witness_budget = c.at("witness_budget").get<std::uint64_t>();
    cert.config.candidate_bound = c.at("candidate_bound").get<std::uint64_t>();
    cert.notes = j.at("notes").get<std::vector<std::string>>();
    return cert;
  } catch (const Json::exception& e) {
    throw ParseError(0, std::string("certificate JSON: ") + e.what());
  }
}

}  // namespace ramcong
