#include "ramcong/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "json_util.hpp"
#include "ramcong/errors.hpp"

#ifndef RAMCONG_VERSION
#define RAMCONG_VERSION "unknown"
#endif

namespace ramcong {

namespace {

using detail::Json;

Json nat(ExtendedNat v) { return detail::nat_to_json(v); }

template <typename T>
Json opt(const std::optional<T>& v) {
  return detail::optional_to_json(v);
}

Json cell(const CellMismatch& m, const char* expected_key) {
  return Json{{"A", m.A}, {"B", m.B}, {expected_key, nat(m.expected)}, {"scan", nat(m.scan)}};
}

Json failures_json(const std::vector<CellFailure>& failures) {
  Json a = Json::array();
  for (const auto& f : failures) a.push_back(Json{{"A", f.A}, {"B", f.B}, {"error", f.error}});
  return a;
}

std::string dump(const Json& j) { return j.dump(2); }

Json structure_json(const StructureCheck& c) {
  Json j;
  j["ok"] = c.ok();
  j["failure"] = c.failure;
  if (c.structure) {
    const ConjectureStructure& s = *c.structure;
    j["P"] = s.P;
    j["primes"] = s.primes;
    j["G_prime_omega"] = s.G_prime_omega;
    j["nu2_sigma0_G_prime"] = s.nu2_sigma0_G_prime;
    j["P_divides_B"] = s.P_divides_B;
    j["P_squared_divides_A"] = s.P_squared_divides_A;
  }
  return j;
}

Json search_json(const SearchResult& r) {
  Json j;
  j["function"] = r.function;
  j["p"] = r.p;
  j["k"] = r.k;
  j["A_max"] = r.A_max;
  j["n_horizon"] = r.config.n_horizon;
  j["exponent_horizon"] = r.config.exponent_horizon;
  j["witness_budget"] = r.config.witness_budget;
  j["candidate_bound"] = r.config.candidate_bound;
  j["cells"] = r.cells;
  j["refuted"] = r.refuted;
  j["hit_count"] = r.hits.size();
  j["structure_failures"] = r.structure_failures();
  Json hits = Json::array();
  for (const SearchHit& h : r.hits) {
    const Certificate& c = h.certificate;
    Json hj{{"A", h.A},
            {"B", h.B},
            {"G", c.progression.G},
            {"G_prime", c.progression.G_prime},
            {"scan", nat(c.scan_V.value)},
            {"scan_witness", opt(c.scan_V.witness_n)},
            {"rhs", nat(c.rhs_total.value)},
            {"certainty", to_string(c.rhs_total.certainty)},
            {"status", to_string(c.status)}};
    if (h.structure_check) hj["structure"] = structure_json(*h.structure_check);
    hits.push_back(std::move(hj));
  }
  j["hits"] = std::move(hits);
  Json near = Json::array();
  for (const NearMiss& m : r.near_misses) {
    near.push_back(Json{{"A", m.A}, {"B", m.B}, {"witness", m.witness}});
  }
  j["near_misses"] = std::move(near);
  j["failures"] = failures_json(r.failures);
  return j;
}

std::string csv_field(ExtendedNat v) { return v.to_string(); }

std::string meta_lines(const ReportMeta& meta, std::string_view kind) {
  std::string out = "# schema_version: " + std::to_string(kReportSchemaVersion) + "\n";
  out += "# kind: " + std::string(kind) + "\n";
  out += "# version: " + meta.version + "\n";
  out += "# timestamp: " + meta.timestamp + "\n";
  out += "# parallelism: " + std::to_string(meta.parallelism) + "\n";
  for (const auto& [k, v] : meta.parameters) out += "# " + k + ": " + v + "\n";
  return out;
}

constexpr const char* kCsvHeader = "A,B,p,k,scan,rhs,certainty,status\n";

std::string csv_row(const Certificate& c) {
  return std::to_string(c.progression.A) + "," + std::to_string(c.progression.B) + "," +
         std::to_string(c.p) + "," + std::to_string(c.k) + "," + csv_field(c.scan_V.value) + "," +
         csv_field(c.rhs_total.value) + "," + to_string(c.rhs_total.certainty) + "," +
         to_string(c.status) + "\n";
}

}  // namespace

ReportMeta make_meta(unsigned parallelism,
                     std::vector<std::pair<std::string, std::string>> parameters) {
  ReportMeta meta;
  meta.version = RAMCONG_VERSION;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  meta.timestamp = buf;
  meta.parallelism = parallelism;
  meta.parameters = std::move(parameters);
  return meta;
}

std::string body_json(const Certificate& cert) { return certificate_to_json(cert, 2); }

std::string body_json(const SearchResult& result) { return dump(search_json(result)); }

std::string body_json(const std::string& function, std::uint64_t p, const Decomposition& d,
                      const CertainNat& scan) {
  const Progression& pr = d.progression;
  return dump(Json{{"function", function},
                   {"p", p},
                   {"progression", Json{{"A", pr.A},
                                        {"B", pr.B},
                                        {"G", pr.G},
                                        {"A_prime", pr.A_prime},
                                        {"B_prime", pr.B_prime},
                                        {"G_prime", pr.G_prime}}},
                   {"scan_V", detail::certain_to_json(scan)},
                   {"term_fixed", nat(d.term_fixed)},
                   {"terms_U", detail::u_terms_to_json(d.terms_U)},
                   {"term_M", detail::certain_to_json(d.term_M)},
                   {"rhs_total", detail::certain_to_json(d.rhs_total)}});
}

std::string body_json(const SuiteReport& report) {
  Json rows = Json::array();
  for (const SuiteRow& r : report.rows) {
    rows.push_back(Json{{"group", r.group},
                        {"id", r.id},
                        {"sigma_k", r.sigma_k},
                        {"p", r.p},
                        {"A", r.A},
                        {"B", r.B},
                        {"expectation", r.expectation},
                        {"scan", nat(r.scan)},
                        {"witness", r.witness},
                        {"rhs", nat(r.rhs)},
                        {"rhs_certainty", to_string(r.rhs_certainty)},
                        {"asserted", r.asserted},
                        {"passed", r.passed}});
  }
  return dump(Json{{"failures", report.failures()}, {"rows", std::move(rows)}});
}

std::string body_json(const TwoSquaresReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"k", r.k},
                        {"non_sums", r.non_sums},
                        {"failed", r.failed},
                        {"first_failure", opt(r.first_failure)}});
  }
  return dump(Json{{"N", report.N},
                   {"cross_checked_up_to", report.cross_checked_up_to},
                   {"criterion_mismatches", report.criterion_mismatches},
                   {"first_mismatch", opt(report.first_mismatch)},
                   {"rows", std::move(rows)}});
}

std::string body_json(const PhiAgreementReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json mm = Json::array();
    for (const auto& m : r.mismatches) mm.push_back(cell(m, "closed_form"));
    rows.push_back(Json{{"p", r.p},
                        {"applicable", r.applicable},
                        {"inapplicable", r.inapplicable},
                        {"mismatch_count", r.mismatches.size()},
                        {"mismatches", std::move(mm)}});
  }
  return dump(Json{{"A_max", report.A_max}, {"mismatches", report.mismatches()}, {"rows", std::move(rows)}});
}

std::string body_json(const ConsistencyReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json ex = Json::array();
    for (const auto& m : r.examples) ex.push_back(cell(m, "rhs"));
    rows.push_back(Json{{"function", r.function},
                        {"p", r.p},
                        {"cells", r.cells},
                        {"exact_cells", r.exact_cells},
                        {"scan_below_rhs", r.scan_below_rhs},
                        {"exact_unequal", r.exact_unequal},
                        {"examples", std::move(ex)},
                        {"failures", failures_json(r.failures)}});
  }
  return dump(Json{{"A_max", report.A_max}, {"violations", report.violations()}, {"rows", std::move(rows)}});
}

std::string body_json(const Conjecture1Report& report) {
  Json searches = Json::array();
  for (const auto& s : report.searches) searches.push_back(search_json(s));
  return dump(Json{{"A_max", report.A_max}, {"failures", report.failures()}, {"searches", std::move(searches)}});
}

std::string body_json(const Corollary3Report& report) {
  auto hits = [](const std::vector<SquareClassHit>& v) {
    Json a = Json::array();
    for (const auto& h : v) {
      a.push_back(Json{{"A", h.A}, {"B", h.B}, {"kronecker", h.kronecker}, {"is_square_mod", h.is_square_mod}});
    }
    return a;
  };
  Json odd = Json::array();
  for (const auto& r : report.odd_primes) {
    Json above = Json::array();
    for (const auto& m : r.above_floor) above.push_back(cell(m, "floor"));
    odd.push_back(Json{{"p", r.p}, {"cells", r.cells}, {"above_floor", std::move(above)}});
  }
  return dump(Json{{"A_max", report.A_max},
                   {"violations", report.violations()},
                   {"coprime_hits_mod2", report.coprime_hits_mod2},
                   {"square_class_hits", hits(report.square_class_hits)},
                   {"symbol_residue_gaps", hits(report.symbol_residue_gaps)},
                   {"odd_primes", std::move(odd)}});
}

std::string body_json(const Conjecture8Report& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json hits = Json::array();
    for (const auto& m : r.hits) hits.push_back(Json{{"A", m.A}, {"B", m.B}, {"scan", nat(m.scan)}});
    rows.push_back(Json{{"p", r.p}, {"coprime_cells", r.coprime_cells}, {"hits", std::move(hits)}});
  }
  return dump(Json{{"A_max", report.A_max}, {"hits", report.hits()}, {"rows", std::move(rows)}});
}

std::string body_json(const TauAudit& a) {
  return dump(Json{{"N", a.N},
                   {"ok", a.ok()},
                   {"leading_values_ok", a.leading_values_ok},
                   {"multiplicativity_checks", a.multiplicativity_checks},
                   {"multiplicativity_failures", a.multiplicativity_failures},
                   {"recurrence_checks", a.recurrence_checks},
                   {"recurrence_failures", a.recurrence_failures},
                   {"parity_checks", a.parity_checks},
                   {"parity_failures", a.parity_failures},
                   {"deligne_checks", a.deligne_checks},
                   {"deligne_failures", a.deligne_failures}});
}

std::string body_json(const SdReport& report) {
  Json rows = Json::array();
  for (const SdRow& r : report.rows) {
    rows.push_back(Json{{"id", r.id},
                        {"statement", r.statement},
                        {"modulus", r.modulus},
                        {"checked", r.checked},
                        {"passed", r.passed},
                        {"failed", r.failed},
                        {"inapplicable", r.inapplicable},
                        {"first_failure", opt(r.first_failure)}});
  }
  return dump(Json{{"N", report.N},
                   {"table_horizon", report.table_horizon},
                   {"all_passed", report.all_passed()},
                   {"rows", std::move(rows)}});
}

std::string json_report(std::string_view kind, const ReportMeta& meta, std::string_view body) {
  Json params = Json::object();
  for (const auto& [k, v] : meta.parameters) params[k] = v;
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = kind;
  j["meta"] = Json{{"version", meta.version},
                   {"timestamp", meta.timestamp},
                   {"parallelism", meta.parallelism},
                   {"parameters", std::move(params)}};
  j["body"] = Json::parse(body);
  return j.dump(2) + "\n";
}

std::string csv_body(const SearchResult& result) {
  std::string out = kCsvHeader;
  for (const SearchHit& h : result.hits) out += csv_row(h.certificate);
  return out;
}

std::string csv_report(const SearchResult& result, const ReportMeta& meta) {
  return meta_lines(meta, "search") + csv_body(result);
}

std::string csv_report(const Certificate& cert, const ReportMeta& meta) {
  return meta_lines(meta, "certificate") + kCsvHeader + csv_row(cert);
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::random_device rd;
  const fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot open for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw std::runtime_error(tmp.string() + ": write failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error(path.string() + ": rename failed: " + ec.message());
  }
}

}  // namespace ramcong
