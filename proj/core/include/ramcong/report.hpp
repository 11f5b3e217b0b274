#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ramcong/classifier.hpp"
#include "ramcong/engine.hpp"
#include "ramcong/tau.hpp"

namespace ramcong {

inline constexpr int kReportSchemaVersion = 1;

// Run metadata, kept apart from the body so bodies stay diffable.
struct ReportMeta {
  std::string version;
  std::string timestamp;  // UTC, ISO 8601
  unsigned parallelism = 1;
  std::vector<std::pair<std::string, std::string>> parameters;
};

ReportMeta make_meta(unsigned parallelism,
                     std::vector<std::pair<std::string, std::string>> parameters = {});

// Deterministic JSON bodies: same inputs and config give the same bytes.
std::string body_json(const Certificate& cert);
std::string body_json(const SearchResult& result);
// Scan plus decomposition for one progression.
std::string body_json(const std::string& function, std::uint64_t p, const Decomposition& d,
                      const CertainNat& scan);
std::string body_json(const SuiteReport& report);
std::string body_json(const TwoSquaresReport& report);
std::string body_json(const PhiAgreementReport& report);
std::string body_json(const ConsistencyReport& report);
std::string body_json(const Conjecture1Report& report);
std::string body_json(const Corollary3Report& report);
std::string body_json(const Conjecture8Report& report);
std::string body_json(const TauAudit& audit);
std::string body_json(const SdReport& report);

// {"schema_version", "kind", "meta", "body"}.
std::string json_report(std::string_view kind, const ReportMeta& meta, std::string_view body);

// '#'-prefixed metadata lines, then `A,B,p,k,scan,rhs,certainty,status`.
std::string csv_report(const SearchResult& result, const ReportMeta& meta);
std::string csv_report(const Certificate& cert, const ReportMeta& meta);
// The part of csv_report after the metadata lines.
std::string csv_body(const SearchResult& result);

// Writes through a temporary file in the same directory and renames it.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace ramcong
