#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "ramcong/engine.hpp"

namespace ramcong::cli {

struct RunConfig {
  std::string fn = "sigma";
  std::optional<std::uint64_t> k_param;
  std::optional<std::string> fn_file;
  std::optional<std::uint64_t> p;
  std::optional<std::uint64_t> pow;
  std::optional<std::uint64_t> A;
  std::optional<std::uint64_t> B;
  std::optional<std::uint64_t> A_max;
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> mod;
  std::optional<std::uint64_t> N;
  EngineConfig engine;
  std::string format = "json";
  std::optional<std::string> out;
  std::optional<std::string> cache;
  std::uint64_t tau_horizon = 10'000;
  std::string which;
};

// Key-value file; keys are the long flag names without dashes, e.g.
// `horizon = 1000`. Unknown keys and malformed values throw ParseError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::string_view text);
// Applies one key; throws ParseError naming the key on failure.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   std::size_t line = 0);

// Horizons and parallelism >= 1, known format.
void validate(const RunConfig& config);

}  // namespace ramcong::cli
