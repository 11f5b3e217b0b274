#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ramcong/mult_fn.hpp"

namespace ramcong {

// Custom-function document (key-value text):
//
//   family = sigma | phi | tau | table
//   k = <n>            (sigma only)
//   horizon = <N>      (tau only; table horizon, default 10000)
//   name = <label>     (optional)
//   table = <q> <e> <value>   (table only; one line per prime power)
struct FunctionDocument {
  std::string family;
  std::string name;
  std::optional<std::uint64_t> k;
  std::optional<std::uint64_t> horizon;
  PrimePowerTable table;
};

inline constexpr std::uint64_t kDefaultTauDocumentHorizon = 10'000;

FunctionDocument parse_function_document(std::string_view text);
FunctionDocument read_function_document(const std::filesystem::path& path);

// Builds the descriptor; tau tables come from `tau_cache` when usable.
FnDescriptor load_custom(const FunctionDocument& doc,
                         const std::optional<std::filesystem::path>& tau_cache = std::nullopt);

// Named built-in: "sigma" (with k), "phi", "tau" (with tau horizon).
FnDescriptor named_function(const std::string& family, std::optional<std::uint64_t> k,
                            std::uint64_t tau_horizon = kDefaultTauDocumentHorizon,
                            const std::optional<std::filesystem::path>& tau_cache = std::nullopt);

}  // namespace ramcong
