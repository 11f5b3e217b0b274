#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ramcong {

// One `key = value` line of a key-value document. Blank lines and lines
// starting with '#' are skipped; surrounding whitespace is trimmed.
struct KeyValueEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

// Throws ParseError (with the line number) on lines without '='.
std::vector<KeyValueEntry> parse_key_values(std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

// Strict conversions; ParseError cites the entry's line.
std::uint64_t parse_u64(const KeyValueEntry& entry);
bool parse_bool(const KeyValueEntry& entry);

}  // namespace ramcong
