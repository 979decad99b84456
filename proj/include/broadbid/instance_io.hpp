#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "broadbid/instance.hpp"

namespace broadbid {

// Document layout:
//   {"queries": [{"id": "a", "value": "2", "cost": "1", "clicks": "1",
//                 "biddable": true}, ...],
//    "broad_match": [["a", "ab"], ...],
//    "budget": "10"}                                   (optional)
// Monetary amounts and clicks are decimal strings with at most six
// fractional digits.
Instance parse_instance(std::string_view document);
Instance load_instance(const std::filesystem::path& path);

std::string instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

inline constexpr int kInstanceFormatVersion = 1;

}  // namespace broadbid
