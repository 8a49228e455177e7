#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kaf {

// Small text utilities shared across modules. All functions are pure.

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// Splits on a single-character separator; items are trimmed, empties dropped.
std::vector<std::string> split_list(std::string_view s, char sep);

// Lowercase slug: non-alphanumeric runs collapse to single hyphens, leading
// and trailing hyphens removed. Empty input slugs to "audit".
std::string slugify(std::string_view name);

// "YYYY-MM-DD" with valid calendar values (leap years included).
bool is_valid_date(std::string_view s);

// "YYYY-MM-DDTHH:MM:SSZ", UTC only. Date part must be calendar-valid.
bool is_valid_timestamp(std::string_view s);

// RFC-3066 style: 2- or 3-letter primary tag, optional hyphenated
// alphanumeric subtags of 1-8 chars ("en", "eng", "en-GB").
bool is_valid_language_tag(std::string_view s);

// Syntactic URI check, no network access: "scheme://rest" with an
// alphabetic-initial scheme, or a bare domain path ("example.org/doc").
bool is_valid_url(std::string_view s);

// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ" / "YYYY-MM-DD".
std::string now_timestamp_utc();
std::string today_utc();

}  // namespace kaf
