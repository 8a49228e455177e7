#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kaf/result.hpp"

namespace kaf {

// The four built-in letters of the audit correspondence: announcing the
// audit to the funding body and the project leader, verifying preliminary
// findings, and communicating finalized findings with recommendations.
//
// Placeholder syntax in templates is "{name}"; "{{" and "}}" are literal
// braces. Values may span multiple lines (project lists, summaries).

enum class LetterKind { funder_notice, leader_notice, verify_findings, final_findings };

std::string letter_kind_name(LetterKind kind);
Result<LetterKind> parse_letter_kind(std::string_view name);
std::vector<LetterKind> all_letter_kinds();

using LetterContext = std::map<std::string, std::string>;

// Required placeholder names, in first-occurrence order. Optional extras
// (leader_notice's project_list enclosure block, verify_findings' deadline
// with its built-in default) are not listed.
std::vector<std::string> letter_placeholders(LetterKind kind);

// Deterministic substitution of ctx into the kind's template. Errors:
// missing-placeholder, naming every absent key.
Result<std::string> render_letter(LetterKind kind, const LetterContext& ctx);

}  // namespace kaf
