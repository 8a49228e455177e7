#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kaf/result.hpp"

namespace kaf {

// Plain-text record file format.
//
// A file is a sequence of records, each introduced by a header line "[type]"
// followed by field lines and terminated by a blank line:
//
//   [resource]
//   resource_id = R001
//   name = API reference
//   description = <<<
//   first line
//   second line
//   >>>
//
// Grammar accepted by the parser:
//   - header lines "[type]", type matching [a-z_][a-z0-9_-]*
//   - field lines "name = value" with exactly one space around "=";
//     name matching [a-z_][a-z0-9_]*
//   - a value of "<<<" opens a multi-line value closed by a ">>>" line
//   - single-line values are non-empty after trimming; an absent field is
//     omitted, never stored as an empty value
//   - blank lines separate records (runs of blanks collapse on save)
//   - LF line endings only; the file ends with a final LF
//
// Canonical form, produced by write_records: known fields in declared order
// (the caller's responsibility), one blank line between records, exactly one
// trailing LF. Single-line values are stored trimmed; loading a file whose
// values carry surrounding whitespace trims them, so canonicalization is a
// projection: save(load(save(x))) == save(x) byte for byte.

struct Field {
    std::string name;
    // May contain '\n'; such values serialize in <<< ... >>> form. A value
    // line equal to ">>>" cannot be represented and is rejected on write.
    std::string value;

    bool operator==(const Field&) const = default;
};

struct Record {
    std::string type;
    std::vector<Field> fields;

    // First value for name, or nullopt.
    std::optional<std::string> get(std::string_view name) const;
    // All values for name, in file order.
    std::vector<std::string> get_all(std::string_view name) const;

    bool operator==(const Record&) const = default;
};

// Errors use code "parse-error" with a 1-based line number in the message.
Result<std::vector<Record>> parse_records(std::string_view text);

// Serializes records to canonical bytes. Returns an error (code
// "unrepresentable-value") if a multi-line value contains a ">>>" line.
Result<std::string> write_records(const std::vector<Record>& records);

// Reorders record fields: names listed in declared_order first, in that
// order (repeats keep insertion order), remaining fields after, preserving
// their relative order. The canonicalization step applied before writing.
Record canonicalize_fields(Record record, const std::vector<std::string>& declared_order);

}  // namespace kaf
