#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kaf/audit.hpp"
#include "kaf/result.hpp"

namespace kaf {

// Dublin Core element set used for resource export, in the fixed element
// order (title first, accrual_policy last). The mapping from resource
// fields to elements is a fixed table; two fields have no honest DC home
// and stay extensions, reported by unmapped_fields().

enum class DcElement {
    title,
    subject,
    description,
    type,
    source,
    relation,
    coverage,
    creator,
    publisher,
    contributor,
    rights,
    date,
    format,
    identifier,
    language,
    audience,
    provenance,
    rights_holder,
    instructional_method,
    accrual_method,
    accrual_periodicity,
    accrual_policy,
};

std::string dc_element_name(DcElement element);
Result<DcElement> parse_dc_element(std::string_view name);

struct DcPair {
    DcElement element;
    std::string value;

    bool operator==(const DcPair&) const = default;
};

// Ordered list of (element, value) pairs; elements may repeat. Pairs are
// kept in element order, ties by insertion.
struct DublinCoreRecord {
    std::vector<DcPair> pairs;

    bool operator==(const DublinCoreRecord&) const = default;
};

// One row of the field -> element table; a row without a target is an
// extension (the field has no Dublin Core counterpart).
struct MappingRow {
    std::string kaf_field;
    std::optional<DcElement> target;
};

// The canonical mapping, one row per KnowledgeResource field, in field
// order as mapped.
const std::vector<MappingRow>& mapping_table();

// Fields whose mapping row is an extension, in table order.
std::vector<std::string> unmapped_fields();

// One pair per populated mapped field, in canonical element order. The
// rights element carries distinct "license: ..." and "access: ..." values;
// resource_type exports as the type's canonical name. Errors:
// invalid-resource (the resource must validate cleanly first).
Result<DublinCoreRecord> export_dc(const KnowledgeResource& resource);

// "dc.<element> = <value>" lines, LF endings, trailing LF; byte-stable.
std::string serialize_dc(const DublinCoreRecord& record);

// Inverse of serialize_dc on its image. Errors: parse-error.
Result<DublinCoreRecord> parse_dc(const std::string& text);

}  // namespace kaf
