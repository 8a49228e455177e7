#include "kaf/crosswalk.hpp"

#include <algorithm>
#include <array>

#include "kaf/text.hpp"

namespace kaf {
namespace {

constexpr std::array<const char*, 22> k_element_names{
    "title",        "subject",      "description",  "type",
    "source",       "relation",     "coverage",     "creator",
    "publisher",    "contributor",  "rights",       "date",
    "format",       "identifier",   "language",     "audience",
    "provenance",   "rights_holder", "instructional_method", "accrual_method",
    "accrual_periodicity", "accrual_policy",
};

// The value a field contributes to its element, empty when unpopulated.
std::string dc_value_of(const KnowledgeResource& r, const std::string& field) {
    if (field == "name") return r.name;
    if (field == "resource_id") return r.resource_id;
    if (field == "url") return r.url;
    if (field == "description") return r.description;
    if (field == "resource_type") return resource_type_name(r.resource_type);
    if (field == "maintained_by") return r.maintained_by;
    if (field == "last_updated") return r.last_updated;
    if (field == "language") return r.language;
    if (field == "format") return r.format ? format_tag_name(*r.format) : "";
    if (field == "license") return r.license.empty() ? "" : "license: " + r.license;
    if (field == "permission_required") {
        if (!r.permission_required) return "";
        return *r.permission_required ? "access: permission required"
                                      : "access: no permission required";
    }
    if (field == "standard_compliance") return r.standard_compliance;
    if (field == "other_location") return r.other_location;
    if (field == "policy_prescribed") return r.policy_prescribed;
    if (field == "next_review_due") return r.next_review_due;
    if (field == "lifecycle_phase") return r.lifecycle_phase ? lifecycle_phase_name(*r.lifecycle_phase) : "";
    if (field == "corresponds_to") return r.corresponds_to;
    return "";
}

}  // namespace

std::string dc_element_name(DcElement element) {
    return k_element_names[static_cast<size_t>(element)];
}

Result<DcElement> parse_dc_element(std::string_view name) {
    for (size_t i = 0; i < k_element_names.size(); ++i) {
        if (name == k_element_names[i]) return static_cast<DcElement>(i);
    }
    return make_error("parse-error", "unknown element '" + std::string(name) + "'");
}

const std::vector<MappingRow>& mapping_table() {
    static const std::vector<MappingRow> table = {
        {"name", DcElement::title},
        {"resource_id", DcElement::identifier},
        {"url", DcElement::identifier},
        {"description", DcElement::description},
        {"resource_type", DcElement::type},
        {"maintained_by", DcElement::contributor},
        {"last_updated", DcElement::date},
        {"language", DcElement::language},
        {"format", DcElement::format},
        {"license", DcElement::rights},
        {"permission_required", DcElement::rights},
        {"standard_compliance", DcElement::relation},
        {"other_location", DcElement::relation},
        {"policy_prescribed", DcElement::provenance},
        {"next_review_due", std::nullopt},
        {"lifecycle_phase", std::nullopt},
        {"corresponds_to", DcElement::relation},
    };
    return table;
}

std::vector<std::string> unmapped_fields() {
    std::vector<std::string> out;
    for (const auto& row : mapping_table()) {
        if (!row.target) out.push_back(row.kaf_field);
    }
    return out;
}

Result<DublinCoreRecord> export_dc(const KnowledgeResource& resource) {
    auto findings = validate_record(resource);
    if (!findings.empty()) {
        return Error{make_error("invalid-resource", format_findings(findings))};
    }
    DublinCoreRecord record;
    for (const auto& row : mapping_table()) {
        if (!row.target) continue;
        std::string value = dc_value_of(resource, row.kaf_field);
        if (value.empty()) continue;
        record.pairs.push_back({*row.target, value});
    }
    std::stable_sort(record.pairs.begin(), record.pairs.end(),
                     [](const DcPair& a, const DcPair& b) { return a.element < b.element; });
    return record;
}

std::string serialize_dc(const DublinCoreRecord& record) {
    std::string out;
    for (const auto& pair : record.pairs) {
        out += "dc." + dc_element_name(pair.element) + " = " + pair.value + "\n";
    }
    return out;
}

Result<DublinCoreRecord> parse_dc(const std::string& text) {
    auto fail = [](size_t line_no, const std::string& what) -> Error {
        return make_error("parse-error", "line " + std::to_string(line_no) + ": " + what);
    };
    DublinCoreRecord record;
    if (!text.empty() && text.back() != '\n') {
        return fail(1 + std::count(text.begin(), text.end(), '\n'), "missing final newline");
    }
    size_t pos = 0;
    size_t line_no = 0;
    while (pos < text.size()) {
        ++line_no;
        size_t end = text.find('\n', pos);
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.rfind("dc.", 0) != 0) return fail(line_no, "expected 'dc.<element> = <value>'");
        size_t sep = line.find(" = ");
        if (sep == std::string::npos) return fail(line_no, "expected ' = ' separator");
        auto element = parse_dc_element(std::string_view(line).substr(3, sep - 3));
        if (!element.ok()) return fail(line_no, element.error().message);
        std::string value = line.substr(sep + 3);
        if (value.empty()) return fail(line_no, "empty value");
        if (value.find('\r') != std::string::npos) return fail(line_no, "stray carriage return");
        if (!record.pairs.empty() && element.value() < record.pairs.back().element) {
            return fail(line_no, "element '" + dc_element_name(element.value()) +
                                     "' out of canonical order");
        }
        if (element.value() == DcElement::date && !is_valid_date(value)) {
            return fail(line_no, "date value '" + value + "' is not YYYY-MM-DD");
        }
        if (element.value() == DcElement::language && !is_valid_language_tag(value)) {
            return fail(line_no, "language value '" + value + "' is not a valid tag");
        }
        record.pairs.push_back({element.value(), value});
    }
    return record;
}

}  // namespace kaf
