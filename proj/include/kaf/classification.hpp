#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kaf/result.hpp"

namespace kaf {

// Taxonomy tables for knowledge resources. Each resource type is classified
// four ways: systems-engineering lifecycle phase (plus representation and
// notation), Nonaka asset class, knowledge category, and Romiszowski
// category. The full mapping lives in one data table (ClassificationTable)
// so deployments can amend it via a registry-local override file without
// code changes; the built-in table is the default.

// ---------------------------------------------------------------------------
// Enumerations
// ---------------------------------------------------------------------------

struct ResourceType {
    enum class Kind {
        requirements_specification,
        system_diagram,
        system_specification,
        operating_manual,
        user_guide,
        test_plan,
        contract,
        user_feedback_tickets,
        feedback_new_requirements,
        process,
        ruleset,
        standard_compliance_document,
        glossary,
        other,
    };

    Kind kind = Kind::other;
    std::string other_label;  // non-empty iff kind == other

    bool operator==(const ResourceType&) const = default;
};

// Canonical name: the enumerator name, or "other:<label>".
std::string resource_type_name(const ResourceType& rt);
Result<ResourceType> parse_resource_type(std::string_view name);
// The thirteen named kinds plus a bare "other"; used by totality tests.
std::vector<ResourceType> all_resource_kinds();

enum class LifecyclePhase {
    analysis,
    design,
    development,
    installation,
    testing,
    acceptance,
    support,
    maintenance,
    lifecycle_independent,
};

std::string lifecycle_phase_name(LifecyclePhase p);
Result<LifecyclePhase> parse_lifecycle_phase(std::string_view name);

// Only systemic and conceptual are produced by classification; experiential
// and routine are tacit classes that exist as labels only.
enum class NonakaClass { systemic, conceptual, experiential, routine };

std::string nonaka_class_name(NonakaClass c);
Result<NonakaClass> parse_nonaka_class(std::string_view name);

enum class KnowledgeCategory { declarative, procedural, causal };

std::string knowledge_category_name(KnowledgeCategory c);
Result<KnowledgeCategory> parse_knowledge_category(std::string_view name);

struct FormatTag {
    enum class Kind { image, word_document, spreadsheet, pdf, html, xml, rdf, owl, other };

    Kind kind = Kind::other;
    std::string other_label;  // non-empty iff kind == other

    bool operator==(const FormatTag&) const = default;
};

std::string format_tag_name(const FormatTag& f);
Result<FormatTag> parse_format_tag(std::string_view name);

enum class DimensionTag { cognitive, organisational, technical };

std::string dimension_tag_name(DimensionTag d);
Result<DimensionTag> parse_dimension_tag(std::string_view name);

enum class RomCategory { facts, concepts, procedures, principles };

std::string rom_category_name(RomCategory c);
Result<RomCategory> parse_rom_category(std::string_view name);

struct RomiszowskiCategory {
    RomCategory category = RomCategory::facts;
    std::string sub_label;  // must belong to the category's row set

    bool operator==(const RomiszowskiCategory&) const = default;
};

// Sub-category labels belonging to a category row ("Algorithms" belongs to
// procedures, "Rule Systems" to principles, ...).
bool rom_label_in_category(RomCategory category, std::string_view label);

// ---------------------------------------------------------------------------
// Classification table
// ---------------------------------------------------------------------------

struct ClassificationRow {
    LifecyclePhase lifecycle = LifecyclePhase::lifecycle_independent;
    std::string representation;
    std::string notation;
    NonakaClass nonaka = NonakaClass::systemic;
    KnowledgeCategory category = KnowledgeCategory::declarative;
    RomiszowskiCategory romiszowski;

    bool operator==(const ClassificationRow&) const = default;
};

class ClassificationTable {
  public:
    static const ClassificationTable& builtin();

    // Total over every ResourceType value; other(_) keys on the "other" row.
    const ClassificationRow& row(const ResourceType& rt) const;

    // Replaces the row for a type name ("test_plan", "other", ...).
    void set_row(const std::string& type_name, ClassificationRow row);

    // Row names in table order.
    std::vector<std::string> type_names() const;

  private:
    std::vector<std::pair<std::string, ClassificationRow>> rows_;
};

// ---------------------------------------------------------------------------
// Classifiers — total, pure functions over the table
// ---------------------------------------------------------------------------

struct LifecycleEntry {
    LifecyclePhase phase;
    std::string representation;
    std::string notation;

    bool operator==(const LifecycleEntry&) const = default;
};

LifecycleEntry lifecycle_of(const ResourceType& rt,
                            const ClassificationTable& table = ClassificationTable::builtin());

NonakaClass nonaka_class_of(const ResourceType& rt,
                            const ClassificationTable& table = ClassificationTable::builtin());

KnowledgeCategory knowledge_category_of(
    const ResourceType& rt, const ClassificationTable& table = ClassificationTable::builtin());

RomiszowskiCategory romiszowski_of(
    const ResourceType& rt, const ClassificationTable& table = ClassificationTable::builtin());

}  // namespace kaf
