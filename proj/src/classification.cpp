#include "kaf/classification.hpp"

#include <array>

namespace kaf {

namespace {

constexpr std::array<const char*, 14> kResourceTypeNames = {
    "requirements_specification",
    "system_diagram",
    "system_specification",
    "operating_manual",
    "user_guide",
    "test_plan",
    "contract",
    "user_feedback_tickets",
    "feedback_new_requirements",
    "process",
    "ruleset",
    "standard_compliance_document",
    "glossary",
    "other",
};

constexpr std::array<const char*, 9> kLifecyclePhaseNames = {
    "analysis", "design",     "development", "installation",          "testing",
    "acceptance", "support",  "maintenance", "lifecycle_independent",
};

constexpr std::array<const char*, 4> kNonakaNames = {"systemic", "conceptual",
                                                     "experiential", "routine"};

constexpr std::array<const char*, 3> kCategoryNames = {"declarative", "procedural", "causal"};

constexpr std::array<const char*, 9> kFormatNames = {
    "image", "word_document", "spreadsheet", "pdf", "html", "xml", "rdf", "owl", "other",
};

constexpr std::array<const char*, 3> kDimensionNames = {"cognitive", "organisational",
                                                        "technical"};

constexpr std::array<const char*, 4> kRomCategoryNames = {"facts", "concepts", "procedures",
                                                          "principles"};

}  // namespace

std::string resource_type_name(const ResourceType& rt) {
    if (rt.kind == ResourceType::Kind::other && !rt.other_label.empty()) {
        return "other:" + rt.other_label;
    }
    return kResourceTypeNames[static_cast<size_t>(rt.kind)];
}

Result<ResourceType> parse_resource_type(std::string_view name) {
    if (name.rfind("other:", 0) == 0) {
        std::string label(name.substr(6));
        if (label.empty()) {
            return make_error("parse-error", "other resource type needs a non-empty label");
        }
        return ResourceType{ResourceType::Kind::other, label};
    }
    for (size_t i = 0; i < kResourceTypeNames.size(); ++i) {
        if (name == kResourceTypeNames[i]) {
            return ResourceType{static_cast<ResourceType::Kind>(i), ""};
        }
    }
    return make_error("parse-error", "unknown resource type \"" + std::string(name) + "\"");
}

std::vector<ResourceType> all_resource_kinds() {
    std::vector<ResourceType> kinds;
    for (size_t i = 0; i < kResourceTypeNames.size(); ++i) {
        kinds.push_back(ResourceType{static_cast<ResourceType::Kind>(i), ""});
    }
    return kinds;
}

std::string lifecycle_phase_name(LifecyclePhase p) {
    return kLifecyclePhaseNames[static_cast<size_t>(p)];
}

Result<LifecyclePhase> parse_lifecycle_phase(std::string_view name) {
    for (size_t i = 0; i < kLifecyclePhaseNames.size(); ++i) {
        if (name == kLifecyclePhaseNames[i]) {
            return static_cast<LifecyclePhase>(i);
        }
    }
    return make_error("parse-error", "unknown lifecycle phase \"" + std::string(name) + "\"");
}

std::string nonaka_class_name(NonakaClass c) {
    return kNonakaNames[static_cast<size_t>(c)];
}

Result<NonakaClass> parse_nonaka_class(std::string_view name) {
    for (size_t i = 0; i < kNonakaNames.size(); ++i) {
        if (name == kNonakaNames[i]) {
            return static_cast<NonakaClass>(i);
        }
    }
    return make_error("parse-error", "unknown asset class \"" + std::string(name) + "\"");
}

std::string knowledge_category_name(KnowledgeCategory c) {
    return kCategoryNames[static_cast<size_t>(c)];
}

Result<KnowledgeCategory> parse_knowledge_category(std::string_view name) {
    for (size_t i = 0; i < kCategoryNames.size(); ++i) {
        if (name == kCategoryNames[i]) {
            return static_cast<KnowledgeCategory>(i);
        }
    }
    return make_error("parse-error",
                      "unknown knowledge category \"" + std::string(name) + "\"");
}

std::string format_tag_name(const FormatTag& f) {
    if (f.kind == FormatTag::Kind::other && !f.other_label.empty()) {
        return "other:" + f.other_label;
    }
    return kFormatNames[static_cast<size_t>(f.kind)];
}

Result<FormatTag> parse_format_tag(std::string_view name) {
    if (name.rfind("other:", 0) == 0) {
        std::string label(name.substr(6));
        if (label.empty()) {
            return make_error("parse-error", "other format needs a non-empty label");
        }
        return FormatTag{FormatTag::Kind::other, label};
    }
    for (size_t i = 0; i < kFormatNames.size(); ++i) {
        if (name == kFormatNames[i]) {
            return FormatTag{static_cast<FormatTag::Kind>(i), ""};
        }
    }
    return make_error("parse-error", "unknown format \"" + std::string(name) + "\"");
}

std::string dimension_tag_name(DimensionTag d) {
    return kDimensionNames[static_cast<size_t>(d)];
}

Result<DimensionTag> parse_dimension_tag(std::string_view name) {
    for (size_t i = 0; i < kDimensionNames.size(); ++i) {
        if (name == kDimensionNames[i]) {
            return static_cast<DimensionTag>(i);
        }
    }
    return make_error("parse-error", "unknown dimension \"" + std::string(name) + "\"");
}

std::string rom_category_name(RomCategory c) {
    return kRomCategoryNames[static_cast<size_t>(c)];
}

Result<RomCategory> parse_rom_category(std::string_view name) {
    for (size_t i = 0; i < kRomCategoryNames.size(); ++i) {
        if (name == kRomCategoryNames[i]) {
            return static_cast<RomCategory>(i);
        }
    }
    return make_error("parse-error", "unknown category \"" + std::string(name) + "\"");
}

bool rom_label_in_category(RomCategory category, std::string_view label) {
    switch (category) {
        case RomCategory::facts:
            return label == "Concrete Facts" || label == "Verbal Information" ||
                   label == "Concrete Associations";
        case RomCategory::concepts:
            return label == "Concrete Concepts" || label == "Defined Concepts" ||
                   label == "Concept Systems";
        case RomCategory::procedures:
            return label == "Linear Procedures" || label == "Multiple Discriminations" ||
                   label == "Algorithms";
        case RomCategory::principles:
            return label == "Rules of Action" || label == "Rules of Nature" ||
                   label == "Rule Systems";
    }
    return false;
}

// ---------------------------------------------------------------------------
// Built-in table
// ---------------------------------------------------------------------------

namespace {

ClassificationTable make_builtin() {
    using LP = LifecyclePhase;
    using NC = NonakaClass;
    using KC = KnowledgeCategory;
    using RC = RomCategory;

    ClassificationTable t;
    auto add = [&t](const char* name, LP phase, const char* repr, const char* notation,
                    NC nonaka, KC category, RC rom, const char* rom_label) {
        t.set_row(name, ClassificationRow{phase, repr, notation, nonaka, category,
                                          RomiszowskiCategory{rom, rom_label}});
    };

    add("requirements_specification", LP::analysis, "narrative structured text",
        "natural language, pseudocode", NC::systemic, KC::declarative, RC::concepts,
        "Defined Concepts");
    add("system_diagram", LP::design, "diagram", "ER, DF, UML", NC::conceptual,
        KC::declarative, RC::concepts, "Concept Systems");
    add("system_specification", LP::development, "narrative structured text",
        "Natural language pseudocode", NC::systemic, KC::declarative, RC::concepts,
        "Concept Systems");
    add("operating_manual", LP::installation, "narrative diagrams",
        "Natural language graphics", NC::systemic, KC::declarative, RC::concepts,
        "Defined Concepts");
    add("user_guide", LP::installation, "narrative diagrams", "Natural language graphics",
        NC::systemic, KC::declarative, RC::concepts, "Defined Concepts");
    add("test_plan", LP::testing, "structured text", "natural language charts", NC::systemic,
        KC::procedural, RC::procedures, "Algorithms");
    add("contract", LP::acceptance, "narrative", "natural language", NC::systemic, KC::causal,
        RC::principles, "Rules of Action");
    add("user_feedback_tickets", LP::support, "narrative", "natural language", NC::systemic,
        KC::declarative, RC::facts, "Concrete Facts");
    add("feedback_new_requirements", LP::maintenance, "narrative", "natural language",
        NC::systemic, KC::declarative, RC::facts, "Concrete Facts");
    add("process", LP::lifecycle_independent, "", "", NC::systemic, KC::procedural,
        RC::procedures, "Algorithms");
    add("ruleset", LP::lifecycle_independent, "", "", NC::systemic, KC::procedural,
        RC::principles, "Rule Systems");
    add("standard_compliance_document", LP::lifecycle_independent, "", "", NC::systemic,
        KC::causal, RC::principles, "Rule Systems");
    add("glossary", LP::lifecycle_independent, "", "", NC::systemic, KC::declarative,
        RC::facts, "Verbal Information");
    add("other", LP::lifecycle_independent, "", "", NC::systemic, KC::declarative, RC::facts,
        "Concrete Facts");
    return t;
}

}  // namespace

const ClassificationTable& ClassificationTable::builtin() {
    static const ClassificationTable table = make_builtin();
    return table;
}

const ClassificationRow& ClassificationTable::row(const ResourceType& rt) const {
    const std::string name = kResourceTypeNames[static_cast<size_t>(rt.kind)];
    for (const auto& [n, r] : rows_) {
        if (n == name) {
            return r;
        }
    }
    // set_row keeps an "other" row present at all times.
    for (const auto& [n, r] : rows_) {
        if (n == "other") {
            return r;
        }
    }
    static const ClassificationRow fallback{};
    return fallback;
}

void ClassificationTable::set_row(const std::string& type_name, ClassificationRow row) {
    for (auto& [n, r] : rows_) {
        if (n == type_name) {
            r = std::move(row);
            return;
        }
    }
    rows_.emplace_back(type_name, std::move(row));
}

std::vector<std::string> ClassificationTable::type_names() const {
    std::vector<std::string> names;
    names.reserve(rows_.size());
    for (const auto& [n, r] : rows_) {
        names.push_back(n);
    }
    return names;
}

LifecycleEntry lifecycle_of(const ResourceType& rt, const ClassificationTable& table) {
    const ClassificationRow& r = table.row(rt);
    return LifecycleEntry{r.lifecycle, r.representation, r.notation};
}

NonakaClass nonaka_class_of(const ResourceType& rt, const ClassificationTable& table) {
    return table.row(rt).nonaka;
}

KnowledgeCategory knowledge_category_of(const ResourceType& rt,
                                        const ClassificationTable& table) {
    return table.row(rt).category;
}

RomiszowskiCategory romiszowski_of(const ResourceType& rt, const ClassificationTable& table) {
    return table.row(rt).romiszowski;
}

}  // namespace kaf
