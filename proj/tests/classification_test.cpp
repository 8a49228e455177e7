#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "kaf/classification.hpp"

using namespace kaf;

TEST_CASE("resource type names round-trip through the parser") {
    for (const auto& rt : all_resource_kinds()) {
        auto parsed = parse_resource_type(resource_type_name(rt));
        REQUIRE(parsed.ok());
        CHECK(parsed.value() == rt);
    }
    CHECK(all_resource_kinds().size() == 14);
}

TEST_CASE("labelled other types carry their label through the name") {
    auto parsed = parse_resource_type("other:runbook");
    REQUIRE(parsed.ok());
    CHECK(parsed.value().kind == ResourceType::Kind::other);
    CHECK(parsed.value().other_label == "runbook");
    CHECK(resource_type_name(parsed.value()) == "other:runbook");

    CHECK(parse_resource_type("other:").error().code == "parse-error");
    CHECK(parse_resource_type("wiki").error().code == "parse-error");
    CHECK(parse_resource_type("").error().code == "parse-error");
    CHECK(parse_resource_type("Test_Plan").error().code == "parse-error");
}

TEST_CASE("lifecycle phase names round-trip") {
    const std::vector<LifecyclePhase> phases = {
        LifecyclePhase::analysis,     LifecyclePhase::design,
        LifecyclePhase::development,  LifecyclePhase::installation,
        LifecyclePhase::testing,      LifecyclePhase::acceptance,
        LifecyclePhase::support,      LifecyclePhase::maintenance,
        LifecyclePhase::lifecycle_independent,
    };
    std::set<std::string> names;
    for (auto p : phases) {
        const std::string name = lifecycle_phase_name(p);
        names.insert(name);
        auto parsed = parse_lifecycle_phase(name);
        REQUIRE(parsed.ok());
        CHECK(parsed.value() == p);
    }
    CHECK(names.size() == phases.size());
    CHECK(parse_lifecycle_phase("deployment").error().code == "parse-error");
}

TEST_CASE("nonaka class and knowledge category names round-trip") {
    for (auto c : {NonakaClass::systemic, NonakaClass::conceptual, NonakaClass::experiential,
                   NonakaClass::routine}) {
        auto parsed = parse_nonaka_class(nonaka_class_name(c));
        REQUIRE(parsed.ok());
        CHECK(parsed.value() == c);
    }
    for (auto c : {KnowledgeCategory::declarative, KnowledgeCategory::procedural,
                   KnowledgeCategory::causal}) {
        auto parsed = parse_knowledge_category(knowledge_category_name(c));
        REQUIRE(parsed.ok());
        CHECK(parsed.value() == c);
    }
    CHECK(parse_nonaka_class("explicit").error().code == "parse-error");
    CHECK(parse_knowledge_category("tacit").error().code == "parse-error");
}

TEST_CASE("format tags round-trip including labelled other") {
    using K = FormatTag::Kind;
    for (auto k : {K::image, K::word_document, K::spreadsheet, K::pdf, K::html, K::xml,
                   K::rdf, K::owl, K::other}) {
        FormatTag f{k, ""};
        auto parsed = parse_format_tag(format_tag_name(f));
        REQUIRE(parsed.ok());
        CHECK(parsed.value() == f);
    }
    auto labelled = parse_format_tag("other:markdown");
    REQUIRE(labelled.ok());
    CHECK(labelled.value().other_label == "markdown");
    CHECK(format_tag_name(labelled.value()) == "other:markdown");
    CHECK(parse_format_tag("other:").error().code == "parse-error");
    CHECK(parse_format_tag("docx").error().code == "parse-error");
}

TEST_CASE("dimension and romiszowski category names round-trip") {
    for (auto d : {DimensionTag::cognitive, DimensionTag::organisational,
                   DimensionTag::technical}) {
        auto parsed = parse_dimension_tag(dimension_tag_name(d));
        REQUIRE(parsed.ok());
        CHECK(parsed.value() == d);
    }
    for (auto c : {RomCategory::facts, RomCategory::concepts, RomCategory::procedures,
                   RomCategory::principles}) {
        auto parsed = parse_rom_category(rom_category_name(c));
        REQUIRE(parsed.ok());
        CHECK(parsed.value() == c);
    }
    CHECK(parse_dimension_tag("social").error().code == "parse-error");
    CHECK(parse_rom_category("skills").error().code == "parse-error");
}

TEST_CASE("rom labels belong to exactly one category") {
    const std::vector<std::pair<RomCategory, std::string>> labels = {
        {RomCategory::facts, "Concrete Facts"},
        {RomCategory::facts, "Verbal Information"},
        {RomCategory::facts, "Concrete Associations"},
        {RomCategory::concepts, "Concrete Concepts"},
        {RomCategory::concepts, "Defined Concepts"},
        {RomCategory::concepts, "Concept Systems"},
        {RomCategory::procedures, "Linear Procedures"},
        {RomCategory::procedures, "Multiple Discriminations"},
        {RomCategory::procedures, "Algorithms"},
        {RomCategory::principles, "Rules of Action"},
        {RomCategory::principles, "Rules of Nature"},
        {RomCategory::principles, "Rule Systems"},
    };
    for (const auto& [cat, label] : labels) {
        CHECK(rom_label_in_category(cat, label));
        for (auto other : {RomCategory::facts, RomCategory::concepts, RomCategory::procedures,
                           RomCategory::principles}) {
            if (other != cat) {
                CHECK_FALSE(rom_label_in_category(other, label));
            }
        }
    }
    CHECK_FALSE(rom_label_in_category(RomCategory::facts, "Facts"));
    CHECK_FALSE(rom_label_in_category(RomCategory::facts, ""));
}

TEST_CASE("classifiers are total and agree with the table row") {
    const auto& table = ClassificationTable::builtin();
    for (const auto& rt : all_resource_kinds()) {
        const ClassificationRow& row = table.row(rt);
        CHECK(lifecycle_of(rt) ==
              LifecycleEntry{row.lifecycle, row.representation, row.notation});
        CHECK(nonaka_class_of(rt) == row.nonaka);
        CHECK(knowledge_category_of(rt) == row.category);
        CHECK(romiszowski_of(rt) == row.romiszowski);
        CHECK(rom_label_in_category(row.romiszowski.category, row.romiszowski.sub_label));
    }
}

TEST_CASE("labelled other types classify like the base other row") {
    ResourceType custom{ResourceType::Kind::other, "runbook"};
    ResourceType base{ResourceType::Kind::other, ""};
    CHECK(lifecycle_of(custom) == lifecycle_of(base));
    CHECK(nonaka_class_of(custom) == nonaka_class_of(base));
    CHECK(knowledge_category_of(custom) == knowledge_category_of(base));
    CHECK(romiszowski_of(custom) == romiszowski_of(base));
}

TEST_CASE("lifecycle rows carry the expected phases and notations") {
    auto entry = [](const char* type) {
        return lifecycle_of(parse_resource_type(type).value());
    };

    CHECK(entry("requirements_specification") ==
          LifecycleEntry{LifecyclePhase::analysis, "narrative structured text",
                         "natural language, pseudocode"});
    CHECK(entry("system_diagram") == LifecycleEntry{LifecyclePhase::design, "diagram",
                                                    "ER, DF, UML"});
    CHECK(entry("system_specification") ==
          LifecycleEntry{LifecyclePhase::development, "narrative structured text",
                         "Natural language pseudocode"});
    CHECK(entry("operating_manual") ==
          LifecycleEntry{LifecyclePhase::installation, "narrative diagrams",
                         "Natural language graphics"});
    CHECK(entry("user_guide") == LifecycleEntry{LifecyclePhase::installation,
                                                "narrative diagrams",
                                                "Natural language graphics"});
    CHECK(entry("test_plan") == LifecycleEntry{LifecyclePhase::testing, "structured text",
                                               "natural language charts"});
    CHECK(entry("contract") ==
          LifecycleEntry{LifecyclePhase::acceptance, "narrative", "natural language"});
    CHECK(entry("user_feedback_tickets") ==
          LifecycleEntry{LifecyclePhase::support, "narrative", "natural language"});
    CHECK(entry("feedback_new_requirements") ==
          LifecycleEntry{LifecyclePhase::maintenance, "narrative", "natural language"});
}

TEST_CASE("non-lifecycle types sit outside the lifecycle") {
    for (const char* type : {"process", "ruleset", "standard_compliance_document", "glossary",
                             "other"}) {
        auto entry = lifecycle_of(parse_resource_type(type).value());
        CHECK(entry.phase == LifecyclePhase::lifecycle_independent);
        CHECK(entry.representation.empty());
        CHECK(entry.notation.empty());
    }
}

TEST_CASE("nonaka and category assignments match the table") {
    auto rt = [](const char* name) { return parse_resource_type(name).value(); };

    CHECK(nonaka_class_of(rt("system_diagram")) == NonakaClass::conceptual);
    for (const auto& kind : all_resource_kinds()) {
        if (kind.kind != ResourceType::Kind::system_diagram) {
            CHECK(nonaka_class_of(kind) == NonakaClass::systemic);
        }
    }

    CHECK(knowledge_category_of(rt("test_plan")) == KnowledgeCategory::procedural);
    CHECK(knowledge_category_of(rt("process")) == KnowledgeCategory::procedural);
    CHECK(knowledge_category_of(rt("ruleset")) == KnowledgeCategory::procedural);
    CHECK(knowledge_category_of(rt("contract")) == KnowledgeCategory::causal);
    CHECK(knowledge_category_of(rt("standard_compliance_document")) ==
          KnowledgeCategory::causal);
    CHECK(knowledge_category_of(rt("requirements_specification")) ==
          KnowledgeCategory::declarative);

    CHECK(romiszowski_of(rt("test_plan")) ==
          RomiszowskiCategory{RomCategory::procedures, "Algorithms"});
    CHECK(romiszowski_of(rt("ruleset")) ==
          RomiszowskiCategory{RomCategory::principles, "Rule Systems"});
    CHECK(romiszowski_of(rt("glossary")) ==
          RomiszowskiCategory{RomCategory::facts, "Verbal Information"});
    CHECK(romiszowski_of(rt("user_guide")) ==
          RomiszowskiCategory{RomCategory::concepts, "Defined Concepts"});
}

TEST_CASE("set_row overrides a single type without touching the builtin") {
    ClassificationTable table = ClassificationTable::builtin();
    ClassificationRow row{LifecyclePhase::support, "wiki", "markdown", NonakaClass::conceptual,
                          KnowledgeCategory::causal,
                          RomiszowskiCategory{RomCategory::principles, "Rules of Nature"}};
    table.set_row("glossary", row);

    ResourceType glossary{ResourceType::Kind::glossary, ""};
    CHECK(table.row(glossary) == row);
    CHECK(lifecycle_of(glossary, table) ==
          LifecycleEntry{LifecyclePhase::support, "wiki", "markdown"});
    CHECK(nonaka_class_of(glossary, table) == NonakaClass::conceptual);
    CHECK(knowledge_category_of(glossary, table) == KnowledgeCategory::causal);

    CHECK(ClassificationTable::builtin().row(glossary).lifecycle ==
          LifecyclePhase::lifecycle_independent);
    ResourceType contract{ResourceType::Kind::contract, ""};
    CHECK(table.row(contract) == ClassificationTable::builtin().row(contract));
}

TEST_CASE("table lists every type name in order") {
    auto names = ClassificationTable::builtin().type_names();
    CHECK(names.size() == 14);
    CHECK(names.front() == "requirements_specification");
    CHECK(names.back() == "other");
    for (const auto& name : names) {
        CHECK(parse_resource_type(name).ok());
    }
}
