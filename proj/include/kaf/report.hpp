#pragma once

#include <string>
#include <vector>

#include "kaf/assessment.hpp"
#include "kaf/audit.hpp"
#include "kaf/classification.hpp"

namespace kaf {

// Report documents: the consolidated audit output that travels through the
// validation loop and, once approved, becomes the final report. Documents
// serialize to the record file format with record types [report], [row],
// [score], and [rec], so reports are machine-readable first; pretty
// rendering is a presentation concern elsewhere.

struct InventoryRow {
    KnowledgeResource resource;  // extras stripped; a report is a rendering
    LifecycleEntry lifecycle;    // effective phase (declared wins over the table's)
    NonakaClass nonaka = NonakaClass::systemic;
    KnowledgeCategory category = KnowledgeCategory::declarative;
    RomiszowskiCategory romiszowski;
    SharedStatus shared = SharedStatus::undecidable;

    bool operator==(const InventoryRow&) const = default;
};

struct ReportDocument {
    std::string audit_id;
    std::string date;  // the audit's created_on
    int version = 1;
    std::string status;  // "draft" or "final"
    ProjectRecord project;
    std::vector<InventoryRow> rows;  // one per resource, inventory order
    AssessmentResult assessment;
    std::string feedback;  // present on final reports only

    bool operator==(const ReportDocument&) const = default;
};

// Builds the draft document for the current report version. Requires the
// audit to have reached verification. Errors: wrong-stage.
Result<ReportDocument> draft_report(const Audit& audit, const AssessmentResult& assessment,
                                    const ClassificationTable& table = ClassificationTable::builtin());

// Marks the document final and attaches the team's feedback. The audit
// must hold a validated report version matching doc.version. Errors:
// not-validated.
Result<ReportDocument> finalize_report(const Audit& audit, const ReportDocument& doc,
                                       const std::string& feedback);

// Canonical bytes; deterministic and stable. Errors: unrepresentable-value
// (a multi-line value containing a ">>>" line).
Result<std::string> serialize_report(const ReportDocument& doc);

// Inverse of serialize_report on its image. Errors: parse-error.
Result<ReportDocument> parse_report(const std::string& text);

}  // namespace kaf
