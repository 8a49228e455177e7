#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kaf/classification.hpp"
#include "kaf/record_file.hpp"
#include "kaf/result.hpp"
#include "kaf/workflow.hpp"

namespace kaf {

// Domain types for audits, project records, and knowledge resources.
//
// All types are immutable values; operations return new values. Optional
// text fields treat the empty string as "unknown" and are omitted when
// serialized. Unrecognized fields read from disk are carried in `extras`
// so that saving never drops them.

struct ProjectRecord {
    std::string project_name;
    std::string description;
    std::string url;
    std::vector<std::string> partners;
    std::string funding_body;
    std::string ks_policy;
    std::string contractual_clauses;
    std::string km_contact;  // person in charge of knowledge sharing
    std::string duration;
    std::vector<std::string> publications;

    bool operator==(const ProjectRecord&) const = default;
};

struct KnowledgeResource {
    std::string resource_id;  // "R" + three digits; empty only pre-assignment
    std::string name;
    ResourceType resource_type;
    std::string description;
    std::string maintained_by;
    std::string last_updated;     // YYYY-MM-DD
    std::string next_review_due;  // YYYY-MM-DD
    std::string language;         // "en", "eng", "en-GB", ...
    std::string standard_compliance;
    std::string policy_prescribed;
    std::optional<FormatTag> format;
    std::string license;
    std::string url;
    std::string other_location;
    std::optional<bool> permission_required;  // absent = unknown
    std::optional<LifecyclePhase> lifecycle_phase;
    std::string corresponds_to;  // conceptual resource -> its systemic realization
    std::vector<Field> extras;

    bool operator==(const KnowledgeResource&) const = default;
};

enum class ReportStatus { draft, sent_for_validation, rejected, validated, final_version };

std::string report_status_name(ReportStatus s);

struct ReportVersion {
    int version = 0;
    std::string body;  // serialized report document; empty until drafted
    ReportStatus status = ReportStatus::draft;

    bool operator==(const ReportVersion&) const = default;
};

struct Audit {
    std::string audit_id;
    ProjectRecord project;
    std::vector<KnowledgeResource> resources;
    WorkflowState workflow;  // derived from events, kept materialized
    std::vector<ReportVersion> report_versions;  // numbered 1..n, statuses derived
    std::vector<WorkflowEvent> events;           // source of truth for the above
    std::string created_on;                      // YYYY-MM-DD
    std::vector<Field> extras;

    bool operator==(const Audit&) const = default;
};

// One field-level validation finding: the field name plus the violated rule,
// phrased "rule-code: detail".
struct Finding {
    std::string field;
    std::string rule;

    bool operator==(const Finding&) const = default;
};

std::string format_findings(const std::vector<Finding>& findings);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

// Field-level checks in field declaration order; empty result means the
// record satisfies every invariant. Pure.
std::vector<Finding> validate_project(const ProjectRecord& project);
std::vector<Finding> validate_record(const KnowledgeResource& resource);

// As above, plus referential checks against the audit's inventory
// (corresponds_to must name an existing resource).
std::vector<Finding> validate_record(const KnowledgeResource& resource, const Audit& audit);

// ---------------------------------------------------------------------------
// Constructors and updates
// ---------------------------------------------------------------------------

// Creates an audit in the initial workflow state with an empty inventory.
// audit_id = slug of project_name + "-" + three-digit counter, the smallest
// suffix not already taken in existing_ids. Errors: invalid-project.
Result<Audit> new_audit(const ProjectRecord& project, const std::string& created_on,
                        const std::set<std::string>& existing_ids = {});

// Appends a resource. An empty resource_id is auto-assigned the next free
// id (highest existing + 1); an explicit id must be well-formed and free.
// Errors: wrong-stage, invalid-resource, duplicate-id, dangling-reference.
Result<Audit> add_resource(const Audit& audit, const KnowledgeResource& resource);

// Replaces the resource carrying resource.resource_id. Same stage rules as
// add_resource. Errors: wrong-stage, not-found, invalid-resource,
// dangling-reference.
Result<Audit> replace_resource(const Audit& audit, const KnowledgeResource& resource);

// ---------------------------------------------------------------------------
// Event application
// ---------------------------------------------------------------------------

// Advances the workflow by one event and keeps the report-version list in
// step: s3_1 opens version 1 as a draft, report_sent/validation verdicts
// move the current version through sent_for_validation/rejected/validated,
// report_amended opens the next draft, and s4_1 marks the validated version
// final. Errors: illegal-transition, stale-version.
Result<Audit> audit_apply(const Audit& audit, const WorkflowEvent& event);

// Folds audit_apply over a fresh copy of the audit (events and versions
// cleared first). Errors: replay-error naming the 0-based event index.
Result<Audit> replay_audit(const Audit& skeleton, const std::vector<WorkflowEvent>& events);

const ReportVersion* find_version(const Audit& audit, int version);

// Stores the serialized document body for one version. Errors: not-found.
Result<Audit> with_report_body(const Audit& audit, int version, const std::string& body);

}  // namespace kaf
