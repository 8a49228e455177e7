#include "kaf/audit.hpp"

#include <algorithm>
#include <cstdio>

#include "kaf/text.hpp"

namespace kaf {
namespace {

bool is_resource_id(const std::string& id) {
    if (id.size() != 4 || id[0] != 'R') return false;
    return std::all_of(id.begin() + 1, id.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string three_digit(int n) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%03d", n);
    return buf;
}

void check_date(std::vector<Finding>& out, const std::string& field, const std::string& value) {
    if (!value.empty() && !is_valid_date(value)) {
        out.push_back({field, "invalid-date: '" + value + "' is not a valid YYYY-MM-DD date"});
    }
}

const KnowledgeResource* find_resource(const Audit& audit, const std::string& id) {
    for (const auto& r : audit.resources) {
        if (r.resource_id == id) return &r;
    }
    return nullptr;
}

Error wrong_stage(const Audit& audit, const std::string& what) {
    return make_error("wrong-stage", what + " is only possible during execution or verification; "
                                              "the audit is in stage " +
                                         stage_name(audit.workflow.stage));
}

bool inventory_open(const Audit& audit) {
    Stage s = audit.workflow.stage;
    return s == Stage::execution || s == Stage::verification;
}

}  // namespace

std::string report_status_name(ReportStatus s) {
    switch (s) {
        case ReportStatus::draft: return "draft";
        case ReportStatus::sent_for_validation: return "sent_for_validation";
        case ReportStatus::rejected: return "rejected";
        case ReportStatus::validated: return "validated";
        case ReportStatus::final_version: return "final";
    }
    return "";
}

std::string format_findings(const std::vector<Finding>& findings) {
    std::string out;
    for (const auto& f : findings) {
        if (!out.empty()) out += "; ";
        out += f.field + ": " + f.rule;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::vector<Finding> validate_project(const ProjectRecord& project) {
    std::vector<Finding> out;
    if (trim(project.project_name).empty()) {
        out.push_back({"project_name", "empty: project_name must be non-empty"});
    }
    if (!project.url.empty() && !is_valid_url(project.url)) {
        out.push_back({"url", "invalid-url: '" + project.url +
                                  "' is neither scheme://... nor a bare domain path"});
    }
    return out;
}

std::vector<Finding> validate_record(const KnowledgeResource& resource) {
    std::vector<Finding> out;
    if (!is_resource_id(resource.resource_id)) {
        out.push_back({"resource_id", "invalid-id: must be 'R' followed by three digits"});
    }
    if (trim(resource.name).empty()) {
        out.push_back({"name", "empty: name must be non-empty"});
    }
    check_date(out, "last_updated", resource.last_updated);
    check_date(out, "next_review_due", resource.next_review_due);
    if (!resource.language.empty() && !is_valid_language_tag(resource.language)) {
        out.push_back({"language", "invalid-language: '" + resource.language +
                                       "' is not a 2- or 3-letter tag with optional subtags"});
    }
    if (!resource.url.empty() && !is_valid_url(resource.url)) {
        out.push_back({"url", "invalid-url: '" + resource.url +
                                  "' is neither scheme://... nor a bare domain path"});
    }
    if (!resource.corresponds_to.empty() && !is_resource_id(resource.corresponds_to)) {
        out.push_back({"corresponds_to", "invalid-id: must be 'R' followed by three digits"});
    }
    return out;
}

std::vector<Finding> validate_record(const KnowledgeResource& resource, const Audit& audit) {
    std::vector<Finding> out = validate_record(resource);
    if (!resource.corresponds_to.empty() && is_resource_id(resource.corresponds_to) &&
        !find_resource(audit, resource.corresponds_to)) {
        out.push_back({"corresponds_to", "dangling-reference: no resource '" +
                                             resource.corresponds_to + "' in this audit"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constructors and updates
// ---------------------------------------------------------------------------

Result<Audit> new_audit(const ProjectRecord& project, const std::string& created_on,
                        const std::set<std::string>& existing_ids) {
    auto findings = validate_project(project);
    if (!findings.empty()) {
        return Error{make_error("invalid-project", format_findings(findings))};
    }
    if (!is_valid_date(created_on)) {
        return Error{make_error("invalid-project", "created_on: invalid-date: '" + created_on +
                                                       "' is not a valid YYYY-MM-DD date")};
    }
    std::string slug = slugify(project.project_name);
    std::string id;
    for (int n = 1; n <= 999; ++n) {
        std::string candidate = slug + "-" + three_digit(n);
        if (!existing_ids.count(candidate)) {
            id = candidate;
            break;
        }
    }
    if (id.empty()) {
        return Error{make_error("invalid-project", "no free audit id for slug '" + slug + "'")};
    }
    Audit audit;
    audit.audit_id = id;
    audit.project = project;
    audit.created_on = created_on;
    return audit;
}

Result<Audit> add_resource(const Audit& audit, const KnowledgeResource& resource) {
    if (!inventory_open(audit)) {
        return Error{wrong_stage(audit, "adding a resource")};
    }
    KnowledgeResource entry = resource;
    if (entry.resource_id.empty()) {
        int highest = 0;
        for (const auto& r : audit.resources) {
            if (is_resource_id(r.resource_id)) {
                highest = std::max(highest, std::stoi(r.resource_id.substr(1)));
            }
        }
        if (highest >= 999) {
            return Error{make_error("invalid-resource", "inventory full: no free id beyond R999")};
        }
        entry.resource_id = "R" + three_digit(highest + 1);
    } else if (find_resource(audit, entry.resource_id)) {
        return Error{make_error("duplicate-id",
                                "resource '" + entry.resource_id + "' already exists")};
    }
    auto findings = validate_record(entry, audit);
    for (const auto& f : findings) {
        if (f.rule.rfind("dangling-reference", 0) == 0) {
            return Error{make_error("dangling-reference", f.field + ": " + f.rule)};
        }
    }
    if (!findings.empty()) {
        return Error{make_error("invalid-resource", format_findings(findings))};
    }
    Audit next = audit;
    next.resources.push_back(std::move(entry));
    return next;
}

Result<Audit> replace_resource(const Audit& audit, const KnowledgeResource& resource) {
    if (!inventory_open(audit)) {
        return Error{wrong_stage(audit, "editing a resource")};
    }
    const KnowledgeResource* existing = find_resource(audit, resource.resource_id);
    if (!existing) {
        return Error{make_error("not-found",
                                "no resource '" + resource.resource_id + "' in this audit")};
    }
    auto findings = validate_record(resource, audit);
    for (const auto& f : findings) {
        if (f.rule.rfind("dangling-reference", 0) == 0) {
            return Error{make_error("dangling-reference", f.field + ": " + f.rule)};
        }
    }
    if (!findings.empty()) {
        return Error{make_error("invalid-resource", format_findings(findings))};
    }
    Audit next = audit;
    for (auto& r : next.resources) {
        if (r.resource_id == resource.resource_id) {
            r = resource;
            break;
        }
    }
    return next;
}

// ---------------------------------------------------------------------------
// Event application
// ---------------------------------------------------------------------------

Result<Audit> audit_apply(const Audit& audit, const WorkflowEvent& event) {
    auto state = apply(audit.workflow, event);
    if (!state.ok()) return state.error();

    Audit next = audit;
    next.workflow = state.value();
    next.events.push_back(event);

    auto version_status = [&next](int version, ReportStatus status) {
        for (auto& rv : next.report_versions) {
            if (rv.version == version) rv.status = status;
        }
    };

    if (const auto* e = std::get_if<StepCompleted>(&event.kind)) {
        if (e->step == StepId::s3_1) {
            next.report_versions.push_back({1, "", ReportStatus::draft});
        } else if (e->step == StepId::s4_1) {
            for (auto& rv : next.report_versions) {
                if (rv.status == ReportStatus::validated) rv.status = ReportStatus::final_version;
            }
        }
    } else if (const auto* e = std::get_if<ReportSent>(&event.kind)) {
        version_status(e->version, ReportStatus::sent_for_validation);
    } else if (const auto* e = std::get_if<ValidationReceived>(&event.kind)) {
        version_status(e->version, e->verdict == Verdict::valid ? ReportStatus::validated
                                                                : ReportStatus::rejected);
    } else if (const auto* e = std::get_if<ReportAmended>(&event.kind)) {
        next.report_versions.push_back({e->new_version, "", ReportStatus::draft});
    }
    return next;
}

Result<Audit> replay_audit(const Audit& skeleton, const std::vector<WorkflowEvent>& events) {
    Audit audit = skeleton;
    audit.workflow = WorkflowState{};
    audit.events.clear();
    audit.report_versions.clear();
    for (size_t i = 0; i < events.size(); ++i) {
        auto next = audit_apply(audit, events[i]);
        if (!next.ok()) {
            return Error{"replay-error", "event " + std::to_string(i) + ": " +
                                             next.error().message + " [" + next.error().code + "]"};
        }
        audit = std::move(next.value());
    }
    return audit;
}

const ReportVersion* find_version(const Audit& audit, int version) {
    for (const auto& rv : audit.report_versions) {
        if (rv.version == version) return &rv;
    }
    return nullptr;
}

Result<Audit> with_report_body(const Audit& audit, int version, const std::string& body) {
    if (!find_version(audit, version)) {
        return Error{make_error("not-found",
                                "no report version " + std::to_string(version) + " in this audit")};
    }
    Audit next = audit;
    for (auto& rv : next.report_versions) {
        if (rv.version == version) rv.body = body;
    }
    return next;
}

}  // namespace kaf
