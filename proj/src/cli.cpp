#include "kaf/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kaf/assessment.hpp"
#include "kaf/audit.hpp"
#include "kaf/classification.hpp"
#include "kaf/crosswalk.hpp"
#include "kaf/letters.hpp"
#include "kaf/record_file.hpp"
#include "kaf/registry.hpp"
#include "kaf/report.hpp"
#include "kaf/result.hpp"
#include "kaf/text.hpp"
#include "kaf/workflow.hpp"

namespace kaf::cli {
namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

// Usage problems carry the pseudo-code "usage" so report_error can map
// them to exit 2; every other code is a domain error (exit 1).
Error usage_error(const std::string& message) {
    return make_error("usage", message);
}

int report_error(std::ostream& err, const Error& e) {
    if (e.code == "usage") {
        err << "kaf: " << e.message << "\n";
        return kUsageError;
    }
    err << "kaf: " << e.code << ": " << e.message << "\n";
    return kDomainError;
}

struct Common {
    std::string registry_path;
    std::string audit_id;
    std::string output_path;
};

struct Ctx {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    const Common& common;
};

Result<Registry> open_registry(const Common& common) {
    std::string root = common.registry_path;
    if (root.empty()) {
        if (const char* env = std::getenv("KAF_REGISTRY")) root = env;
    }
    if (root.empty()) {
        return Error{usage_error("no registry given; pass --registry PATH or set KAF_REGISTRY")};
    }
    return Registry{fs::path(root)};
}

Result<std::string> select_audit(const Registry& registry, const Common& common) {
    if (!common.audit_id.empty()) return common.audit_id;
    auto ids = audit_ids(registry);
    if (ids.size() == 1) return *ids.begin();
    if (ids.empty()) {
        return Error{usage_error("registry holds no audits; run kaf init first")};
    }
    return Error{
        usage_error("registry holds " + std::to_string(ids.size()) + " audits; pass --audit ID")};
}

struct Session {
    Registry registry;
    Audit audit;
};

Result<Session> open_session(const Common& common) {
    auto registry = open_registry(common);
    if (!registry.ok()) return registry.error();
    auto id = select_audit(registry.value(), common);
    if (!id.ok()) return id.error();
    auto audit = load_audit(registry.value(), id.value());
    if (!audit.ok()) return audit.error();
    return Session{registry.value(), std::move(audit.value())};
}

Status write_output(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        return make_error("io-failure", "cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out.good()) {
        return make_error("io-failure", "write failed for " + path.string());
    }
    return {};
}

Result<std::string> event_timestamp(const std::string& at) {
    if (at.empty()) return now_timestamp_utc();
    if (!is_valid_timestamp(at)) {
        return Error{usage_error("--at must be an ISO-8601 UTC timestamp, YYYY-MM-DDTHH:MM:SSZ")};
    }
    return at;
}

Status check_note(const std::string& note) {
    if (note.find('\n') != std::string::npos || note.find('\r') != std::string::npos) {
        return usage_error("--note must be a single line");
    }
    return {};
}

// Saves and echoes the event line just appended; stdout carries only
// timestamps that are in the log.
int finish_event(Ctx& ctx, const Registry& registry, const Audit& audit) {
    if (auto s = save_audit(registry, audit); !s.ok()) {
        return report_error(ctx.err, s.error());
    }
    ctx.out << format_event_line(audit.events.back()) << "\n";
    return kOk;
}

std::string action_label(const EventKind& kind) {
    std::string label = event_kind_description(kind);
    if (const auto* v = std::get_if<ValidationReceived>(&kind)) {
        label += v->verdict == Verdict::valid ? " verdict=valid" : " verdict=invalid";
    }
    return label;
}

// ---------------------------------------------------------------------------
// init / project
// ---------------------------------------------------------------------------

int cmd_init(Ctx& ctx, const std::string& name, const std::string& created_on) {
    auto registry = open_registry(ctx.common);
    if (!registry.ok()) return report_error(ctx.err, registry.error());
    ProjectRecord project;
    project.project_name = trim(name);
    std::string date = created_on.empty() ? today_utc() : created_on;
    auto audit = new_audit(project, date, audit_ids(registry.value()));
    if (!audit.ok()) return report_error(ctx.err, audit.error());
    if (auto s = save_audit(registry.value(), audit.value()); !s.ok()) {
        return report_error(ctx.err, s.error());
    }
    ctx.out << "initialized audit " << audit.value().audit_id << "\n";
    return kOk;
}

int cmd_project_set(Ctx& ctx, const std::string& field, const std::string& value) {
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    Audit audit = std::move(session.value().audit);
    ProjectRecord& p = audit.project;
    std::string f = trim(field);
    std::string v = trim(value);
    if (f == "project_name") {
        p.project_name = v;
    } else if (f == "description") {
        p.description = v;
    } else if (f == "url") {
        p.url = v;
    } else if (f == "partner") {
        p.partners = split_list(value, ';');
    } else if (f == "funding_body") {
        p.funding_body = v;
    } else if (f == "ks_policy") {
        p.ks_policy = v;
    } else if (f == "contractual_clauses") {
        p.contractual_clauses = v;
    } else if (f == "km_contact") {
        p.km_contact = v;
    } else if (f == "duration") {
        p.duration = v;
    } else if (f == "publication") {
        p.publications = split_list(value, ';');
    } else {
        return report_error(
            ctx.err, usage_error("unknown project field '" + f +
                                 "' (project_name, description, url, partner, funding_body, "
                                 "ks_policy, contractual_clauses, km_contact, duration, "
                                 "publication; partner and publication split on ';')"));
    }
    auto findings = validate_project(p);
    if (!findings.empty()) {
        return report_error(ctx.err, make_error("invalid-project", format_findings(findings)));
    }
    if (auto s = save_audit(session.value().registry, audit); !s.ok()) {
        return report_error(ctx.err, s.error());
    }
    ctx.out << f << " updated\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// resource
// ---------------------------------------------------------------------------

struct ResourceFlags {
    std::optional<std::string> id;
    std::optional<std::string> name;
    std::optional<std::string> type;
    std::optional<std::string> description;
    std::optional<std::string> maintained_by;
    std::optional<std::string> last_updated;
    std::optional<std::string> next_review_due;
    std::optional<std::string> language;
    std::optional<std::string> standard_compliance;
    std::optional<std::string> policy_prescribed;
    std::optional<std::string> format;
    std::optional<std::string> license;
    std::optional<std::string> url;
    std::optional<std::string> other_location;
    std::optional<std::string> permission;
    std::optional<std::string> lifecycle;
    std::optional<std::string> corresponds_to;
};

void register_resource_flags(CLI::App* sub, ResourceFlags& f) {
    sub->add_option("--name", f.name, "resource name");
    sub->add_option("--type", f.type, "resource type, see 'other:<label>' for ad-hoc kinds");
    sub->add_option("--description", f.description, "free text");
    sub->add_option("--maintained-by", f.maintained_by, "maintainer name");
    sub->add_option("--last-updated", f.last_updated, "YYYY-MM-DD");
    sub->add_option("--next-review-due", f.next_review_due, "YYYY-MM-DD");
    sub->add_option("--language", f.language, "language tag, e.g. en or en-GB");
    sub->add_option("--standard-compliance", f.standard_compliance, "standard the resource follows");
    sub->add_option("--policy-prescribed", f.policy_prescribed,
                    "policy or clause that prescribes this resource");
    sub->add_option("--format", f.format, "format tag, e.g. pdf or other:<label>");
    sub->add_option("--license", f.license, "license name");
    sub->add_option("--url", f.url, "primary location");
    sub->add_option("--other-location", f.other_location, "secondary location");
    sub->add_option("--permission-required", f.permission, "yes or no");
    sub->add_option("--lifecycle-phase", f.lifecycle, "overrides the type's default phase");
    sub->add_option("--corresponds-to", f.corresponds_to,
                    "resource id of the systemic counterpart");
}

// Overlays provided flags onto the resource. An empty value clears the
// field back to unknown. Bad enum or tag values are usage errors.
Status apply_resource_flags(KnowledgeResource& r, const ResourceFlags& f) {
    if (f.id) r.resource_id = trim(*f.id);
    if (f.name) r.name = trim(*f.name);
    if (f.type) {
        auto t = parse_resource_type(trim(*f.type));
        if (!t.ok()) return usage_error("--type: " + t.error().message);
        r.resource_type = t.value();
    }
    if (f.description) r.description = trim(*f.description);
    if (f.maintained_by) r.maintained_by = trim(*f.maintained_by);
    if (f.last_updated) r.last_updated = trim(*f.last_updated);
    if (f.next_review_due) r.next_review_due = trim(*f.next_review_due);
    if (f.language) r.language = trim(*f.language);
    if (f.standard_compliance) r.standard_compliance = trim(*f.standard_compliance);
    if (f.policy_prescribed) r.policy_prescribed = trim(*f.policy_prescribed);
    if (f.format) {
        std::string v = trim(*f.format);
        if (v.empty()) {
            r.format.reset();
        } else {
            auto tag = parse_format_tag(v);
            if (!tag.ok()) return usage_error("--format: " + tag.error().message);
            r.format = tag.value();
        }
    }
    if (f.license) r.license = trim(*f.license);
    if (f.url) r.url = trim(*f.url);
    if (f.other_location) r.other_location = trim(*f.other_location);
    if (f.permission) {
        std::string v = trim(*f.permission);
        if (v.empty()) {
            r.permission_required.reset();
        } else if (v == "yes" || v == "no") {
            r.permission_required = (v == "yes");
        } else {
            return usage_error("--permission-required must be yes or no");
        }
    }
    if (f.lifecycle) {
        std::string v = trim(*f.lifecycle);
        if (v.empty()) {
            r.lifecycle_phase.reset();
        } else {
            auto p = parse_lifecycle_phase(v);
            if (!p.ok()) return usage_error("--lifecycle-phase: " + p.error().message);
            r.lifecycle_phase = p.value();
        }
    }
    if (f.corresponds_to) r.corresponds_to = trim(*f.corresponds_to);
    return {};
}

// Field-by-field prompts for whatever the flags did not provide. Findings
// are echoed inline and the field is asked again; an empty answer skips an
// optional field.
Result<KnowledgeResource> collect_resource(std::istream& in, std::ostream& out,
                                           const ResourceFlags& flags) {
    KnowledgeResource r;
    if (auto s = apply_resource_flags(r, flags); !s.ok()) return s.error();
    bool eof = false;

    auto prompt = [&](const char* label, bool required,
                      const std::function<Status(const std::string&)>& check)
        -> Result<std::string> {
        while (!eof) {
            out << label << ": " << std::flush;
            std::string line;
            if (!std::getline(in, line)) {
                eof = true;
                break;
            }
            std::string value = trim(line);
            if (value.empty()) {
                if (!required) return std::string();
                out << "  " << label << " is required\n";
                continue;
            }
            if (auto s = check(value); !s.ok()) {
                out << "  " << s.error().code << ": " << s.error().message << "\n";
                continue;
            }
            return value;
        }
        if (required) {
            return Error{
                usage_error(std::string("input ended before required field '") + label + "'")};
        }
        return std::string();
    };

    auto any = [](const std::string&) -> Status { return {}; };
    auto date_check = [](const std::string& v) -> Status {
        if (!is_valid_date(v)) {
            return make_error("invalid-date", "'" + v + "' is not a valid YYYY-MM-DD date");
        }
        return {};
    };
    auto language_check = [](const std::string& v) -> Status {
        if (!is_valid_language_tag(v)) {
            return make_error("invalid-language", "'" + v + "' is not a language tag");
        }
        return {};
    };
    auto url_check = [](const std::string& v) -> Status {
        if (!is_valid_url(v)) {
            return make_error("invalid-url", "'" + v + "' does not look like a URL");
        }
        return {};
    };
    auto type_check = [](const std::string& v) -> Status {
        auto t = parse_resource_type(v);
        if (!t.ok()) return t.error();
        return {};
    };
    auto format_check = [](const std::string& v) -> Status {
        auto t = parse_format_tag(v);
        if (!t.ok()) return t.error();
        return {};
    };
    auto phase_check = [](const std::string& v) -> Status {
        auto p = parse_lifecycle_phase(v);
        if (!p.ok()) return p.error();
        return {};
    };
    auto yes_no = [](const std::string& v) -> Status {
        if (v != "yes" && v != "no") return make_error("parse-error", "answer yes or no");
        return {};
    };

    auto text_field = [&](const std::optional<std::string>& flag, const char* label,
                          std::string& slot,
                          const std::function<Status(const std::string&)>& check) -> Status {
        if (flag) return {};
        auto v = prompt(label, false, check);
        if (!v.ok()) return v.error();
        slot = v.value();
        return {};
    };

    if (!flags.name) {
        auto v = prompt("name", true, any);
        if (!v.ok()) return v.error();
        r.name = v.value();
    }
    if (!flags.type) {
        std::string names;
        for (const auto& n : ClassificationTable::builtin().type_names()) {
            if (!names.empty()) names += ", ";
            names += n;
        }
        out << "resource types: " << names << " (or other:<label>)\n";
        auto v = prompt("resource_type", true, type_check);
        if (!v.ok()) return v.error();
        r.resource_type = parse_resource_type(v.value()).value();
    }
    if (auto s = text_field(flags.description, "description", r.description, any); !s.ok()) return s.error();
    if (auto s = text_field(flags.maintained_by, "maintained_by", r.maintained_by, any); !s.ok()) return s.error();
    if (auto s = text_field(flags.last_updated, "last_updated", r.last_updated, date_check); !s.ok()) return s.error();
    if (auto s = text_field(flags.next_review_due, "next_review_due", r.next_review_due, date_check); !s.ok()) return s.error();
    if (auto s = text_field(flags.language, "language", r.language, language_check); !s.ok()) return s.error();
    if (auto s = text_field(flags.standard_compliance, "standard_compliance", r.standard_compliance, any); !s.ok()) return s.error();
    if (auto s = text_field(flags.policy_prescribed, "policy_prescribed", r.policy_prescribed, any); !s.ok()) return s.error();
    if (!flags.format) {
        auto v = prompt("format", false, format_check);
        if (!v.ok()) return v.error();
        if (!v.value().empty()) r.format = parse_format_tag(v.value()).value();
    }
    if (auto s = text_field(flags.license, "license", r.license, any); !s.ok()) return s.error();
    if (auto s = text_field(flags.url, "url", r.url, url_check); !s.ok()) return s.error();
    if (auto s = text_field(flags.other_location, "other_location", r.other_location, url_check); !s.ok()) return s.error();
    if (!flags.permission) {
        auto v = prompt("permission_required (yes/no)", false, yes_no);
        if (!v.ok()) return v.error();
        if (!v.value().empty()) r.permission_required = (v.value() == "yes");
    }
    if (!flags.lifecycle) {
        auto v = prompt("lifecycle_phase", false, phase_check);
        if (!v.ok()) return v.error();
        if (!v.value().empty()) r.lifecycle_phase = parse_lifecycle_phase(v.value()).value();
    }
    if (auto s = text_field(flags.corresponds_to, "corresponds_to", r.corresponds_to, any); !s.ok()) return s.error();
    return r;
}

int cmd_resource_add(Ctx& ctx, const ResourceFlags& flags) {
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    const Audit& audit = session.value().audit;

    KnowledgeResource resource;
    if (flags.name && flags.type) {
        if (auto s = apply_resource_flags(resource, flags); !s.ok()) {
            return report_error(ctx.err, s.error());
        }
    } else {
        // Fail on stage problems before asking sixteen questions.
        KnowledgeResource stage_probe;
        stage_probe.name = "probe";
        stage_probe.resource_type = {ResourceType::Kind::test_plan, ""};
        if (auto attempt = add_resource(audit, stage_probe);
            !attempt.ok() && attempt.error().code == "wrong-stage") {
            return report_error(ctx.err, attempt.error());
        }
        auto collected = collect_resource(ctx.in, ctx.out, flags);
        if (!collected.ok()) return report_error(ctx.err, collected.error());
        resource = collected.value();
    }

    auto added = add_resource(audit, resource);
    if (!added.ok()) return report_error(ctx.err, added.error());
    if (auto s = save_audit(session.value().registry, added.value()); !s.ok()) {
        return report_error(ctx.err, s.error());
    }
    const KnowledgeResource& stored = added.value().resources.back();
    ctx.out << "added " << stored.resource_id << " " << stored.name << "\n";
    return kOk;
}

int cmd_resource_edit(Ctx& ctx, const std::string& id, const ResourceFlags& flags) {
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    const Audit& audit = session.value().audit;
    std::string rid = trim(id);
    const KnowledgeResource* found = nullptr;
    for (const auto& r : audit.resources) {
        if (r.resource_id == rid) {
            found = &r;
            break;
        }
    }
    if (!found) {
        return report_error(ctx.err, make_error("not-found", "no resource '" + rid + "' in audit '" +
                                                                 audit.audit_id + "'"));
    }
    KnowledgeResource updated = *found;
    if (auto s = apply_resource_flags(updated, flags); !s.ok()) {
        return report_error(ctx.err, s.error());
    }
    auto replaced = replace_resource(audit, updated);
    if (!replaced.ok()) return report_error(ctx.err, replaced.error());
    if (auto s = save_audit(session.value().registry, replaced.value()); !s.ok()) {
        return report_error(ctx.err, s.error());
    }
    ctx.out << "updated " << rid << "\n";
    return kOk;
}

int cmd_resource_list(Ctx& ctx) {
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    auto rows = session.value().audit.resources;
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.resource_id < b.resource_id;
    });
    for (const auto& r : rows) {
        ctx.out << r.resource_id << "  " << r.name << "  " << resource_type_name(r.resource_type)
                << "\n";
    }
    return kOk;
}

int cmd_resource_show(Ctx& ctx, const std::string& id) {
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    const Audit& audit = session.value().audit;
    std::string rid = trim(id);
    for (const auto& r : audit.resources) {
        if (r.resource_id == rid) {
            auto text = write_records({resource_record(r)});
            if (!text.ok()) return report_error(ctx.err, text.error());
            ctx.out << text.value();
            return kOk;
        }
    }
    return report_error(ctx.err, make_error("not-found", "no resource '" + rid + "' in audit '" +
                                                             audit.audit_id + "'"));
}

// ---------------------------------------------------------------------------
// stage
// ---------------------------------------------------------------------------

int cmd_stage_status(Ctx& ctx) {
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    const Audit& audit = session.value().audit;
    const WorkflowState& w = audit.workflow;
    ctx.out << "stage: " << stage_name(w.stage) << "\n";
    ctx.out << "completed:";
    if (w.completed_steps.empty()) {
        ctx.out << " (none)";
    } else {
        for (StepId s : w.completed_steps) ctx.out << " " << step_name(s);
    }
    ctx.out << "\n";
    if (w.current_report_version) {
        ctx.out << "report: v" << *w.current_report_version;
        if (const ReportVersion* v = find_version(audit, *w.current_report_version)) {
            ctx.out << " (" << report_status_name(v->status) << ")";
        }
        ctx.out << "\n";
    }
    if (w.loop_count > 0) {
        ctx.out << "validation loops: " << w.loop_count << "\n";
    }
    auto next = legal_events(w);
    if (next.empty()) {
        ctx.out << "next: (none)\n";
    } else {
        for (const auto& kind : next) {
            ctx.out << "next: " << action_label(kind) << "\n";
        }
    }
    return kOk;
}

int cmd_stage_step(Ctx& ctx, const std::string& step, const std::string& at,
                   const std::string& note) {
    auto parsed = parse_step(trim(step));
    if (!parsed.ok()) return report_error(ctx.err, usage_error(parsed.error().message));
    if (auto s = check_note(note); !s.ok()) return report_error(ctx.err, s.error());
    auto ts = event_timestamp(at);
    if (!ts.ok()) return report_error(ctx.err, ts.error());
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    auto applied = audit_apply(session.value().audit,
                               {ts.value(), EventKind{StepCompleted{parsed.value()}}, note});
    if (!applied.ok()) return report_error(ctx.err, applied.error());
    return finish_event(ctx, session.value().registry, applied.value());
}

Result<EventKind> build_event_kind(const std::string& kind, const std::string& verdict,
                                   std::optional<int> version, const WorkflowState& state) {
    int current = state.current_report_version.value_or(0);
    if (kind == "validation_received") {
        if (verdict.empty()) {
            return Error{usage_error("validation_received needs --verdict valid|invalid")};
        }
        if (verdict != "valid" && verdict != "invalid") {
            return Error{usage_error("--verdict must be valid or invalid")};
        }
        return EventKind{ValidationReceived{version.value_or(current),
                                            verdict == "valid" ? Verdict::valid : Verdict::invalid}};
    }
    if (!verdict.empty()) {
        return Error{usage_error("--verdict applies only to validation_received")};
    }
    if (kind == "report_sent") return EventKind{ReportSent{version.value_or(current)}};
    if (kind == "interview_held") return EventKind{InterviewHeld{version.value_or(current)}};
    if (kind == "report_amended") return EventKind{ReportAmended{version.value_or(current + 1)}};
    if (kind == "audit_closed") {
        if (version) return Error{usage_error("audit_closed takes no --version")};
        return EventKind{AuditClosed{}};
    }
    if (kind == "step_completed") {
        return Error{usage_error("use kaf stage step <id> to record steps")};
    }
    return Error{usage_error("unknown event kind '" + kind +
                             "' (report_sent, validation_received, interview_held, "
                             "report_amended, audit_closed)")};
}

int cmd_stage_event(Ctx& ctx, const std::string& kind, const std::string& verdict,
                    std::optional<int> version, const std::string& at, const std::string& note) {
    if (auto s = check_note(note); !s.ok()) return report_error(ctx.err, s.error());
    auto ts = event_timestamp(at);
    if (!ts.ok()) return report_error(ctx.err, ts.error());
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    auto built = build_event_kind(trim(kind), trim(verdict), version,
                                  session.value().audit.workflow);
    if (!built.ok()) return report_error(ctx.err, built.error());
    auto applied = audit_apply(session.value().audit, {ts.value(), built.value(), note});
    if (!applied.ok()) return report_error(ctx.err, applied.error());
    return finish_event(ctx, session.value().registry, applied.value());
}

// ---------------------------------------------------------------------------
// letter / export / score
// ---------------------------------------------------------------------------

std::string summary_text(const AssessmentResult& a) {
    int answered = 0;
    for (const auto& s : a.scores) answered += s.answered ? 1 : 0;
    std::ostringstream text;
    text << "answered " << answered << " of " << a.scores.size() << " audit questions (";
    for (size_t i = 0; i < a.scores.size(); ++i) {
        if (i > 0) text << ", ";
        text << "Q" << a.scores[i].question << " " << ratio_string(a.scores[i].coverage);
    }
    text << ")";
    return text.str();
}

std::string recommendations_text(const AssessmentResult& a) {
    if (a.recommendations.empty()) return "- none";
    std::string text;
    for (const auto& r : a.recommendations) {
        if (!text.empty()) text += "\n";
        text += "- " + r.code + " (" + r.subject + "): " + r.text;
    }
    return text;
}

std::string project_list_text(const AuditListing& listing) {
    std::string text;
    for (const auto& row : listing.rows) {
        if (!text.empty()) text += "\n";
        text += "- " + row.project_name;
    }
    return text;
}

std::string next_letter_file(const fs::path& dir, const std::string& kind) {
    int n = 1;
    while (fs::exists(dir / (kind + "-" + std::to_string(n) + ".txt"))) ++n;
    return kind + "-" + std::to_string(n) + ".txt";
}

int cmd_letter_render(Ctx& ctx, const std::string& kind_name,
                      const std::vector<std::string>& sets) {
    auto kind = parse_letter_kind(trim(kind_name));
    if (!kind.ok()) return report_error(ctx.err, usage_error(kind.error().message));
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    const Registry& registry = session.value().registry;
    const Audit& audit = session.value().audit;
    auto table = load_classification(registry);
    if (!table.ok()) return report_error(ctx.err, table.error());
    AssessmentResult assessment = assess(audit, table.value());

    LetterContext context;
    int shared = 0;
    for (const auto& r : audit.resources) {
        if (shared_status(r) == SharedStatus::shared) ++shared;
    }
    context["resource_count"] = std::to_string(shared);
    context["summary"] = summary_text(assessment);
    context["recommendations"] = recommendations_text(assessment);
    if (!audit.project.km_contact.empty()) {
        context["km_contact_name"] = audit.project.km_contact;
    }
    if (kind.value() == LetterKind::funder_notice) {
        context["project_list"] = project_list_text(list_audits(registry));
    }
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || trim(kv.substr(0, eq)).empty()) {
            return report_error(ctx.err, usage_error("--set expects key=value, got '" + kv + "'"));
        }
        context[trim(kv.substr(0, eq))] = kv.substr(eq + 1);
    }

    auto body = render_letter(kind.value(), context);
    if (!body.ok()) return report_error(ctx.err, body.error());

    fs::path target;
    if (!ctx.common.output_path.empty()) {
        target = ctx.common.output_path;
    } else {
        fs::path dir = audit_dir(registry, audit.audit_id) / "reports";
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) {
            return report_error(ctx.err, make_error("io-failure", "cannot create " + dir.string() +
                                                                      ": " + ec.message()));
        }
        target = dir / next_letter_file(dir, letter_kind_name(kind.value()));
    }
    if (auto s = write_output(target, body.value()); !s.ok()) {
        return report_error(ctx.err, s.error());
    }
    ctx.err << "wrote " << target.string() << "\n";
    ctx.out << body.value();
    return kOk;
}

int cmd_export_dc(Ctx& ctx, const std::string& id) {
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    const Audit& audit = session.value().audit;
    std::string rid = trim(id);
    const KnowledgeResource* found = nullptr;
    for (const auto& r : audit.resources) {
        if (r.resource_id == rid) {
            found = &r;
            break;
        }
    }
    if (!found) {
        return report_error(ctx.err, make_error("not-found", "no resource '" + rid + "' in audit '" +
                                                                 audit.audit_id + "'"));
    }
    auto dc = export_dc(*found);
    if (!dc.ok()) return report_error(ctx.err, dc.error());
    std::string text = serialize_dc(dc.value());
    if (!ctx.common.output_path.empty()) {
        if (auto s = write_output(ctx.common.output_path, text); !s.ok()) {
            return report_error(ctx.err, s.error());
        }
        return kOk;
    }
    ctx.out << text;
    return kOk;
}

int cmd_score(Ctx& ctx) {
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    auto table = load_classification(session.value().registry);
    if (!table.ok()) return report_error(ctx.err, table.error());
    AssessmentResult a = assess(session.value().audit, table.value());
    for (const auto& s : a.scores) {
        ctx.out << "Q" << s.question << " coverage " << ratio_string(s.coverage) << " answered "
                << (s.answered ? "yes" : "no") << "\n";
        for (const auto& line : s.answer) ctx.out << "  answer: " << line << "\n";
        for (const auto& m : s.missing) ctx.out << "  missing: " << m.subject << " " << m.field << "\n";
    }
    if (a.postulate_violations.empty()) {
        ctx.out << "postulate violations: none\n";
    } else {
        ctx.out << "postulate violations:\n";
        for (const auto& id : a.postulate_violations) ctx.out << "  - " << id << "\n";
    }
    if (a.recommendations.empty()) {
        ctx.out << "recommendations: none\n";
    } else {
        ctx.out << "recommendations:\n";
        for (const auto& r : a.recommendations) {
            ctx.out << "  - " << r.code << " [" << dimension_tag_name(r.dimension) << "] "
                    << r.subject << ": " << r.text << "\n";
        }
    }
    ctx.out << "heuristic valid: " << (a.heuristic_valid ? "yes" : "no") << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

int cmd_report_draft(Ctx& ctx, const std::string& at) {
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    const Registry& registry = session.value().registry;
    Audit audit = std::move(session.value().audit);
    auto table = load_classification(registry);
    if (!table.ok()) return report_error(ctx.err, table.error());

    const WorkflowState& w = audit.workflow;
    if (w.stage == Stage::verification && w.review_phase == ReviewPhase::idle) {
        auto ts = event_timestamp(at);
        if (!ts.ok()) return report_error(ctx.err, ts.error());
        auto applied = audit_apply(audit, {ts.value(), EventKind{StepCompleted{StepId::s3_1}}, ""});
        if (!applied.ok()) return report_error(ctx.err, applied.error());
        audit = std::move(applied.value());
    } else if (w.stage == Stage::verification && w.review_phase == ReviewPhase::drafted) {
        // regenerating the current draft is fine; no new event
    } else {
        std::string reason;
        int current = w.current_report_version.value_or(0);
        switch (w.stage) {
            case Stage::planning:
            case Stage::execution:
                reason = "stage is " + stage_name(w.stage) + "; finish the execution stage first";
                break;
            case Stage::verification:
                if (w.review_phase == ReviewPhase::sent) {
                    reason = "report v" + std::to_string(current) + " is out for validation";
                } else if (w.review_phase == ReviewPhase::rejected) {
                    reason = "report v" + std::to_string(current) +
                             " came back invalid; record interview_held and report_amended";
                } else {
                    reason = "record report_amended to open the next draft";
                }
                break;
            case Stage::reporting:
                reason = "report v" + std::to_string(current) +
                         " is validated; run kaf report finalize";
                break;
            case Stage::closed:
                reason = "audit is closed";
                break;
        }
        return report_error(ctx.err, make_error("wrong-stage", reason));
    }

    AssessmentResult assessment = assess(audit, table.value());
    auto doc = draft_report(audit, assessment, table.value());
    if (!doc.ok()) return report_error(ctx.err, doc.error());
    auto body = serialize_report(doc.value());
    if (!body.ok()) return report_error(ctx.err, body.error());
    auto updated = with_report_body(audit, doc.value().version, body.value());
    if (!updated.ok()) return report_error(ctx.err, updated.error());
    if (auto s = save_audit(registry, updated.value()); !s.ok()) {
        return report_error(ctx.err, s.error());
    }
    if (!ctx.common.output_path.empty()) {
        if (auto s = write_output(ctx.common.output_path, body.value()); !s.ok()) {
            return report_error(ctx.err, s.error());
        }
    }
    ctx.out << "drafted report v" << doc.value().version << "\n";
    return kOk;
}

int cmd_report_finalize(Ctx& ctx, const std::string& feedback, const std::string& at) {
    auto ts = event_timestamp(at);
    if (!ts.ok()) return report_error(ctx.err, ts.error());
    auto session = open_session(ctx.common);
    if (!session.ok()) return report_error(ctx.err, session.error());
    const Registry& registry = session.value().registry;
    const Audit& audit = session.value().audit;

    if (!audit.workflow.current_report_version) {
        return report_error(ctx.err, make_error("not-validated", "no report has been drafted yet"));
    }
    int version = *audit.workflow.current_report_version;
    const ReportVersion* current = find_version(audit, version);
    if (!current) {
        return report_error(ctx.err, make_error("not-found", "report v" + std::to_string(version) +
                                                                 " has no stored version"));
    }
    if (current->status != ReportStatus::validated) {
        return report_error(
            ctx.err, make_error("not-validated", "report v" + std::to_string(version) +
                                                     " status is " +
                                                     report_status_name(current->status)));
    }
    auto doc = parse_report(current->body);
    if (!doc.ok()) return report_error(ctx.err, doc.error());
    auto final_doc = finalize_report(audit, doc.value(), feedback);
    if (!final_doc.ok()) return report_error(ctx.err, final_doc.error());
    auto body = serialize_report(final_doc.value());
    if (!body.ok()) return report_error(ctx.err, body.error());
    auto applied = audit_apply(audit, {ts.value(), EventKind{StepCompleted{StepId::s4_1}}, ""});
    if (!applied.ok()) return report_error(ctx.err, applied.error());
    auto updated = with_report_body(applied.value(), version, body.value());
    if (!updated.ok()) return report_error(ctx.err, updated.error());
    if (auto s = save_audit(registry, updated.value()); !s.ok()) {
        return report_error(ctx.err, s.error());
    }
    if (!ctx.common.output_path.empty()) {
        if (auto s = write_output(ctx.common.output_path, body.value()); !s.ok()) {
            return report_error(ctx.err, s.error());
        }
    }
    ctx.out << "finalized report v" << version << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

int cmd_registry_list(Ctx& ctx) {
    auto registry = open_registry(ctx.common);
    if (!registry.ok()) return report_error(ctx.err, registry.error());
    AuditListing listing = list_audits(registry.value());
    for (const auto& row : listing.rows) {
        ctx.out << row.audit_id << "  " << row.project_name << "  " << stage_name(row.stage)
                << "\n";
    }
    for (const auto& warning : listing.warnings) {
        ctx.err << "warning: " << warning << "\n";
    }
    return kOk;
}

int cmd_registry_unlock(Ctx& ctx) {
    auto registry = open_registry(ctx.common);
    if (!registry.ok()) return report_error(ctx.err, registry.error());
    auto id = select_audit(registry.value(), ctx.common);
    if (!id.ok()) return report_error(ctx.err, id.error());
    auto removed = unlock_audit(registry.value(), id.value());
    if (!removed.ok()) return report_error(ctx.err, removed.error());
    ctx.out << (removed.value() ? "lock removed\n" : "no lock present\n");
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"knowledge audit registry and workflow tool", "kaf"};
    app.require_subcommand(1);

    Common common;
    Ctx ctx{in, out, err, common};
    int code = kOk;

    app.add_option("--registry", common.registry_path, "registry root (or env KAF_REGISTRY)");
    app.add_option("--audit", common.audit_id, "audit id (defaults to the registry's only audit)");
    app.add_option("--output", common.output_path, "write letters and exports to this file");

    auto sub = [](CLI::App* parent, const std::string& name, const std::string& desc) {
        CLI::App* s = parent->add_subcommand(name, desc);
        s->fallthrough();
        return s;
    };

    std::string init_name;
    std::string init_created;
    CLI::App* init = sub(&app, "init", "create a new audit for a project");
    init->add_option("--name", init_name, "project name")->required();
    init->add_option("--created-on", init_created, "creation date YYYY-MM-DD (default: today)");
    init->callback([&] { code = cmd_init(ctx, init_name, init_created); });

    CLI::App* project = sub(&app, "project", "maintain the project record");
    project->require_subcommand(1);
    std::string project_field;
    std::string project_value;
    CLI::App* project_set = sub(project, "set", "set one project field");
    project_set->add_option("field", project_field, "field name, e.g. km_contact")->required();
    project_set->add_option("value", project_value, "new value; an empty string clears")
        ->required();
    project_set->callback([&] { code = cmd_project_set(ctx, project_field, project_value); });

    CLI::App* resource = sub(&app, "resource", "maintain the knowledge inventory");
    resource->require_subcommand(1);
    ResourceFlags add_flags;
    CLI::App* resource_add = sub(resource, "add", "add a resource (prompts for missing fields)");
    resource_add->add_option("--id", add_flags.id, "explicit id Rnnn (default: next free)");
    register_resource_flags(resource_add, add_flags);
    resource_add->callback([&] { code = cmd_resource_add(ctx, add_flags); });
    std::string edit_id;
    ResourceFlags edit_flags;
    CLI::App* resource_edit = sub(resource, "edit", "update fields of one resource");
    resource_edit->add_option("id", edit_id, "resource id")->required();
    register_resource_flags(resource_edit, edit_flags);
    resource_edit->callback([&] { code = cmd_resource_edit(ctx, edit_id, edit_flags); });
    CLI::App* resource_list = sub(resource, "list", "list resources");
    resource_list->callback([&] { code = cmd_resource_list(ctx); });
    std::string show_id;
    CLI::App* resource_show = sub(resource, "show", "print one resource record");
    resource_show->add_option("id", show_id, "resource id")->required();
    resource_show->callback([&] { code = cmd_resource_show(ctx, show_id); });

    CLI::App* stage = sub(&app, "stage", "inspect and advance the workflow");
    stage->require_subcommand(1);
    CLI::App* stage_status = sub(stage, "status", "current stage, steps, and next actions");
    stage_status->callback([&] { code = cmd_stage_status(ctx); });
    std::string step_id;
    std::string step_at;
    std::string step_note;
    CLI::App* stage_step = sub(stage, "step", "record a completed step");
    stage_step->add_option("id", step_id, "step id, s1_1 .. s4_3")->required();
    stage_step->add_option("--at", step_at, "event timestamp (default: now, UTC)");
    stage_step->add_option("--note", step_note, "single-line note stored on the event");
    stage_step->callback([&] { code = cmd_stage_step(ctx, step_id, step_at, step_note); });
    std::string event_kind;
    std::string event_verdict;
    std::optional<int> event_version;
    std::string event_at;
    std::string event_note;
    CLI::App* stage_event = sub(stage, "event", "record a review event");
    stage_event->add_option("kind", event_kind,
                            "report_sent, validation_received, interview_held, report_amended, "
                            "or audit_closed")
        ->required();
    stage_event->add_option("--verdict", event_verdict, "valid or invalid");
    stage_event->add_option("--version", event_version,
                            "report version (default: the current one)");
    stage_event->add_option("--at", event_at, "event timestamp (default: now, UTC)");
    stage_event->add_option("--note", event_note, "single-line note stored on the event");
    stage_event->callback([&] {
        code = cmd_stage_event(ctx, event_kind, event_verdict, event_version, event_at, event_note);
    });

    CLI::App* letter = sub(&app, "letter", "render notification letters");
    letter->require_subcommand(1);
    std::string letter_kind;
    std::vector<std::string> letter_sets;
    CLI::App* letter_render = sub(letter, "render", "render one letter to reports/ and stdout");
    letter_render
        ->add_option("kind", letter_kind,
                     "funder_notice, leader_notice, verify_findings, or final_findings")
        ->required();
    letter_render->add_option("--set", letter_sets, "placeholder value, key=value; repeatable");
    letter_render->callback([&] { code = cmd_letter_render(ctx, letter_kind, letter_sets); });

    CLI::App* exp = sub(&app, "export", "export resources to other formats");
    exp->require_subcommand(1);
    std::string export_id;
    CLI::App* export_dc_cmd = sub(exp, "dc", "Dublin Core record for one resource");
    export_dc_cmd->add_option("id", export_id, "resource id")->required();
    export_dc_cmd->callback([&] { code = cmd_export_dc(ctx, export_id); });

    CLI::App* score_cmd = sub(&app, "score", "run the five-question assessment");
    score_cmd->callback([&] { code = cmd_score(ctx); });

    CLI::App* report = sub(&app, "report", "draft and finalize the audit report");
    report->require_subcommand(1);
    std::string draft_at;
    CLI::App* report_draft = sub(report, "draft", "build the current draft report");
    report_draft->add_option("--at", draft_at, "timestamp for the drafting step");
    report_draft->callback([&] { code = cmd_report_draft(ctx, draft_at); });
    std::string finalize_feedback;
    std::string finalize_at;
    CLI::App* report_finalize = sub(report, "finalize", "finalize the validated report");
    report_finalize->add_option("--feedback", finalize_feedback, "team feedback to attach");
    report_finalize->add_option("--at", finalize_at, "timestamp for the approval step");
    report_finalize->callback([&] { code = cmd_report_finalize(ctx, finalize_feedback, finalize_at); });

    CLI::App* registry_cmd = sub(&app, "registry", "registry-wide operations");
    registry_cmd->require_subcommand(1);
    CLI::App* registry_list = sub(registry_cmd, "list", "list audits with project and stage");
    registry_list->callback([&] { code = cmd_registry_list(ctx); });
    CLI::App* registry_unlock = sub(registry_cmd, "unlock", "clear a leftover audit lock");
    registry_unlock->callback([&] { code = cmd_registry_unlock(ctx); });

    try {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("kaf");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
        out << target->help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        const CLI::App* target = &app;
        while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
        out << target->help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "kaf: " << e.what() << "\n";
        return kUsageError;
    }
    return code;
}

}  // namespace kaf::cli
