#include "kaf/report.hpp"

#include <algorithm>

#include "kaf/record_file.hpp"
#include "kaf/text.hpp"

namespace kaf {
namespace {

void put(std::vector<Field>& fields, const char* name, const std::string& value) {
    if (!value.empty()) fields.push_back({name, value});
}

Record report_record(const ReportDocument& doc) {
    Record rec;
    rec.type = "report";
    auto& f = rec.fields;
    f.push_back({"audit_id", doc.audit_id});
    f.push_back({"project_name", doc.project.project_name});
    f.push_back({"date", doc.date});
    f.push_back({"version", std::to_string(doc.version)});
    f.push_back({"status", doc.status});
    put(f, "description", doc.project.description);
    put(f, "url", doc.project.url);
    for (const auto& p : doc.project.partners) put(f, "partner", p);
    put(f, "funding_body", doc.project.funding_body);
    put(f, "ks_policy", doc.project.ks_policy);
    put(f, "contractual_clauses", doc.project.contractual_clauses);
    put(f, "km_contact", doc.project.km_contact);
    put(f, "duration", doc.project.duration);
    for (const auto& p : doc.project.publications) put(f, "publication", p);
    f.push_back({"heuristic_valid", doc.assessment.heuristic_valid ? "yes" : "no"});
    for (const auto& id : doc.assessment.postulate_violations) put(f, "postulate_violation", id);
    put(f, "feedback", doc.feedback);
    return rec;
}

Record row_record(const InventoryRow& row) {
    const KnowledgeResource& r = row.resource;
    Record rec;
    rec.type = "row";
    auto& f = rec.fields;
    f.push_back({"resource_id", r.resource_id});
    f.push_back({"name", r.name});
    f.push_back({"resource_type", resource_type_name(r.resource_type)});
    put(f, "description", r.description);
    put(f, "maintained_by", r.maintained_by);
    put(f, "last_updated", r.last_updated);
    put(f, "next_review_due", r.next_review_due);
    put(f, "language", r.language);
    put(f, "standard_compliance", r.standard_compliance);
    put(f, "policy_prescribed", r.policy_prescribed);
    if (r.format) put(f, "format", format_tag_name(*r.format));
    put(f, "license", r.license);
    put(f, "url", r.url);
    put(f, "other_location", r.other_location);
    if (r.permission_required) {
        f.push_back({"permission_required", *r.permission_required ? "yes" : "no"});
    }
    if (r.lifecycle_phase) {
        f.push_back({"lifecycle_phase", lifecycle_phase_name(*r.lifecycle_phase)});
    }
    put(f, "corresponds_to", r.corresponds_to);
    f.push_back({"effective_lifecycle_phase", lifecycle_phase_name(row.lifecycle.phase)});
    put(f, "representation", row.lifecycle.representation);
    put(f, "notation", row.lifecycle.notation);
    f.push_back({"nonaka_class", nonaka_class_name(row.nonaka)});
    f.push_back({"knowledge_category", knowledge_category_name(row.category)});
    f.push_back({"romiszowski_category", rom_category_name(row.romiszowski.category)});
    f.push_back({"romiszowski_label", row.romiszowski.sub_label});
    f.push_back({"shared", shared_status_name(row.shared)});
    return rec;
}

Record score_record(const QuestionScore& score) {
    Record rec;
    rec.type = "score";
    auto& f = rec.fields;
    f.push_back({"question", "Q" + std::to_string(score.question)});
    f.push_back({"coverage", ratio_string(score.coverage)});
    f.push_back({"answered", score.answered ? "yes" : "no"});
    for (const auto& a : score.answer) put(f, "answer", a);
    for (const auto& m : score.missing) f.push_back({"missing", m.subject + ":" + m.field});
    return rec;
}

Record rec_record(const Recommendation& r) {
    Record rec;
    rec.type = "rec";
    rec.fields.push_back({"code", r.code});
    rec.fields.push_back({"dimension", dimension_tag_name(r.dimension)});
    rec.fields.push_back({"subject", r.subject});
    rec.fields.push_back({"text", r.text});
    return rec;
}

Result<std::string> require(const Record& rec, const char* name) {
    auto v = rec.get(name);
    if (!v || v->empty()) {
        return Error{make_error("parse-error",
                                "[" + rec.type + "] record lacks field '" + name + "'")};
    }
    return *v;
}

Result<bool> parse_yes_no(const std::string& value, const char* what) {
    if (value == "yes") return true;
    if (value == "no") return false;
    return Error{make_error("parse-error",
                            std::string(what) + " must be yes or no, got '" + value + "'")};
}

Result<ReportDocument> parse_header(const Record& rec, ReportDocument& doc) {
    auto audit_id = require(rec, "audit_id");
    if (!audit_id.ok()) return audit_id.error();
    doc.audit_id = audit_id.value();
    auto name = require(rec, "project_name");
    if (!name.ok()) return name.error();
    doc.project.project_name = name.value();
    auto date = require(rec, "date");
    if (!date.ok()) return date.error();
    doc.date = date.value();
    auto version = require(rec, "version");
    if (!version.ok()) return version.error();
    const std::string& v = version.value();
    if (v.empty() || v.size() > 9 ||
        !std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        std::stoi(v) < 1) {
        return Error{make_error("parse-error", "bad report version '" + v + "'")};
    }
    doc.version = std::stoi(v);
    auto status = require(rec, "status");
    if (!status.ok()) return status.error();
    if (status.value() != "draft" && status.value() != "final") {
        return Error{make_error("parse-error", "bad report status '" + status.value() + "'")};
    }
    doc.status = status.value();
    doc.project.description = rec.get("description").value_or("");
    doc.project.url = rec.get("url").value_or("");
    doc.project.partners = rec.get_all("partner");
    doc.project.funding_body = rec.get("funding_body").value_or("");
    doc.project.ks_policy = rec.get("ks_policy").value_or("");
    doc.project.contractual_clauses = rec.get("contractual_clauses").value_or("");
    doc.project.km_contact = rec.get("km_contact").value_or("");
    doc.project.duration = rec.get("duration").value_or("");
    doc.project.publications = rec.get_all("publication");
    auto hv = require(rec, "heuristic_valid");
    if (!hv.ok()) return hv.error();
    auto hv_flag = parse_yes_no(hv.value(), "heuristic_valid");
    if (!hv_flag.ok()) return hv_flag.error();
    doc.assessment.heuristic_valid = hv_flag.value();
    doc.assessment.postulate_violations = rec.get_all("postulate_violation");
    doc.feedback = rec.get("feedback").value_or("");
    return doc;
}

Result<InventoryRow> parse_row(const Record& rec) {
    InventoryRow row;
    KnowledgeResource& r = row.resource;
    auto id = require(rec, "resource_id");
    if (!id.ok()) return id.error();
    r.resource_id = id.value();
    auto name = require(rec, "name");
    if (!name.ok()) return name.error();
    r.name = name.value();
    auto type_name = require(rec, "resource_type");
    if (!type_name.ok()) return type_name.error();
    auto type = parse_resource_type(type_name.value());
    if (!type.ok()) return type.error();
    r.resource_type = type.value();
    r.description = rec.get("description").value_or("");
    r.maintained_by = rec.get("maintained_by").value_or("");
    r.last_updated = rec.get("last_updated").value_or("");
    r.next_review_due = rec.get("next_review_due").value_or("");
    r.language = rec.get("language").value_or("");
    r.standard_compliance = rec.get("standard_compliance").value_or("");
    r.policy_prescribed = rec.get("policy_prescribed").value_or("");
    if (auto v = rec.get("format")) {
        auto tag = parse_format_tag(*v);
        if (!tag.ok()) return tag.error();
        r.format = tag.value();
    }
    r.license = rec.get("license").value_or("");
    r.url = rec.get("url").value_or("");
    r.other_location = rec.get("other_location").value_or("");
    if (auto v = rec.get("permission_required")) {
        auto flag = parse_yes_no(*v, "permission_required");
        if (!flag.ok()) return flag.error();
        r.permission_required = flag.value();
    }
    if (auto v = rec.get("lifecycle_phase")) {
        auto phase = parse_lifecycle_phase(*v);
        if (!phase.ok()) return phase.error();
        r.lifecycle_phase = phase.value();
    }
    r.corresponds_to = rec.get("corresponds_to").value_or("");

    auto phase_name = require(rec, "effective_lifecycle_phase");
    if (!phase_name.ok()) return phase_name.error();
    auto phase = parse_lifecycle_phase(phase_name.value());
    if (!phase.ok()) return phase.error();
    row.lifecycle.phase = phase.value();
    row.lifecycle.representation = rec.get("representation").value_or("");
    row.lifecycle.notation = rec.get("notation").value_or("");
    auto nonaka_name = require(rec, "nonaka_class");
    if (!nonaka_name.ok()) return nonaka_name.error();
    auto nonaka = parse_nonaka_class(nonaka_name.value());
    if (!nonaka.ok()) return nonaka.error();
    row.nonaka = nonaka.value();
    auto category_name = require(rec, "knowledge_category");
    if (!category_name.ok()) return category_name.error();
    auto category = parse_knowledge_category(category_name.value());
    if (!category.ok()) return category.error();
    row.category = category.value();
    auto rom_name = require(rec, "romiszowski_category");
    if (!rom_name.ok()) return rom_name.error();
    auto rom = parse_rom_category(rom_name.value());
    if (!rom.ok()) return rom.error();
    auto label = require(rec, "romiszowski_label");
    if (!label.ok()) return label.error();
    if (!rom_label_in_category(rom.value(), label.value())) {
        return Error{make_error("parse-error", "label '" + label.value() + "' does not belong to " +
                                                   rom_category_name(rom.value()))};
    }
    row.romiszowski = {rom.value(), label.value()};
    auto shared_name = require(rec, "shared");
    if (!shared_name.ok()) return shared_name.error();
    auto shared = parse_shared_status(shared_name.value());
    if (!shared.ok()) return shared.error();
    row.shared = shared.value();
    return row;
}

Result<QuestionScore> parse_score(const Record& rec, int expected_question) {
    QuestionScore score;
    auto question = require(rec, "question");
    if (!question.ok()) return question.error();
    std::string expected = "Q" + std::to_string(expected_question);
    if (question.value() != expected) {
        return Error{make_error("parse-error", "expected question " + expected + ", got '" +
                                                   question.value() + "'")};
    }
    score.question = expected_question;
    auto coverage = require(rec, "coverage");
    if (!coverage.ok()) return coverage.error();
    auto ratio = parse_ratio(coverage.value());
    if (!ratio.ok()) return ratio.error();
    score.coverage = ratio.value();
    auto answered = require(rec, "answered");
    if (!answered.ok()) return answered.error();
    auto flag = parse_yes_no(answered.value(), "answered");
    if (!flag.ok()) return flag.error();
    score.answered = flag.value();
    score.answer = rec.get_all("answer");
    for (const auto& m : rec.get_all("missing")) {
        size_t colon = m.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == m.size()) {
            return Error{make_error("parse-error", "bad missing entry '" + m + "'")};
        }
        score.missing.push_back({m.substr(0, colon), m.substr(colon + 1)});
    }
    return score;
}

Result<Recommendation> parse_rec(const Record& rec) {
    Recommendation r;
    auto code = require(rec, "code");
    if (!code.ok()) return code.error();
    r.code = code.value();
    auto dimension = require(rec, "dimension");
    if (!dimension.ok()) return dimension.error();
    auto tag = parse_dimension_tag(dimension.value());
    if (!tag.ok()) return tag.error();
    r.dimension = tag.value();
    auto subject = require(rec, "subject");
    if (!subject.ok()) return subject.error();
    r.subject = subject.value();
    auto text = require(rec, "text");
    if (!text.ok()) return text.error();
    r.text = text.value();
    return r;
}

}  // namespace

Result<ReportDocument> draft_report(const Audit& audit, const AssessmentResult& assessment,
                                    const ClassificationTable& table) {
    if (audit.workflow.stage < Stage::verification) {
        return Error{make_error("wrong-stage",
                                "a report is consolidated during verification; the audit is in "
                                "stage " +
                                    stage_name(audit.workflow.stage))};
    }
    ReportDocument doc;
    doc.audit_id = audit.audit_id;
    doc.date = audit.created_on;
    doc.version = audit.workflow.current_report_version.value_or(1);
    doc.status = "draft";
    doc.project = audit.project;
    doc.assessment = assessment;
    for (const auto& resource : audit.resources) {
        InventoryRow row;
        row.resource = resource;
        row.resource.extras.clear();
        row.lifecycle = lifecycle_of(resource.resource_type, table);
        if (resource.lifecycle_phase) row.lifecycle.phase = *resource.lifecycle_phase;
        row.nonaka = nonaka_class_of(resource.resource_type, table);
        row.category = knowledge_category_of(resource.resource_type, table);
        row.romiszowski = romiszowski_of(resource.resource_type, table);
        row.shared = shared_status(resource);
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

Result<ReportDocument> finalize_report(const Audit& audit, const ReportDocument& doc,
                                       const std::string& feedback) {
    const ReportVersion* version = find_version(audit, doc.version);
    if (!version) {
        return Error{make_error("not-validated", "no report version " +
                                                     std::to_string(doc.version) +
                                                     " exists in this audit")};
    }
    if (version->status != ReportStatus::validated) {
        return Error{make_error("not-validated",
                                "report version " + std::to_string(doc.version) + " is " +
                                    report_status_name(version->status) + ", not validated")};
    }
    ReportDocument final_doc = doc;
    final_doc.status = "final";
    final_doc.feedback = feedback;
    return final_doc;
}

Result<std::string> serialize_report(const ReportDocument& doc) {
    std::vector<Record> records;
    records.push_back(report_record(doc));
    for (const auto& row : doc.rows) records.push_back(row_record(row));
    for (const auto& score : doc.assessment.scores) records.push_back(score_record(score));
    for (const auto& rec : doc.assessment.recommendations) records.push_back(rec_record(rec));
    return write_records(records);
}

Result<ReportDocument> parse_report(const std::string& text) {
    auto records = parse_records(text);
    if (!records.ok()) return records.error();
    const auto& recs = records.value();
    if (recs.empty() || recs[0].type != "report") {
        return Error{make_error("parse-error", "a report file must open with a [report] record")};
    }
    ReportDocument doc;
    auto header = parse_header(recs[0], doc);
    if (!header.ok()) return header.error();
    doc = header.value();

    // [row]* then [score]{5} then [rec]*, in that order.
    size_t i = 1;
    for (; i < recs.size() && recs[i].type == "row"; ++i) {
        auto row = parse_row(recs[i]);
        if (!row.ok()) return row.error();
        doc.rows.push_back(std::move(row.value()));
    }
    int question = 1;
    for (; i < recs.size() && recs[i].type == "score"; ++i, ++question) {
        if (question > 5) {
            return Error{make_error("parse-error", "more than five [score] records")};
        }
        auto score = parse_score(recs[i], question);
        if (!score.ok()) return score.error();
        doc.assessment.scores.push_back(std::move(score.value()));
    }
    if (question != 6) {
        return Error{make_error("parse-error", "expected five [score] records, found " +
                                                   std::to_string(question - 1))};
    }
    for (; i < recs.size() && recs[i].type == "rec"; ++i) {
        auto rec = parse_rec(recs[i]);
        if (!rec.ok()) return rec.error();
        doc.assessment.recommendations.push_back(std::move(rec.value()));
    }
    if (i != recs.size()) {
        return Error{make_error("parse-error",
                                "unexpected [" + recs[i].type + "] record in report file")};
    }
    return doc;
}

}  // namespace kaf
