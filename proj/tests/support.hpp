#pragma once

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "kaf/audit.hpp"
#include "kaf/workflow.hpp"

// Shared builders for the test suite. Everything is deterministic;
// randomized tests take an explicit engine seeded by the caller.

namespace kaf::test {

// Monotonic timestamps: tick(0) < tick(1) < ... within one calendar day.
inline std::string tick(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "2026-03-01T%02d:%02d:00Z", (i / 60) % 24, i % 60);
    return buf;
}

inline WorkflowEvent ev(int t, EventKind kind, std::string note = "") {
    return {tick(t), std::move(kind), std::move(note)};
}

inline WorkflowEvent step(int t, StepId id, std::string note = "") {
    return ev(t, EventKind{StepCompleted{id}}, std::move(note));
}

// The shortest legal run from fresh audit to closed: twelve steps where
// s3_2 and s3_3 are carried by the review events, plus the closing event.
inline std::vector<WorkflowEvent> minimal_sequence() {
    return {
        step(0, StepId::s1_1),
        step(1, StepId::s1_2),
        step(2, StepId::s1_3),
        step(3, StepId::s1_4),
        step(4, StepId::s2_1),
        step(5, StepId::s2_2),
        step(6, StepId::s3_1),
        ev(7, EventKind{ReportSent{1}}),
        ev(8, EventKind{ValidationReceived{1, Verdict::valid}}),
        step(9, StepId::s4_1),
        step(10, StepId::s4_2),
        step(11, StepId::s4_3),
        ev(12, EventKind{AuditClosed{}}),
    };
}

inline ProjectRecord sample_project() {
    ProjectRecord p;
    p.project_name = "Open Telemetry Pilot";
    p.description = "Shared instrumentation for the consortium";
    p.url = "https://example.org/otp";
    p.partners = {"Uni Alpha", "Lab Beta"};
    p.funding_body = "National Research Council";
    p.ks_policy = "open access after embargo";
    p.contractual_clauses = "clause 7: deposit deliverables";
    p.km_contact = "Dana Reyes";
    p.duration = "36 months";
    p.publications = {"doi:10.1000/otp.1"};
    return p;
}

inline KnowledgeResource sample_resource(const std::string& id) {
    KnowledgeResource r;
    r.resource_id = id;
    r.name = "Install guide " + id;
    r.resource_type = {ResourceType::Kind::user_guide, ""};
    r.description = "How to install the pilot stack";
    r.maintained_by = "Dana Reyes";
    r.last_updated = "2026-01-15";
    r.next_review_due = "2026-07-15";
    r.language = "en";
    r.standard_compliance = "ISO 26514";
    r.policy_prescribed = "open access after embargo";
    r.format = FormatTag{FormatTag::Kind::pdf, ""};
    r.license = "CC-BY-4.0";
    r.url = "https://example.org/otp/guide-" + id;
    r.other_location = "";
    r.permission_required = false;
    return r;
}

// An audit advanced into the execution stage (inventory open).
inline Audit audit_in_execution() {
    Audit audit = new_audit(sample_project(), "2026-02-01").value();
    for (int i = 0; i < 4; ++i) {
        audit = audit_apply(audit, step(i, static_cast<StepId>(i))).value();
    }
    return audit;
}

// Execution-stage audit holding `count` saturated resources R001..R00n.
inline Audit audit_with_resources(int count) {
    Audit audit = audit_in_execution();
    for (int i = 1; i <= count; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "R%03d", i);
        audit = add_resource(audit, sample_resource(id)).value();
    }
    return audit;
}

// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        static std::mt19937_64 rng{std::random_device{}()};
        for (;;) {
            auto candidate = base / ("kaf-test-" + std::to_string(rng()));
            if (std::filesystem::create_directory(candidate)) {
                path = candidate;
                return;
            }
        }
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

}  // namespace kaf::test
