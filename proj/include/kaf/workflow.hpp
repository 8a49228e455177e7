#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kaf/result.hpp"

namespace kaf {

// Event-sourced state machine for the four audit stages. State is never
// persisted; it is always recomputed by replaying the event log.
//
// Stage map:
//   planning      s1_1 identify project   s1_2 inform leader
//                 s1_3 initial analysis   s1_4 initiate audit
//   execution     s2_1 analyse resources  s2_2 fill audit form
//   verification  s3_1 consolidate report
//                 s3_2 send for validation   (recorded by report_sent)
//                 s3_3 interview-and-amend   (recorded by a valid verdict)
//   reporting     s4_1 finalise report    s4_2 issue recommendations
//                 s4_3 collect feedback
//   closed        terminal
//
// Steps complete strictly in numeric order within a stage; a stage advances
// automatically when its last step completes. In verification the loop
//   report_sent -> validation_received(invalid) -> interview_held ->
//   report_amended -> report_sent ...
// repeats until a valid verdict arrives; each iteration increments
// current_report_version, and loop_count counts the invalid verdicts.

enum class Stage { planning, execution, verification, reporting, closed };

std::string stage_name(Stage s);

enum class StepId { s1_1, s1_2, s1_3, s1_4, s2_1, s2_2, s3_1, s3_2, s3_3, s4_1, s4_2, s4_3 };

Stage stage_of_step(StepId step);
std::string step_name(StepId step);
Result<StepId> parse_step(std::string_view name);

enum class Verdict { valid, invalid };

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

struct StepCompleted {
    StepId step;
    bool operator==(const StepCompleted&) const = default;
};
struct ReportSent {
    int version;
    bool operator==(const ReportSent&) const = default;
};
struct ValidationReceived {
    int version;
    Verdict verdict;
    bool operator==(const ValidationReceived&) const = default;
};
struct InterviewHeld {
    int version;
    bool operator==(const InterviewHeld&) const = default;
};
struct ReportAmended {
    int new_version;
    bool operator==(const ReportAmended&) const = default;
};
struct AuditClosed {
    bool operator==(const AuditClosed&) const = default;
};

using EventKind = std::variant<StepCompleted, ReportSent, ValidationReceived, InterviewHeld,
                               ReportAmended, AuditClosed>;

struct WorkflowEvent {
    std::string timestamp;  // ISO-8601 UTC, "YYYY-MM-DDTHH:MM:SSZ"
    EventKind kind;
    std::string note;  // optional free text, single line

    bool operator==(const WorkflowEvent&) const = default;
};

// "step_completed(s1_1)", "validation_received(2) verdict=invalid", ...
std::string event_kind_description(const EventKind& kind);

// Event log wire format, one event per line:
//   <timestamp> <kind>(<arg>) [verdict=valid|invalid] [note=<rest of line>]
// The note, when present, is always last and runs verbatim to end of line.
std::string format_event_line(const WorkflowEvent& event);
Result<WorkflowEvent> parse_event_line(std::string_view line);

// ---------------------------------------------------------------------------
// State
// ---------------------------------------------------------------------------

// Position within the verification loop. Part of the state because event
// legality depends on it; like the rest of the state it is derived from the
// log, never stored.
enum class ReviewPhase { idle, drafted, sent, rejected, interviewed };

struct WorkflowState {
    Stage stage = Stage::planning;
    std::set<StepId> completed_steps;
    std::optional<int> current_report_version;
    int loop_count = 0;
    ReviewPhase review_phase = ReviewPhase::idle;
    std::string last_timestamp;  // empty until the first event

    bool operator==(const WorkflowState&) const = default;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Applies one event. Errors: "illegal-transition" (message names the stage,
// the event, and the first violated rule) and "stale-version" (a versioned
// event whose version is not the expected one).
Result<WorkflowState> apply(const WorkflowState& state, const WorkflowEvent& event);

// Left-fold of apply over the initial state; fails at the first illegal
// event with its 0-based index prefixed to the message.
Result<WorkflowState> replay(const std::vector<WorkflowEvent>& events);

// Exactly the event kinds apply would accept in this state, with concrete
// step/version arguments filled in. Soundness and completeness against
// apply is a tested invariant.
std::vector<EventKind> legal_events(const WorkflowState& state);

}  // namespace kaf
