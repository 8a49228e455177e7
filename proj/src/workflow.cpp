#include "kaf/workflow.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "kaf/text.hpp"

namespace kaf {
namespace {

struct StepInfo {
    StepId id;
    const char* name;
    Stage stage;
};

constexpr std::array<StepInfo, 12> k_steps{{
    {StepId::s1_1, "s1_1", Stage::planning},
    {StepId::s1_2, "s1_2", Stage::planning},
    {StepId::s1_3, "s1_3", Stage::planning},
    {StepId::s1_4, "s1_4", Stage::planning},
    {StepId::s2_1, "s2_1", Stage::execution},
    {StepId::s2_2, "s2_2", Stage::execution},
    {StepId::s3_1, "s3_1", Stage::verification},
    {StepId::s3_2, "s3_2", Stage::verification},
    {StepId::s3_3, "s3_3", Stage::verification},
    {StepId::s4_1, "s4_1", Stage::reporting},
    {StepId::s4_2, "s4_2", Stage::reporting},
    {StepId::s4_3, "s4_3", Stage::reporting},
}};

const StepInfo& info_of(StepId step) {
    return k_steps[static_cast<size_t>(step)];
}

// Steps of one stage, in completion order.
std::vector<StepId> steps_of_stage(Stage stage) {
    std::vector<StepId> out;
    for (const auto& s : k_steps) {
        if (s.stage == stage) out.push_back(s.id);
    }
    return out;
}

std::string verdict_name(Verdict v) {
    return v == Verdict::valid ? "valid" : "invalid";
}

Error illegal(const EventKind& kind, const WorkflowState& state, const std::string& rule) {
    return make_error("illegal-transition", event_kind_description(kind) + " not allowed in stage " +
                                                stage_name(state.stage) + ": " + rule);
}

Error stale(const EventKind& kind, int expected) {
    return make_error("stale-version", event_kind_description(kind) + " does not match current report version " +
                                           std::to_string(expected));
}

}  // namespace

std::string stage_name(Stage s) {
    switch (s) {
        case Stage::planning: return "planning";
        case Stage::execution: return "execution";
        case Stage::verification: return "verification";
        case Stage::reporting: return "reporting";
        case Stage::closed: return "closed";
    }
    return "";
}

Stage stage_of_step(StepId step) {
    return info_of(step).stage;
}

std::string step_name(StepId step) {
    return info_of(step).name;
}

Result<StepId> parse_step(std::string_view name) {
    for (const auto& s : k_steps) {
        if (name == s.name) return s.id;
    }
    return make_error("parse-error", "unknown step '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Event formatting
// ---------------------------------------------------------------------------

std::string event_kind_description(const EventKind& kind) {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, StepCompleted>) {
                return "step_completed(" + step_name(k.step) + ")";
            } else if constexpr (std::is_same_v<K, ReportSent>) {
                return "report_sent(" + std::to_string(k.version) + ")";
            } else if constexpr (std::is_same_v<K, ValidationReceived>) {
                return "validation_received(" + std::to_string(k.version) + ")";
            } else if constexpr (std::is_same_v<K, InterviewHeld>) {
                return "interview_held(" + std::to_string(k.version) + ")";
            } else if constexpr (std::is_same_v<K, ReportAmended>) {
                return "report_amended(" + std::to_string(k.new_version) + ")";
            } else {
                return "audit_closed";
            }
        },
        kind);
}

std::string format_event_line(const WorkflowEvent& event) {
    std::string line = event.timestamp + " " + event_kind_description(event.kind);
    if (const auto* v = std::get_if<ValidationReceived>(&event.kind)) {
        line += " verdict=" + verdict_name(v->verdict);
    }
    if (!event.note.empty()) {
        line += " note=" + event.note;
    }
    return line;
}

Result<WorkflowEvent> parse_event_line(std::string_view line) {
    auto fail = [&](const std::string& what) -> Error {
        return make_error("parse-error", what);
    };

    size_t sp = line.find(' ');
    if (sp == std::string_view::npos) return fail("expected '<timestamp> <event>'");
    std::string ts(line.substr(0, sp));
    if (!is_valid_timestamp(ts)) return fail("bad timestamp '" + ts + "'");

    // <event-kind>[(arg)], then optional key=value pairs.
    std::string_view rest = line.substr(sp + 1);
    size_t token_end = rest.find(' ');
    std::string_view token = rest.substr(0, token_end);
    std::string name;
    std::string arg;
    bool has_parens = false;
    size_t open = token.find('(');
    if (open != std::string_view::npos) {
        if (token.back() != ')') return fail("missing ')'");
        has_parens = true;
        name = std::string(token.substr(0, open));
        arg = std::string(token.substr(open + 1, token.size() - open - 2));
    } else {
        name = std::string(token);
    }
    std::string_view tail =
        token_end == std::string_view::npos ? std::string_view{} : rest.substr(token_end);

    auto parse_version = [&](const std::string& a) -> Result<int> {
        if (a.empty() || a.size() > 9 ||
            !std::all_of(a.begin(), a.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            return fail("bad version '" + a + "'");
        }
        int v = std::stoi(a);
        if (v < 1) return fail("bad version '" + a + "'");
        return v;
    };

    WorkflowEvent event;
    event.timestamp = ts;
    bool want_verdict = false;

    if (name == "step_completed") {
        if (!has_parens) return fail("step_completed requires a step argument");
        auto step = parse_step(arg);
        if (!step.ok()) return step.error();
        event.kind = StepCompleted{step.value()};
    } else if (name == "report_sent") {
        auto v = parse_version(arg);
        if (!v.ok()) return v.error();
        event.kind = ReportSent{v.value()};
    } else if (name == "validation_received") {
        auto v = parse_version(arg);
        if (!v.ok()) return v.error();
        event.kind = ValidationReceived{v.value(), Verdict::valid};
        want_verdict = true;
    } else if (name == "interview_held") {
        auto v = parse_version(arg);
        if (!v.ok()) return v.error();
        event.kind = InterviewHeld{v.value()};
    } else if (name == "report_amended") {
        auto v = parse_version(arg);
        if (!v.ok()) return v.error();
        event.kind = ReportAmended{v.value()};
    } else if (name == "audit_closed") {
        if (!arg.empty()) return fail("audit_closed takes no argument");
        event.kind = AuditClosed{};
    } else {
        return fail("unknown event '" + name + "'");
    }

    if (want_verdict) {
        if (tail.rfind(" verdict=", 0) != 0) return fail("validation_received requires verdict=");
        tail.remove_prefix(9);
        std::string_view word = tail.substr(0, tail.find(' '));
        if (word == "valid") {
            std::get<ValidationReceived>(event.kind).verdict = Verdict::valid;
        } else if (word == "invalid") {
            std::get<ValidationReceived>(event.kind).verdict = Verdict::invalid;
        } else {
            return fail("bad verdict '" + std::string(word) + "'");
        }
        tail.remove_prefix(word.size());
    }

    if (!tail.empty()) {
        if (tail.rfind(" note=", 0) != 0) return fail("unexpected trailing text");
        event.note = std::string(tail.substr(6));
    }
    return event;
}

// ---------------------------------------------------------------------------
// Transitions
// ---------------------------------------------------------------------------

Result<WorkflowState> apply(const WorkflowState& state, const WorkflowEvent& event) {
    const EventKind& kind = event.kind;
    if (!is_valid_timestamp(event.timestamp)) {
        return Error{make_error("illegal-transition", event_kind_description(kind) +
                                                          ": bad timestamp '" + event.timestamp + "'")};
    }
    if (!state.last_timestamp.empty() && event.timestamp < state.last_timestamp) {
        return illegal(kind, state,
                       "timestamp " + event.timestamp + " precedes " + state.last_timestamp);
    }
    if (state.stage == Stage::closed) {
        return illegal(kind, state, "the audit is closed");
    }

    WorkflowState next = state;
    next.last_timestamp = event.timestamp;

    if (const auto* e = std::get_if<StepCompleted>(&kind)) {
        StepId step = e->step;
        if (step == StepId::s3_2) {
            return illegal(kind, state, "s3_2 is recorded by report_sent");
        }
        if (step == StepId::s3_3) {
            return illegal(kind, state, "s3_3 is recorded by a valid verdict");
        }
        Stage home = stage_of_step(step);
        if (home != state.stage) {
            return illegal(kind, state, step_name(step) + " belongs to stage " + stage_name(home));
        }
        if (state.completed_steps.count(step)) {
            return illegal(kind, state, step_name(step) + " is already completed");
        }
        for (StepId prior : steps_of_stage(home)) {
            if (prior == step) break;
            if (!state.completed_steps.count(prior)) {
                return illegal(kind, state, step_name(prior) + " must complete first");
            }
        }
        next.completed_steps.insert(step);
        if (step == StepId::s1_4) {
            next.stage = Stage::execution;
        } else if (step == StepId::s2_2) {
            next.stage = Stage::verification;
        } else if (step == StepId::s3_1) {
            next.current_report_version = 1;
            next.review_phase = ReviewPhase::drafted;
        }
        return next;
    }

    if (const auto* e = std::get_if<ReportSent>(&kind)) {
        if (state.stage != Stage::verification || state.review_phase == ReviewPhase::idle) {
            return illegal(kind, state, "no report draft exists (complete s3_1 first)");
        }
        if (state.review_phase == ReviewPhase::sent) {
            return illegal(kind, state, "the report is already out for validation");
        }
        if (state.review_phase != ReviewPhase::drafted) {
            return illegal(kind, state, "the rejected report must be amended first");
        }
        if (e->version != *state.current_report_version) {
            return stale(kind, *state.current_report_version);
        }
        next.completed_steps.insert(StepId::s3_2);
        next.review_phase = ReviewPhase::sent;
        return next;
    }

    if (const auto* e = std::get_if<ValidationReceived>(&kind)) {
        if (state.stage != Stage::verification || state.review_phase != ReviewPhase::sent) {
            return illegal(kind, state, "no report is out for validation");
        }
        if (e->version != *state.current_report_version) {
            return stale(kind, *state.current_report_version);
        }
        if (e->verdict == Verdict::invalid) {
            next.loop_count += 1;
            next.review_phase = ReviewPhase::rejected;
        } else {
            next.completed_steps.insert(StepId::s3_3);
            next.review_phase = ReviewPhase::idle;
            next.stage = Stage::reporting;
        }
        return next;
    }

    if (const auto* e = std::get_if<InterviewHeld>(&kind)) {
        if (state.stage != Stage::verification || state.review_phase != ReviewPhase::rejected) {
            return illegal(kind, state, "there is no rejected report to discuss");
        }
        if (e->version != *state.current_report_version) {
            return stale(kind, *state.current_report_version);
        }
        next.review_phase = ReviewPhase::interviewed;
        return next;
    }

    if (const auto* e = std::get_if<ReportAmended>(&kind)) {
        if (state.stage != Stage::verification || state.review_phase != ReviewPhase::interviewed) {
            return illegal(kind, state, "an interview must precede the amendment");
        }
        if (e->new_version != *state.current_report_version + 1) {
            return stale(kind, *state.current_report_version + 1);
        }
        next.current_report_version = e->new_version;
        next.review_phase = ReviewPhase::drafted;
        return next;
    }

    // AuditClosed
    if (state.stage != Stage::reporting) {
        return illegal(kind, state, "closure happens from the reporting stage");
    }
    for (StepId step : steps_of_stage(Stage::reporting)) {
        if (!state.completed_steps.count(step)) {
            return illegal(kind, state, step_name(step) + " must complete first");
        }
    }
    next.stage = Stage::closed;
    return next;
}

Result<WorkflowState> replay(const std::vector<WorkflowEvent>& events) {
    WorkflowState state;
    for (size_t i = 0; i < events.size(); ++i) {
        auto r = apply(state, events[i]);
        if (!r.ok()) {
            return Error{r.error().code, "event " + std::to_string(i) + ": " + r.error().message};
        }
        state = r.value();
    }
    return state;
}

std::vector<EventKind> legal_events(const WorkflowState& state) {
    std::vector<EventKind> out;
    switch (state.stage) {
        case Stage::closed:
            break;
        case Stage::planning:
        case Stage::execution:
        case Stage::reporting: {
            bool all_done = true;
            for (StepId step : steps_of_stage(state.stage)) {
                if (!state.completed_steps.count(step)) {
                    out.push_back(StepCompleted{step});
                    all_done = false;
                    break;
                }
            }
            if (state.stage == Stage::reporting && all_done) {
                out.push_back(AuditClosed{});
            }
            break;
        }
        case Stage::verification: {
            switch (state.review_phase) {
                case ReviewPhase::idle:
                    out.push_back(StepCompleted{StepId::s3_1});
                    break;
                case ReviewPhase::drafted:
                    out.push_back(ReportSent{*state.current_report_version});
                    break;
                case ReviewPhase::sent:
                    out.push_back(ValidationReceived{*state.current_report_version, Verdict::valid});
                    out.push_back(ValidationReceived{*state.current_report_version, Verdict::invalid});
                    break;
                case ReviewPhase::rejected:
                    out.push_back(InterviewHeld{*state.current_report_version});
                    break;
                case ReviewPhase::interviewed:
                    out.push_back(ReportAmended{*state.current_report_version + 1});
                    break;
            }
            break;
        }
    }
    return out;
}

}  // namespace kaf
