#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kaf/cli.hpp"
#include "kaf/crosswalk.hpp"
#include "kaf/registry.hpp"
#include "support.hpp"

using namespace kaf;
using kaf::test::audit_in_execution;
using kaf::test::audit_with_resources;
using kaf::test::sample_project;
using kaf::test::TempDir;
using kaf::test::tick;

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::vector<std::string>& args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out;
    std::ostringstream err;
    CliRun r;
    r.code = cli::run(args, in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("init creates an audit and reports its id") {
    TempDir tmp;
    auto r = run_cli({"--registry", tmp.path.string(), "init", "--name", "Open Telemetry Pilot",
                      "--created-on", "2026-02-01"});
    CHECK(r.code == 0);
    CHECK(r.out == "initialized audit open-telemetry-pilot-001\n");
    CHECK(r.err.empty());
    CHECK(fs::exists(tmp.path / "open-telemetry-pilot-001" / "audit.kaf"));

    auto again = run_cli({"--registry", tmp.path.string(), "init", "--name",
                          "Open Telemetry Pilot", "--created-on", "2026-02-02"});
    CHECK(again.out == "initialized audit open-telemetry-pilot-002\n");
}

TEST_CASE("the registry root comes from --registry or KAF_REGISTRY") {
    TempDir tmp;
    REQUIRE(save_audit(Registry{tmp.path}, audit_in_execution()).ok());

    unsetenv("KAF_REGISTRY");
    auto bare = run_cli({"registry", "list"});
    CHECK(bare.code == 2);
    CHECK(contains(bare.err, "no registry given"));

    setenv("KAF_REGISTRY", tmp.path.string().c_str(), 1);
    auto via_env = run_cli({"registry", "list"});
    CHECK(via_env.code == 0);
    CHECK(via_env.out == "open-telemetry-pilot-001  Open Telemetry Pilot  execution\n");
    unsetenv("KAF_REGISTRY");
}

TEST_CASE("--audit is only needed when the registry is ambiguous") {
    TempDir tmp;
    Registry registry{tmp.path};
    unsetenv("KAF_REGISTRY");

    auto empty = run_cli({"--registry", tmp.path.string(), "stage", "status"});
    CHECK(empty.code == 2);
    CHECK(contains(empty.err, "registry holds no audits"));

    REQUIRE(save_audit(registry, audit_in_execution()).ok());
    auto sole = run_cli({"--registry", tmp.path.string(), "stage", "status"});
    CHECK(sole.code == 0);

    ProjectRecord other = sample_project();
    other.project_name = "Harbor Sensing Study";
    REQUIRE(save_audit(registry, new_audit(other, "2026-02-01", audit_ids(registry)).value()).ok());
    auto ambiguous = run_cli({"--registry", tmp.path.string(), "stage", "status"});
    CHECK(ambiguous.code == 2);
    CHECK(contains(ambiguous.err, "registry holds 2 audits; pass --audit ID"));

    auto picked = run_cli({"--registry", tmp.path.string(), "--audit",
                           "harbor-sensing-study-001", "stage", "status"});
    CHECK(picked.code == 0);
    CHECK(contains(picked.out, "stage: planning"));
}

TEST_CASE("stage status names the completed steps and the legal next events") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, new_audit(sample_project(), "2026-02-01").value()).ok());

    auto fresh = run_cli({"--registry", tmp.path.string(), "stage", "status"});
    CHECK(fresh.code == 0);
    CHECK(fresh.out ==
          "stage: planning\n"
          "completed: (none)\n"
          "next: step_completed(s1_1)\n");
}

TEST_CASE("stage step appends an event and echoes the stored line") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, new_audit(sample_project(), "2026-02-01").value()).ok());
    std::vector<std::string> base{"--registry", tmp.path.string()};

    auto step = [&](const std::string& id, int t) {
        std::vector<std::string> args = base;
        for (const auto& a : {std::string("stage"), std::string("step"), id,
                              std::string("--at"), tick(t)}) {
            args.push_back(a);
        }
        return run_cli(args);
    };

    auto first = step("s1_1", 0);
    CHECK(first.code == 0);
    CHECK(first.out == tick(0) + " step_completed(s1_1)\n");

    auto noted = run_cli({"--registry", tmp.path.string(), "stage", "step", "s1_2", "--at",
                          tick(1), "--note", "leader agreed by phone"});
    CHECK(noted.code == 0);
    CHECK(noted.out == tick(1) + " step_completed(s1_2) note=leader agreed by phone\n");
    CHECK(contains(slurp(tmp.path / "open-telemetry-pilot-001" / "events.log"),
                   "note=leader agreed by phone\n"));

    auto out_of_order = step("s1_4", 2);
    CHECK(out_of_order.code == 1);
    CHECK(out_of_order.err.rfind("kaf: illegal-transition: ", 0) == 0);

    auto bad_step = step("s9_9", 3);
    CHECK(bad_step.code == 2);

    auto bad_ts = run_cli({"--registry", tmp.path.string(), "stage", "step", "s1_3", "--at",
                           "yesterday"});
    CHECK(bad_ts.code == 2);
    CHECK(contains(bad_ts.err, "ISO-8601"));

    auto multiline = run_cli({"--registry", tmp.path.string(), "stage", "step", "s1_3", "--at",
                              tick(4), "--note", "two\nlines"});
    CHECK(multiline.code == 2);
    CHECK(contains(multiline.err, "--note must be a single line"));

    auto defaulted = run_cli({"--registry", tmp.path.string(), "stage", "step", "s1_3"});
    CHECK(defaulted.code == 0);
    CHECK(contains(defaulted.out, "Z step_completed(s1_3)\n"));
}

TEST_CASE("stage event validates its flag combinations") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, audit_with_resources(1)).ok());
    std::vector<std::string> base{"--registry", tmp.path.string(), "stage", "event"};

    auto with = [&](std::initializer_list<std::string> extra) {
        std::vector<std::string> args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return run_cli(args);
    };

    CHECK(with({"validation_received", "--at", tick(10)}).code == 2);
    CHECK(contains(with({"validation_received", "--at", tick(10)}).err,
                   "needs --verdict valid|invalid"));
    CHECK(with({"validation_received", "--verdict", "perhaps", "--at", tick(10)}).code == 2);
    CHECK(with({"report_sent", "--verdict", "valid", "--at", tick(10)}).code == 2);
    CHECK(with({"audit_closed", "--version", "1", "--at", tick(10)}).code == 2);
    CHECK(with({"step_completed", "--at", tick(10)}).code == 2);
    CHECK(with({"retrospective_held", "--at", tick(10)}).code == 2);

    // Well-formed but out of stage: a domain error, not a usage error.
    auto early = with({"report_sent", "--at", tick(10)});
    CHECK(early.code == 1);
    CHECK(early.err.rfind("kaf: illegal-transition: ", 0) == 0);
}

TEST_CASE("project set updates one field after validation") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, new_audit(sample_project(), "2026-02-01").value()).ok());
    std::vector<std::string> base{"--registry", tmp.path.string(), "project", "set"};

    auto set = [&](const std::string& field, const std::string& value) {
        std::vector<std::string> args = base;
        args.push_back(field);
        args.push_back(value);
        return run_cli(args);
    };

    auto ok = set("km_contact", "Priya Nair");
    CHECK(ok.code == 0);
    CHECK(ok.out == "km_contact updated\n");
    auto partners = set("partner", "Uni Alpha; Lab Beta");
    CHECK(partners.code == 0);

    Audit loaded = load_audit(registry, "open-telemetry-pilot-001").value();
    CHECK(loaded.project.km_contact == "Priya Nair");
    CHECK(loaded.project.partners == std::vector<std::string>{"Uni Alpha", "Lab Beta"});

    auto unknown = set("budget", "100");
    CHECK(unknown.code == 2);
    CHECK(contains(unknown.err, "unknown project field 'budget'"));

    auto invalid = set("url", "not a url");
    CHECK(invalid.code == 1);
    CHECK(invalid.err.rfind("kaf: invalid-project: url: invalid-url:", 0) == 0);
    CHECK(load_audit(registry, "open-telemetry-pilot-001").value().project.url ==
          sample_project().url);
}

TEST_CASE("resource add with full flags skips the prompts") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, audit_in_execution()).ok());

    auto added = run_cli({"--registry", tmp.path.string(), "resource", "add", "--name",
                          "Install guide", "--type", "user_guide", "--format", "pdf",
                          "--permission-required", "no", "--url",
                          "https://example.org/guide"});
    CHECK(added.code == 0);
    CHECK(added.out == "added R001 Install guide\n");

    Audit loaded = load_audit(registry, "open-telemetry-pilot-001").value();
    REQUIRE(loaded.resources.size() == 1);
    CHECK(loaded.resources[0].format == FormatTag{FormatTag::Kind::pdf, ""});
    CHECK(loaded.resources[0].permission_required == false);

    auto bad_type = run_cli({"--registry", tmp.path.string(), "resource", "add", "--name", "X",
                             "--type", "wiki"});
    CHECK(bad_type.code == 2);
    CHECK(bad_type.err.rfind("kaf: --type: ", 0) == 0);
}

TEST_CASE("resource add refuses to edit the inventory during planning") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, new_audit(sample_project(), "2026-02-01").value()).ok());

    auto flagged = run_cli({"--registry", tmp.path.string(), "resource", "add", "--name", "X",
                            "--type", "user_guide"});
    CHECK(flagged.code == 1);
    CHECK(flagged.err.rfind("kaf: wrong-stage: ", 0) == 0);

    // The interactive path bails out before the first prompt.
    auto interactive = run_cli({"--registry", tmp.path.string(), "resource", "add"}, "Name\n");
    CHECK(interactive.code == 1);
    CHECK_FALSE(contains(interactive.out, "name: "));
}

TEST_CASE("resource add prompts for missing fields and re-asks on bad input") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, audit_in_execution()).ok());

    std::string script =
        "Field notes\n"
        "other:runbook\n"
        "\n"
        "\n"
        "2026-13-01\n"
        "2026-01-10\n"
        "\n"
        "en\n"
        "\n"
        "\n"
        "\n"
        "\n"
        "\n"
        "\n"
        "maybe\n"
        "no\n"
        "\n"
        "\n";
    auto r = run_cli({"--registry", tmp.path.string(), "resource", "add"}, script);
    CHECK(r.code == 0);
    CHECK(contains(r.out, "resource types: requirements_specification, "));
    CHECK(contains(r.out, "invalid-date: '2026-13-01' is not a valid YYYY-MM-DD date"));
    CHECK(contains(r.out, "parse-error: answer yes or no"));
    CHECK(contains(r.out, "added R001 Field notes\n"));

    Audit loaded = load_audit(registry, "open-telemetry-pilot-001").value();
    REQUIRE(loaded.resources.size() == 1);
    CHECK(loaded.resources[0].resource_type ==
          ResourceType{ResourceType::Kind::other, "runbook"});
    CHECK(loaded.resources[0].last_updated == "2026-01-10");
    CHECK(loaded.resources[0].language == "en");
    CHECK(loaded.resources[0].permission_required == false);
    CHECK_FALSE(loaded.resources[0].lifecycle_phase.has_value());

    auto cut_short = run_cli({"--registry", tmp.path.string(), "resource", "add"}, "");
    CHECK(cut_short.code == 2);
    CHECK(contains(cut_short.err, "input ended before required field 'name'"));
}

TEST_CASE("resource edit, list, and show work on stored resources") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, audit_with_resources(2)).ok());

    auto edited = run_cli({"--registry", tmp.path.string(), "resource", "edit", "R002",
                           "--license", "CC0-1.0"});
    CHECK(edited.code == 0);
    CHECK(edited.out == "updated R002\n");
    CHECK(load_audit(registry, "open-telemetry-pilot-001").value().resources[1].license ==
          "CC0-1.0");

    auto ghost = run_cli({"--registry", tmp.path.string(), "resource", "edit", "R009",
                          "--license", "CC0-1.0"});
    CHECK(ghost.code == 1);
    CHECK(contains(ghost.err, "kaf: not-found: no resource 'R009'"));

    auto listed = run_cli({"--registry", tmp.path.string(), "resource", "list"});
    CHECK(listed.code == 0);
    CHECK(listed.out ==
          "R001  Install guide R001  user_guide\n"
          "R002  Install guide R002  user_guide\n");

    auto shown = run_cli({"--registry", tmp.path.string(), "resource", "show", "R001"});
    CHECK(shown.code == 0);
    CHECK(shown.out.rfind("[resource]\nresource_id = R001\n", 0) == 0);
    CHECK(contains(shown.out, "license = CC-BY-4.0\n"));
}

TEST_CASE("export dc prints the Dublin Core record or writes it to a file") {
    TempDir tmp;
    Registry registry{tmp.path};
    Audit audit = audit_with_resources(1);
    REQUIRE(save_audit(registry, audit).ok());

    auto shown = run_cli({"--registry", tmp.path.string(), "export", "dc", "R001"});
    CHECK(shown.code == 0);
    CHECK(shown.out == serialize_dc(export_dc(audit.resources[0]).value()));

    fs::path target = tmp.path / "r001.dc";
    auto written = run_cli({"--registry", tmp.path.string(), "--output", target.string(),
                            "export", "dc", "R001"});
    CHECK(written.code == 0);
    CHECK(written.out.empty());
    CHECK(slurp(target) == shown.out);

    auto ghost = run_cli({"--registry", tmp.path.string(), "export", "dc", "R042"});
    CHECK(ghost.code == 1);
    CHECK(contains(ghost.err, "no resource 'R042'"));
}

TEST_CASE("score prints coverage, violations, and recommendations") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, audit_with_resources(2)).ok());

    auto r = run_cli({"--registry", tmp.path.string(), "score"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "Q1 coverage 1/1 answered yes\n"));
    CHECK(contains(r.out, "Q5 coverage 1/1 answered yes\n"));
    CHECK(contains(r.out, "postulate violations: none\n"));
    CHECK(contains(r.out, "recommendations: none\n"));
    CHECK(contains(r.out, "heuristic valid: yes\n"));
}

TEST_CASE("letter render fills audit context and numbers the output files") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, audit_with_resources(2)).ok());
    std::vector<std::string> base{"--registry", tmp.path.string(), "letter", "render",
                                  "leader_notice"};

    auto missing = run_cli(base);
    CHECK(missing.code == 1);
    CHECK(missing.err ==
          "kaf: missing-placeholder: project_leader, framework_url, sender_name\n");

    std::vector<std::string> full = base;
    for (const auto& a : {"--set", "project_leader=Prof. Sofia Marin", "--set",
                          "framework_url=https://example.org/kaf", "--set",
                          "sender_name=Rui Almeida"}) {
        full.push_back(a);
    }
    auto first = run_cli(full);
    CHECK(first.code == 0);
    CHECK(contains(first.out, "Prof. Sofia Marin"));
    CHECK(contains(first.out, "https://example.org/kaf"));
    CHECK_FALSE(contains(first.out, "Encl"));
    fs::path reports = tmp.path / "open-telemetry-pilot-001" / "reports";
    CHECK(slurp(reports / "leader_notice-1.txt") == first.out);
    CHECK(contains(first.err, "leader_notice-1.txt\n"));

    auto second = run_cli(full);
    CHECK(second.code == 0);
    CHECK(slurp(reports / "leader_notice-2.txt") == second.out);

    // funder_notice pulls the project list from the registry itself.
    auto funder = run_cli({"--registry", tmp.path.string(), "letter", "render", "funder_notice",
                           "--set", "funder_contact=Dr. Imani Okafor", "--set",
                           "framework_url=https://example.org/kaf", "--set",
                           "sender_name=Rui Almeida"});
    CHECK(funder.code == 0);
    CHECK(contains(funder.out, "- Open Telemetry Pilot"));

    fs::path target = tmp.path / "letter.txt";
    auto redirected = run_cli({"--registry", tmp.path.string(), "--output", target.string(),
                               "letter", "render", "verify_findings", "--set",
                               "project_leader=Prof. Sofia Marin", "--set",
                               "sender_name=Rui Almeida"});
    CHECK(redirected.code == 0);
    CHECK(slurp(target) == redirected.out);
    CHECK(contains(redirected.out,
                   "publicly available knowledge resources for this Project: 2"));
    CHECK(contains(redirected.out, "Dana Reyes"));
}

TEST_CASE("report draft and finalize follow the workflow stages") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, new_audit(sample_project(), "2026-02-01").value()).ok());
    std::string root = tmp.path.string();

    auto premature = run_cli({"--registry", root, "report", "draft", "--at", tick(40)});
    CHECK(premature.code == 1);
    CHECK(premature.err ==
          "kaf: wrong-stage: stage is planning; finish the execution stage first\n");

    auto unfinalized = run_cli({"--registry", root, "report", "finalize", "--at", tick(40)});
    CHECK(unfinalized.code == 1);
    CHECK(unfinalized.err == "kaf: not-validated: no report has been drafted yet\n");
}

TEST_CASE("a whole audit can be driven through the cli") {
    TempDir tmp;
    std::string root = tmp.path.string();
    int t = 0;

    auto kaf = [&](std::initializer_list<std::string> extra) {
        std::vector<std::string> args{"--registry", root};
        args.insert(args.end(), extra.begin(), extra.end());
        auto r = run_cli(args);
        CAPTURE(r.err);
        REQUIRE(r.code == 0);
        return r;
    };
    auto at = [&] { return tick(t++); };

    kaf({"init", "--name", "Open Telemetry Pilot", "--created-on", "2026-02-01"});
    kaf({"project", "set", "km_contact", "Dana Reyes"});
    kaf({"project", "set", "ks_policy", "open access after embargo"});
    for (const auto& s : {"s1_1", "s1_2", "s1_3", "s1_4"}) {
        kaf({"stage", "step", s, "--at", at()});
    }
    kaf({"resource", "add", "--name", "Install guide", "--type", "user_guide", "--format",
         "pdf", "--license", "CC-BY-4.0", "--url", "https://example.org/guide",
         "--permission-required", "no", "--standard-compliance", "ISO 26514"});
    kaf({"resource", "add", "--name", "Schema diagram", "--type", "system_diagram",
         "--corresponds-to", "R001"});
    kaf({"stage", "step", "s2_1", "--at", at()});
    kaf({"stage", "step", "s2_2", "--at", at()});

    auto draft = kaf({"report", "draft", "--at", at()});
    CHECK(draft.out == "drafted report v1\n");
    auto redraft = kaf({"report", "draft"});
    CHECK(redraft.out == "drafted report v1\n");

    kaf({"stage", "event", "report_sent", "--at", at()});
    auto busy = run_cli({"--registry", root, "report", "draft", "--at", at()});
    CHECK(busy.code == 1);
    CHECK(busy.err == "kaf: wrong-stage: report v1 is out for validation\n");

    kaf({"stage", "event", "validation_received", "--verdict", "invalid", "--at", at(),
         "--note", "leader wants sharper wording"});
    kaf({"stage", "event", "interview_held", "--at", at()});
    kaf({"stage", "event", "report_amended", "--at", at()});
    auto second = kaf({"report", "draft"});
    CHECK(second.out == "drafted report v2\n");
    kaf({"stage", "event", "report_sent", "--at", at()});
    kaf({"stage", "event", "validation_received", "--verdict", "valid", "--at", at()});

    auto finalized = kaf({"report", "finalize", "--feedback", "approved as amended", "--at",
                          at()});
    CHECK(finalized.out == "finalized report v2\n");
    kaf({"stage", "step", "s4_2", "--at", at()});
    kaf({"stage", "step", "s4_3", "--at", at()});
    kaf({"stage", "event", "audit_closed", "--at", at()});

    auto status = kaf({"stage", "status"});
    CHECK(contains(status.out, "stage: closed\n"));
    CHECK(contains(status.out, "report: v2 (final)\n"));
    CHECK(contains(status.out, "validation loops: 1\n"));
    CHECK(contains(status.out, "next: (none)\n"));

    auto listing = kaf({"registry", "list"});
    CHECK(listing.out == "open-telemetry-pilot-001  Open Telemetry Pilot  closed\n");

    Audit final_state = load_audit(Registry{tmp.path}, "open-telemetry-pilot-001").value();
    CHECK(final_state.workflow.loop_count == 1);
    REQUIRE(final_state.report_versions.size() == 2);
    CHECK(final_state.report_versions[0].status == ReportStatus::rejected);
    CHECK(final_state.report_versions[1].status == ReportStatus::final_version);
    CHECK(contains(final_state.report_versions[1].body, "feedback = approved as amended\n"));
    CHECK(fs::exists(tmp.path / "open-telemetry-pilot-001" / "reports" / "report-final.kaf"));
}

TEST_CASE("registry unlock clears a leftover lock") {
    TempDir tmp;
    Registry registry{tmp.path};
    REQUIRE(save_audit(registry, audit_in_execution()).ok());
    {
        std::ofstream lock(tmp.path / "open-telemetry-pilot-001" / "lock", std::ios::binary);
        lock << "999@elsewhere\n";
    }

    auto blocked = run_cli({"--registry", tmp.path.string(), "stage", "step", "s2_1", "--at",
                            tick(30)});
    CHECK(blocked.code == 1);
    CHECK(blocked.err ==
          "kaf: lock-contended: audit is locked by 999@elsewhere "
          "(registry unlock clears a stale lock)\n");

    auto unlocked = run_cli({"--registry", tmp.path.string(), "registry", "unlock"});
    CHECK(unlocked.code == 0);
    CHECK(unlocked.out == "lock removed\n");
    auto again = run_cli({"--registry", tmp.path.string(), "registry", "unlock"});
    CHECK(again.out == "no lock present\n");

    CHECK(run_cli({"--registry", tmp.path.string(), "stage", "step", "s2_1", "--at", tick(30)})
              .code == 0);
}

TEST_CASE("help and malformed invocations use the usual exit codes") {
    auto help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(contains(help.out, "init"));

    auto nonsense = run_cli({"frobnicate"});
    CHECK(nonsense.code == 2);
    CHECK(nonsense.err.rfind("kaf: ", 0) == 0);

    auto missing_sub = run_cli({"resource"});
    CHECK(missing_sub.code == 2);
}
