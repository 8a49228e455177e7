#include "kaf/letters.hpp"

#include <algorithm>

namespace kaf {
namespace {

const char* k_funder_notice = R"(Dear {funder_contact}

I am writing to inform you that I am carrying out a study that involves
performing project audits of publicly funded research.

The rationale and motivation and methodology are listed on this publicly
accessible website:

{framework_url}

The projects funded by your funding body which we intend to audit are
listed below:

{project_list}

Each project leader will be contacted in the next few days to be informed
of the audit procedure, which takes place remotely and unobtrusively via
searches and via the respective project websites, so that they can point
us to relevant repositories and sources of knowledge that can be publicly
evaluated.

A copy of the summary findings will be emailed to you as soon as
available.

Please do let me have any questions you may have at this stage

Best Regards

{sender_name}
)";

const char* k_leader_notice = R"(Dear {project_leader}

I am writing to inform you that I am carrying out a study that involves
performing project audits of publicly funded research.

The rationale and motivation and methodology are listed on this publicly
accessible website:

{framework_url}

The audit procedure takes place remotely and unobtrusively via searches
and through the project website, but in case some of the information the
audit aims to identify cannot be easily accessed on your website, I would
be most grateful if you could provide it by filling out the relevant
portion of the attached form (for example, are there project team members
in charge of knowledge sharing, so that any further questions can be
directed to them).

Also feel free to point me to relevant repositories which are not listed
on the project website, and that we can include when performing the
inventory.

I enclose the preliminary information gathered about your project in a
form enclosed.

A copy of the summary findings will be emailed to you as soon as
available, so that you can approve them or correct them, and then a final
version of the inventory will be included in a public audit report.

Do not hesitate to ask questions you may have at this stage

Best Regards

{sender_name}
)";

// Appended to leader_notice only when a project list is supplied; a
// single-project audit has no list to enclose.
const char* k_leader_enclosures = R"(
Encl 1. List of projects being audited

{project_list}

Encl 2. Preliminary Project information obtained from funding body
)";

const char* k_verify_findings = R"(Dear {project_leader}

Following our earlier email, I am writing to inform you about the
findings of the knowledge inventory carried out on your project, as
discussed.

The findings are enclosed in the following summary:

- {summary}
- name of person in charge of KM: {km_contact_name}
- number of publicly available knowledge resources for this Project: {resource_count}

Please do let me know if the above is correct, or please point us to any
information we may have missed out within {deadline} when the summary
needs to be finalized and published.

Thanks in advance

Best regards

{sender_name}
)";

const char* k_final_findings = R"(Dear {project_leader}

Following our email exchanges I am enclosing the final summary of the
findings of the knowledge audit performed under the KAF methodology, as
well as some recommendations based on the evaluation of your findings in
relation to good knowledge sharing practices.

As part of this project we develop instruments and methods to maximize
knowledge sharing and innovation in the field of systems engineering, and
we would be very happy to advise you and your team further.

We would welcome your feedback on your experience working with KAF, and
your suggestions on how to improve the framework for future reference.

{sender_name}

ENCL 1 Summary Findings

{summary}

ENCL 2 Recommendation from Best Practices

{recommendations}
)";

struct Template {
    const char* body;
    // A placeholder satisfied by a built-in default when absent.
    const char* defaulted_name;
    const char* defaulted_value;
    // A block appended only when its placeholder is supplied.
    const char* optional_name;
    const char* optional_block;
};

const Template& template_of(LetterKind kind) {
    static const Template funder{k_funder_notice, nullptr, nullptr, nullptr, nullptr};
    static const Template leader{k_leader_notice, nullptr, nullptr, "project_list",
                                 k_leader_enclosures};
    static const Template verify{k_verify_findings, "deadline", "the next working week", nullptr,
                                 nullptr};
    static const Template final_{k_final_findings, nullptr, nullptr, nullptr, nullptr};
    switch (kind) {
        case LetterKind::funder_notice: return funder;
        case LetterKind::leader_notice: return leader;
        case LetterKind::verify_findings: return verify;
        case LetterKind::final_findings: return final_;
    }
    return funder;
}

// Placeholder names referenced by text, first occurrence first.
std::vector<std::string> scan_placeholders(const std::string& text) {
    std::vector<std::string> out;
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') continue;
        if (i + 1 < text.size() && text[i + 1] == '{') {
            ++i;
            continue;
        }
        size_t close = text.find('}', i);
        if (close == std::string::npos) break;
        std::string name = text.substr(i + 1, close - i - 1);
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
        i = close;
    }
    return out;
}

std::string substitute(const std::string& text, const LetterContext& ctx) {
    std::string out;
    out.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
            out += '{';
            ++i;
        } else if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
            out += '}';
            ++i;
        } else if (c == '{') {
            size_t close = text.find('}', i);
            out += ctx.at(text.substr(i + 1, close - i - 1));
            i = close;
        } else {
            out += c;
        }
    }
    return out;
}

}  // namespace

std::string letter_kind_name(LetterKind kind) {
    switch (kind) {
        case LetterKind::funder_notice: return "funder_notice";
        case LetterKind::leader_notice: return "leader_notice";
        case LetterKind::verify_findings: return "verify_findings";
        case LetterKind::final_findings: return "final_findings";
    }
    return "";
}

Result<LetterKind> parse_letter_kind(std::string_view name) {
    for (LetterKind kind : all_letter_kinds()) {
        if (name == letter_kind_name(kind)) return kind;
    }
    return Error{make_error("parse-error", "unknown letter kind '" + std::string(name) + "'")};
}

std::vector<LetterKind> all_letter_kinds() {
    return {LetterKind::funder_notice, LetterKind::leader_notice, LetterKind::verify_findings,
            LetterKind::final_findings};
}

std::vector<std::string> letter_placeholders(LetterKind kind) {
    const Template& tpl = template_of(kind);
    std::vector<std::string> out;
    for (auto& name : scan_placeholders(tpl.body)) {
        if (tpl.defaulted_name && name == tpl.defaulted_name) continue;
        out.push_back(name);
    }
    return out;
}

Result<std::string> render_letter(LetterKind kind, const LetterContext& ctx) {
    const Template& tpl = template_of(kind);
    LetterContext effective = ctx;
    if (tpl.defaulted_name && !effective.count(tpl.defaulted_name)) {
        effective[tpl.defaulted_name] = tpl.defaulted_value;
    }
    std::vector<std::string> absent;
    for (const auto& name : scan_placeholders(tpl.body)) {
        if (!effective.count(name)) absent.push_back(name);
    }
    if (!absent.empty()) {
        std::string joined;
        for (const auto& name : absent) {
            if (!joined.empty()) joined += ", ";
            joined += name;
        }
        return Error{make_error("missing-placeholder", joined)};
    }
    std::string out = substitute(tpl.body, effective);
    if (tpl.optional_name && ctx.count(tpl.optional_name)) {
        out += substitute(tpl.optional_block, effective);
    }
    return out;
}

}  // namespace kaf
