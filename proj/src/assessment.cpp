#include "kaf/assessment.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "kaf/text.hpp"

namespace kaf {
namespace {

const char* k_project = "PROJECT";

// Resources sorted by id, the order every answer and missing list uses.
std::vector<const KnowledgeResource*> by_id(const Audit& audit) {
    std::vector<const KnowledgeResource*> out;
    for (const auto& r : audit.resources) out.push_back(&r);
    std::sort(out.begin(), out.end(), [](const KnowledgeResource* a, const KnowledgeResource* b) {
        return a->resource_id < b->resource_id;
    });
    return out;
}

bool has_location(const KnowledgeResource& r) {
    return !r.url.empty() || !r.other_location.empty();
}

std::string location_of(const KnowledgeResource& r) {
    return r.url.empty() ? r.other_location : r.url;
}

// The three sharing mechanisms of Q3, in reporting order.
std::vector<std::pair<std::string, std::string>> mechanisms_of(const KnowledgeResource& r) {
    std::vector<std::pair<std::string, std::string>> out;
    if (r.format) out.emplace_back("format", format_tag_name(*r.format));
    if (!r.standard_compliance.empty()) out.emplace_back("standard_compliance", r.standard_compliance);
    if (!r.license.empty()) out.emplace_back("license", r.license);
    return out;
}

bool answered_threshold(const Ratio& coverage) {
    return 5 * coverage.num >= 4 * coverage.den;
}

QuestionScore make_score(int question, Ratio coverage, std::vector<std::string> answer,
                         std::vector<MissingEntry> missing) {
    QuestionScore s;
    s.question = question;
    s.coverage = coverage;
    s.answered = answered_threshold(coverage);
    s.answer = std::move(answer);
    s.missing = std::move(missing);
    return s;
}

std::vector<std::string> sorted_unique(std::vector<std::string> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

LifecyclePhase effective_phase(const KnowledgeResource& r, const ClassificationTable& table) {
    if (r.lifecycle_phase) return *r.lifecycle_phase;
    return lifecycle_of(r.resource_type, table).phase;
}

}  // namespace

Ratio Ratio::of(long long num, long long den) {
    Ratio r;
    if (den == 0) return r;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    r.num = num / g;
    r.den = den / g;
    return r;
}

std::string ratio_string(const Ratio& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

Result<Ratio> parse_ratio(const std::string& text) {
    size_t slash = text.find('/');
    auto numeric = [](const std::string& s) {
        return !s.empty() && s.size() <= 18 &&
               std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (slash == std::string::npos) {
        return Error{make_error("parse-error", "ratio '" + text + "' lacks '/'")};
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!numeric(num) || !numeric(den) || den == "0") {
        return Error{make_error("parse-error", "bad ratio '" + text + "'")};
    }
    return Ratio::of(std::stoll(num), std::stoll(den));
}

SharedStatus shared_status(const KnowledgeResource& resource) {
    if (!has_location(resource) || !resource.permission_required) {
        return SharedStatus::undecidable;
    }
    return *resource.permission_required ? SharedStatus::not_shared : SharedStatus::shared;
}

std::string shared_status_name(SharedStatus s) {
    switch (s) {
        case SharedStatus::shared: return "yes";
        case SharedStatus::not_shared: return "no";
        case SharedStatus::undecidable: return "undecidable";
    }
    return "";
}

Result<SharedStatus> parse_shared_status(const std::string& name) {
    if (name == "yes") return SharedStatus::shared;
    if (name == "no") return SharedStatus::not_shared;
    if (name == "undecidable") return SharedStatus::undecidable;
    return Error{make_error("parse-error", "unknown shared status '" + name + "'")};
}

AssessmentResult score(const Audit& audit) {
    const auto resources = by_id(audit);
    const long long n = static_cast<long long>(resources.size());
    const ProjectRecord& project = audit.project;

    AssessmentResult result;

    // Q1: which resources are shared, therefore publicly reusable?
    {
        long long decidable = 0;
        std::vector<std::string> answer;
        std::vector<MissingEntry> missing;
        if (n == 0) missing.push_back({k_project, "resources"});
        for (const auto* r : resources) {
            SharedStatus status = shared_status(*r);
            if (status != SharedStatus::undecidable) {
                ++decidable;
            } else {
                if (!has_location(*r)) missing.push_back({r->resource_id, "url"});
                if (!r->permission_required) missing.push_back({r->resource_id, "permission_required"});
            }
            if (status == SharedStatus::shared) answer.push_back(r->resource_id);
        }
        result.scores.push_back(make_score(1, n == 0 ? Ratio{} : Ratio::of(decidable, n),
                                           std::move(answer), std::move(missing)));
    }

    // Q2: where are these assets located?
    {
        long long located = 0;
        std::vector<std::string> answer;
        std::vector<MissingEntry> missing;
        if (n == 0) missing.push_back({k_project, "resources"});
        for (const auto* r : resources) {
            if (has_location(*r)) {
                ++located;
                answer.push_back(r->resource_id + ": " + location_of(*r));
            } else {
                missing.push_back({r->resource_id, "url"});
            }
        }
        result.scores.push_back(make_score(2, n == 0 ? Ratio{} : Ratio::of(located, n),
                                           std::move(answer), std::move(missing)));
    }

    // Q3: by which mechanisms (format, standards, licensing) are they shared?
    {
        long long populated = 0;
        std::vector<std::string> answer;
        std::vector<MissingEntry> missing;
        if (n == 0) missing.push_back({k_project, "resources"});
        for (const auto* r : resources) {
            auto mechanisms = mechanisms_of(*r);
            populated += static_cast<long long>(mechanisms.size());
            if (!mechanisms.empty()) {
                std::string line = r->resource_id + ": ";
                for (size_t i = 0; i < mechanisms.size(); ++i) {
                    if (i) line += ", ";
                    line += mechanisms[i].first + "=" + mechanisms[i].second;
                }
                answer.push_back(line);
            }
            if (!r->format) missing.push_back({r->resource_id, "format"});
            if (r->standard_compliance.empty())
                missing.push_back({r->resource_id, "standard_compliance"});
            if (r->license.empty()) missing.push_back({r->resource_id, "license"});
        }
        result.scores.push_back(make_score(3, n == 0 ? Ratio{} : Ratio::of(populated, 3 * n),
                                           std::move(answer), std::move(missing)));
    }

    // Q4: who is responsible for these assets?
    {
        long long contact = project.km_contact.empty() ? 0 : 1;
        long long maintained = 0;
        std::vector<std::string> answer;
        std::vector<MissingEntry> missing;
        if (contact == 0) missing.push_back({k_project, "km_contact"});
        if (n == 0) missing.push_back({k_project, "resources"});
        if (contact) answer.push_back(project.km_contact);
        for (const auto* r : resources) {
            if (!r->maintained_by.empty()) {
                ++maintained;
                answer.push_back(r->maintained_by);
            } else {
                missing.push_back({r->resource_id, "maintained_by"});
            }
        }
        Ratio coverage = n == 0 ? Ratio::of(contact, 2)
                                : Ratio::of(contact * n + maintained, 2 * n);
        result.scores.push_back(
            make_score(4, coverage, sorted_unique(std::move(answer)), std::move(missing)));
    }

    // Q5: according to what policy is knowledge shared?
    {
        long long policy =
            (project.ks_policy.empty() && project.contractual_clauses.empty()) ? 0 : 1;
        long long prescribed = 0;
        std::vector<std::string> answer;
        std::vector<MissingEntry> missing;
        if (policy == 0) missing.push_back({k_project, "ks_policy"});
        if (n == 0) missing.push_back({k_project, "resources"});
        if (!project.ks_policy.empty()) answer.push_back(project.ks_policy);
        if (!project.contractual_clauses.empty()) answer.push_back(project.contractual_clauses);
        for (const auto* r : resources) {
            if (!r->policy_prescribed.empty()) {
                ++prescribed;
                answer.push_back(r->policy_prescribed);
            } else {
                missing.push_back({r->resource_id, "policy_prescribed"});
            }
        }
        Ratio coverage = n == 0 ? Ratio::of(policy, 2)
                                : Ratio::of(policy * n + prescribed, 2 * n);
        result.scores.push_back(
            make_score(5, coverage, sorted_unique(std::move(answer)), std::move(missing)));
    }

    result.postulate_violations = check_postulate(audit);
    result.heuristic_valid = std::any_of(result.scores.begin(), result.scores.end(),
                                         [](const QuestionScore& s) { return s.answered; });
    return result;
}

std::vector<std::string> check_postulate(const Audit& audit, const ClassificationTable& table) {
    std::vector<std::string> out;
    for (const auto& r : audit.resources) {
        if (nonaka_class_of(r.resource_type, table) != NonakaClass::conceptual) continue;
        bool covered = false;
        if (!r.corresponds_to.empty()) {
            for (const auto& other : audit.resources) {
                if (other.resource_id == r.corresponds_to &&
                    nonaka_class_of(other.resource_type, table) == NonakaClass::systemic) {
                    covered = true;
                    break;
                }
            }
        }
        if (!covered) {
            LifecyclePhase phase = effective_phase(r, table);
            for (const auto& other : audit.resources) {
                if (&other != &r &&
                    nonaka_class_of(other.resource_type, table) == NonakaClass::systemic &&
                    effective_phase(other, table) == phase) {
                    covered = true;
                    break;
                }
            }
        }
        if (!covered) out.push_back(r.resource_id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Recommendation> recommend(const AssessmentResult& result, const Audit& audit) {
    std::vector<Recommendation> out;
    if (audit.project.km_contact.empty()) {
        out.push_back({"REC-CONTACT", DimensionTag::organisational, k_project,
                       "designate a knowledge-sharing contact"});
    }
    for (const auto& r : audit.resources) {
        if (!r.format || r.standard_compliance.empty()) {
            out.push_back({"REC-FORMAT", DimensionTag::technical, r.resource_id,
                           "declare format and standard compliance"});
        }
        if (r.license.empty()) {
            out.push_back({"REC-LICENSE", DimensionTag::organisational, r.resource_id,
                           "attach explicit license"});
        }
    }
    if (result.scores.size() == 5 && !result.scores[4].answered) {
        out.push_back({"REC-POLICY", DimensionTag::organisational, k_project,
                       "adopt and publish a knowledge-sharing policy"});
    }
    for (const auto& id : result.postulate_violations) {
        out.push_back({"REC-SYSTEMIC", DimensionTag::technical, id,
                       "produce systemic documentation for " + id});
    }
    std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
        return std::tie(a.code, a.subject) < std::tie(b.code, b.subject);
    });
    return out;
}

AssessmentResult assess(const Audit& audit, const ClassificationTable& table) {
    AssessmentResult result = score(audit);
    result.postulate_violations = check_postulate(audit, table);
    result.recommendations = recommend(result, audit);
    return result;
}

}  // namespace kaf
