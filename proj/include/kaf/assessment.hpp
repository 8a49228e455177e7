#pragma once

#include <string>
#include <vector>

#include "kaf/audit.hpp"
#include "kaf/classification.hpp"

namespace kaf {

// Scores the five core questions, checks the shareability postulate, and
// derives recommendations. Everything here is a pure function of the audit;
// coverages are exact rationals so equality in tests is exact.

// Non-negative rational, normalized (gcd 1, positive denominator).
struct Ratio {
    long long num = 0;
    long long den = 1;

    static Ratio of(long long num, long long den);
    bool operator==(const Ratio&) const = default;
};

std::string ratio_string(const Ratio& r);
Result<Ratio> parse_ratio(const std::string& text);

// A gap: the subject is a resource id or the literal "PROJECT".
struct MissingEntry {
    std::string subject;
    std::string field;

    bool operator==(const MissingEntry&) const = default;
};

struct QuestionScore {
    int question = 0;  // 1..5
    Ratio coverage;
    bool answered = false;            // coverage >= 4/5
    std::vector<std::string> answer;  // rendered, id-sorted payload lines
    std::vector<MissingEntry> missing;

    bool operator==(const QuestionScore&) const = default;
};

enum class SharedStatus { shared, not_shared, undecidable };

// shared <=> a location is populated and permission_required = no;
// undecidable when either half is unknown.
SharedStatus shared_status(const KnowledgeResource& resource);

std::string shared_status_name(SharedStatus s);  // "yes" | "no" | "undecidable"
Result<SharedStatus> parse_shared_status(const std::string& name);

struct Recommendation {
    std::string code;  // REC-...
    DimensionTag dimension;
    std::string subject;  // resource id or "PROJECT"
    std::string text;

    bool operator==(const Recommendation&) const = default;
};

struct AssessmentResult {
    std::vector<QuestionScore> scores;  // exactly five, Q1..Q5
    std::vector<std::string> postulate_violations;
    std::vector<Recommendation> recommendations;
    bool heuristic_valid = false;  // at least one question answered

    bool operator==(const AssessmentResult&) const = default;
};

// Five QuestionScores plus postulate violations and heuristic validity;
// recommendations are left empty (see recommend / assess).
AssessmentResult score(const Audit& audit);

// Ids of conceptual resources with neither a corresponds_to link to a
// systemic resource nor any systemic resource sharing their (declared or
// type-default) lifecycle phase. Sorted by id.
std::vector<std::string> check_postulate(
    const Audit& audit, const ClassificationTable& table = ClassificationTable::builtin());

// Deterministic gap -> recommendation rules, output sorted by (code, subject).
std::vector<Recommendation> recommend(const AssessmentResult& result, const Audit& audit);

// score + check_postulate + recommend in one call.
AssessmentResult assess(const Audit& audit,
                        const ClassificationTable& table = ClassificationTable::builtin());

}  // namespace kaf
