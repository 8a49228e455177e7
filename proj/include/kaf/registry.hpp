#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "kaf/audit.hpp"
#include "kaf/classification.hpp"
#include "kaf/record_file.hpp"
#include "kaf/result.hpp"

namespace kaf {

// On-disk registry. Each audit lives in <root>/<audit_id>/ holding
// audit.kaf, resources.kaf, events.log, and reports/. Workflow state is
// never stored; load replays events.log. Files are written atomically
// (temp + rename) and in canonical form, so saving what was just loaded
// reproduces the bytes exactly.
struct Registry {
    std::filesystem::path root;
};

// Single-writer guard: a lock file created with O_CREAT|O_EXCL holding
// "<pid>@<hostname>". No staleness detection; a crashed writer's lock is
// cleared with `registry unlock`.
class AuditLock {
  public:
    // Errors: lock-contended (existing lock, message names the owner),
    // io-failure.
    static Result<AuditLock> acquire(const std::filesystem::path& audit_dir);

    AuditLock(AuditLock&& other) noexcept;
    AuditLock& operator=(AuditLock&& other) noexcept;
    AuditLock(const AuditLock&) = delete;
    AuditLock& operator=(const AuditLock&) = delete;
    ~AuditLock();

    void release();

  private:
    AuditLock() = default;
    std::filesystem::path path_;
};

std::filesystem::path audit_dir(const Registry& registry, const std::string& audit_id);

// Canonical record forms, known fields first in declared order, then any
// preserved unknown fields.
Record audit_record(const Audit& audit);
Record resource_record(const KnowledgeResource& resource);

// Writes all audit files in canonical form while holding the audit's lock.
// Errors: lock-contended, io-failure, unrepresentable-value.
Status save_audit(const Registry& registry, const Audit& audit);

// Reads the audit directory and replays the event log. Errors: not-found,
// parse-error (file and 1-based line), replay-error (0-based event index).
Result<Audit> load_audit(const Registry& registry, const std::string& audit_id);

struct AuditRow {
    std::string audit_id;
    std::string project_name;
    Stage stage = Stage::planning;
};

struct AuditListing {
    std::vector<AuditRow> rows;           // sorted by audit_id
    std::vector<std::string> warnings;    // one per unreadable audit directory
};

AuditListing list_audits(const Registry& registry);

// Directory names under the root; the id pool new_audit draws from.
std::set<std::string> audit_ids(const Registry& registry);

// Removes a leftover lock. Returns whether a lock existed. Errors:
// io-failure.
Result<bool> unlock_audit(const Registry& registry, const std::string& audit_id);

// The built-in classification table, with rows replaced by any
// [classification] records in <root>/classification.kaf. Errors:
// parse-error, io-failure.
Result<ClassificationTable> load_classification(const Registry& registry);

}  // namespace kaf
