#include "kaf/registry.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "kaf/record_file.hpp"
#include "kaf/text.hpp"

namespace kaf {
namespace {

namespace fs = std::filesystem;

Error io_error(const std::string& what) {
    return make_error("io-failure", what);
}

Result<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return Error{io_error("cannot read " + path.string() + ": " + std::strerror(errno))};
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        return Error{io_error("read failed for " + path.string())};
    }
    return buffer.str();
}

Status write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            return io_error("cannot write " + temp.string() + ": " + std::strerror(errno));
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out.good()) {
            return io_error("write failed for " + temp.string());
        }
    }
    std::error_code ec;
    fs::rename(temp, path, ec);
    if (ec) {
        return io_error("rename to " + path.string() + " failed: " + ec.message());
    }
    return {};
}

// ---------------------------------------------------------------------------
// Audit and resource records
// ---------------------------------------------------------------------------

void put(std::vector<Field>& fields, const char* name, const std::string& value) {
    if (!value.empty()) fields.push_back({name, value});
}

}  // namespace

Record audit_record(const Audit& audit) {
    Record rec;
    rec.type = "audit";
    auto& f = rec.fields;
    f.push_back({"audit_id", audit.audit_id});
    f.push_back({"created_on", audit.created_on});
    f.push_back({"project_name", audit.project.project_name});
    put(f, "description", audit.project.description);
    put(f, "url", audit.project.url);
    for (const auto& p : audit.project.partners) put(f, "partner", p);
    put(f, "funding_body", audit.project.funding_body);
    put(f, "ks_policy", audit.project.ks_policy);
    put(f, "contractual_clauses", audit.project.contractual_clauses);
    put(f, "km_contact", audit.project.km_contact);
    put(f, "duration", audit.project.duration);
    for (const auto& p : audit.project.publications) put(f, "publication", p);
    for (const auto& extra : audit.extras) f.push_back(extra);
    return rec;
}

Record resource_record(const KnowledgeResource& r) {
    Record rec;
    rec.type = "resource";
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
    if (r.format) f.push_back({"format", format_tag_name(*r.format)});
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
    for (const auto& extra : r.extras) f.push_back(extra);
    return rec;
}

namespace {

// Splits a parsed record into known single/repeated fields and extras.
// A duplicated single-valued field is a parse error (reported by name).
class FieldReader {
  public:
    explicit FieldReader(const Record& record) : record_(record) {}

    Result<std::string> required(const char* name) {
        auto v = single(name);
        if (!v.ok()) return v;
        if (v.value().empty()) {
            return Error{make_error("parse-error", "[" + record_.type + "] record lacks field '" +
                                                       std::string(name) + "'")};
        }
        return v;
    }

    Result<std::string> optional(const char* name) { return single(name); }

    std::vector<std::string> repeated(const char* name) {
        known_.push_back(name);
        return record_.get_all(name);
    }

    std::vector<Field> extras() const {
        std::vector<Field> out;
        for (const auto& f : record_.fields) {
            if (std::find(known_.begin(), known_.end(), f.name) == known_.end()) {
                out.push_back(f);
            }
        }
        return out;
    }

  private:
    Result<std::string> single(const char* name) {
        known_.push_back(name);
        auto values = record_.get_all(name);
        if (values.size() > 1) {
            return Error{make_error("parse-error", "field '" + std::string(name) +
                                                       "' appears more than once")};
        }
        return values.empty() ? std::string() : values[0];
    }

    const Record& record_;
    std::vector<std::string> known_;
};

Result<Audit> audit_from_record(const Record& rec) {
    if (rec.type != "audit") {
        return Error{make_error("parse-error", "expected an [audit] record, got [" + rec.type + "]")};
    }
    Audit audit;
    FieldReader reader(rec);
    auto id = reader.required("audit_id");
    if (!id.ok()) return id.error();
    audit.audit_id = id.value();
    auto created = reader.required("created_on");
    if (!created.ok()) return created.error();
    if (!is_valid_date(created.value())) {
        return Error{make_error("parse-error",
                                "created_on '" + created.value() + "' is not a YYYY-MM-DD date")};
    }
    audit.created_on = created.value();
    auto name = reader.required("project_name");
    if (!name.ok()) return name.error();
    audit.project.project_name = name.value();

    auto field = [&](const char* key) -> Result<std::string> { return reader.optional(key); };
    auto description = field("description");
    if (!description.ok()) return description.error();
    audit.project.description = description.value();
    auto url = field("url");
    if (!url.ok()) return url.error();
    audit.project.url = url.value();
    audit.project.partners = reader.repeated("partner");
    auto funding = field("funding_body");
    if (!funding.ok()) return funding.error();
    audit.project.funding_body = funding.value();
    auto policy = field("ks_policy");
    if (!policy.ok()) return policy.error();
    audit.project.ks_policy = policy.value();
    auto clauses = field("contractual_clauses");
    if (!clauses.ok()) return clauses.error();
    audit.project.contractual_clauses = clauses.value();
    auto contact = field("km_contact");
    if (!contact.ok()) return contact.error();
    audit.project.km_contact = contact.value();
    auto duration = field("duration");
    if (!duration.ok()) return duration.error();
    audit.project.duration = duration.value();
    audit.project.publications = reader.repeated("publication");
    audit.extras = reader.extras();
    return audit;
}

Result<KnowledgeResource> resource_from_record(const Record& rec) {
    if (rec.type != "resource") {
        return Error{make_error("parse-error",
                                "expected a [resource] record, got [" + rec.type + "]")};
    }
    KnowledgeResource r;
    FieldReader reader(rec);
    auto id = reader.required("resource_id");
    if (!id.ok()) return id.error();
    r.resource_id = id.value();
    auto name = reader.required("name");
    if (!name.ok()) return name.error();
    r.name = name.value();
    auto type_name = reader.required("resource_type");
    if (!type_name.ok()) return type_name.error();
    auto type = parse_resource_type(type_name.value());
    if (!type.ok()) return type.error();
    r.resource_type = type.value();

    struct TextField {
        const char* name;
        std::string* slot;
    };
    TextField texts[] = {
        {"description", &r.description},
        {"maintained_by", &r.maintained_by},
        {"last_updated", &r.last_updated},
        {"next_review_due", &r.next_review_due},
        {"language", &r.language},
        {"standard_compliance", &r.standard_compliance},
        {"policy_prescribed", &r.policy_prescribed},
        {"license", &r.license},
        {"url", &r.url},
        {"other_location", &r.other_location},
        {"corresponds_to", &r.corresponds_to},
    };
    for (auto& t : texts) {
        auto v = reader.optional(t.name);
        if (!v.ok()) return v.error();
        *t.slot = v.value();
    }
    auto format = reader.optional("format");
    if (!format.ok()) return format.error();
    if (!format.value().empty()) {
        auto tag = parse_format_tag(format.value());
        if (!tag.ok()) return tag.error();
        r.format = tag.value();
    }
    auto permission = reader.optional("permission_required");
    if (!permission.ok()) return permission.error();
    if (!permission.value().empty()) {
        if (permission.value() != "yes" && permission.value() != "no") {
            return Error{make_error("parse-error", "permission_required must be yes or no, got '" +
                                                       permission.value() + "'")};
        }
        r.permission_required = permission.value() == "yes";
    }
    auto phase = reader.optional("lifecycle_phase");
    if (!phase.ok()) return phase.error();
    if (!phase.value().empty()) {
        auto p = parse_lifecycle_phase(phase.value());
        if (!p.ok()) return p.error();
        r.lifecycle_phase = p.value();
    }
    r.extras = reader.extras();
    return r;
}

Error file_error(const fs::path& file, const Error& inner) {
    return Error{inner.code, file.filename().string() + ": " + inner.message};
}

}  // namespace

// ---------------------------------------------------------------------------
// Locking
// ---------------------------------------------------------------------------

Result<AuditLock> AuditLock::acquire(const fs::path& dir) {
    fs::path path = dir / "lock";
    int fd = ::open(path.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        if (errno == EEXIST) {
            std::string owner = "unknown";
            if (auto content = read_file(path); content.ok()) {
                owner = trim(content.value());
            }
            return Error{make_error("lock-contended", "audit is locked by " + owner +
                                                          " (registry unlock clears a stale lock)")};
        }
        return Error{io_error("cannot create " + path.string() + ": " + std::strerror(errno))};
    }
    char host[256] = {0};
    if (::gethostname(host, sizeof(host) - 1) != 0) {
        std::snprintf(host, sizeof(host), "localhost");
    }
    std::string owner = std::to_string(::getpid()) + "@" + host + "\n";
    ssize_t written = ::write(fd, owner.data(), owner.size());
    ::close(fd);
    if (written != static_cast<ssize_t>(owner.size())) {
        ::unlink(path.c_str());
        return Error{io_error("cannot write lock owner to " + path.string())};
    }
    AuditLock lock;
    lock.path_ = path;
    return lock;
}

AuditLock::AuditLock(AuditLock&& other) noexcept : path_(std::move(other.path_)) {
    other.path_.clear();
}

AuditLock& AuditLock::operator=(AuditLock&& other) noexcept {
    if (this != &other) {
        release();
        path_ = std::move(other.path_);
        other.path_.clear();
    }
    return *this;
}

AuditLock::~AuditLock() {
    release();
}

void AuditLock::release() {
    if (!path_.empty()) {
        ::unlink(path_.c_str());
        path_.clear();
    }
}

// ---------------------------------------------------------------------------
// Save / load
// ---------------------------------------------------------------------------

fs::path audit_dir(const Registry& registry, const std::string& audit_id) {
    return registry.root / audit_id;
}

Status save_audit(const Registry& registry, const Audit& audit) {
    fs::path dir = audit_dir(registry, audit.audit_id);
    std::error_code ec;
    fs::create_directories(dir / "reports", ec);
    if (ec) {
        return io_error("cannot create " + dir.string() + ": " + ec.message());
    }

    auto lock = AuditLock::acquire(dir);
    if (!lock.ok()) return lock.error();

    auto audit_bytes = write_records({audit_record(audit)});
    if (!audit_bytes.ok()) return file_error(dir / "audit.kaf", audit_bytes.error());
    std::vector<Record> resource_records;
    for (const auto& r : audit.resources) resource_records.push_back(resource_record(r));
    auto resource_bytes = write_records(resource_records);
    if (!resource_bytes.ok()) return file_error(dir / "resources.kaf", resource_bytes.error());
    std::string event_bytes;
    for (const auto& event : audit.events) {
        event_bytes += format_event_line(event);
        event_bytes += '\n';
    }

    if (auto s = write_file_atomic(dir / "audit.kaf", audit_bytes.value()); !s.ok()) return s;
    if (auto s = write_file_atomic(dir / "resources.kaf", resource_bytes.value()); !s.ok()) return s;
    if (auto s = write_file_atomic(dir / "events.log", event_bytes); !s.ok()) return s;

    for (const auto& version : audit.report_versions) {
        if (version.body.empty()) continue;
        fs::path path = dir / "reports" / ("report-v" + std::to_string(version.version) + ".kaf");
        if (auto s = write_file_atomic(path, version.body); !s.ok()) return s;
        if (version.status == ReportStatus::final_version) {
            if (auto s = write_file_atomic(dir / "reports" / "report-final.kaf", version.body);
                !s.ok()) {
                return s;
            }
        }
    }
    return {};
}

Result<Audit> load_audit(const Registry& registry, const std::string& audit_id) {
    fs::path dir = audit_dir(registry, audit_id);
    if (!fs::exists(dir / "audit.kaf")) {
        return Error{make_error("not-found", "no audit '" + audit_id + "' under " +
                                                 registry.root.string())};
    }

    auto audit_text = read_file(dir / "audit.kaf");
    if (!audit_text.ok()) return audit_text.error();
    auto audit_records = parse_records(audit_text.value());
    if (!audit_records.ok()) return file_error(dir / "audit.kaf", audit_records.error());
    if (audit_records.value().size() != 1) {
        return Error{make_error("parse-error", "audit.kaf: expected exactly one [audit] record")};
    }
    auto skeleton = audit_from_record(audit_records.value()[0]);
    if (!skeleton.ok()) return file_error(dir / "audit.kaf", skeleton.error());
    Audit audit = skeleton.value();
    if (audit.audit_id != audit_id) {
        return Error{make_error("parse-error", "audit.kaf: audit_id '" + audit.audit_id +
                                                   "' does not match directory '" + audit_id + "'")};
    }

    if (fs::exists(dir / "resources.kaf")) {
        auto text = read_file(dir / "resources.kaf");
        if (!text.ok()) return text.error();
        auto records = parse_records(text.value());
        if (!records.ok()) return file_error(dir / "resources.kaf", records.error());
        for (const auto& rec : records.value()) {
            auto resource = resource_from_record(rec);
            if (!resource.ok()) return file_error(dir / "resources.kaf", resource.error());
            for (const auto& existing : audit.resources) {
                if (existing.resource_id == resource.value().resource_id) {
                    return Error{make_error("parse-error", "resources.kaf: duplicate resource_id '" +
                                                               existing.resource_id + "'")};
                }
            }
            audit.resources.push_back(std::move(resource.value()));
        }
    }

    std::vector<WorkflowEvent> events;
    if (fs::exists(dir / "events.log")) {
        auto text = read_file(dir / "events.log");
        if (!text.ok()) return text.error();
        const std::string& log = text.value();
        if (!log.empty() && log.back() != '\n') {
            return Error{make_error("parse-error", "events.log: missing final newline")};
        }
        size_t pos = 0;
        size_t line_no = 0;
        while (pos < log.size()) {
            ++line_no;
            size_t eol = log.find('\n', pos);
            std::string_view line(log.data() + pos, eol - pos);
            pos = eol + 1;
            auto event = parse_event_line(line);
            if (!event.ok()) {
                return Error{make_error("parse-error", "events.log: line " +
                                                           std::to_string(line_no) + ": " +
                                                           event.error().message)};
            }
            events.push_back(std::move(event.value()));
        }
    }

    auto replayed = replay_audit(audit, events);
    if (!replayed.ok()) return replayed.error();
    audit = std::move(replayed.value());

    for (auto& version : audit.report_versions) {
        fs::path path = dir / "reports" / ("report-v" + std::to_string(version.version) + ".kaf");
        if (fs::exists(path)) {
            auto body = read_file(path);
            if (!body.ok()) return body.error();
            version.body = body.value();
        }
    }
    return audit;
}

AuditListing list_audits(const Registry& registry) {
    AuditListing listing;
    for (const auto& id : audit_ids(registry)) {
        auto audit = load_audit(registry, id);
        if (audit.ok()) {
            listing.rows.push_back(
                {id, audit.value().project.project_name, audit.value().workflow.stage});
        } else {
            listing.warnings.push_back(id + ": " + audit.error().message + " [" +
                                       audit.error().code + "]");
        }
    }
    return listing;
}

std::set<std::string> audit_ids(const Registry& registry) {
    std::set<std::string> ids;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(registry.root, ec)) {
        if (entry.is_directory()) {
            ids.insert(entry.path().filename().string());
        }
    }
    return ids;
}

Result<bool> unlock_audit(const Registry& registry, const std::string& audit_id) {
    fs::path path = audit_dir(registry, audit_id) / "lock";
    std::error_code ec;
    bool existed = fs::remove(path, ec);
    if (ec) {
        return Error{io_error("cannot remove " + path.string() + ": " + ec.message())};
    }
    return existed;
}

// ---------------------------------------------------------------------------
// Classification overrides
// ---------------------------------------------------------------------------

Result<ClassificationTable> load_classification(const Registry& registry) {
    ClassificationTable table = ClassificationTable::builtin();
    fs::path path = registry.root / "classification.kaf";
    if (!fs::exists(path)) return table;

    auto text = read_file(path);
    if (!text.ok()) return text.error();
    auto records = parse_records(text.value());
    if (!records.ok()) return file_error(path, records.error());

    auto known = table.type_names();
    for (const auto& rec : records.value()) {
        if (rec.type != "classification") {
            return Error{make_error("parse-error", "classification.kaf: unexpected [" + rec.type +
                                                       "] record")};
        }
        FieldReader reader(rec);
        auto key = reader.required("resource_type");
        if (!key.ok()) return file_error(path, key.error());
        if (std::find(known.begin(), known.end(), key.value()) == known.end()) {
            return Error{make_error("parse-error", "classification.kaf: unknown resource type '" +
                                                       key.value() + "'")};
        }
        ClassificationRow row;
        auto phase = reader.required("lifecycle_phase");
        if (!phase.ok()) return file_error(path, phase.error());
        auto parsed_phase = parse_lifecycle_phase(phase.value());
        if (!parsed_phase.ok()) return file_error(path, parsed_phase.error());
        row.lifecycle = parsed_phase.value();
        auto representation = reader.optional("representation");
        if (!representation.ok()) return file_error(path, representation.error());
        row.representation = representation.value();
        auto notation = reader.optional("notation");
        if (!notation.ok()) return file_error(path, notation.error());
        row.notation = notation.value();
        auto nonaka = reader.required("nonaka_class");
        if (!nonaka.ok()) return file_error(path, nonaka.error());
        auto parsed_nonaka = parse_nonaka_class(nonaka.value());
        if (!parsed_nonaka.ok()) return file_error(path, parsed_nonaka.error());
        row.nonaka = parsed_nonaka.value();
        auto category = reader.required("knowledge_category");
        if (!category.ok()) return file_error(path, category.error());
        auto parsed_category = parse_knowledge_category(category.value());
        if (!parsed_category.ok()) return file_error(path, parsed_category.error());
        row.category = parsed_category.value();
        auto rom = reader.required("romiszowski_category");
        if (!rom.ok()) return file_error(path, rom.error());
        auto parsed_rom = parse_rom_category(rom.value());
        if (!parsed_rom.ok()) return file_error(path, parsed_rom.error());
        auto label = reader.required("romiszowski_label");
        if (!label.ok()) return file_error(path, label.error());
        if (!rom_label_in_category(parsed_rom.value(), label.value())) {
            return Error{make_error("parse-error", "classification.kaf: label '" + label.value() +
                                                       "' does not belong to " +
                                                       rom_category_name(parsed_rom.value()))};
        }
        row.romiszowski = {parsed_rom.value(), label.value()};
        table.set_row(key.value(), row);
    }
    return table;
}

}  // namespace kaf
