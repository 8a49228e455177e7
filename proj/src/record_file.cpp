#include "kaf/record_file.hpp"

#include <cctype>

#include "kaf/text.hpp"

namespace kaf {

namespace {

bool valid_type_name(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    if (!std::islower(static_cast<unsigned char>(s[0])) && s[0] != '_') {
        return false;
    }
    for (char c : s) {
        if (!std::islower(static_cast<unsigned char>(c)) &&
            !std::isdigit(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
            return false;
        }
    }
    return true;
}

bool valid_field_name(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    if (!std::islower(static_cast<unsigned char>(s[0])) && s[0] != '_') {
        return false;
    }
    for (char c : s) {
        if (!std::islower(static_cast<unsigned char>(c)) &&
            !std::isdigit(static_cast<unsigned char>(c)) && c != '_') {
            return false;
        }
    }
    return true;
}

Error parse_error(size_t line, const std::string& reason) {
    return make_error("parse-error", "line " + std::to_string(line) + ": " + reason);
}

}  // namespace

std::optional<std::string> Record::get(std::string_view name) const {
    for (const Field& f : fields) {
        if (f.name == name) {
            return f.value;
        }
    }
    return std::nullopt;
}

std::vector<std::string> Record::get_all(std::string_view name) const {
    std::vector<std::string> values;
    for (const Field& f : fields) {
        if (f.name == name) {
            values.push_back(f.value);
        }
    }
    return values;
}

Result<std::vector<Record>> parse_records(std::string_view text) {
    std::vector<Record> records;
    if (text.empty()) {
        return records;
    }
    if (text.back() != '\n') {
        size_t last_line = 1;
        for (char c : text) {
            if (c == '\n') {
                ++last_line;
            }
        }
        return parse_error(last_line, "missing final newline");
    }

    Record* current = nullptr;
    size_t line_no = 0;
    size_t pos = 0;
    // Multi-line value being accumulated, if any.
    Field* open_multiline = nullptr;
    size_t multiline_start = 0;
    bool multiline_first = true;

    while (pos < text.size()) {
        ++line_no;
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;

        if (line.find('\r') != std::string_view::npos) {
            return parse_error(line_no, "carriage return; LF line endings only");
        }

        if (open_multiline != nullptr) {
            if (line == ">>>") {
                open_multiline = nullptr;
            } else {
                if (!multiline_first) {
                    open_multiline->value.push_back('\n');
                }
                open_multiline->value.append(line);
                multiline_first = false;
            }
            continue;
        }

        if (line.empty()) {
            current = nullptr;  // record separator
            continue;
        }

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                return parse_error(line_no, "malformed record header");
            }
            std::string_view type = line.substr(1, line.size() - 2);
            if (!valid_type_name(type)) {
                return parse_error(line_no, "invalid record type name");
            }
            if (current != nullptr) {
                return parse_error(line_no, "record header without blank-line separator");
            }
            records.push_back(Record{std::string(type), {}});
            current = &records.back();
            continue;
        }

        // Field line.
        if (current == nullptr) {
            return parse_error(line_no, "field line outside a record");
        }
        size_t sep = line.find(" = ");
        if (sep == std::string_view::npos) {
            return parse_error(line_no, "expected \"name = value\"");
        }
        std::string_view name = line.substr(0, sep);
        std::string_view raw = line.substr(sep + 3);
        if (!valid_field_name(name)) {
            return parse_error(line_no, "invalid field name");
        }
        if (raw == "<<<") {
            current->fields.push_back(Field{std::string(name), ""});
            open_multiline = &current->fields.back();
            multiline_start = line_no;
            multiline_first = true;
        } else {
            std::string value = trim(raw);
            if (value.empty()) {
                return parse_error(line_no, "empty value; omit absent fields");
            }
            current->fields.push_back(Field{std::string(name), std::move(value)});
        }
    }

    if (open_multiline != nullptr) {
        return parse_error(multiline_start, "unterminated multi-line value");
    }
    return records;
}

Result<std::string> write_records(const std::vector<Record>& records) {
    std::string out;
    bool first = true;
    for (const Record& r : records) {
        if (!first) {
            out.push_back('\n');
        }
        first = false;
        out.push_back('[');
        out.append(r.type);
        out.append("]\n");
        for (const Field& f : r.fields) {
            if (f.value.find('\r') != std::string::npos) {
                return make_error("unrepresentable-value",
                                  "field \"" + f.name + "\" contains a carriage return");
            }
            // A bare "<<<" value would read back as a multi-line opener, so it
            // is stored in multi-line form.
            if (f.value.find('\n') != std::string::npos || trim(f.value) == "<<<") {
                // Multi-line form; a ">>>" line inside the value would be
                // indistinguishable from the terminator.
                size_t start = 0;
                while (start <= f.value.size()) {
                    size_t end = f.value.find('\n', start);
                    if (end == std::string::npos) {
                        end = f.value.size();
                    }
                    if (f.value.substr(start, end - start) == ">>>") {
                        return make_error("unrepresentable-value",
                                          "field \"" + f.name +
                                              "\" contains a \">>>\" line");
                    }
                    if (end == f.value.size()) {
                        break;
                    }
                    start = end + 1;
                }
                out.append(f.name);
                out.append(" = <<<\n");
                out.append(f.value);
                out.append("\n>>>\n");
            } else {
                std::string trimmed = trim(f.value);
                if (trimmed.empty()) {
                    return make_error("unrepresentable-value",
                                      "field \"" + f.name +
                                          "\" has an empty value; omit absent fields");
                }
                out.append(f.name);
                out.append(" = ");
                out.append(trimmed);
                out.push_back('\n');
            }
        }
    }
    return out;
}

Record canonicalize_fields(Record record, const std::vector<std::string>& declared_order) {
    std::vector<Field> ordered;
    std::vector<bool> taken(record.fields.size(), false);
    for (const std::string& name : declared_order) {
        for (size_t i = 0; i < record.fields.size(); ++i) {
            if (!taken[i] && record.fields[i].name == name) {
                ordered.push_back(record.fields[i]);
                taken[i] = true;
            }
        }
    }
    for (size_t i = 0; i < record.fields.size(); ++i) {
        if (!taken[i]) {
            ordered.push_back(record.fields[i]);
        }
    }
    record.fields = std::move(ordered);
    return record;
}

}  // namespace kaf
