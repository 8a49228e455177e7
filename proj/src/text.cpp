#include "kaf/text.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>

namespace kaf {

namespace {

bool is_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) {
        v = v * 10 + (c - '0');
    }
    return v;
}

bool is_alpha(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool is_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::vector<std::string> split_list(std::string_view s, char sep) {
    std::vector<std::string> items;
    size_t start = 0;
    while (start <= s.size()) {
        size_t end = s.find(sep, start);
        if (end == std::string_view::npos) {
            end = s.size();
        }
        std::string item = trim(s.substr(start, end - start));
        if (!item.empty()) {
            items.push_back(std::move(item));
        }
        if (end == s.size()) {
            break;
        }
        start = end + 1;
    }
    return items;
}

std::string slugify(std::string_view name) {
    std::string slug;
    bool pending_hyphen = false;
    for (char c : name) {
        if (is_alnum(c)) {
            if (pending_hyphen && !slug.empty()) {
                slug.push_back('-');
            }
            pending_hyphen = false;
            slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else {
            pending_hyphen = true;
        }
    }
    if (slug.empty()) {
        return "audit";
    }
    return slug;
}

bool is_valid_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        return false;
    }
    std::string_view y = s.substr(0, 4);
    std::string_view m = s.substr(5, 2);
    std::string_view d = s.substr(8, 2);
    if (!is_digits(y) || !is_digits(m) || !is_digits(d)) {
        return false;
    }
    std::chrono::year_month_day ymd{std::chrono::year{to_int(y)},
                                    std::chrono::month{static_cast<unsigned>(to_int(m))},
                                    std::chrono::day{static_cast<unsigned>(to_int(d))}};
    return ymd.ok();
}

bool is_valid_timestamp(std::string_view s) {
    // YYYY-MM-DDTHH:MM:SSZ = 20 chars
    if (s.size() != 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z') {
        return false;
    }
    if (!is_valid_date(s.substr(0, 10))) {
        return false;
    }
    std::string_view hh = s.substr(11, 2);
    std::string_view mm = s.substr(14, 2);
    std::string_view ss = s.substr(17, 2);
    if (!is_digits(hh) || !is_digits(mm) || !is_digits(ss)) {
        return false;
    }
    return to_int(hh) <= 23 && to_int(mm) <= 59 && to_int(ss) <= 59;
}

bool is_valid_language_tag(std::string_view s) {
    size_t i = 0;
    size_t primary_len = 0;
    while (i < s.size() && is_alpha(s[i])) {
        ++i;
        ++primary_len;
    }
    if (primary_len < 2 || primary_len > 3) {
        return false;
    }
    while (i < s.size()) {
        if (s[i] != '-') {
            return false;
        }
        ++i;
        size_t sub_len = 0;
        while (i < s.size() && is_alnum(s[i])) {
            ++i;
            ++sub_len;
        }
        if (sub_len < 1 || sub_len > 8) {
            return false;
        }
    }
    return true;
}

bool is_valid_url(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) ||
            static_cast<unsigned char>(c) < 0x20) {
            return false;
        }
    }
    size_t scheme_end = s.find("://");
    if (scheme_end != std::string_view::npos) {
        if (scheme_end == 0 || !is_alpha(s[0])) {
            return false;
        }
        for (size_t i = 1; i < scheme_end; ++i) {
            char c = s[i];
            if (!is_alnum(c) && c != '+' && c != '.' && c != '-') {
                return false;
            }
        }
        return scheme_end + 3 < s.size();
    }
    // Bare domain path: host segment must contain a dot.
    std::string_view host = s.substr(0, s.find('/'));
    return host.find('.') != std::string_view::npos && host.front() != '.' &&
           host.back() != '.';
}

std::string now_timestamp_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::string today_utc() {
    return now_timestamp_utc().substr(0, 10);
}

}  // namespace kaf
