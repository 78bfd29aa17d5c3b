#include "forge/analytics/exports.hpp"

#include <algorithm>

#include "forge/util/hashing.hpp"

namespace forge::analytics {

namespace {

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

// RFC 5545 TEXT escaping.
std::string ical_escape(const std::string& value) {
    std::string out;
    for (char c : value) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case ';': out += "\\;"; break;
            case ',': out += "\\,"; break;
            case '\n': out += "\\n"; break;
            case '\r': break;
            default: out += c;
        }
    }
    return out;
}

// Folds at 75 octets without splitting a UTF-8 sequence; continuation
// lines start with one space.
void fold_line(std::string& out, const std::string& line) {
    std::size_t limit = 75;
    std::size_t pos = 0;
    bool first = true;
    while (line.size() - pos > limit) {
        std::size_t take = limit;
        while (take > 1 && (static_cast<unsigned char>(line[pos + take]) & 0xC0) == 0x80) --take;
        out += line.substr(pos, take);
        out += "\r\n ";
        pos += take;
        if (first) {
            first = false;
            limit = 74;  // continuation lines carry a leading space
        }
    }
    out += line.substr(pos);
    out += "\r\n";
}

}  // namespace

std::string pseudonym(const std::string& pseudonym_key, const std::string& course_id,
                      const std::string& user_id) {
    return util::hmac_sha256_hex(pseudonym_key, course_id + "\x1f" + user_id).substr(0, 16);
}

std::string export_csv(std::span<const sched::SubmissionRecord> submissions,
                       const std::string& pseudonym_key) {
    std::vector<const sched::SubmissionRecord*> ordered;
    ordered.reserve(submissions.size());
    for (const auto& r : submissions) ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->id < b->id; });

    std::string out = "id,user,course,series,activity,lifecycle,result_status,submitted_at\r\n";
    for (const auto* r : ordered) {
        out += std::to_string(r->id);
        out += ',';
        out += csv_field(pseudonym(pseudonym_key, r->course_id, r->user_id));
        out += ',';
        out += csv_field(r->course_id);
        out += ',';
        out += csv_field(r->series_id);
        out += ',';
        out += csv_field(r->activity_id);
        out += ',';
        out += lifecycle_name(r->lifecycle);
        out += ',';
        if (r->result_status) out += std::string(feedback::status_name(*r->result_status));
        out += ',';
        out += util::format_iso8601(r->submitted_at);
        out += "\r\n";
    }
    return out;
}

std::string ical_feed(const Course& course) {
    std::string out;
    fold_line(out, "BEGIN:VCALENDAR");
    fold_line(out, "VERSION:2.0");
    fold_line(out, "PRODID:-//forge-judge//deadline feed//EN");
    fold_line(out, "CALSCALE:GREGORIAN");
    for (const auto& series : course.series) {
        if (!series.deadline) continue;
        // Deadline-derived DTSTAMP keeps regeneration byte-identical.
        auto stamp = util::format_ical_utc(*series.deadline);
        fold_line(out, "BEGIN:VEVENT");
        fold_line(out, "UID:" + util::sha256_hex(course.id + "\x1f" + series.id).substr(0, 16) +
                           "@forge-judge");
        fold_line(out, "DTSTAMP:" + stamp);
        fold_line(out, "DTSTART:" + stamp);
        fold_line(out, "SUMMARY:" + ical_escape(series.name + " (" + course.name + ")"));
        fold_line(out, "END:VEVENT");
    }
    fold_line(out, "END:VCALENDAR");
    return out;
}

}  // namespace forge::analytics
