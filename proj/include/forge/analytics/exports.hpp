#pragma once

#include <span>
#include <string>

#include "forge/analytics/course.hpp"
#include "forge/sched/submission.hpp"

namespace forge::analytics {

// RFC 4180 CSV (CRLF, quoted where needed), rows ordered by submission
// id. User identities are replaced by a keyed pseudonym stable per
// (course, user); identical inputs yield byte-identical output.
std::string export_csv(std::span<const sched::SubmissionRecord> submissions,
                       const std::string& pseudonym_key);

std::string pseudonym(const std::string& pseudonym_key, const std::string& course_id,
                      const std::string& user_id);

// RFC 5545 calendar: one VEVENT per deadlined series, CRLF lines folded
// at 75 octets, UIDs stable across regenerations.
std::string ical_feed(const Course& course);

}  // namespace forge::analytics
