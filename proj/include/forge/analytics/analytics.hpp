#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "forge/analytics/course.hpp"
#include "forge/feedback/model.hpp"
#include "forge/sched/submission.hpp"

namespace forge::analytics {

// Aggregations take the late-submission question explicitly: with
// include_late, everything counts; otherwise only submissions strictly
// before `deadline` do (no deadline: nothing is late).
struct AnalyticsFilter {
    std::optional<util::TimestampMs> deadline;
    bool include_late = true;

    bool admits(const sched::SubmissionRecord& r) const {
        if (include_late || !deadline) return true;
        return r.submitted_at < *deadline;
    }
};

// grid[weekday][hour], Monday = 0, in the given timezone.
using Punchcard = std::array<std::array<std::int64_t, 24>, 7>;

Punchcard punchcard(std::span<const sched::SubmissionRecord> submissions, util::TzOffset tz,
                    const AnalyticsFilter& filter = {});

// ISO date ("YYYY-MM-DD") in the given timezone → count.
std::map<std::string, std::int64_t> heatmap_by_day(std::span<const sched::SubmissionRecord> submissions,
                                                   util::TzOffset tz, const AnalyticsFilter& filter = {});

// Per activity in the series: assessed-status → count.
std::map<std::string, std::map<feedback::Status, std::int64_t>> status_distribution(
    const Series& series, std::span<const sched::SubmissionRecord> submissions,
    const AnalyticsFilter& filter = {});

// Per activity: fraction of students (distinct users in the input) with
// at least one correct submission at each sample time. Non-decreasing.
std::map<std::string, std::vector<double>> progression(const Series& series,
                                                       std::span<const sched::SubmissionRecord> submissions,
                                                       std::span<const util::TimestampMs> sample_times);

using UserActivity = std::pair<std::string, std::string>;  // (user_id, activity_id)

// Latest submission strictly before the deadline per (user, activity).
// Entries in `overrides` win when they name a real submission of that
// pair (the manual-overrule path).
std::map<UserActivity, std::int64_t> select_for_evaluation(
    const Series& series, std::span<const sched::SubmissionRecord> submissions,
    std::optional<util::TimestampMs> deadline = {},
    const std::map<UserActivity, std::int64_t>& overrides = {});

}  // namespace forge::analytics
