#include "forge/analytics/analytics.hpp"

#include <algorithm>
#include <set>

namespace forge::analytics {

namespace {

// Floor division; local timestamps can predate the epoch.
std::int64_t floor_div_ms_to_days(util::TimestampMs local_ms) {
    std::int64_t day_ms = 86'400'000;
    return (local_ms >= 0) ? local_ms / day_ms : -((-local_ms + day_ms - 1) / day_ms);
}

}  // namespace

Punchcard punchcard(std::span<const sched::SubmissionRecord> submissions, util::TzOffset tz,
                    const AnalyticsFilter& filter) {
    Punchcard grid{};
    for (const auto& r : submissions) {
        if (!filter.admits(r)) continue;
        auto local = tz.to_local(r.submitted_at);
        auto days = floor_div_ms_to_days(local);
        int weekday = util::weekday_monday0(days);
        auto civil = util::ms_to_civil(local);
        grid[static_cast<std::size_t>(weekday)][static_cast<std::size_t>(civil.hour)] += 1;
    }
    return grid;
}

std::map<std::string, std::int64_t> heatmap_by_day(std::span<const sched::SubmissionRecord> submissions,
                                                   util::TzOffset tz, const AnalyticsFilter& filter) {
    std::map<std::string, std::int64_t> out;
    for (const auto& r : submissions) {
        if (!filter.admits(r)) continue;
        auto civil = util::ms_to_civil(tz.to_local(r.submitted_at));
        out[util::format_date(civil.date)] += 1;
    }
    return out;
}

std::map<std::string, std::map<feedback::Status, std::int64_t>> status_distribution(
    const Series& series, std::span<const sched::SubmissionRecord> submissions,
    const AnalyticsFilter& filter) {
    std::map<std::string, std::map<feedback::Status, std::int64_t>> out;
    for (const auto& activity : series.activities) out[activity];  // all-zero maps for empty activities
    for (const auto& r : submissions) {
        if (!filter.admits(r) || !r.result_status) continue;
        auto it = out.find(r.activity_id);
        if (it == out.end()) continue;  // not part of this series
        it->second[*r.result_status] += 1;
    }
    return out;
}

std::map<std::string, std::vector<double>> progression(const Series& series,
                                                       std::span<const sched::SubmissionRecord> submissions,
                                                       std::span<const util::TimestampMs> sample_times) {
    std::set<std::string> students;
    for (const auto& r : submissions) students.insert(r.user_id);

    // (activity → user → earliest correct time)
    std::map<std::string, std::map<std::string, util::TimestampMs>> first_correct;
    for (const auto& r : submissions) {
        if (r.result_status != feedback::Status::Correct) continue;
        auto& per_user = first_correct[r.activity_id];
        auto it = per_user.find(r.user_id);
        if (it == per_user.end() || r.submitted_at < it->second) per_user[r.user_id] = r.submitted_at;
    }

    std::map<std::string, std::vector<double>> out;
    for (const auto& activity : series.activities) {
        auto& curve = out[activity];
        curve.reserve(sample_times.size());
        const auto& per_user = first_correct[activity];
        for (auto t : sample_times) {
            std::int64_t solved = std::count_if(per_user.begin(), per_user.end(),
                                                [&](const auto& kv) { return kv.second <= t; });
            curve.push_back(students.empty() ? 0.0
                                             : static_cast<double>(solved) /
                                                   static_cast<double>(students.size()));
        }
    }
    return out;
}

std::map<UserActivity, std::int64_t> select_for_evaluation(
    const Series& series, std::span<const sched::SubmissionRecord> submissions,
    std::optional<util::TimestampMs> deadline, const std::map<UserActivity, std::int64_t>& overrides) {
    auto effective_deadline = deadline ? deadline : series.deadline;
    std::set<std::string> in_series(series.activities.begin(), series.activities.end());

    std::map<UserActivity, std::int64_t> out;
    if (effective_deadline) {
        // Latest = max submitted_at, ties broken by id (later insert wins).
        std::map<UserActivity, const sched::SubmissionRecord*> best;
        for (const auto& r : submissions) {
            if (!in_series.count(r.activity_id)) continue;
            if (r.submitted_at >= *effective_deadline) continue;
            UserActivity key{r.user_id, r.activity_id};
            auto it = best.find(key);
            if (it == best.end() || r.submitted_at > it->second->submitted_at ||
                (r.submitted_at == it->second->submitted_at && r.id > it->second->id)) {
                best[key] = &r;
            }
        }
        for (const auto& [key, record] : best) out[key] = record->id;
    }

    for (const auto& [key, id] : overrides) {
        if (!in_series.count(key.second)) continue;
        bool valid = std::any_of(submissions.begin(), submissions.end(), [&](const auto& r) {
            return r.id == id && r.user_id == key.first && r.activity_id == key.second;
        });
        if (valid) out[key] = id;
    }
    return out;
}

}  // namespace forge::analytics
