#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/util/time.hpp"

namespace forge::analytics {

enum class CourseVisibility { Public, Hidden };

struct Series {
    std::string id;
    std::string name;
    std::optional<util::TimestampMs> deadline;
    std::vector<std::string> activities;  // activity ids, as authored
    bool visible = true;
    // Hidden series are reachable only with this shared secret.
    std::optional<std::string> access_token;
};

struct Course {
    std::string id;
    std::string name;
    CourseVisibility visibility = CourseVisibility::Public;
    std::vector<Series> series;  // order = learning path order

    const Series* find_series(const std::string& series_id) const {
        for (const auto& s : series) {
            if (s.id == series_id) return &s;
        }
        return nullptr;
    }
};

}  // namespace forge::analytics
