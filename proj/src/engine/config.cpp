#include "forge/engine/config.hpp"

#include <json.hpp>

#include "forge/util/fs.hpp"
#include "forge/util/time.hpp"

namespace forge::engine {

using nlohmann::json;

std::optional<EngineConfig> parse_engine_config(const std::string& text, std::string* error) {
    auto fail = [&](const std::string& why) {
        if (error) *error = why;
        return std::nullopt;
    };
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return fail("config is not a JSON object");

    EngineConfig cfg;
    try {
        if (doc.contains("store_path")) cfg.store_path = doc["store_path"].get<std::string>();
        if (doc.contains("judges_dir")) cfg.judges_dir = doc["judges_dir"].get<std::string>();
        if (doc.contains("workspace_root")) cfg.workspace_root = doc["workspace_root"].get<std::string>();
        if (doc.contains("backend")) cfg.backend = doc["backend"].get<std::string>();
        if (doc.contains("container_runtime"))
            cfg.container_runtime = doc["container_runtime"].get<std::string>();
        if (doc.contains("workers")) cfg.workers = doc["workers"].get<std::size_t>();
        if (doc.contains("listen")) {
            cfg.listen_host = doc["listen"].value("host", cfg.listen_host);
            cfg.listen_port = doc["listen"].value("port", cfg.listen_port);
        }
        if (doc.contains("submission_max_bytes"))
            cfg.submission_max_bytes = doc["submission_max_bytes"].get<std::size_t>();
        if (doc.contains("rate_limit_per_min")) cfg.rate_limit_per_min = doc["rate_limit_per_min"].get<int>();
        if (doc.contains("export_key")) cfg.export_key = doc["export_key"].get<std::string>();

        for (const auto& jr : doc.value("repos", json::array())) {
            repo::RepoConfig repo;
            repo.id = jr.at("id").get<std::string>();
            repo.path = jr.at("path").get<std::string>();
            repo.remote_url = jr.value("remote_url", std::string());
            repo.default_branch = jr.value("default_branch", std::string("main"));
            repo.secret = jr.value("secret", std::string());
            cfg.repos.push_back(std::move(repo));
        }

        for (const auto& jc : doc.value("courses", json::array())) {
            analytics::Course course;
            course.id = jc.at("id").get<std::string>();
            course.name = jc.value("name", course.id);
            if (jc.value("visibility", std::string("public")) == "hidden") {
                course.visibility = analytics::CourseVisibility::Hidden;
            }
            for (const auto& js : jc.value("series", json::array())) {
                analytics::Series series;
                series.id = js.at("id").get<std::string>();
                series.name = js.value("name", series.id);
                if (js.contains("deadline")) {
                    auto deadline = util::parse_iso8601(js["deadline"].get<std::string>());
                    if (!deadline) return fail("series " + series.id + " has an unparseable deadline");
                    series.deadline = *deadline;
                }
                if (js.contains("activities"))
                    series.activities = js["activities"].get<std::vector<std::string>>();
                series.visible = js.value("visible", true);
                if (js.contains("access_token"))
                    series.access_token = js["access_token"].get<std::string>();
                course.series.push_back(std::move(series));
            }
            cfg.courses.push_back(std::move(course));
        }

        for (const auto& [user, ju] : doc.value("users", json::object()).items()) {
            cfg.user_languages[user] = ju.value("natural_language", std::string("en"));
        }
    } catch (const json::exception& e) {
        return fail(e.what());
    }
    if (cfg.backend != "host-process" && cfg.backend != "container") {
        return fail("backend must be \"host-process\" or \"container\"");
    }
    return cfg;
}

std::optional<EngineConfig> load_engine_config(const std::filesystem::path& path, std::string* error) {
    auto text = util::read_file(path);
    if (!text) {
        if (error) *error = "cannot read config file " + path.string();
        return std::nullopt;
    }
    return parse_engine_config(*text, error);
}

}  // namespace forge::engine
