#include "forge/api/server.hpp"

#include <httplib.h>
#include <json.hpp>

#include <mutex>

#include "forge/analytics/exports.hpp"
#include "forge/feedback/wire.hpp"
#include "forge/util/hashing.hpp"
#include "forge/util/time.hpp"

namespace forge::api {

using nlohmann::json;

const std::vector<RouteInfo>& route_table() {
    static const std::vector<RouteInfo> table = {
        {"POST", "/api/submissions", true, true},
        {"GET", "/api/submissions/{id}", true, false},
        {"GET", "/api/activities", true, false},
        {"GET", "/api/courses/{id}", true, false},
        {"GET", "/api/courses/{id}/export.csv", true, false},
        {"POST", "/webhooks/{repo_id}", false, true, true},
        {"GET", "/courses/{id}/calendar.ics", false, false},
        {"GET", "/health", false, false},
        {"GET", "/metrics", false, false},
    };
    return table;
}

namespace {

void send_json(httplib::Response& res, int code, const json& body) {
    res.status = code;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int code, const std::string& message) {
    send_json(res, code, json{{"error", message}});
}

const char* kind_name(repo::ActivityKind kind) {
    return kind == repo::ActivityKind::Reading ? "reading" : "exercise";
}

}  // namespace

struct ApiServer::Impl {
    ApiDeps deps;
    httplib::Server server;
    std::mutex rate_mutex;
    // token hash → (window minute, submissions in window)
    std::map<std::string, std::pair<std::int64_t, int>> rate_windows;

    explicit Impl(ApiDeps d) : deps(std::move(d)) { setup_routes(); }

    std::optional<sched::TokenInfo> authenticate(const httplib::Request& req) {
        auto header = req.get_header_value("Authorization");
        const std::string prefix = "Token ";
        if (header.rfind(prefix, 0) != 0) return std::nullopt;
        auto hash = util::sha256_hex(header.substr(prefix.size()));
        auto token = deps.store.find_token(hash);
        // The lookup is by hash already; the extra compare stays
        // constant-time on the equality path.
        if (!token || !util::constant_time_equal(token->secret_hash, hash)) return std::nullopt;
        return token;
    }

    static bool has_scope(const sched::TokenInfo& token, const char* scope) {
        return token.scopes.count(scope) != 0 || token.scopes.count("admin") != 0;
    }

    bool within_rate_limit(const std::string& token_hash) {
        if (deps.rate_limit_per_min <= 0) return true;
        std::int64_t minute = util::now_ms() / 60'000;
        std::lock_guard lock(rate_mutex);
        auto& window = rate_windows[token_hash];
        if (window.first != minute) window = {minute, 0};
        if (window.second >= deps.rate_limit_per_min) return false;
        window.second += 1;
        return true;
    }

    const analytics::Course* find_course(const std::string& id) const {
        for (const auto& c : deps.courses) {
            if (c.id == id) return &c;
        }
        return nullptr;
    }

    json submission_to_json(const sched::SubmissionRecord& r, bool admin) {
        json doc{
            {"id", r.id},
            {"user_id", r.user_id},
            {"course_id", r.course_id},
            {"series_id", r.series_id},
            {"activity_id", r.activity_id},
            {"code", r.code},
            {"lifecycle", sched::lifecycle_name(r.lifecycle)},
            {"submitted_at", util::format_iso8601(r.submitted_at)},
            {"attempt_count", r.attempt_count},
        };
        if (r.result_status) doc["result_status"] = std::string(feedback::status_name(*r.result_status));
        if (r.lifecycle == sched::Lifecycle::Assessed && r.feedback_doc) {
            try {
                auto tree = feedback::parse_feedback(*r.feedback_doc, feedback::ParseMode::Lenient);
                if (!admin) tree = feedback::strip_staff_messages(std::move(tree));
                doc["feedback"] = json::parse(feedback::canonical_serialize(tree));
            } catch (const std::exception&) {
                doc["feedback"] = nullptr;
            }
        }
        return doc;
    }

    void setup_routes() {
        server.Post("/api/submissions", [this](const httplib::Request& req, httplib::Response& res) {
            auto token = authenticate(req);
            if (!token) return send_error(res, 401, "missing or invalid token");
            if (!has_scope(*token, "submit")) return send_error(res, 403, "token lacks submit scope");
            if (!within_rate_limit(token->secret_hash)) {
                return send_error(res, 429, "submission rate limit exceeded");
            }
            json body = json::parse(req.body, nullptr, false);
            if (body.is_discarded() || !body.is_object() || !body.contains("activity_id") ||
                !body.contains("code")) {
                return send_error(res, 400, "body must be a JSON object with activity_id and code");
            }
            sched::EnqueueRequest request;
            request.user_id = token->user_id;
            request.activity_id = body["activity_id"].get<std::string>();
            request.code = body["code"].get<std::string>();
            request.course_id = body.value("course_id", std::string());
            request.series_id = body.value("series_id", std::string());

            auto outcome = deps.scheduler.enqueue(request);
            if (auto* err = std::get_if<sched::EnqueueError>(&outcome)) {
                switch (*err) {
                    case sched::EnqueueError::UnknownActivity:
                        return send_error(res, 404, "unknown activity " + request.activity_id);
                    case sched::EnqueueError::NotAnExercise:
                        return send_error(res, 422, "activity does not accept submissions");
                    case sched::EnqueueError::CodeTooLarge:
                        return send_error(res, 413, "submission exceeds the size limit");
                }
            }
            send_json(res, 201, json{{"id", std::get<std::int64_t>(outcome)}});
        });

        server.Get(R"(/api/submissions/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
            auto token = authenticate(req);
            if (!token) return send_error(res, 401, "missing or invalid token");
            if (!has_scope(*token, "read")) return send_error(res, 403, "token lacks read scope");
            auto record = deps.store.get_submission(std::stoll(req.matches[1].str()));
            if (!record) return send_error(res, 404, "no such submission");
            bool admin = token->scopes.count("admin") != 0;
            if (!admin && record->user_id != token->user_id) {
                return send_error(res, 403, "submission belongs to another user");
            }
            send_json(res, 200, submission_to_json(*record, admin));
        });

        server.Get("/api/activities", [this](const httplib::Request& req, httplib::Response& res) {
            auto token = authenticate(req);
            if (!token) return send_error(res, 401, "missing or invalid token");
            if (!has_scope(*token, "read")) return send_error(res, 403, "token lacks read scope");
            auto label = req.get_param_value("label");
            json items = json::array();
            for (const auto& activity : deps.registry.list()) {
                if (!label.empty() && !activity->labels.count(label)) continue;
                json langs = json::array();
                for (const auto& [lang, desc] : activity->descriptions) langs.push_back(lang);
                items.push_back(json{
                    {"id", activity->id},
                    {"kind", kind_name(activity->kind)},
                    {"repo_id", activity->repo_id},
                    {"path", activity->rel_path},
                    {"labels", activity->labels},
                    {"programming_language",
                     activity->merged_config.programming_language.value_or("generic")},
                    {"access", activity->access == repo::Access::Restricted ? "restricted" : "public"},
                    {"natural_languages", langs},
                    {"boilerplate", activity->merged_config.boilerplate.value_or("")},
                });
            }
            send_json(res, 200, json{{"activities", items}});
        });

        server.Get(R"(/api/courses/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            auto token = authenticate(req);
            if (!token) return send_error(res, 401, "missing or invalid token");
            if (!has_scope(*token, "read")) return send_error(res, 403, "token lacks read scope");
            const auto* course = find_course(req.matches[1].str());
            if (!course) return send_error(res, 404, "no such course");
            auto series_token = req.get_param_value("series_token");
            json series = json::array();
            for (const auto& s : course->series) {
                bool unlocked = s.access_token && !series_token.empty() &&
                                util::constant_time_equal(*s.access_token, series_token);
                if (!s.visible && !unlocked) continue;
                json entry{{"id", s.id},
                           {"name", s.name},
                           {"activities", s.activities},
                           {"visible", s.visible}};
                if (s.deadline) entry["deadline"] = util::format_iso8601(*s.deadline);
                series.push_back(std::move(entry));
            }
            send_json(res, 200,
                      json{{"id", course->id},
                           {"name", course->name},
                           {"visibility",
                            course->visibility == analytics::CourseVisibility::Hidden ? "hidden" : "public"},
                           {"series", series}});
        });

        server.Get(R"(/api/courses/([^/]+)/export\.csv)",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       auto token = authenticate(req);
                       if (!token) return send_error(res, 401, "missing or invalid token");
                       if (!has_scope(*token, "read")) return send_error(res, 403, "token lacks read scope");
                       const auto* course = find_course(req.matches[1].str());
                       if (!course) return send_error(res, 404, "no such course");
                       sched::SubmissionFilter filter;
                       filter.course_id = course->id;
                       auto rows = deps.store.list_submissions(filter);
                       res.status = 200;
                       res.set_content(analytics::export_csv(rows, deps.export_key), "text/csv");
                   });

        server.Post(R"(/webhooks/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            auto signature = req.get_header_value("X-Hub-Signature-256");
            auto result = deps.registry.handle_webhook(req.matches[1].str(), req.body, signature);
            switch (result.status) {
                case repo::WebhookStatus::UnknownRepo:
                    return send_error(res, 404, "unknown repository");
                case repo::WebhookStatus::BadSignature:
                    return send_error(res, 401, "signature verification failed");
                case repo::WebhookStatus::BadPayload:
                    return send_error(res, 400, "payload is not a push document");
                case repo::WebhookStatus::IgnoredBranch:
                    return send_json(res, 202, json{{"synced", false}, {"reason", "not the default branch"}});
                case repo::WebhookStatus::Synced:
                    return send_json(res, 202,
                                     json{{"synced", true},
                                          {"added", result.report.added.size()},
                                          {"updated", result.report.updated.size()},
                                          {"removed", result.report.removed.size()}});
            }
        });

        server.Get(R"(/courses/([^/]+)/calendar\.ics)",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       const auto* course = find_course(req.matches[1].str());
                       if (!course) return send_error(res, 404, "no such course");
                       res.status = 200;
                       res.set_content(analytics::ical_feed(*course), "text/calendar");
                   });

        server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, json{{"status", "ok"}, {"queue_depth", deps.scheduler.queue_depth()}});
        });

        server.Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
            auto lifecycle = deps.store.count_by_lifecycle();
            auto statuses = deps.store.count_by_status();
            json doc{{"submissions",
                      {{"queued", lifecycle[sched::Lifecycle::Queued]},
                       {"running", lifecycle[sched::Lifecycle::Running]},
                       {"assessed", lifecycle[sched::Lifecycle::Assessed]}}},
                     {"results", json::object()}};
            for (const auto& [status, count] : statuses) {
                doc["results"][std::string(feedback::status_name(status))] = count;
            }
            send_json(res, 200, doc);
        });
    }
};

ApiServer::ApiServer(ApiDeps deps, std::string host, int port)
    : impl_(std::make_unique<Impl>(std::move(deps))), host_(std::move(host)), port_(port) {}

ApiServer::~ApiServer() {
    stop();
}

bool ApiServer::start() {
    if (port_ == 0) {
        int bound = impl_->server.bind_to_any_port(host_);
        if (bound < 0) return false;
        port_ = bound;
    } else if (!impl_->server.bind_to_port(host_, port_)) {
        return false;
    }
    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    for (int i = 0; i < 200 && !impl_->server.is_running(); ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    return impl_->server.is_running();
}

void ApiServer::stop() {
    if (impl_) impl_->server.stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace forge::api
