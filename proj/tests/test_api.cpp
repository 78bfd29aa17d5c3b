#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <filesystem>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "forge/analytics/exports.hpp"
#include "forge/engine/engine.hpp"
#include "forge/sched/store.hpp"
#include "forge/util/hashing.hpp"
#include "forge/util/time.hpp"
#include "test_paths.hpp"

using namespace forge;
using nlohmann::json;

namespace {

const std::string kEchoCode = "#!/usr/bin/env python3\nimport sys\nsys.stdout.write(sys.stdin.read())\n";

std::string aid(const std::string& rel_path) {
    return util::sha256_hex("fixtures" + rel_path).substr(0, 16);
}

struct ApiFixture {
    std::filesystem::path dir;
    std::unique_ptr<engine::Engine> eng;
    httplib::Client client;

    explicit ApiFixture(int rate_limit_per_min = 30)
        : dir(make_scratch()),
          eng(make_engine(dir, rate_limit_per_min)),
          client("127.0.0.1", start_and_port(*eng)) {
        add_token("alice-secret", "alice", {"submit", "read"});
        add_token("bob-secret", "bob", {"submit", "read"});
        add_token("staff-secret", "staff", {"admin"});
        add_token("submit-only", "poster", {"submit"});
        add_token("read-only", "watcher", {"read"});
        client.set_connection_timeout(5);
        client.set_read_timeout(30);
    }

    static std::unique_ptr<engine::Engine> make_engine(const std::filesystem::path& dir,
                                                       int rate_limit_per_min) {
        std::filesystem::copy(FORGE_FIXTURES_DIR "/repo", dir / "repo",
                              std::filesystem::copy_options::recursive);

        engine::EngineConfig config;
        config.store_path = dir / "forge.db";
        config.judges_dir = FORGE_BUILD_JUDGES_DIR;
        config.workspace_root = dir / "workspaces";
        config.backend = "host-process";
        config.workers = 1;
        config.listen_host = "127.0.0.1";
        config.listen_port = 0;
        config.rate_limit_per_min = rate_limit_per_min;
        config.export_key = "export-key";

        repo::RepoConfig repo;
        repo.id = "fixtures";
        repo.path = dir / "repo";
        repo.secret = "webhook-secret";
        config.repos = {repo};

        analytics::Series s1;
        s1.id = "s1";
        s1.name = "Basics";
        s1.deadline = util::parse_iso8601("2030-01-01T00:00:00Z");
        s1.activities = {aid("echo"), aid("sum")};
        analytics::Series s2;
        s2.id = "s2";
        s2.name = "Secret track";
        s2.activities = {aid("loop")};
        s2.visible = false;
        s2.access_token = "sesame";
        analytics::Course course;
        course.id = "algo";
        course.name = "Algorithms";
        course.series = {s1, s2};
        config.courses = {course};
        return std::make_unique<engine::Engine>(config);
    }

    static int start_and_port(engine::Engine& eng) {
        eng.sync_all();
        REQUIRE(eng.start_api());
        return eng.api().port();
    }

    ~ApiFixture() {
        if (eng) eng->stop();
    }

    static std::filesystem::path make_scratch() {
        static int counter = 0;
        auto dir = std::filesystem::path("/tmp/forge-api-test-" + std::to_string(counter++));
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

    void add_token(const std::string& secret, const std::string& user,
                   std::set<std::string> scopes) {
        sched::TokenInfo token;
        token.secret_hash = util::sha256_hex(secret);
        token.user_id = user;
        token.scopes = std::move(scopes);
        token.created_at = util::now_ms();
        eng->store().put_token(token);
    }

    static httplib::Headers auth(const std::string& secret) {
        return {{"Authorization", "Token " + secret}};
    }

    httplib::Result post_submission(const std::string& secret, const json& body) {
        return client.Post("/api/submissions", auth(secret), body.dump(), "application/json");
    }

    std::int64_t submit_ok(const std::string& secret, const std::string& activity,
                           const std::string& code) {
        auto res = post_submission(secret, json{{"activity_id", activity},
                                                {"code", code},
                                                {"course_id", "algo"},
                                                {"series_id", "s1"}});
        REQUIRE(res);
        REQUIRE(res->status == 201);
        return json::parse(res->body).at("id").get<std::int64_t>();
    }
};

}  // namespace

TEST_CASE("health and metrics answer without credentials") {
    ApiFixture fx;
    auto health = fx.client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    auto doc = json::parse(health->body);
    CHECK(doc.at("status") == "ok");
    CHECK(doc.at("queue_depth") == 0);

    auto metrics = fx.client.Get("/metrics");
    REQUIRE(metrics);
    CHECK(metrics->status == 200);
    auto m = json::parse(metrics->body);
    CHECK(m.at("submissions").at("queued") == 0);
    CHECK(m.at("submissions").at("assessed") == 0);
}

TEST_CASE("every authenticated route rejects missing bad and underscoped tokens") {
    ApiFixture fx;

    auto no_token = fx.client.Get("/api/activities");
    REQUIRE(no_token);
    CHECK(no_token->status == 401);

    auto bad_token = fx.client.Get("/api/activities", ApiFixture::auth("nope"));
    REQUIRE(bad_token);
    CHECK(bad_token->status == 401);

    auto bad_scheme = fx.client.Get("/api/activities",
                                    httplib::Headers{{"Authorization", "Bearer alice-secret"}});
    REQUIRE(bad_scheme);
    CHECK(bad_scheme->status == 401);

    auto wrong_scope = fx.client.Get("/api/activities", ApiFixture::auth("submit-only"));
    REQUIRE(wrong_scope);
    CHECK(wrong_scope->status == 403);

    auto cannot_post = fx.post_submission("read-only", json{{"activity_id", aid("echo")},
                                                            {"code", "x"}});
    REQUIRE(cannot_post);
    CHECK(cannot_post->status == 403);

    // admin scope implies both
    auto as_admin = fx.client.Get("/api/activities", ApiFixture::auth("staff-secret"));
    REQUIRE(as_admin);
    CHECK(as_admin->status == 200);
}

TEST_CASE("submission validation maps to the right status codes") {
    ApiFixture fx;

    auto bad_json = fx.client.Post("/api/submissions", ApiFixture::auth("alice-secret"),
                                   "{nope", "application/json");
    REQUIRE(bad_json);
    CHECK(bad_json->status == 400);

    auto not_object = fx.client.Post("/api/submissions", ApiFixture::auth("alice-secret"), "42",
                                     "application/json");
    REQUIRE(not_object);
    CHECK(not_object->status == 400);

    auto ghost = fx.post_submission("alice-secret", json{{"activity_id", "no-such"},
                                                         {"code", "x"}});
    REQUIRE(ghost);
    CHECK(ghost->status == 404);

    auto reading = fx.post_submission("alice-secret", json{{"activity_id", aid("notes")},
                                                           {"code", "x"}});
    REQUIRE(reading);
    CHECK(reading->status == 422);

    auto oversize = fx.post_submission(
        "alice-secret", json{{"activity_id", aid("echo")}, {"code", std::string(70 * 1024, 'a')}});
    REQUIRE(oversize);
    CHECK(oversize->status == 413);
}

TEST_CASE("a submission travels from accepted to assessed over the API") {
    ApiFixture fx;
    auto id = fx.submit_ok("alice-secret", aid("echo"), kEchoCode);

    auto path = "/api/submissions/" + std::to_string(id);
    auto queued = fx.client.Get(path, ApiFixture::auth("alice-secret"));
    REQUIRE(queued);
    REQUIRE(queued->status == 200);
    auto qdoc = json::parse(queued->body);
    CHECK(qdoc.at("lifecycle") == "queued");
    CHECK(qdoc.at("user_id") == "alice");
    CHECK(!qdoc.contains("result_status"));

    // other users cannot read it, admins can
    auto foreign = fx.client.Get(path, ApiFixture::auth("bob-secret"));
    REQUIRE(foreign);
    CHECK(foreign->status == 403);
    auto as_admin = fx.client.Get(path, ApiFixture::auth("staff-secret"));
    REQUIRE(as_admin);
    CHECK(as_admin->status == 200);

    REQUIRE(fx.eng->scheduler().run_one("test-worker"));

    auto assessed = fx.client.Get(path, ApiFixture::auth("alice-secret"));
    REQUIRE(assessed);
    REQUIRE(assessed->status == 200);
    auto adoc = json::parse(assessed->body);
    CHECK(adoc.at("lifecycle") == "assessed");
    CHECK(adoc.at("result_status") == "correct");
    CHECK(adoc.at("feedback").at("status") == "correct");
    CHECK(adoc.at("attempt_count") == 1);

    auto missing = fx.client.Get("/api/submissions/424242", ApiFixture::auth("alice-secret"));
    REQUIRE(missing);
    CHECK(missing->status == 404);
}

TEST_CASE("staff messages are stripped for students and kept for admins") {
    ApiFixture fx;
    auto id = fx.submit_ok("alice-secret", aid("echo"), kEchoCode);

    // finalize with handcrafted feedback carrying a staff-only note
    std::string doc =
        R"({"status":"correct","tabs":[],"messages":[)"
        R"({"body":"visible to all","format":"plain","visibility":"student"},)"
        R"({"body":"grader internals","format":"plain","visibility":"staff"}]})";
    fx.eng->store().finalize(id, feedback::Status::Correct, doc);

    auto path = "/api/submissions/" + std::to_string(id);
    auto student = fx.client.Get(path, ApiFixture::auth("alice-secret"));
    REQUIRE(student);
    CHECK(student->body.find("visible to all") != std::string::npos);
    CHECK(student->body.find("grader internals") == std::string::npos);

    auto admin = fx.client.Get(path, ApiFixture::auth("staff-secret"));
    REQUIRE(admin);
    CHECK(admin->body.find("grader internals") != std::string::npos);
}

TEST_CASE("activity listing supports label filtering") {
    ApiFixture fx;
    auto res = fx.client.Get("/api/activities", ApiFixture::auth("alice-secret"));
    REQUIRE(res);
    REQUIRE(res->status == 200);
    auto items = json::parse(res->body).at("activities");
    REQUIRE(items.size() == 4);
    std::set<std::string> kinds;
    for (const auto& item : items) kinds.insert(item.at("kind").get<std::string>());
    CHECK(kinds == std::set<std::string>{"exercise", "reading"});

    auto math = fx.client.Get("/api/activities?label=math", ApiFixture::auth("alice-secret"));
    REQUIRE(math);
    auto math_items = json::parse(math->body).at("activities");
    REQUIRE(math_items.size() == 1);
    CHECK(math_items[0].at("id") == aid("sum"));

    // the dirconfig label reaches every activity
    auto all = fx.client.Get("/api/activities?label=fixture", ApiFixture::auth("alice-secret"));
    REQUIRE(all);
    CHECK(json::parse(all->body).at("activities").size() == 4);
}

TEST_CASE("hidden series stay hidden until the share token is presented") {
    ApiFixture fx;
    auto plain = fx.client.Get("/api/courses/algo", ApiFixture::auth("alice-secret"));
    REQUIRE(plain);
    REQUIRE(plain->status == 200);
    auto doc = json::parse(plain->body);
    REQUIRE(doc.at("series").size() == 1);
    CHECK(doc.at("series")[0].at("id") == "s1");
    CHECK(doc.at("series")[0].at("deadline") == "2030-01-01T00:00:00.000Z");

    auto unlocked = fx.client.Get("/api/courses/algo?series_token=sesame",
                                  ApiFixture::auth("alice-secret"));
    REQUIRE(unlocked);
    CHECK(json::parse(unlocked->body).at("series").size() == 2);

    auto wrong = fx.client.Get("/api/courses/algo?series_token=wrong",
                               ApiFixture::auth("alice-secret"));
    REQUIRE(wrong);
    CHECK(json::parse(wrong->body).at("series").size() == 1);

    auto ghost = fx.client.Get("/api/courses/nope", ApiFixture::auth("alice-secret"));
    REQUIRE(ghost);
    CHECK(ghost->status == 404);
}

TEST_CASE("csv export pseudonymizes and scopes to the course") {
    ApiFixture fx;
    fx.submit_ok("alice-secret", aid("echo"), kEchoCode);
    fx.submit_ok("bob-secret", aid("sum"), kEchoCode);

    // a submission in another course must not leak into the algo export
    sched::SubmissionRecord other;
    other.user_id = "alice";
    other.course_id = "other-course";
    other.series_id = "x";
    other.activity_id = aid("echo");
    other.code = "x";
    other.submitted_at = util::now_ms();
    fx.eng->store().insert_submission(other);

    auto res = fx.client.Get("/api/courses/algo/export.csv", ApiFixture::auth("alice-secret"));
    REQUIRE(res);
    REQUIRE(res->status == 200);
    CHECK(res->get_header_value("Content-Type").find("text/csv") == 0);
    CHECK(res->body.find("alice") == std::string::npos);
    CHECK(res->body.find(analytics::pseudonym("export-key", "algo", "alice")) != std::string::npos);
    CHECK(res->body.find("other-course") == std::string::npos);

    auto again = fx.client.Get("/api/courses/algo/export.csv", ApiFixture::auth("alice-secret"));
    REQUIRE(again);
    CHECK(again->body == res->body);  // byte-identical re-export
}

TEST_CASE("webhook verifies its hmac before doing anything") {
    ApiFixture fx;
    std::string payload = R"({"ref":"refs/heads/main"})";
    auto signature = "sha256=" + util::hmac_sha256_hex("webhook-secret", payload);

    auto synced = fx.client.Post("/webhooks/fixtures",
                                 httplib::Headers{{"X-Hub-Signature-256", signature}}, payload,
                                 "application/json");
    REQUIRE(synced);
    CHECK(synced->status == 202);
    auto doc = json::parse(synced->body);
    CHECK(doc.at("synced") == true);
    CHECK(doc.at("added") == 0);  // already synced at startup

    auto forged = fx.client.Post("/webhooks/fixtures",
                                 httplib::Headers{{"X-Hub-Signature-256", "sha256=deadbeef"}},
                                 payload, "application/json");
    REQUIRE(forged);
    CHECK(forged->status == 401);

    std::string feature = R"({"ref":"refs/heads/feature"})";
    auto ignored = fx.client.Post(
        "/webhooks/fixtures",
        httplib::Headers{{"X-Hub-Signature-256",
                          "sha256=" + util::hmac_sha256_hex("webhook-secret", feature)}},
        feature, "application/json");
    REQUIRE(ignored);
    CHECK(ignored->status == 202);
    CHECK(json::parse(ignored->body).at("synced") == false);

    auto unknown = fx.client.Post("/webhooks/ghost",
                                  httplib::Headers{{"X-Hub-Signature-256", signature}}, payload,
                                  "application/json");
    REQUIRE(unknown);
    CHECK(unknown->status == 404);

    std::string junk = "not a push";
    auto bad = fx.client.Post(
        "/webhooks/fixtures",
        httplib::Headers{{"X-Hub-Signature-256",
                          "sha256=" + util::hmac_sha256_hex("webhook-secret", junk)}},
        junk, "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
}

TEST_CASE("calendar endpoint serves without credentials") {
    ApiFixture fx;
    auto res = fx.client.Get("/courses/algo/calendar.ics");
    REQUIRE(res);
    REQUIRE(res->status == 200);
    CHECK(res->get_header_value("Content-Type").find("text/calendar") == 0);
    CHECK(res->body.find("BEGIN:VCALENDAR") != std::string::npos);
    CHECK(res->body.find("Basics (Algorithms)") != std::string::npos);
    // the hidden series has no deadline, so only one event
    CHECK(res->body.find("Secret track") == std::string::npos);

    auto ghost = fx.client.Get("/courses/nope/calendar.ics");
    REQUIRE(ghost);
    CHECK(ghost->status == 404);
}

TEST_CASE("per-token rate limiting answers 429 and spares other tokens") {
    ApiFixture fx(3);
    json body{{"activity_id", "no-such"}, {"code", "x"}};
    for (int i = 0; i < 3; ++i) {
        auto res = fx.post_submission("alice-secret", body);
        REQUIRE(res);
        CHECK(res->status == 404);  // counted against the window even when invalid
    }
    auto limited = fx.post_submission("alice-secret", body);
    REQUIRE(limited);
    CHECK(limited->status == 429);

    auto other = fx.post_submission("bob-secret", body);
    REQUIRE(other);
    CHECK(other->status == 404);
}

TEST_CASE("accepted submissions survive a process restart") {
    auto fx = std::make_unique<ApiFixture>();
    auto id = fx->submit_ok("alice-secret", aid("echo"), kEchoCode);
    auto store_path = fx->dir / "forge.db";
    fx->eng->stop();
    fx.reset();

    auto store = sched::make_sqlite_store(store_path);
    auto record = store->get_submission(id);
    REQUIRE(record);
    CHECK(record->lifecycle == sched::Lifecycle::Queued);
    CHECK(record->user_id == "alice");
    CHECK(record->code == kEchoCode);
}

TEST_CASE("local assessment shortcut bypasses the queue") {
    ApiFixture fx;
    auto tree = fx.eng->assess_local(aid("echo"), kEchoCode);
    CHECK(tree.status == feedback::Status::Correct);
}

TEST_CASE("route table exposes nothing mutating without a credential") {
    const auto& table = api::route_table();
    REQUIRE(table.size() == 9);
    std::set<std::string> seen;
    for (const auto& route : table) {
        CHECK((route.method == "GET" || route.method == "POST"));
        CHECK(seen.insert(route.method + " " + route.path).second);
        if (route.mutating) CHECK((route.requires_token || route.hmac_verified));
    }
}
