// Acceptance gate: runs every shipping criterion end-to-end and prints
// exactly one PASS/FAIL line per criterion. Exit code 0 only when all pass.
#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/analytics/analytics.hpp"
#include "forge/analytics/exports.hpp"
#include "forge/analytics/grading.hpp"
#include "forge/diff/diff.hpp"
#include "forge/engine/engine.hpp"
#include "forge/feedback/model.hpp"
#include "forge/feedback/wire.hpp"
#include "forge/judge/protocol.hpp"
#include "forge/repo/registry.hpp"
#include "forge/sandbox/backend.hpp"
#include "forge/sandbox/process_runner.hpp"
#include "forge/util/hashing.hpp"
#include "forge/util/time.hpp"
#include "test_paths.hpp"

using namespace forge;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// First failed expectation wins; later ones are ignored.
struct Checker {
    bool ok = true;
    std::string why;
    std::string note;

    void expect(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            why = message;
        }
    }
};

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::path("/tmp/forge-acceptance") / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string aid(const std::string& rel_path) {
    return repo::activity_id("fixtures", rel_path);
}

std::string fixture_submission(const std::string& name) {
    return read_file(std::filesystem::path(FORGE_FIXTURES_DIR) / "submissions" / name);
}

engine::EngineConfig engine_config(const std::filesystem::path& dir, std::size_t workers) {
    std::filesystem::copy(FORGE_FIXTURES_DIR "/repo", dir / "repo",
                          std::filesystem::copy_options::recursive);
    engine::EngineConfig config;
    config.store_path = dir / "forge.db";
    config.judges_dir = FORGE_BUILD_JUDGES_DIR;
    config.workspace_root = dir / "workspaces";
    config.backend = "host-process";
    config.workers = workers;
    config.listen_host = "127.0.0.1";
    config.listen_port = 0;
    repo::RepoConfig repo;
    repo.id = "fixtures";
    repo.path = dir / "repo";
    repo.secret = "webhook-secret";
    config.repos = {repo};
    return config;
}

std::int64_t enqueue_ok(sched::Scheduler& scheduler, const std::string& activity,
                        const std::string& code, const std::string& user = "student") {
    sched::EnqueueRequest request;
    request.user_id = user;
    request.course_id = "course";
    request.series_id = "series";
    request.activity_id = activity;
    request.code = code;
    auto outcome = scheduler.enqueue(request);
    if (auto* id = std::get_if<std::int64_t>(&outcome)) return *id;
    throw std::runtime_error("enqueue rejected a fixture submission");
}

// ---------------------------------------------------------------- criterion 1

void criterion_protocol_conformance(Checker& check) {
    auto started = Clock::now();
    auto dir = scratch("c1");
    engine::Engine eng(engine_config(dir, 0));
    eng.sync_all();

    auto correct_id = enqueue_ok(eng.scheduler(), aid("echo"), fixture_submission("echo_correct.py"));
    auto wrong_id = enqueue_ok(eng.scheduler(), aid("echo"), fixture_submission("echo_wrong.py"));
    auto crash_id = enqueue_ok(eng.scheduler(), aid("echo"), fixture_submission("crash.py"));
    auto loop_id = enqueue_ok(eng.scheduler(), aid("loop"), fixture_submission("loop.py"));

    // FIFO: the four run_one calls process the submissions in enqueue order.
    for (int i = 0; i < 3; ++i) check.expect(eng.scheduler().run_one("acceptance"), "queue ran dry early");
    auto loop_started = Clock::now();
    check.expect(eng.scheduler().run_one("acceptance"), "loop submission never ran");
    double loop_wall = seconds_since(loop_started);

    auto status_of = [&](std::int64_t id) -> std::string {
        auto record = eng.store().get_submission(id);
        if (!record || !record->result_status) return "<unassessed>";
        return std::string(feedback::status_name(*record->result_status));
    };
    check.expect(status_of(correct_id) == "correct", "correct fixture got " + status_of(correct_id));
    check.expect(status_of(wrong_id) == "wrong", "wrong-output fixture got " + status_of(wrong_id));
    check.expect(status_of(crash_id) == "runtime-error", "crashing fixture got " + status_of(crash_id));
    check.expect(status_of(loop_id) == "time-limit-exceeded",
                 "infinite-loop fixture got " + status_of(loop_id));
    check.expect(loop_wall <= 4.0,
                 "loop assessment took " + std::to_string(loop_wall) + " s, limit 4 s");

    double total = seconds_since(started);
    check.expect(total < 60.0, "conformance suite took " + std::to_string(total) + " s, limit 60 s");
    check.note = "4 verdicts in " + std::to_string(total).substr(0, 4) + " s";
}

// ---------------------------------------------------------------- criterion 2

void criterion_latency(Checker& check) {
    auto dir = scratch("c2");
    engine::Engine eng(engine_config(dir, 2));
    eng.sync_all();
    eng.start_workers();
    check.expect(eng.start_api(), "api failed to start");

    sched::TokenInfo token;
    token.secret_hash = util::sha256_hex("latency-probe");
    token.user_id = "probe";
    token.scopes = {"submit", "read"};
    eng.store().put_token(token);

    httplib::Client client("127.0.0.1", eng.api().port());
    client.set_connection_timeout(5);
    httplib::Headers auth{{"Authorization", "Token latency-probe"}};

    auto started = Clock::now();
    json body{{"activity_id", aid("echo")}, {"code", fixture_submission("echo_correct.py")}};
    auto posted = client.Post("/api/submissions", auth, body.dump(), "application/json");
    check.expect(posted && posted->status == 201, "submission was not accepted");
    if (!check.ok) return;
    auto id = json::parse(posted->body).at("id").get<std::int64_t>();

    std::string lifecycle = "queued";
    while (seconds_since(started) < 10.0) {
        auto res = client.Get("/api/submissions/" + std::to_string(id), auth);
        if (res && res->status == 200) {
            auto doc = json::parse(res->body);
            lifecycle = doc.at("lifecycle").get<std::string>();
            if (lifecycle == "assessed") {
                check.expect(doc.at("result_status") == "correct",
                             "expected a correct verdict over the api");
                break;
            }
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    double elapsed = seconds_since(started);
    check.expect(lifecycle == "assessed", "not assessed within 10 s");
    check.note = "assessed in " + std::to_string(elapsed).substr(0, 4) + " s";
    eng.stop();
}

// ---------------------------------------------------------------- criterion 3

feedback::FeedbackTree random_tree(std::mt19937& rng) {
    static const std::vector<std::string> pool{
        "",       "hello\n", "(1, 1)",      "[1, 1]",  "line1\nline2\n",
        "naïve ünïcode", "quote \" backslash \\", "tab\tseparated"};
    auto pick = [&]() { return pool[rng() % pool.size()]; };
    auto random_messages = [&](std::vector<feedback::Message>& out) {
        for (std::size_t i = rng() % 3; i > 0; --i) {
            feedback::Message m;
            m.body = pick();
            m.format = static_cast<feedback::MessageFormat>(rng() % 4);
            m.visibility = rng() % 2 ? feedback::Visibility::Staff : feedback::Visibility::Student;
            out.push_back(m);
        }
    };

    feedback::FeedbackTree tree;
    random_messages(tree.messages);
    for (std::size_t t = rng() % 4; t > 0; --t) {
        feedback::Tab tab;
        tab.description = pick();
        random_messages(tab.messages);
        for (std::size_t c = rng() % 3; c > 0; --c) {
            feedback::Context ctx;
            random_messages(ctx.messages);
            for (std::size_t tc = rng() % 3; tc > 0; --tc) {
                feedback::TestCase testcase;
                testcase.description = pick();
                random_messages(testcase.messages);
                for (std::size_t te = rng() % 4; te > 0; --te) {
                    feedback::Test test;
                    test.description = pick();
                    test.expected = pick();
                    test.generated = rng() % 2 ? test.expected : pick();
                    test.accepted = test.expected == test.generated;
                    random_messages(test.messages);
                    testcase.tests.push_back(std::move(test));
                }
                ctx.testcases.push_back(std::move(testcase));
            }
            tab.contexts.push_back(std::move(ctx));
        }
        tree.tabs.push_back(std::move(tab));
    }
    feedback::derive_accepted(tree);
    tree.status = feedback::kAllStatuses[rng() % std::size(feedback::kAllStatuses)];
    return tree;
}

json mutate_valid_doc(json doc, int which) {
    switch (which % 8) {
        case 0: doc["status"] = "unheard-of"; break;
        case 1: doc["extra_root_field"] = true; break;
        case 2: doc["tabs"] = "nope"; break;
        case 3: doc["messages"] = json::array({{{"format", "plain"}, {"visibility", "student"}}}); break;
        case 4:
            doc["messages"] =
                json::array({{{"body", "x"}, {"format", "shout"}, {"visibility", "student"}}});
            break;
        case 5: doc["tabs"] = json::array({42}); break;
        case 6:
            doc["messages"] =
                json::array({{{"body", "x"}, {"format", "plain"}, {"visibility", "nobody"}}});
            break;
        case 7:
            doc["tabs"] = json::array(
                {{{"description", "t"},
                  {"accepted", true},
                  {"messages", json::array()},
                  {"contexts",
                   json::array(
                       {{{"accepted", true},
                         {"messages", json::array()},
                         {"testcases",
                          json::array(
                              {{{"accepted", true},
                                {"description", ""},
                                {"messages", json::array()},
                                {"tests", json::array({{{"accepted", "yes"},
                                                        {"expected", ""},
                                                        {"generated", ""},
                                                        {"messages", json::array()}}})}}})}}})}}});
            break;
    }
    return doc;
}

void criterion_feedback_schema(Checker& check) {
    std::mt19937 rng(31);

    int stable = 0;
    for (int i = 0; i < 100; ++i) {
        auto tree = random_tree(rng);
        auto first = feedback::canonical_serialize(tree);
        auto reparsed = feedback::parse_feedback(first, feedback::ParseMode::Strict);
        if (feedback::canonical_serialize(reparsed) == first) ++stable;
    }
    check.expect(stable == 100,
                 "only " + std::to_string(stable) + "/100 trees round-tripped byte-stably");

    int rejected = 0;
    for (int i = 0; i < 50; ++i) {
        auto valid = json::parse(feedback::canonical_serialize(random_tree(rng)));
        auto mutated = mutate_valid_doc(valid, i);
        try {
            feedback::parse_feedback(mutated.dump(), feedback::ParseMode::Strict);
        } catch (const feedback::ValidationError& e) {
            if (!e.path().empty()) ++rejected;
        }
    }
    check.expect(rejected == 50,
                 "only " + std::to_string(rejected) + "/50 mutants rejected with a node path");

    // The built-in judge's own stdout must validate strictly, pass or fail.
    auto dir = scratch("c3");
    int conforming = 0;
    for (const char* name : {"echo_correct.py", "echo_wrong.py", "crash.py"}) {
        judge::JudgeMetadata metadata;
        metadata.submission_path = std::filesystem::path(FORGE_FIXTURES_DIR) / "submissions" / name;
        metadata.resources_path = std::filesystem::path(FORGE_FIXTURES_DIR) / "repo/echo/evaluation";
        metadata.judge_path = std::filesystem::path(FORGE_BUILD_JUDGES_DIR) / "io";
        metadata.workdir_path = dir;
        metadata.programming_language = "python";
        metadata.time_limit = 10;
        sandbox::RunRequest request;
        request.argv = {(std::filesystem::path(FORGE_BUILD_JUDGES_DIR) / "io/run").string()};
        request.stdin_bytes = judge::serialize_metadata(metadata);
        request.time_limit = 30.0;
        auto outcome = sandbox::run_process(request);
        try {
            feedback::parse_feedback(outcome.stdout_bytes, feedback::ParseMode::Strict);
            ++conforming;
        } catch (const feedback::ValidationError&) {
        }
    }
    check.expect(conforming == 3, "built-in judge output failed strict validation");
    check.note = "100 round trips, 50 rejections, 3 judge runs";
}

// ---------------------------------------------------------------- criterion 4

void criterion_status_algebra(Checker& check) {
    // Independent severity reference, most severe first.
    const std::vector<std::string> severity{
        "internal-error",       "compilation-error",     "runtime-error",
        "memory-limit-exceeded", "time-limit-exceeded",  "output-limit-exceeded",
        "wrong",                "correct"};
    auto rank = [&](feedback::Status s) {
        auto name = std::string(feedback::status_name(s));
        return std::find(severity.begin(), severity.end(), name) - severity.begin();
    };

    for (auto a : feedback::kAllStatuses) {
        for (auto b : feedback::kAllStatuses) {
            std::vector<feedback::Status> pair{a, b};
            auto combined = feedback::aggregate_status(pair);
            auto expected = rank(a) <= rank(b) ? a : b;
            check.expect(combined == expected,
                         std::string("aggregate(") + feedback::status_name(a).data() + ", " +
                             feedback::status_name(b).data() + ") violated the severity table");
        }
    }

    std::mt19937 rng(41);
    for (int round = 0; round < 1000; ++round) {
        std::vector<feedback::Status> statuses;
        for (std::size_t i = 1 + rng() % 12; i > 0; --i) {
            statuses.push_back(feedback::kAllStatuses[rng() % std::size(feedback::kAllStatuses)]);
        }
        auto baseline = feedback::aggregate_status(statuses);
        auto most_severe = *std::min_element(statuses.begin(), statuses.end(),
                                             [&](auto x, auto y) { return rank(x) < rank(y); });
        check.expect(baseline == most_severe, "aggregate is not the most severe member");
        std::shuffle(statuses.begin(), statuses.end(), rng);
        check.expect(feedback::aggregate_status(statuses) == baseline,
                     "aggregate changed under permutation");
    }
    check.note = "64 pairs, 1000 permutations";
}

// ---------------------------------------------------------------- criterion 5

std::size_t dp_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    // longest common subsequence; distance = n + m - 2*lcs
    std::vector<std::vector<std::size_t>> lcs(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            lcs[i][j] = a[i - 1] == b[j - 1] ? lcs[i - 1][j - 1] + 1
                                             : std::max(lcs[i - 1][j], lcs[i][j - 1]);
        }
    }
    return a.size() + b.size() - 2 * lcs[a.size()][b.size()];
}

void criterion_diff_oracle(Checker& check) {
    std::mt19937 rng(51);
    int exact = 0;
    int replayed = 0;
    for (int round = 0; round < 1000; ++round) {
        auto random_lines = [&]() {
            std::vector<std::string> lines;
            for (std::size_t i = rng() % 9; i > 0; --i) {
                lines.push_back(std::string(1, static_cast<char>('a' + rng() % 3)));
            }
            return lines;
        };
        auto generated = random_lines();
        auto expected = random_lines();
        auto script = diff::line_diff(generated, expected);
        if (diff::edit_cost(script) == dp_edit_distance(generated, expected)) ++exact;
        if (diff::replay_expected(script) == expected && diff::replay_generated(script) == generated) {
            ++replayed;
        }
    }
    check.expect(exact == 1000,
                 "edit count matched the DP oracle on only " + std::to_string(exact) + "/1000 pairs");
    check.expect(replayed == 1000,
                 "script replay reproduced the sides on only " + std::to_string(replayed) + "/1000");
    check.note = "1000 random pairs";
}

// ---------------------------------------------------------------- criterion 6

void criterion_scheduler_conservation(Checker& check) {
    auto dir = scratch("c6");
    engine::Engine eng(engine_config(dir, 4));
    eng.sync_all();

    const int kJobs = 100;
    auto code = fixture_submission("echo_correct.py");
    for (int i = 0; i < kJobs; ++i) {
        enqueue_ok(eng.scheduler(), aid("echo"), code, "student-" + std::to_string(i % 7));
    }
    eng.start_workers();
    auto started = Clock::now();
    while (seconds_since(started) < 120.0) {
        if (eng.store().count_by_lifecycle()[sched::Lifecycle::Assessed] >= kJobs) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    eng.stop();

    std::int64_t previous_seq = 0;
    int assessed_once = 0;
    bool fifo = true;
    for (std::int64_t id = 1; id <= kJobs; ++id) {
        auto record = eng.store().get_submission(id);
        if (!record) continue;
        if (record->lifecycle == sched::Lifecycle::Assessed && record->attempt_count == 1 &&
            record->result_status == feedback::Status::Correct) {
            ++assessed_once;
        }
        // FIFO: global claim order must follow submission order
        if (!record->claim_seq || *record->claim_seq <= previous_seq) fifo = false;
        if (record->claim_seq) previous_seq = *record->claim_seq;
    }
    check.expect(assessed_once == kJobs, std::to_string(assessed_once) + "/" + std::to_string(kJobs) +
                                             " submissions assessed exactly once");
    check.expect(fifo, "claim order was not non-decreasing in enqueue order");

    // A worker dies mid-assessment: its claim must be reaped, reassessed
    // by a healthy worker, and nothing may be lost.
    auto victim_id = enqueue_ok(eng.scheduler(), aid("echo"), code, "victim");
    auto claimed = eng.store().claim_next("doomed-worker", util::now_ms());
    check.expect(claimed.has_value() && claimed->id == victim_id, "dead worker claimed nothing");
    auto reaped = eng.scheduler().reap_stalled(util::now_ms() + 500'000'000);
    check.expect(reaped == std::vector<std::int64_t>{victim_id}, "stalled claim was not requeued");
    check.expect(eng.scheduler().run_one("recovery-worker"), "requeued submission did not run");
    auto recovered = eng.store().get_submission(victim_id);
    check.expect(recovered && recovered->lifecycle == sched::Lifecycle::Assessed &&
                     recovered->result_status == feedback::Status::Correct,
                 "requeued submission was not assessed");
    check.expect(recovered && recovered->attempt_count == 2,
                 "expected attempt_count 2 after worker death, got " +
                     std::to_string(recovered ? recovered->attempt_count : -1));
    check.note = "100 jobs over 4 workers + worker-death recovery";
}

// ---------------------------------------------------------------- criterion 7

void criterion_sandbox_limits(Checker& check) {
    auto backend = sandbox::make_host_process_backend();

    sandbox::ExecutionSpec sleeper;
    sleeper.command = {"sh", "-c", "sleep 10"};
    sleeper.time_limit = 1.0;
    auto started = Clock::now();
    auto outcome = backend->execute(sleeper);
    double elapsed = seconds_since(started);
    check.expect(elapsed < 3.0, "sleep-10 survived " + std::to_string(elapsed) + " s under a 1 s limit");
    check.expect(outcome.violations.count(sandbox::Violation::Timeout) == 1,
                 "timeout violation not flagged");
    check.expect(outcome.killed(), "timed-out process was not killed");

    sandbox::ExecutionSpec flood;
    flood.command = {"sh", "-c", "head -c 104857600 /dev/zero"};
    flood.time_limit = 20.0;
    flood.output_limit = 10 * 1024 * 1024;
    auto flooded = backend->execute(flood);
    check.expect(flooded.stdout_bytes.size() == 10 * 1024 * 1024,
                 "output not truncated at the 10 MiB cap, got " +
                     std::to_string(flooded.stdout_bytes.size()) + " bytes");
    check.expect(flooded.violations.count(sandbox::Violation::Output) == 1,
                 "output violation not flagged");
    check.note = "memory sub-check skipped: host-process backend";
}

// ---------------------------------------------------------------- criterion 8

repo::ActivityConfig random_activity_config(std::mt19937& rng) {
    repo::ActivityConfig config;
    auto flip = [&]() { return rng() % 2 == 0; };
    if (flip()) config.programming_language = std::string(1, static_cast<char>('p' + rng() % 3));
    if (flip()) config.judge = rng() % 2 ? "io" : "custom";
    if (flip()) config.image = "img-" + std::to_string(rng() % 3);
    if (flip()) config.time_limit = 1 + static_cast<std::int64_t>(rng() % 60);
    if (flip()) config.memory_limit = 1024 * (1 + static_cast<std::int64_t>(rng() % 1000));
    if (flip()) config.output_limit = 512 * (1 + static_cast<std::int64_t>(rng() % 1000));
    if (flip()) config.network_allowed = flip();
    if (flip()) config.boilerplate = "code-" + std::to_string(rng() % 5);
    if (flip()) config.kind = rng() % 2 ? "exercise" : "reading";
    if (flip()) config.access = rng() % 2 ? "public" : "restricted";
    for (std::size_t i = rng() % 3; i > 0; --i) {
        config.labels.insert(std::string(1, static_cast<char>('a' + rng() % 4)));
    }
    return config;
}

// Independent fold: per-scalar last-set-wins, labels unioned.
repo::ActivityConfig reference_fold(const std::vector<repo::ActivityConfig>& chain) {
    repo::ActivityConfig out;
    for (const auto& link : chain) {
        if (link.programming_language) out.programming_language = link.programming_language;
        if (link.judge) out.judge = link.judge;
        if (link.image) out.image = link.image;
        if (link.time_limit) out.time_limit = link.time_limit;
        if (link.memory_limit) out.memory_limit = link.memory_limit;
        if (link.output_limit) out.output_limit = link.output_limit;
        if (link.network_allowed) out.network_allowed = link.network_allowed;
        if (link.boilerplate) out.boilerplate = link.boilerplate;
        if (link.kind) out.kind = link.kind;
        if (link.access) out.access = link.access;
        out.labels.insert(link.labels.begin(), link.labels.end());
    }
    return out;
}

void criterion_repository_ingestion(Checker& check) {
    std::mt19937 rng(81);
    int agreeing = 0;
    for (int round = 0; round < 200; ++round) {
        std::vector<repo::ActivityConfig> chain;
        for (std::size_t depth = 1 + rng() % 5; depth > 0; --depth) {
            chain.push_back(random_activity_config(rng));
        }
        if (repo::resolve_chain(chain) == reference_fold(chain)) ++agreeing;
    }
    check.expect(agreeing == 200, "config fold disagreed with the reference on " +
                                      std::to_string(200 - agreeing) + "/200 chains");

    auto dir = scratch("c8");
    std::filesystem::copy(FORGE_FIXTURES_DIR "/repo", dir / "repo",
                          std::filesystem::copy_options::recursive);
    repo::RepoConfig config;
    config.id = "fixtures";
    config.path = dir / "repo";
    config.secret = "webhook-secret";
    repo::ActivityRegistry registry({config}, FORGE_BUILD_JUDGES_DIR, repo::make_null_fetcher());

    auto first = registry.sync("fixtures");
    check.expect(first.added.size() == 4, "expected 4 activities on first sync, got " +
                                              std::to_string(first.added.size()));
    auto second = registry.sync("fixtures");
    check.expect(second.empty_diff(), "double sync was not an empty diff");

    auto snapshot_of = [&]() {
        std::map<std::string, std::string> digests;
        for (const auto& activity : registry.list()) digests[activity->id] = activity->content_digest;
        return digests;
    };
    auto before = snapshot_of();
    auto result = registry.handle_webhook("fixtures", R"({"ref":"refs/heads/main"})",
                                          "sha256=0000000000000000");
    check.expect(result.status == repo::WebhookStatus::BadSignature,
                 "forged webhook was not rejected");
    check.expect(snapshot_of() == before, "forged webhook mutated the registry");
    check.note = "200 chains, double sync, forged webhook";
}

// ---------------------------------------------------------------- criterion 9

void criterion_analytics(Checker& check) {
    std::mt19937 rng(91);
    auto base = *util::parse_iso8601("2021-10-01T00:00:00Z");
    std::vector<sched::SubmissionRecord> log;
    auto add = [&](int day) {
        sched::SubmissionRecord r;
        r.id = static_cast<std::int64_t>(log.size()) + 1;
        r.user_id = "user-" + std::to_string(rng() % 500);
        r.course_id = "course";
        r.series_id = "series";
        r.activity_id = "activity";
        r.submitted_at = base + static_cast<util::TimestampMs>(day) * 86'400'000 +
                         static_cast<util::TimestampMs>(rng() % 86'400'000);
        r.lifecycle = sched::Lifecycle::Assessed;
        r.result_status = feedback::Status::Correct;
        log.push_back(r);
    };
    // 30 days of noise with two planted deadline spikes
    for (int day = 0; day < 30; ++day) {
        for (int i = 0; i < 200; ++i) add(day);
    }
    for (int i = 0; i < 2000; ++i) add(9);   // 2021-10-10
    for (int i = 0; i < 2000; ++i) add(19);  // 2021-10-20
    check.expect(log.size() == 10'000, "synthetic log is not 10000 submissions");

    auto grid = analytics::punchcard(log, util::TzOffset{0});
    std::int64_t grid_total = 0;
    for (const auto& day : grid)
        for (auto cell : day) grid_total += cell;
    check.expect(grid_total == 10'000, "punchcard total " + std::to_string(grid_total) + " != 10000");

    auto heat = analytics::heatmap_by_day(log, util::TzOffset{0});
    std::int64_t heat_total = 0;
    for (const auto& [day, count] : heat) heat_total += count;
    check.expect(heat_total == 10'000, "heatmap total " + std::to_string(heat_total) + " != 10000");
    for (const char* spike : {"2021-10-10", "2021-10-20"}) {
        auto day = util::parse_iso8601(spike);
        auto before = util::format_date(util::ms_to_civil(*day - 86'400'000).date);
        auto after = util::format_date(util::ms_to_civil(*day + 86'400'000).date);
        check.expect(heat[spike] > heat[before] && heat[spike] > heat[after],
                     std::string("planted spike on ") + spike + " is not a local maximum");
    }

    // selection rule vs brute force on random (user, activity) timelines
    analytics::Series series;
    series.id = "series";
    series.activities = {"act-a", "act-b"};
    int agreeing = 0;
    for (int round = 0; round < 500; ++round) {
        std::vector<sched::SubmissionRecord> subs;
        for (const char* user : {"u1", "u2", "u3"}) {
            for (const auto& activity : series.activities) {
                for (std::size_t i = rng() % 4; i > 0; --i) {
                    sched::SubmissionRecord r;
                    r.id = static_cast<std::int64_t>(subs.size()) + 1;
                    r.user_id = user;
                    r.activity_id = activity;
                    r.submitted_at = static_cast<util::TimestampMs>(1000 * (rng() % 10));
                    subs.push_back(r);
                }
            }
        }
        auto deadline = static_cast<util::TimestampMs>(1000 * (rng() % 12));
        std::map<analytics::UserActivity, std::int64_t> expected;
        for (const auto& r : subs) {
            if (r.submitted_at >= deadline) continue;
            analytics::UserActivity key{r.user_id, r.activity_id};
            auto it = expected.find(key);
            if (it == expected.end()) {
                expected[key] = r.id;
                continue;
            }
            const auto& cur = subs[static_cast<std::size_t>(it->second - 1)];
            if (r.submitted_at > cur.submitted_at ||
                (r.submitted_at == cur.submitted_at && r.id > cur.id)) {
                it->second = r.id;
            }
        }
        if (analytics::select_for_evaluation(series, subs, deadline) == expected) ++agreeing;
    }
    check.expect(agreeing == 500, "selection disagreed with brute force on " +
                                      std::to_string(500 - agreeing) + "/500 timelines");

    // table-driven score identities, exact
    check.expect(analytics::unit_score(0.37, 0.0) == 0.0, "unit_score(s, 0) != 0");
    check.expect(analytics::unit_score(0.37, 1.0) == 0.37, "unit_score(s, 1) != s");
    std::vector<double> all_ones{1.0, 1.0};
    check.expect(analytics::final_score(1.0, all_ones) == 1.0, "all-ones final score != 1");
    std::vector<double> zeros{0.0, 0.0};
    check.expect(analytics::final_score(0.0, zeros) == 0.0, "all-zero final score != 0");
    check.note = "10000-row log, 500 timelines, exact score table";
}

// --------------------------------------------------------------- criterion 10

void criterion_feeds_exports(Checker& check) {
    analytics::Course course;
    course.id = "algo";
    course.name = "Algorithms";
    analytics::Series s1;
    s1.id = "s1";
    s1.name = "Loops";
    s1.deadline = util::parse_iso8601("2026-10-15T22:00:00Z");
    analytics::Series s2;
    s2.id = "s2";
    s2.name = "Practice";  // no deadline
    analytics::Series s3;
    s3.id = "s3";
    s3.name = "Graphs";
    s3.deadline = util::parse_iso8601("2026-11-01T22:00:00Z");
    course.series = {s1, s2, s3};

    auto feed = analytics::ical_feed(course);
    check.expect(feed == analytics::ical_feed(course), "feed regeneration is not byte-identical");

    auto dir = scratch("c10");
    write_file(dir / "feed.ics", feed);
    write_file(dir / "parse.js", R"JS(
const ical = require('node-ical');
const data = ical.sync.parseFile(process.argv[2]);
const events = Object.values(data).filter(e => e.type === 'VEVENT');
console.log(JSON.stringify(events.map(e => e.uid).sort()));
)JS");
    std::string cmd = "NODE_PATH=/usr/lib/node_modules node " + (dir / "parse.js").string() + " " +
                      (dir / "feed.ics").string() + " > " + (dir / "uids.json").string() +
                      " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    check.expect(rc == 0, "independent RFC 5545 parser rejected the feed");
    if (rc == 0) {
        auto uids = json::parse(read_file(dir / "uids.json"));
        std::set<std::string> parsed(uids.begin(), uids.end());
        std::set<std::string> expected{
            util::sha256_hex("algo\x1fs1").substr(0, 16) + "@forge-judge",
            util::sha256_hex("algo\x1fs3").substr(0, 16) + "@forge-judge",
        };
        check.expect(parsed == expected, "VEVENT UIDs are not the stable per-series identifiers");
        check.expect(uids.size() == 2, "expected one VEVENT per deadlined series");
    }

    std::mt19937 rng(101);
    std::vector<sched::SubmissionRecord> records;
    for (int i = 0; i < 50; ++i) {
        sched::SubmissionRecord r;
        r.id = i + 1;
        r.user_id = "user-" + std::to_string(rng() % 10);
        r.course_id = "algo";
        r.series_id = "s1";
        r.activity_id = i % 7 == 0 ? "odd,activity \"quoted\"" : "plain-activity";
        r.submitted_at = static_cast<util::TimestampMs>(1'700'000'000'000 + rng() % 1'000'000'000);
        r.lifecycle = sched::Lifecycle::Assessed;
        r.result_status = feedback::Status::Correct;
        records.push_back(r);
    }
    auto csv = analytics::export_csv(records, "acceptance-key");
    check.expect(csv == analytics::export_csv(records, "acceptance-key"),
                 "CSV re-export is not byte-identical");
    check.expect(csv.rfind("id,user,course,series,activity,lifecycle,result_status,submitted_at\r\n",
                           0) == 0,
                 "CSV header mismatch");
    check.note = "node-ical parse, stable UIDs, byte-identical CSV";
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* label;
        std::function<void(Checker&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "protocol conformance end-to-end", criterion_protocol_conformance},
        {2, "api submission latency", criterion_latency},
        {3, "feedback schema round-trip and rejection", criterion_feedback_schema},
        {4, "status severity algebra", criterion_status_algebra},
        {5, "diff edit-distance oracle", criterion_diff_oracle},
        {6, "scheduler conservation and FIFO", criterion_scheduler_conservation},
        {7, "sandbox limit enforcement", criterion_sandbox_limits},
        {8, "repository ingestion", criterion_repository_ingestion},
        {9, "analytics aggregation and selection", criterion_analytics},
        {10, "feeds and exports", criterion_feeds_exports},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Checker check;
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.ok = false;
            check.why = std::string("unhandled exception: ") + e.what();
        }
        std::string suffix = check.ok ? (check.note.empty() ? "" : " (" + check.note + ")")
                                      : " (" + check.why + ")";
        std::cout << (check.ok ? "PASS" : "FAIL") << " criterion " << criterion.number << ": "
                  << criterion.label << suffix << "\n";
        if (!check.ok) ++failures;
    }
    std::cout << (10 - failures) << "/10 criteria passed\n";
    return failures == 0 ? 0 : 1;
}
