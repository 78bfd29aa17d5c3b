#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <iostream>
#include <thread>

#include "forge/diff/diff.hpp"
#include "forge/diff/layout.hpp"
#include "forge/engine/engine.hpp"
#include "forge/util/fs.hpp"
#include "forge/util/hashing.hpp"

namespace {

std::atomic<bool> g_shutdown{false};

void handle_signal(int) {
    g_shutdown.store(true);
}

std::optional<forge::engine::EngineConfig> load_config_or_complain(const std::string& path) {
    std::string error;
    auto config = forge::engine::load_engine_config(path, &error);
    if (!config) std::cerr << "error: " << error << "\n";
    return config;
}

void print_sync_report(const forge::repo::SyncReport& report) {
    std::cout << report.repo_id << ": " << (report.performed ? "synced" : "skipped") << ", "
              << report.added.size() << " added, " << report.updated.size() << " updated, "
              << report.removed.size() << " removed\n";
    for (const auto& diag : report.diagnostics) {
        std::cout << "  warning at " << (diag.rel_path.empty() ? "." : diag.rel_path) << ": "
                  << diag.message << "\n";
    }
}

void wait_for_shutdown() {
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_shutdown.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
}

const char* kAnsiReset = "\x1b[0m";
const char* kAnsiRed = "\x1b[31m";
const char* kAnsiGreen = "\x1b[32m";
const char* kAnsiBold = "\x1b[1m";

void print_feedback(const forge::feedback::FeedbackTree& tree) {
    using namespace forge::feedback;
    std::cout << kAnsiBold << "status: "
              << (tree.status == Status::Correct ? kAnsiGreen : kAnsiRed) << status_name(tree.status)
              << kAnsiReset << "\n";
    if (tree.description) std::cout << *tree.description << "\n";
    for (const auto& message : tree.messages) {
        if (message.visibility == Visibility::Staff) std::cout << "[staff] ";
        std::cout << message.body << "\n";
    }
    for (const auto& tab : tree.tabs) {
        if (tab.description) std::cout << kAnsiBold << "== " << *tab.description << kAnsiReset << "\n";
        for (const auto& context : tab.contexts) {
            for (const auto& testcase : context.testcases) {
                for (const auto& test : testcase.tests) {
                    std::cout << (test.accepted ? kAnsiGreen : kAnsiRed)
                              << (test.accepted ? " pass " : " FAIL ") << kAnsiReset
                              << test.description.value_or("(unnamed test)") << "\n";
                    if (!test.accepted) {
                        auto gen = forge::diff::split_lines(test.generated);
                        auto exp = forge::diff::split_lines(test.expected);
                        auto script = forge::diff::line_diff(gen, exp);
                        auto rows = forge::diff::layout(script, forge::diff::LayoutMode::Interleaved);
                        std::cout << forge::diff::render_ansi(rows);
                    }
                    for (const auto& message : test.messages) {
                        if (message.visibility == Visibility::Staff) continue;
                        if (message.format == MessageFormat::Code) continue;  // diff shown above
                        std::cout << "    " << message.body << "\n";
                    }
                }
            }
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forge-judge: self-hostable automated code assessment engine"};
    app.require_subcommand(1);

    std::string config_path = "config.json";
    app.add_option("--config", config_path, "engine configuration file")->capture_default_str();

    auto* serve = app.add_subcommand("serve", "run API service, workers, and repository sync");
    auto* worker = app.add_subcommand("worker", "run assessment workers without the API");
    auto* sync = app.add_subcommand("sync", "fetch and rescan one repository");
    std::string sync_repo;
    sync->add_option("repo", sync_repo, "repository id")->required();

    auto* assess = app.add_subcommand("assess", "assess a file locally and print the feedback");
    std::string assess_activity, assess_file, assess_language = "en";
    assess->add_option("activity", assess_activity, "activity id")->required();
    assess->add_option("file", assess_file, "submission file")->required();
    assess->add_option("--language", assess_language, "natural language for feedback");

    auto* token = app.add_subcommand("token", "manage API tokens");
    auto* token_create = token->add_subcommand("create", "create a token and print its secret");
    std::string token_user, token_scopes = "submit,read";
    token_create->add_option("--user", token_user, "principal user id")->required();
    token_create->add_option("--scopes", token_scopes, "comma-separated: submit,read,admin")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    auto config = load_config_or_complain(config_path);
    if (!config) return 1;

    try {
        forge::engine::Engine engine(*config);

        if (serve->parsed()) {
            for (const auto& report : engine.sync_all()) print_sync_report(report);
            engine.start_workers();
            if (!engine.start_api()) {
                std::cerr << "error: cannot bind " << config->listen_host << ":" << config->listen_port
                          << "\n";
                return 1;
            }
            std::cout << "listening on " << config->listen_host << ":" << engine.api().port() << "\n";
            wait_for_shutdown();
            engine.stop();
            return 0;
        }

        if (worker->parsed()) {
            for (const auto& report : engine.sync_all()) print_sync_report(report);
            engine.start_workers();
            std::cout << "workers running; ctrl-c to stop\n";
            wait_for_shutdown();
            engine.stop();
            return 0;
        }

        if (sync->parsed()) {
            print_sync_report(engine.registry().sync(sync_repo));
            return 0;
        }

        if (assess->parsed()) {
            engine.sync_all();
            auto code = forge::util::read_file(assess_file);
            if (!code) {
                std::cerr << "error: cannot read " << assess_file << "\n";
                return 1;
            }
            auto tree = engine.assess_local(assess_activity, *code, assess_language);
            print_feedback(tree);
            return tree.status == forge::feedback::Status::Correct ? 0 : 2;
        }

        if (token_create->parsed()) {
            std::set<std::string> scopes;
            std::size_t start = 0;
            while (start <= token_scopes.size()) {
                auto end = token_scopes.find(',', start);
                if (end == std::string::npos) end = token_scopes.size();
                if (end > start) scopes.insert(token_scopes.substr(start, end - start));
                start = end + 1;
            }
            for (const auto& scope : scopes) {
                if (scope != "submit" && scope != "read" && scope != "admin") {
                    std::cerr << "error: unknown scope " << scope << "\n";
                    return 1;
                }
            }
            auto secret = forge::util::random_hex(32);
            forge::sched::TokenInfo info;
            info.secret_hash = forge::util::sha256_hex(secret);
            info.user_id = token_user;
            info.scopes = scopes;
            info.created_at = forge::util::now_ms();
            engine.store().put_token(info);
            std::cout << "token created for " << token_user << " (store it now, it is not kept):\n"
                      << secret << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
