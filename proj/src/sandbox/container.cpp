#include "forge/sandbox/container.hpp"

#include "forge/sandbox/backend.hpp"
#include "forge/sandbox/process_runner.hpp"

namespace forge::sandbox {

std::vector<std::string> build_container_command(const ExecutionSpec& spec,
                                                 const std::string& runtime_binary) {
    std::vector<std::string> cmd{runtime_binary, "run", "--rm", "-i"};
    if (!spec.network_allowed) {
        cmd.push_back("--network");
        cmd.push_back("none");
    }
    cmd.push_back("--memory");
    cmd.push_back(std::to_string(spec.memory_limit));
    cmd.push_back("--memory-swap");
    cmd.push_back(std::to_string(spec.memory_limit));
    cmd.push_back("--cpus");
    cmd.push_back("1");
    cmd.push_back("--pids-limit");
    cmd.push_back("256");
    for (const auto& m : spec.mounts) {
        cmd.push_back("-v");
        cmd.push_back(m.host_path.string() + ":" + m.sandbox_path.string() + (m.read_only ? ":ro" : ""));
    }
    // Writable scratch lives on tmpfs so host disk use is bounded.
    cmd.push_back("--tmpfs");
    cmd.push_back("/workdir:rw,size=1g");
    if (!spec.workdir.empty()) {
        cmd.push_back("-w");
        cmd.push_back(spec.workdir.string());
    }
    cmd.push_back(spec.image);
    cmd.insert(cmd.end(), spec.command.begin(), spec.command.end());
    return cmd;
}

namespace {

bool contains(const std::string& haystack, const char* needle) {
    return haystack.find(needle) != std::string::npos;
}

class ContainerBackend final : public Backend {
  public:
    explicit ContainerBackend(std::string runtime) : runtime_(std::move(runtime)) {}

    std::string name() const override { return "container"; }

    ExecutionOutcome execute(const ExecutionSpec& spec) override {
        std::string reason;
        if (!validate_spec(spec, &reason)) throw ProvisionError("invalid execution spec: " + reason);

        RunRequest req;
        req.argv = build_container_command(spec, runtime_);
        req.stdin_bytes = spec.stdin_bytes;
        req.time_limit = spec.time_limit;
        req.output_limit = spec.output_limit;
        // Memory is enforced by the runtime cgroup, not by polling the client.
        auto outcome = run_process(req);

        // The runtime client reserves 125/126/127 for its own failures.
        if (outcome.exit_code && *outcome.exit_code >= 125 && outcome.violations.empty()) {
            if (contains(outcome.stderr_bytes, "No such image") ||
                contains(outcome.stderr_bytes, "pull access denied") ||
                contains(outcome.stderr_bytes, "manifest unknown")) {
                throw ProvisionError("unknown image " + spec.image + ": " + outcome.stderr_bytes);
            }
            throw BackendUnavailable("container runtime failed: " + outcome.stderr_bytes);
        }
        // OOM kills surface as 137 from the container.
        if (outcome.exit_code && *outcome.exit_code == 137) {
            outcome.violations.insert(Violation::Memory);
            outcome.exit_code = std::nullopt;
        }
        return outcome;
    }

  private:
    std::string runtime_;
};

}  // namespace

std::unique_ptr<Backend> make_container_backend(std::string runtime_binary) {
    return std::make_unique<ContainerBackend>(std::move(runtime_binary));
}

}  // namespace forge::sandbox
