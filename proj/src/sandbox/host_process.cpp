#include "forge/sandbox/backend.hpp"
#include "forge/sandbox/process_runner.hpp"

namespace forge::sandbox {

namespace {

// Subprocess isolation for CI and development. Mount entries are not
// remapped: callers already address workspace paths directly. Memory
// enforcement is best-effort (polled peak RSS).
class HostProcessBackend final : public Backend {
  public:
    std::string name() const override { return "host-process"; }

    ExecutionOutcome execute(const ExecutionSpec& spec) override {
        std::string reason;
        if (!validate_spec(spec, &reason)) throw ProvisionError("invalid execution spec: " + reason);
        RunRequest req;
        req.argv = spec.command;
        req.stdin_bytes = spec.stdin_bytes;
        req.workdir = spec.workdir;
        req.time_limit = spec.time_limit;
        req.output_limit = spec.output_limit;
        req.memory_limit = spec.memory_limit;
        req.drop_privileges = true;
        return run_process(req);
    }
};

}  // namespace

std::unique_ptr<Backend> make_host_process_backend() {
    return std::make_unique<HostProcessBackend>();
}

}  // namespace forge::sandbox
