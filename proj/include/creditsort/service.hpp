#pragma once

#include "creditsort/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace creditsort::service {

/// Overlay applied to a stored project for one what-if run. A veto entry of
/// nullopt removes the criterion's veto threshold.
struct WhatIfPatch {
    std::map<std::string, std::optional<double>> veto;
    std::map<std::string, std::map<std::string, Evaluation>> evaluations; // alt -> criterion -> value
    std::optional<LambdaSpec> lambda;
    std::optional<electre::AssignmentRule> rule;
};

/// Returns a patched copy; throws ConfigurationError for unknown ids.
io::ProjectFile apply_patch(const io::ProjectFile& file, const WhatIfPatch& patch);

inline constexpr std::uint64_t kWhatIfDraws = 2'000;

struct Response {
    int status = 200;
    std::string body; // JSON
};

/// Request handling independent of the transport. Every method is safe to
/// call concurrently.
class Service {
public:
    /// With a directory, every loadable project file in it is registered
    /// under its file stem and created projects are written back there.
    explicit Service(std::optional<std::filesystem::path> project_dir = std::nullopt);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    Response create_project(const std::string& body, const std::optional<std::string>& id);
    Response get_project(const std::string& id) const;
    Response start_run(const std::string& project_id, const std::string& body);
    Response get_run(const std::string& run_id) const;
    Response whatif(const std::string& project_id, const std::string& body) const;
    Response simos(const std::string& body) const;

    std::vector<std::string> project_ids() const;

    /// Routes the endpoints onto an httplib server.
    void mount(httplib::Server& server);

private:
    struct RunEntry {
        std::string project;
        std::string status = "queued";
        std::optional<std::vector<smaa::AcceptabilityReport>> reports;
        std::string error;
    };

    std::shared_ptr<const io::ProjectFile> find_project(const std::string& id) const;
    void execute(const std::string& run_id, std::shared_ptr<const io::ProjectFile> file,
                 pipeline::RunRequest request);

    std::optional<std::filesystem::path> project_dir_;
    mutable std::shared_mutex projects_mutex_;
    std::map<std::string, std::shared_ptr<const io::ProjectFile>> projects_;
    mutable std::mutex runs_mutex_;
    std::map<std::string, RunEntry> runs_;
    std::atomic<std::uint64_t> next_project_{1};
    std::atomic<std::uint64_t> next_run_{1};
    std::mutex threads_mutex_;
    std::vector<std::jthread> threads_;
};

/// Bind address and port from CREDITSORT_BIND / CREDITSORT_PORT, defaulting
/// to 127.0.0.1:8080.
std::pair<std::string, int> listen_address_from_env();

/// Blocks serving HTTP until the process is stopped. Returns false when the
/// socket cannot be bound.
bool serve(Service& service, const std::string& host, int port);

} // namespace creditsort::service
